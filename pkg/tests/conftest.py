"""Collect per-criterion verdicts from tests marked ``criterion(i, title)``."""
import pytest

_VERDICTS = {}
_TITLES = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or report.when not in ("setup", "call"):
        return
    if report.when == "setup" and report.passed:
        return
    number, title = mark.args
    ok, names = _VERDICTS.get(number, (True, []))
    _VERDICTS[number] = (ok and report.passed, names + [(item.name, report.outcome)])
    _TITLES[number] = title



def pytest_terminal_summary(terminalreporter):
    if not _VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_VERDICTS):
        ok, names = _VERDICTS[number]
        failed = [n for n, outcome in names if outcome != "passed"]
        line = f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {_TITLES[number]}"
        if failed:
            line += f"  (failed: {', '.join(failed)})"
        terminalreporter.write_line(line)
