"""
Command-line front end.

Every command writes a JSON report and a CSV table (the one named by
``--out`` plus a companion with the other extension) and a manifest
``<stem>.manifest.json`` listing argv, resolved config, files and timing.
``replay`` re-runs a manifest into a new location.

Exit status: 0 pass, 2 a comparison failed, 1 usage or configuration error.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import os
import sys
import tempfile
import time
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .analytics import (FIG2_REGIMES, average_density, fig1_curve, fig2_slice,
                        gaussian_default_grid, s_sums_closed, s_sums_exact)
from .ensemble import (PHASE_OFFSET, ExperimentConfig, StatReport, average_pattern,
                       closed_report, compare_reports, crossover_exponent, default_grid,
                       exact_report, run_ensemble, scaling_scan, single_run_pattern)
from .fock import (SubspaceError, estimate_moments, iter_batches, make_subspace,
                   sample_state, substream, uniform_moment)
from .modes import GaussianModel, PlaneWaveModel, orthogonality_report

EXIT_OK, EXIT_USAGE, EXIT_FAIL = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# --- output helpers ------------------------------------------------------------

def _clean(obj):
    """JSON-safe copy: Fractions as strings, non-finite floats as null."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else None
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    return obj


def _fmt(v):
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    if isinstance(v, (float, np.floating, Fraction)):
        return "%.12g" % float(v)
    return str(v)


def _atomic_write(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _json_text(obj):
    return json.dumps(_clean(obj), sort_keys=True, indent=2) + "\n"


def _csv_text(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _paths(out):
    out = Path(out)
    if out.suffix == ".csv":
        return out.with_suffix(".json"), out
    stem = out.with_suffix("") if out.suffix == ".json" else out
    return stem.with_suffix(".json"), stem.with_suffix(".csv")


def _sha256(path):
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


# --- argument groups -----------------------------------------------------------

def _add_subspace(p):
    p.add_argument("--N", type=int, required=True, help="total particle number (even)")
    p.add_argument("--n", type=int, required=True, help="subspace dimension (odd, <= N+1)")


def _add_seed(p, required=True):
    p.add_argument("--seed", type=int, required=required, help="master seed (mandatory)")


def _add_out(p, default):
    p.add_argument("--out", default=default, help="output file (.json or .csv)")


def _add_gaussian(p, alpha=5.0, t=50.0):
    p.add_argument("--alpha", type=float, default=alpha, help="half separation in widths")
    p.add_argument("--t", type=float, default=t, help="expansion time")


def _k0(text):
    try:
        vec = tuple(int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"k0 must be comma-separated integers, got {text!r}")
    return vec


def _build_parser():
    parser = _Parser(prog="bec-typicality",
                     description="Typicality of interference for uniformly sampled two-mode states.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("moments", help="pair and quartic moments of sampled states")
    _add_subspace(p)
    p.add_argument("--samples", type=int, default=200000)
    _add_seed(p)
    p.add_argument("--tolerance", type=float, default=5.0, help="pass threshold in SE")
    _add_out(p, "moments.json")

    p = sub.add_parser("sums", help="the seven S sums")
    _add_subspace(p)
    p.add_argument("--mode", choices=("exact", "closed", "both"), default="exact")
    _add_out(p, "sums.csv")

    p = sub.add_parser("plane-wave", help="closed, exact and Monte Carlo R statistics")
    _add_subspace(p)
    p.add_argument("--k0", type=_k0, default=(1,), help="lattice vector, e.g. 1 or 1,0")
    p.add_argument("--samples", type=int, default=10000)
    _add_seed(p)
    p.add_argument("--tolerance", type=float, default=5.0)
    p.add_argument("--band", type=float, default=2.0, help="remainder band in units of N^2")
    _add_out(p, "plane_wave.json")

    p = sub.add_parser("gaussian", help="R statistics for expanding Gaussian modes")
    _add_subspace(p)
    _add_gaussian(p)
    p.add_argument("--points", type=int, default=33)
    p.add_argument("--samples", type=int, default=2000)
    _add_seed(p)
    p.add_argument("--tolerance", type=float, default=5.0)
    _add_out(p, "gaussian.json")

    p = sub.add_parser("pattern", help="single-run fringe patterns and their average")
    _add_subspace(p)
    p.add_argument("--model", choices=("plane-wave", "gaussian"), default="plane-wave")
    p.add_argument("--k0", type=_k0, default=(1,))
    _add_gaussian(p, alpha=5.0, t=5.0)
    p.add_argument("--runs", type=int, default=1000)
    p.add_argument("--points", type=int, default=256)
    _add_seed(p)
    p.add_argument("--tolerance", type=float, default=5.0)
    _add_out(p, "pattern.json")

    p = sub.add_parser("scan", help="scaling of the relative fluctuation with N")
    p.add_argument("--gamma", type=float, action="append", help="n = floor(N^gamma), odd")
    p.add_argument("--exponents", default="8:14", help="N = 2^e for e in lo:hi")
    p.add_argument("--k0", type=_k0, default=(1,))
    p.add_argument("--expect", type=float, action="append",
                   help="expected slope per --gamma; a miss exits 2")
    p.add_argument("--slope-tol", type=float, default=0.05)
    _add_out(p, "scan.json")

    p = sub.add_parser("fig1", help="mean R / N^2 for expanding Gaussians")
    _add_gaussian(p)
    p.add_argument("--points", type=int, default=2049)
    _add_out(p, "fig1.csv")

    p = sub.add_parser("fig2", help="dominant quantum-variance slice at k2 = 2 k0(t)")
    p.add_argument("--regime", required=True, help=f"one of {', '.join(FIG2_REGIMES)}")
    _add_gaussian(p)
    p.add_argument("--N", type=int, default=10000)
    p.add_argument("--n", type=int, default=None,
                   help="defaults to 11 (low) or N/2+1 made odd (high)")
    p.add_argument("--points", type=int, default=2049)
    _add_out(p, "fig2.csv")

    p = sub.add_parser("compare", help="compare two saved reports")
    p.add_argument("--a", required=True, help="FILE or FILE:provenance")
    p.add_argument("--b", required=True, help="FILE or FILE:provenance")
    p.add_argument("--tolerance", type=float, default=5.0)
    p.add_argument("--band", type=float, default=2.0)
    _add_out(p, "compare.json")

    p = sub.add_parser("replay", help="re-run a manifest")
    p.add_argument("manifest")
    p.add_argument("--out", required=True, help="new output file")
    return parser


# --- commands ------------------------------------------------------------------
# each returns (config, payload, header, rows, passed, summary)

def _moment_patterns(spec):
    h = spec.half_width
    picks = sorted({-h, 0, h})
    pairs = {(a, b) for a in picks for b in picks}
    quartic = {(0, 0, 0, 0)}
    for a in picks:
        for b in picks:
            if a != b:
                quartic |= {(a, b, a, b), (a, b, b, a), (a, a, b, b)}
    if len(picks) == 3:
        quartic.add((-h, 0, h, 0))
        quartic.add((-h, 0, 0, h))
    return sorted(pairs), sorted(quartic)


def cmd_moments(args):
    spec = make_subspace(args.N, args.n)
    if args.samples < 2:
        raise ValueError("samples: need at least 2")
    pairs, quartic = _moment_patterns(spec)
    batches = list(iter_batches(spec, args.seed, args.samples))
    rows, entries = [], []
    for idx in pairs + quartic:
        est = estimate_moments(batches, idx)
        exact = uniform_moment(spec, idx)
        se = est.standard_error
        dev = abs(est.value - float(exact))
        score = 0.0 if dev == 0 else (dev / se if se > 0 else math.inf)
        ok = score <= args.tolerance
        entries.append({"indices": list(idx), "estimate": [est.value.real, est.value.imag],
                        "standard_error": se, "exact": exact, "score": score, "within": ok})
        rows.append([" ".join(map(str, idx)), est.value.real, est.value.imag, se,
                     float(exact), score, int(ok)])
    passed = all(e["within"] for e in entries)
    config = {"N": spec.N, "n": spec.n, "samples": args.samples, "seed": args.seed,
              "tolerance": args.tolerance}
    worst = max(entries, key=lambda e: e["score"])
    summary = (f"moments N={spec.N} n={spec.n}: {len(entries)} moments, "
               f"worst {worst['score']:.2f} SE at {worst['indices']}")
    header = ["indices", "estimate_re", "estimate_im", "standard_error", "exact", "score", "within"]
    return config, {"moments": entries, "passed": passed}, header, rows, passed, summary


def cmd_sums(args):
    spec = make_subspace(args.N, args.n)
    modes = ("exact", "closed") if args.mode == "both" else (args.mode,)
    recs = {"exact": s_sums_exact, "closed": s_sums_closed}
    header = ["N", "n", "mode", "S20", "S11", "S40", "S31", "S22", "S30", "S21"]
    rows, payload = [], {}
    for m in modes:
        rec = recs[m](spec)
        vals = [getattr(rec, name) for name in header[3:]]
        rows.append([spec.N, spec.n, m] + vals)
        payload[m] = {name: {"value": float(v), "exact": str(v)} for name, v in zip(header[3:], vals)}
    config = {"N": spec.N, "n": spec.n, "mode": args.mode}
    first = rows[0]
    summary = f"sums N={spec.N} n={spec.n} ({modes[0]}): S20={_fmt(first[3])} S11={_fmt(first[4])}"
    return config, {"sums": payload}, header, rows, True, summary


def _report_rows(reports, grid):
    dim = len(grid[0]) if isinstance(grid[0], tuple) else 1
    kcols = ["k"] if dim == 1 else [f"k_{i + 1}" for i in range(dim)]
    header = list(kcols)
    for q in ("mean", "ensemble_cov", "quantum_cov_avg"):
        for prov in reports:
            header.append(f"{q}_{prov}")
        if "montecarlo" in reports:
            header.append(f"{q}_se")
    rows = []
    for i, k in enumerate(grid):
        row = list(k) if isinstance(k, tuple) else [k]
        for q in ("mean", "ensemble_cov", "quantum_cov_avg"):
            for rep in reports.values():
                row.append(getattr(rep, q)[i])
            if "montecarlo" in reports:
                row.append(reports["montecarlo"].se(q)[i])
        rows.append(row)
    return header, rows


def cmd_plane_wave(args):
    spec = make_subspace(args.N, args.n)
    model = PlaneWaveModel(args.k0)
    cfg = ExperimentConfig(spec, model, default_grid(model), args.samples, args.seed,
                           args.tolerance)
    reports = {"closed": closed_report(spec, model, cfg.k_grid),
               "exact": exact_report(spec, model, cfg.k_grid),
               "montecarlo": run_ensemble(cfg)}
    comps = {"montecarlo_vs_exact": compare_reports(reports["montecarlo"], reports["exact"],
                                                    args.tolerance, args.band),
             "closed_vs_exact": compare_reports(reports["closed"], reports["exact"],
                                                args.tolerance, args.band)}
    passed = all(c.passed for c in comps.values())
    payload = {"reports": {p: r.to_dict() for p, r in reports.items()},
               "comparisons": {name: c.to_dict() for name, c in comps.items()},
               "passed": passed}
    header, rows = _report_rows(reports, cfg.k_grid)
    w = comps["montecarlo_vs_exact"].worst
    summary = (f"plane-wave N={spec.N} n={spec.n} M={args.samples}: "
               f"{'pass' if passed else 'FAIL'}, worst MC deviation {w['score']:.2f} SE "
               f"({w['quantity']} at k={w['k']})")
    return cfg.to_dict() | {"band": args.band}, payload, header, rows, passed, summary


def cmd_gaussian(args):
    spec = make_subspace(args.N, args.n)
    model = GaussianModel(args.alpha, args.t)
    if args.points < 1:
        raise ValueError("points: need at least 1")
    grid = (tuple(float(v) for v in gaussian_default_grid(model, args.points))
            if model.t > 0 else tuple(float(v) for v in np.linspace(-4, 4, args.points)))
    reports = {"closed": closed_report(spec, model, grid), "exact": exact_report(spec, model, grid)}
    comps = {}
    config = {"N": spec.N, "n": spec.n, "alpha": model.alpha, "t": model.t,
              "points": args.points, "samples": args.samples, "seed": args.seed}
    if args.samples:
        cfg = ExperimentConfig(spec, model, grid, args.samples, args.seed, args.tolerance)
        reports["montecarlo"] = run_ensemble(cfg)
        comps["montecarlo_vs_exact"] = compare_reports(reports["montecarlo"], reports["exact"],
                                                       args.tolerance)
    passed = all(c.passed for c in comps.values())
    payload = {"reports": {p: r.to_dict() for p, r in reports.items()},
               "comparisons": {name: c.to_dict() for name, c in comps.items()},
               "orthogonality": orthogonality_report(model), "passed": passed}
    header, rows = _report_rows(reports, grid)
    summary = (f"gaussian N={spec.N} n={spec.n} alpha={model.alpha} t={model.t}: "
               f"{'pass' if passed else 'FAIL'}, overlap {orthogonality_report(model):.3g}")
    return config, payload, header, rows, passed, summary


def cmd_pattern(args):
    spec = make_subspace(args.N, args.n)
    model = PlaneWaveModel(args.k0) if args.model == "plane-wave" else GaussianModel(args.alpha, args.t)
    if args.runs < 2:
        raise ValueError("runs: need at least 2")
    if isinstance(model, PlaneWaveModel):
        if model.dim != 1:
            raise ValueError("k0: patterns are emitted along one axis only")
        pos = np.arange(args.points) / args.points
        expected = np.full(args.points, float(spec.N))
    else:
        half = 3 * math.sqrt(model.spread)
        pos = np.linspace(-half, half, args.points)
        expected = average_density(model, pos, spec.N)
    mean, se, _ = average_pattern(spec, model, args.runs, args.seed, pos)
    first = single_run_pattern(sample_state(spec, substream(args.seed, 0)), model,
                               substream(args.seed, PHASE_OFFSET), pos)
    dev = np.abs(mean - expected)
    score = np.where(dev == 0, 0.0, dev / np.where(se > 0, se, np.inf))
    passed = bool(np.all(score <= args.tolerance))
    config = {"N": spec.N, "n": spec.n, "model": args.model, "k0": list(args.k0),
              "alpha": args.alpha, "t": args.t, "runs": args.runs, "points": args.points,
              "seed": args.seed, "tolerance": args.tolerance}
    payload = {"max_score": float(score.max()), "passed": passed,
               "single_run": {"amplitude": first.amplitude, "phase": first.phase,
                              "visibility": first.visibility, "period": first.period}}
    header = ["position", "mean_density", "standard_error", "expected", "single_run"]
    rows = [[pos[i], mean[i], se[i], expected[i], first.density[i]] for i in range(len(pos))]
    summary = (f"pattern N={spec.N} n={spec.n} runs={args.runs}: "
               f"{'flat' if passed else 'NOT flat'}, max deviation {score.max():.2f} SE")
    return config, payload, header, rows, passed, summary


def _exponents(text):
    try:
        lo, hi = (int(v) for v in text.split(":"))
    except ValueError:
        raise ValueError(f"exponents: expected lo:hi, got {text!r}")
    if hi - lo < 2:
        raise ValueError("exponents: a scan needs at least 3 values of N")
    return list(range(lo, hi + 1))


def cmd_scan(args):
    gammas = args.gamma or [0.5, 0.9]
    expects = args.expect or []
    if expects and len(expects) != len(gammas):
        raise ValueError("expect: give one expected slope per gamma")
    Ns = [2 ** e for e in _exponents(args.exponents)]
    model = PlaneWaveModel(args.k0)
    scans = [scaling_scan(model, g, Ns) for g in gammas]
    cross, ncs = crossover_exponent(model, Ns)
    verdicts = [abs(s.slope - e) <= args.slope_tol for s, e in zip(scans, expects)]
    passed = all(verdicts)
    config = {"gamma": gammas, "N": Ns, "k0": list(args.k0), "expect": expects,
              "slope_tol": args.slope_tol}
    payload = {"scans": [s.to_dict() for s in scans],
               "crossover": {"exponent": cross, "n_c": ncs}, "passed": passed}
    header = ["gamma", "N", "n", "relative_closed", "relative_exact"]
    rows = [[s.gamma, s.N[i], s.n[i], s.relative[i], s.relative_exact[i]]
            for s in scans for i in range(len(s.N))]
    slopes = ", ".join(f"gamma={s.gamma}: {s.slope:.3f}" for s in scans)
    summary = f"scan slopes {slopes}; crossover exponent {cross:.3f}"
    return config, payload, header, rows, passed, summary


def _local_maxima(ks, vals):
    idx = [i for i in range(1, len(ks) - 1) if vals[i] > vals[i - 1] and vals[i] >= vals[i + 1]]
    return [(float(ks[i]), float(vals[i])) for i in idx]


def cmd_fig1(args):
    model = GaussianModel(args.alpha, args.t)
    ks, vals = fig1_curve(model, gaussian_default_grid(model, args.points))
    peaks = _local_maxima(ks, vals)
    centre = float(vals[np.argmin(np.abs(ks))])
    g = model.fringe_wavevector
    side = float(np.interp(g, ks, vals))
    config = {"alpha": model.alpha, "t": model.t, "points": args.points}
    payload = {"fringe_wavevector": g, "grid_step": float(ks[1] - ks[0]), "maxima": peaks,
               "central": centre, "side": side, "ratio": side / centre, "passed": True}
    rows = [[k, v] for k, v in zip(ks, vals)]
    summary = f"fig1 alpha={model.alpha} t={model.t}: centre {centre:.4f}, side {side:.4f} at k=+/-{g:.5f}"
    return config, payload, ["k", "mean_R_over_N2"], rows, True, summary


def cmd_fig2(args):
    if args.regime not in FIG2_REGIMES:
        raise ValueError(f"regime: must be one of {', '.join(FIG2_REGIMES)}, got {args.regime!r}")
    model = GaussianModel(args.alpha, args.t)
    N = args.N
    n = args.n
    if n is None:
        n = 11 if args.regime == "low" else (N // 2 + 1) | 1
    spec = make_subspace(N, n)
    ks, vals = fig2_slice(model, args.regime, spec.N, spec.n,
                          gaussian_default_grid(model, args.points))
    i = int(np.argmax(vals))
    config = {"regime": args.regime, "alpha": model.alpha, "t": model.t, "N": spec.N,
              "n": spec.n, "points": args.points}
    payload = {"fringe_wavevector": model.fringe_wavevector, "grid_step": float(ks[1] - ks[0]),
               "argmax": float(ks[i]), "max": float(vals[i]), "maxima": _local_maxima(ks, vals),
               "k2": model.fringe_wavevector, "passed": True}
    column = "C30_N3" if args.regime == "low" else "C04_n4"
    summary = f"fig2 regime={args.regime} N={spec.N} n={spec.n}: argmax k={ks[i]:.5f}"
    return config, payload, ["k", column], [[k, v] for k, v in zip(ks, vals)], True, summary


def _report_from_dict(d):
    def val(entry):
        if "exact" in entry:
            return tuple(Fraction(v) for v in entry["exact"])
        return tuple(float("nan") if v is None else v for v in entry["value"])
    ks = tuple(tuple(k) if isinstance(k, list) else float(k) for k in d["k"])
    se = None
    if "standard_error" in d["mean"]:
        se = {q: tuple(d[q]["standard_error"]) for q in ("mean", "ensemble_cov", "quantum_cov_avg")}
    return StatReport(d["N"], d["n"], d["model"], ks, val(d["mean"]), val(d["ensemble_cov"]),
                      val(d["quantum_cov_avg"]), d["provenance"], se, d.get("samples"))


def _load_report(ref):
    path, _, prov = ref.partition(":")
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ValueError(f"a/b: cannot read report {path!r}: {exc}")
    result = doc.get("result", doc)
    if "provenance" in result:
        return _report_from_dict(result)
    reports = result.get("reports", {})
    if not prov:
        if len(reports) != 1:
            raise ValueError(f"a/b: {path} holds {sorted(reports)}; pick one as FILE:provenance")
        prov = next(iter(reports))
    if prov not in reports:
        raise ValueError(f"a/b: no {prov!r} report in {path}")
    return _report_from_dict(reports[prov])


def cmd_compare(args):
    a, b = _load_report(args.a), _load_report(args.b)
    comp = compare_reports(a, b, args.tolerance, args.band)
    config = {"a": args.a, "b": args.b, "tolerance": args.tolerance, "band": args.band}
    header = ["quantity", "k", "deviation", "score", "within"]
    rows = [[e["quantity"], e["k"] if not isinstance(e["k"], list) else " ".join(map(str, e["k"])),
             e["deviation"], e["score"], int(e["within"])] for e in comp.entries]
    w = comp.worst
    summary = (f"compare {a.provenance} vs {b.provenance} ({comp.mode}): "
               f"{'pass' if comp.passed else 'FAIL'}, worst {w['quantity']} at k={w['k']} "
               f"score {w['score']:.3g}")
    return config, comp.to_dict(), header, rows, comp.passed, summary


COMMANDS = {
    "moments": cmd_moments, "sums": cmd_sums, "plane-wave": cmd_plane_wave,
    "gaussian": cmd_gaussian, "pattern": cmd_pattern, "scan": cmd_scan,
    "fig1": cmd_fig1, "fig2": cmd_fig2, "compare": cmd_compare,
}


def _replace_out(argv, out):
    argv = list(argv)
    for i, tok in enumerate(argv):
        if tok == "--out" and i + 1 < len(argv):
            argv[i + 1] = out
            return argv
        if tok.startswith("--out="):
            argv[i] = f"--out={out}"
            return argv
    return argv + ["--out", out]


def _run(argv):
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command == "replay":
        try:
            manifest = json.loads(Path(args.manifest).read_text())
            recorded = manifest["argv"]
        except (OSError, json.JSONDecodeError, KeyError) as exc:
            raise ValueError(f"manifest: cannot read {args.manifest!r}: {exc}")
        return _run(_replace_out(recorded, args.out))
    start = time.perf_counter()
    config, payload, header, rows, passed, summary = COMMANDS[args.command](args)
    json_path, csv_path = _paths(args.out)
    doc = {"command": args.command, "version": __version__, "config": config, "result": payload}
    _atomic_write(json_path, _json_text(doc))
    _atomic_write(csv_path, _csv_text(header, rows))
    manifest_path = json_path.with_name(json_path.stem + ".manifest.json")
    manifest = {
        "command": args.command, "argv": list(argv), "config": config,
        "seed": getattr(args, "seed", None), "version": __version__,
        "files": [{"path": str(p), "sha256": _sha256(p)} for p in (json_path, csv_path)],
        "duration_s": round(time.perf_counter() - start, 3),
    }
    _atomic_write(manifest_path, _json_text(manifest))
    print(summary)
    return EXIT_OK if passed else EXIT_FAIL


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        return _run(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SubspaceError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
