"""Acceptance suite: one group of tests per criterion.

Each test carries ``criterion(number, title)``; the terminal summary prints
one PASS/FAIL line per criterion.  Tolerances are the stated ones and are not
tuned to the results.
"""
import itertools
import time
from fractions import Fraction

import numpy as np
import pytest

from bec_typicality.algebra import exact_ensemble_cov, exact_mean_R, exact_quantum_cov_avg
from bec_typicality.analytics import (SUM_NAMES, fig1_curve, fig2_slice,
                                      plane_wave_mean_leading, plane_wave_quantum_cov_leading,
                                      s_sums_closed, s_sums_exact)
from bec_typicality.cli import main
from bec_typicality.ensemble import average_pattern, crossover_exponent, scaling_scan
from bec_typicality.fock import iter_batches, make_subspace, uniform_moment
from bec_typicality.modes import GaussianModel, PlaneWaveModel, plane_wave_kernel

PW = PlaneWaveModel(1)
PW_KERNEL = plane_wave_kernel(PW)
PEAK = (2,)
SCAN_NS = [2 ** e for e in range(8, 15)]
FIG = GaussianModel(5.0, 50.0)


def criterion(number, title):
    return pytest.mark.criterion(number, title)


# --- 1. moments ---------------------------------------------------------------------

def _gram_moments(spec, seed, samples):
    """Mean and iid standard errors of z*_i z_j for every pair (i, j)."""
    n = spec.n
    s1 = np.zeros((n, n), complex)
    sre = np.zeros((n, n))
    sim = np.zeros((n, n))
    kept = []
    for batch in iter_batches(spec, seed, samples):
        z = batch.coeffs
        x, y = z.real, z.imag
        s1 += z.conj().T @ z
        xx, yy, xy = x * x, y * y, x * y
        # sums of (Re z*_i z_j)^2 and (Im z*_i z_j)^2 as matrix products
        sre += xx.T @ xx + yy.T @ yy + 2 * xy.T @ xy
        sim += xx.T @ yy + yy.T @ xx - 2 * xy.T @ xy
        kept.append(z)
    mean = s1 / samples
    se_re = np.sqrt(np.maximum(sre / samples - mean.real ** 2, 0) / (samples - 1))
    se_im = np.sqrt(np.maximum(sim / samples - mean.imag ** 2, 0) / (samples - 1))
    return mean, se_re, se_im, kept


def _quartic_patterns(spec):
    ells = spec.ells
    picks = ells if spec.n <= 3 else [ells[0], ells[1], 0, ells[-1]]
    return list(itertools.product(picks, repeat=4))


@criterion(1, "moment suite, n in {3, 11, 101}, M = 2e5, 5 SE, < 60 s")
def test_moment_suite():
    start = time.perf_counter()
    samples = 200_000
    worst = 0.0
    for n in (3, 11, 101):
        spec = make_subspace(max(n - 1, 2), n)
        mean, se_re, se_im, blocks = _gram_moments(spec, 1000 + n, samples)
        exact = np.eye(n) / n
        worst = max(worst, np.max(np.abs(mean.real - exact) / se_re),
                    np.max(np.abs(mean.imag[se_im > 0]) / se_im[se_im > 0]))
        z = np.concatenate(blocks)
        for pattern in _quartic_patterns(spec):
            i = [spec.index(ell) for ell in pattern]
            v = np.conj(z[:, i[0]] * z[:, i[1]]) * z[:, i[2]] * z[:, i[3]]
            target = float(uniform_moment(spec, pattern))
            m = v.mean()
            se = np.sqrt([v.real.var(ddof=1) / samples, v.imag.var(ddof=1) / samples])
            worst = max(worst, abs(m.real - target) / se[0],
                        abs(m.imag) / se[1] if se[1] > 0 else 0.0)
    elapsed = time.perf_counter() - start
    print(f"moment suite: worst deviation {worst:.2f} SE in {elapsed:.1f} s")
    assert worst < 5
    assert elapsed < 60


# --- 2. S sums ----------------------------------------------------------------------

@criterion(2, "S20, S11 exact for even N <= 200; residual slopes <= 2.1")
def test_s_sums_two_point_exact():
    start = time.perf_counter()
    for N in range(2, 201, 2):
        for n in range(1, N + 2, 2):
            spec = make_subspace(N, n)
            e, c = s_sums_exact(spec), s_sums_closed(spec)
            assert (e.S20, e.S11) == (c.S20, c.S11), (N, n)
    assert time.perf_counter() - start < 10


@criterion(2, "S20, S11 exact for even N <= 200; residual slopes <= 2.1")
def test_s_sums_residual_scaling():
    Ns = [50, 100, 200, 400, 800]
    res = {name: [] for name in SUM_NAMES[2:]}
    for N in Ns:
        spec = make_subspace(N, 11)
        e, c = s_sums_exact(spec), s_sums_closed(spec)
        for name in res:
            res[name].append(abs(float(getattr(e, name) - getattr(c, name))))
    for name, r in res.items():
        slope = np.polyfit(np.log(Ns), np.log(r), 1)[0]
        print(f"{name} residual slope {slope:.3f}")
        assert slope <= 2.1, name


# --- 3. plane-wave exactness --------------------------------------------------------

@criterion(3, "plane-wave mean exact; closed form off by N + 1/12")
@pytest.mark.parametrize("N,n", [(4, 3), (100, 11), (1000, 101)])
def test_plane_wave_exactness(N, n):
    spec = make_subspace(N, n)
    assert exact_mean_R(spec, PW_KERNEL, (0,)) == N ** 2
    peak = exact_mean_R(spec, PW_KERNEL, PEAK)
    assert peak == N + s_sums_exact(spec).S11
    assert peak - plane_wave_mean_leading(spec, PW, PEAK) == N + Fraction(1, 12)


# --- 4. anchor ----------------------------------------------------------------------

@criterion(4, "N = 2, n = 1 quantum variance of R(2k0) is 1")
def test_two_particle_anchor():
    assert exact_quantum_cov_avg(make_subspace(2, 1), PW_KERNEL, PEAK, PEAK) == 1


# --- 5. quantum covariance -------------------------------------------------------------

@criterion(5, "quantum covariance at (400, 11) within 2% of the closed form")
def test_quantum_covariance_leading_order():
    start = time.perf_counter()
    spec = make_subspace(400, 11)
    exact = exact_quantum_cov_avg(spec, PW_KERNEL, PEAK, PEAK)
    closed = plane_wave_quantum_cov_leading(spec, PW, PEAK, PEAK)
    rel = abs(float(exact / closed) - 1)
    print(f"quantum covariance relative deviation {rel:.4%}")
    assert rel < 0.02
    assert time.perf_counter() - start < 60


# --- 6. cubic law ----------------------------------------------------------------------

@criterion(6, "ensemble covariance n^3 coefficient within 10% of 1/180")
def test_ensemble_cubic_law():
    start = time.perf_counter()
    N = 2000
    ns = np.arange(N // 4 + 1, N + 2, 2)
    vals = [float(exact_ensemble_cov(make_subspace(N, int(n)), PW_KERNEL, PEAK, PEAK))
            for n in ns]
    lead = np.polyfit(ns.astype(float), vals, 3)[0]
    print(f"n^3 coefficient x 180 = {lead * 180:.6f}")
    assert lead == pytest.approx(1 / 180, rel=0.10)
    assert time.perf_counter() - start < 300


# --- 7. figure 1 ----------------------------------------------------------------------

def _local_maxima(ks, vals):
    inner = (vals[1:-1] > vals[:-2]) & (vals[1:-1] >= vals[2:])
    return ks[1:-1][inner], vals[1:-1][inner]


@criterion(7, "mean R / N^2 peaks at 0, +-2k0 with 1.0, 0.2450 and ratio 1/4 +- 2%")
def test_figure_one():
    ks, vals = fig1_curve(FIG)
    step = ks[1] - ks[0]
    two_k0 = FIG.fringe_wavevector
    peaks, heights = _local_maxima(ks, vals)
    assert len(peaks) == 3
    centre = heights[np.argmin(np.abs(peaks))]
    assert np.min(np.abs(peaks)) <= step
    for sign in (-1, 1):
        j = np.argmin(np.abs(peaks - sign * two_k0))
        assert abs(peaks[j] - sign * two_k0) <= step
        assert heights[j] == pytest.approx(0.2450, abs=1e-3)
        ratio = heights[j] / centre
        print(f"side/centre ratio {ratio:.5f}")
        assert ratio == pytest.approx(0.25, rel=0.02)
    assert centre == pytest.approx(1.0, abs=1e-3)


# --- 8. figure 2 ----------------------------------------------------------------------

@criterion(8, "dominant variance slice peaked at +-2k0 in both regimes")
@pytest.mark.parametrize("regime,N,n", [("low", 10_000, 11), ("high", 10_000, 5001)])
def test_figure_two(regime, N, n):
    # n = 11 << N^(3/4) = 1000 << n = 5001
    ks, vals = fig2_slice(FIG, regime, N, n)
    step = ks[1] - ks[0]
    two_k0 = FIG.fringe_wavevector
    for sign in (-1, 1):
        half = ks * sign > 0
        k_max = ks[half][np.argmax(vals[half])]
        assert abs(k_max - sign * two_k0) <= step
    assert abs(abs(ks[np.argmax(vals)]) - two_k0) <= step


# --- 9. scaling regimes ------------------------------------------------------------------

@criterion(9, "relative fluctuation slopes -0.5, -0.2 and crossover at n ~ N^(3/4)")
def test_scaling_half_power():
    rep = scaling_scan(PW, 0.5, SCAN_NS)
    print(f"gamma 0.5: slope {rep.slope:.3f}, exact {rep.slope_exact:.3f}")
    assert rep.slope == pytest.approx(-0.5, abs=0.05)


@criterion(9, "relative fluctuation slopes -0.5, -0.2 and crossover at n ~ N^(3/4)")
def test_scaling_point_nine_power():
    rep = scaling_scan(PW, 0.9, SCAN_NS)
    print(f"gamma 0.9: slope {rep.slope:.3f}, exact {rep.slope_exact:.3f}, "
          f"local {[round(s, 3) for s in rep.local_slopes]}")
    assert rep.slope == pytest.approx(-0.2, abs=0.05)


@criterion(9, "relative fluctuation slopes -0.5, -0.2 and crossover at n ~ N^(3/4)")
def test_crossover_exponent():
    exponent, _ = crossover_exponent(PW, SCAN_NS)
    print(f"crossover exponent {exponent:.3f}")
    assert exponent == pytest.approx(0.75, abs=0.05)


# --- 10. averaged density -------------------------------------------------------------------

@criterion(10, "average of 1e3 single-run patterns flat at N within 5 SE")
@pytest.mark.parametrize("N,n", [(100, 1), (100, 11), (400, 101)])
def test_average_density_flat(N, n):
    mean, se, _ = average_pattern(make_subspace(N, n), PW, 1000, 11)
    assert np.all(np.abs(mean - N) < 5 * se)


# --- 11. determinism --------------------------------------------------------------------------

@criterion(11, "CLI replay from a manifest is byte-identical")
@pytest.mark.parametrize("argv", [
    ["moments", "--N", "100", "--n", "11", "--samples", "5000", "--seed", "7"],
    ["plane-wave", "--N", "100", "--n", "11", "--samples", "5000", "--seed", "7"],
    ["gaussian", "--N", "100", "--n", "11", "--samples", "1000", "--seed", "7"],
    ["pattern", "--N", "100", "--n", "11", "--runs", "500", "--seed", "7"],
    ["fig1"],
])
def test_cli_replay(tmp_path, argv):
    first = tmp_path / "a" / "run.json"
    rc = main(argv + ["--out", str(first)])
    assert main(["replay", str(tmp_path / "a" / "run.manifest.json"),
                 "--out", str(tmp_path / "b" / "run.json")]) == rc
    for name in ("run.json", "run.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
