from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bec_typicality.algebra import (diagonal_weights, exact_ensemble_cov, exact_mean_R,
                                    exact_quantum_cov_avg, wick_product)
from bec_typicality.analytics import (Appendix, appendix_functions, average_density, c03, c04,
                                      c12, c30, ensemble_cov_closed, fig1_curve, fig2_slice,
                                      gaussian_closed_set, gaussian_default_grid,
                                      gaussian_ensemble_cov_large_time, gaussian_mean_large_time,
                                      gaussian_mean_leading, mean_R_closed,
                                      plane_wave_ensemble_cov_leading, plane_wave_mean_leading,
                                      plane_wave_quantum_cov_leading, quantum_cov_closed,
                                      remainder_band, s_sums_closed, s_sums_exact)
from bec_typicality.fock import make_subspace
from bec_typicality.modes import GaussianModel, PlaneWaveModel, gaussian_kernel, plane_wave_kernel

PW = PlaneWaveModel(1)
PWK = plane_wave_kernel(PW)
PEAK = (2,)
FIG = GaussianModel(5.0, 50.0)

F = Fraction


# --- sums -----------------------------------------------------------------------

def test_sums_small_sector():
    s = s_sums_exact(make_subspace(4, 3))
    assert (s.S20, s.S11, s.S40, s.S31, s.S22, s.S30, s.S21) == (
        F(8, 3), F(10, 3), 0, 2, F(4, 3), 2, F(10, 3))
    s = s_sums_exact(make_subspace(4, 1))
    assert (s.S20, s.S11) == (2, 4)
    assert s_sums_exact(make_subspace(10, 11)).S20 == 30
    assert s_sums_closed(make_subspace(100, 11)).S20 == 2460


@settings(max_examples=60)
@given(st.integers(1, 100), st.data())
def test_closed_second_order_sums_are_exact(h, data):
    N = 2 * h
    n = data.draw(st.integers(0, h).map(lambda m: 2 * m + 1))
    spec = make_subspace(N, n)
    ex, cl = s_sums_exact(spec), s_sums_closed(spec)
    assert ex.S20 == cl.S20 and ex.S11 == cl.S11
    assert ex.S20 + ex.S11 == F(N * (N - 1), 2)
    assert ex.S40 >= 0 and ex.S22 >= 0


def test_quartic_sum_residuals_are_order_N_squared():
    spec = make_subspace(100, 11)
    ex, cl = s_sums_exact(spec), s_sums_closed(spec)
    for name in ("S40", "S31", "S22", "S30", "S21"):
        assert abs(getattr(ex, name) - getattr(cl, name)) <= 4 * remainder_band(spec)


# --- plane-wave forms -------------------------------------------------------------

def test_plane_wave_mean():
    spec = make_subspace(4, 3)
    assert mean_R_closed(spec, PWK, PEAK) == F(22, 3)
    assert mean_R_closed(spec, PWK, (0,)) == 16
    lead = plane_wave_mean_leading(spec, PW, PEAK)
    assert lead == F(13, 4)
    assert exact_mean_R(spec, PWK, PEAK) - lead == 4 + F(1, 12)


def test_plane_wave_appendix_values():
    ap = Appendix(PWK)
    assert ap.F40(PEAK, PEAK) == 0
    assert ap.F22(PEAK, PEAK) == 1


def test_plane_wave_ensemble_closed():
    for N, n in [(10, 5), (100, 11), (400, 41)]:
        parts = ensemble_cov_closed(make_subspace(N, n), PWK, PEAK, PEAK)
        assert parts.diag == F(n ** 3, 180) and parts.off == 0
    # R(0) = N^2 is fixed, so its covariance with anything vanishes
    assert ensemble_cov_closed(make_subspace(100, 11), PWK, PEAK, (0,)).total == 0
    assert exact_ensemble_cov(make_subspace(100, 11), PWK, PEAK, (0,)) == 0
    assert plane_wave_ensemble_cov_leading(make_subspace(100, 11), PW, PEAK, (0,)) == 0


def test_plane_wave_quantum_leading():
    spec = make_subspace(400, 11)
    lead = plane_wave_quantum_cov_leading(spec, PW, PEAK, PEAK)
    assert float(lead) == pytest.approx(1.5996e7, rel=1e-4)
    assert plane_wave_quantum_cov_leading(spec, PW, PEAK, (0,)) == 0
    assert quantum_cov_closed(spec, PWK, PEAK, PEAK) == pytest.approx(float(lead), rel=1e-3)


# --- F-functions against the contraction engine ------------------------------------
# The engine's diagonal falling-factorial weights and the displayed F_ij agree
# term by term at fourth order.  At third order only the sum is convention free:
# on N_a + N_b = N the cubic monomials differ by lower-order terms.

@settings(max_examples=25, deadline=None)
@given(st.floats(0.5, 3), st.floats(0, 3), st.floats(-2, 2), st.floats(-2, 2))
def test_appendix_matches_engine(alpha, t, k, k2):
    kern = gaussian_kernel(GaussianModel(alpha, t))
    w = diagonal_weights(wick_product(k, k2, kern))
    ap = appendix_functions(kern, k, k2).weights()

    def pair(p, q):
        return w.get((p, q), 0) + (w.get((q, p), 0) if p != q else 0)

    for key in ((4, 0), (3, 1), (2, 2)):
        assert abs(complex(pair(*key)) - complex(ap[key])) < 1e-10
    third = pair(3, 0) + pair(2, 1)
    assert abs(complex(third) - complex(ap[(3, 0)] + ap[(2, 1)])) < 1e-10


@pytest.mark.parametrize("alpha,t,k,k2", [(1.3, 0.7, 0.4, -1.1), (2.0, 1.5, 0.9, 0.35)])
def test_general_forms_converge_to_exact(alpha, t, k, k2):
    kern = gaussian_kernel(GaussianModel(alpha, t))
    errs = []
    for N, n in [(160, 13), (2560, 51)]:
        spec = make_subspace(N, n)
        ex = exact_quantum_cov_avg(spec, kern, k, k2)
        errs.append(abs(ex - quantum_cov_closed(spec, kern, k, k2)) / abs(ex))
    assert errs[1] < errs[0] / 4 and errs[1] < 0.01


def test_ensemble_closed_parts_converge():
    from bec_typicality.algebra import exact_ensemble_cov_parts
    kern = gaussian_kernel(GaussianModel(1.3, 0.7))
    errs = []
    for N, n in [(160, 13), (2560, 51)]:
        spec = make_subspace(N, n)
        diag, off = exact_ensemble_cov_parts(spec, kern, 0.4, -1.1)
        parts = ensemble_cov_closed(spec, kern, 0.4, -1.1)
        errs.append((abs(diag - parts.diag) / abs(diag), abs(off - parts.off) / abs(off)))
    # diag errors fall like 1/n, off errors like 1/n + n/N
    assert errs[1][0] < errs[0][0] / 4 and errs[1][0] < 0.03
    assert errs[1][1] < errs[0][1] / 2 and errs[1][1] < 0.05


def test_ensemble_closed_diag_large_subspace():
    from bec_typicality.algebra import exact_ensemble_cov_parts
    for kern, k, k2 in [(gaussian_kernel(GaussianModel(2.0, 1.0)), 0.0, 0.3),
                        (gaussian_kernel(GaussianModel(0.8, 0.0)), 1.7, 0.2)]:
        spec = make_subspace(2560, 1001)
        diag, _ = exact_ensemble_cov_parts(spec, kern, k, k2)
        assert ensemble_cov_closed(spec, kern, k, k2).diag == pytest.approx(diag, rel=3e-3)


# --- Gaussian large-time forms --------------------------------------------------------

def test_gaussian_mean_against_exact():
    spec = make_subspace(1000, 11)
    kern = gaussian_kernel(FIG)
    k = FIG.fringe_wavevector
    ex = exact_mean_R(spec, kern, k)
    assert mean_R_closed(spec, kern, k) == pytest.approx(ex, rel=5e-3)
    assert 1000 ** 2 * gaussian_mean_leading(FIG, k) == pytest.approx(ex, rel=5e-3)


def test_gaussian_mean_shapes():
    g = FIG.fringe_wavevector
    assert g == pytest.approx(0.19992, abs=1e-5)
    assert gaussian_mean_leading(FIG, 0.0) == pytest.approx(1.0, abs=1e-12)
    assert gaussian_mean_leading(FIG, g) == pytest.approx(0.25 * 0.990050 ** 2, abs=1e-5)
    assert gaussian_mean_large_time(FIG, g) == pytest.approx(0.25, abs=1e-6)


def test_gaussian_ensemble_large_time():
    g = FIG.fringe_wavevector
    val = gaussian_ensemble_cov_large_time(FIG, 11, g, g)
    assert val == pytest.approx(11 ** 3 / 180, rel=1e-6)
    parts = ensemble_cov_closed(make_subspace(1000, 11), gaussian_kernel(FIG), g, g)
    assert abs(parts.off) < 1e-6 * abs(parts.diag)


def test_c_coefficients_at_peak():
    g = FIG.fringe_wavevector
    assert c04(FIG, g, g) == pytest.approx(1 / 180, rel=1e-6)
    assert c03(FIG, g, g) == -c04(FIG, g, g)
    assert c30(FIG, g, g) == pytest.approx(0.25, abs=1e-6)
    assert np.isfinite(c12(FIG, g, g))


def test_c30_is_large_time_limit_of_general_form():
    # the large-time form drops exp(-alpha^2/(1+t^2)) prefactors, so alpha stays fixed
    spec = make_subspace(10 ** 6, 1)
    worst = []
    for t in (50.0, 500.0, 5000.0):
        model = GaussianModel(5.0, t)
        kern = gaussian_kernel(model)
        g = model.fringe_wavevector
        errs = []
        for k, k2 in [(g, g), (0.3 * g, g), (g, 0.05 * g), (1.1 * g, 0.9 * g), (-g, g)]:
            cubic = complex(quantum_cov_closed(spec, kern, k, k2)).real / spec.N ** 3
            errs.append(abs(cubic - float(c30(model, k, k2))))
        worst.append(max(errs))
    assert worst[0] < 5e-3
    assert worst[2] < worst[1] < worst[0]
    assert worst[2] < 1e-6


def test_c30_no_overflow_far_out():
    ks = np.linspace(-5, 5, 11)
    assert np.all(np.isfinite(c30(FIG, ks, ks)))


def test_closed_set_variants():
    spec = make_subspace(1000, 11)
    grid = [0.0, FIG.fringe_wavevector]
    lt = gaussian_closed_set(spec, FIG, grid)
    kv = gaussian_closed_set(spec, FIG, grid, variant="kernel")
    assert lt[1].mean == pytest.approx(kv[1].mean, rel=2e-2)
    assert set(lt[0].breakdown) == {"C30", "C12", "C04", "C03"}
    with pytest.raises(ValueError):
        gaussian_closed_set(spec, FIG, grid, variant="other")


# --- figures and densities ------------------------------------------------------------

def test_fig1_peaks():
    ks, vals = fig1_curve(FIG)
    assert len(ks) % 2 == 1 and ks[len(ks) // 2] == 0
    assert vals[len(ks) // 2] == pytest.approx(1.0)


@pytest.mark.parametrize("regime", ["low", "high"])
def test_fig2_peak(regime):
    ks, vals = fig2_slice(FIG, regime, 10000, 11 if regime == "low" else 5001)
    step = ks[1] - ks[0]
    assert abs(abs(ks[np.argmax(vals)]) - FIG.fringe_wavevector) <= step


def test_fig2_bad_regime():
    with pytest.raises(ValueError, match="regime"):
        fig2_slice(FIG, "middle", 100, 11)


def test_default_grid_needs_time():
    with pytest.raises(ValueError):
        gaussian_default_grid(GaussianModel(5.0, 0.0))


def test_average_density():
    x, dx = np.linspace(-20, 20, 40001, retstep=True)
    rho = average_density(GaussianModel(5.0, 0.0), x, 100)
    assert rho.sum() * dx == pytest.approx(100, abs=1e-6)
    centre = average_density(FIG, np.array([0.0]), 1)[0]
    assert centre == pytest.approx(np.exp(-25 / 2501) / np.sqrt(np.pi * 2501), rel=1e-12)
    assert centre == pytest.approx(0.01117, abs=1e-5)
    assert np.all(average_density(PW, np.linspace(0, 1, 5), 8) == 8)
