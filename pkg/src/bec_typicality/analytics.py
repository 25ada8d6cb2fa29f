"""
Closed-form averages and covariances of R(k) over the uniform ensemble.

The building blocks are the sums S_ij, averages over H_n of falling
factorials of the occupation numbers, and the Fourier kernels of the mode
model.  Everything here is evaluated from formulas; the exact-trace and
Monte Carlo routes live in :mod:`bec_typicality.algebra` and
:mod:`bec_typicality.ensemble`.

Two evaluation paths are offered wherever an approximation is involved:
the general formulas with the exact kernel, and the displayed large-time (or
plane-wave) specialisations.  The caller picks one; nothing switches
silently.  Dropped O(N^2) remainders are not modelled; :func:`remainder_band`
gives the band used when comparing against exact results.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .fock import SubspaceSpec
from .modes import GaussianModel, ModeKernel, PlaneWaveModel, gaussian_kernel, k0_of_t

__all__ = [
    "SumsRecord",
    "CovReport",
    "CovParts",
    "AppendixValues",
    "Appendix",
    "s_sums_exact",
    "s_sums_closed",
    "mean_R_closed",
    "plane_wave_mean_leading",
    "plane_wave_ensemble_cov_leading",
    "plane_wave_quantum_cov_leading",
    "appendix_functions",
    "ensemble_cov_closed",
    "quantum_cov_closed",
    "gaussian_mean_leading",
    "gaussian_mean_large_time",
    "gaussian_ensemble_cov_large_time",
    "c30",
    "c12",
    "c04",
    "c03",
    "gaussian_quantum_cov_large_time",
    "gaussian_default_grid",
    "fig1_curve",
    "fig2_slice",
    "FIG2_REGIMES",
    "gaussian_closed_set",
    "average_density",
    "remainder_band",
]

SUM_NAMES = ("S20", "S11", "S40", "S31", "S22", "S30", "S21")


@dataclass(frozen=True)
class SumsRecord:
    S20: Fraction
    S11: Fraction
    S40: Fraction
    S31: Fraction
    S22: Fraction
    S30: Fraction
    S21: Fraction
    mode: str

    def as_floats(self) -> dict:
        return {name: float(getattr(self, name)) for name in SUM_NAMES}


def _ff(x, j):
    out = 1
    for i in range(j):
        out *= x - i
    return out


def s_sums_exact(spec: SubspaceSpec) -> SumsRecord:
    """All seven sums by direct summation over the admissible Fock indices."""
    half, n = spec.N // 2, spec.n
    acc = dict.fromkeys(SUM_NAMES, 0)
    for ell in range(-spec.half_width, spec.half_width + 1):
        na, nb = half + ell, half - ell
        acc["S20"] += _ff(na, 2)
        acc["S11"] += na * nb
        acc["S40"] += _ff(na, 4)
        acc["S31"] += nb * _ff(na, 3)
        acc["S22"] += _ff(na, 2) * _ff(nb, 2)
        acc["S30"] += _ff(na, 3)
        acc["S21"] += nb * _ff(na, 2)
    return SumsRecord(**{k: Fraction(v, n) for k, v in acc.items()}, mode="exact")


def s_sums_closed(spec: SubspaceSpec) -> SumsRecord:
    """The closed forms; S20 and S11 are exact, the rest drop O(N^2)."""
    N, n = Fraction(spec.N), Fraction(spec.n)
    return SumsRecord(
        S20=(N ** 2 - 2 * N) / 4 + (n ** 2 - 1) / 12,
        S11=N ** 2 / 4 - (n ** 2 - 1) / 12,
        S40=(N ** 4 - 12 * N ** 3) / 16 + n ** 4 / 80 + (N ** 2 - 6 * N) * n ** 2 / 8,
        S31=(N ** 4 - 6 * N ** 3) / 16 - n ** 4 / 80 + N * n ** 2 / 8,
        S22=(N ** 4 - 4 * N ** 3) / 16 + n ** 4 / 80 - (N ** 2 - 2 * N) * n ** 2 / 24,
        S30=(N ** 3 + N * n ** 2) / 8,
        S21=(3 * N ** 3 - N * n ** 2) / 24,
        mode="closed",
    )


def remainder_band(spec: SubspaceSpec, c: float = 1.0) -> float:
    """Width c*N^2 of the band attributed to dropped remainders."""
    return c * spec.N ** 2


# --- kernel helpers ------------------------------------------------------------

def _abs2(z):
    return z * _conj(z)


def _conj(z):
    return np.conj(z) if isinstance(z, np.ndarray) else z.conjugate()


def _scalar(x):
    """Exact values pass through; complex values become real floats."""
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    return float(np.real(x))


def _interference(kernel, k):
    """rho_a^* rho_b + rho_b^* rho_a + |F_ab(-k)|^2 + |F_ba(-k)|^2."""
    ra, rb = kernel("a", "a", k), kernel("b", "b", k)
    mk = -np.asarray(k)
    return (_conj(ra) * rb + _conj(rb) * ra
            + _abs2(kernel("a", "b", mk)) + _abs2(kernel("b", "a", mk)))


def _curvature(kernel, k):
    """Coefficient of ell^2 in <ell| r(k) |ell>: |rho_a|^2 + |rho_b|^2 minus the
    interference factor.  Off the density peaks it reduces to minus that factor."""
    return (_abs2(kernel("a", "a", k)) + _abs2(kernel("b", "b", k))
            - _interference(kernel, k))


def _imbalance(kernel, k):
    return _abs2(kernel("a", "a", k)) - _abs2(kernel("b", "b", k))


def mean_R_closed(spec: SubspaceSpec, kernel: ModeKernel, k):
    """Ensemble mean of R(k) from the closed S20, S11."""
    sums = s_sums_closed(spec)
    dens = _abs2(kernel("a", "a", k)) + _abs2(kernel("b", "b", k))
    return _scalar(spec.N + dens * sums.S20 + _interference(kernel, k) * sums.S11)


def _pw_peak(model: PlaneWaveModel, k):
    """(delta_{k,-2k0} + delta_{k,+2k0}) and delta_{k,0}."""
    vec = tuple(int(v) for v in np.atleast_1d(k))
    f = tuple(int(v) for v in model.fringe_wavevector)
    side = int(vec == f) + int(vec == tuple(-v for v in f))
    return side, int(not any(vec))


def plane_wave_mean_leading(spec: SubspaceSpec, model: PlaneWaveModel, k) -> Fraction:
    """N^2 delta_k0 + (N^2/4 - n^2/12)(delta_{k,-2k0} + delta_{k,2k0}), O(N) dropped."""
    side, centre = _pw_peak(model, k)
    N, n = Fraction(spec.N), Fraction(spec.n)
    return N ** 2 * centre + (N ** 2 / 4 - n ** 2 / 12) * side


def plane_wave_ensemble_cov_leading(spec, model: PlaneWaveModel, k, k2) -> Fraction:
    s1, _ = _pw_peak(model, k)
    s2, _ = _pw_peak(model, k2)
    return Fraction(spec.n ** 3, 180) * s1 * s2


def plane_wave_quantum_cov_leading(spec, model: PlaneWaveModel, k, k2) -> Fraction:
    """(N^3/4 - N n^2/12 + (n^4 - n^3)/180) times the four-delta product."""
    s1, _ = _pw_peak(model, k)
    s2, _ = _pw_peak(model, k2)
    N, n = Fraction(spec.N), Fraction(spec.n)
    return (N ** 3 / 4 - N * n ** 2 / 12 + (n ** 4 - n ** 3) / 180) * s1 * s2


# --- appendix functions --------------------------------------------------------

class Appendix:
    """Shorthand combinations of the kernels and the F_ij functions.

    Momentum arguments are used exactly as written, sign by sign; the
    two-argument form of R_ab is ``T_ab(k1, k2) + F_ab(k1, k2)``, which
    reduces to the one-argument form at ``k2 = -k1``.
    """

    def __init__(self, kernel: ModeKernel):
        self.kernel = kernel

    def ra(self, k):
        return self.kernel("a", "a", k)

    def rb(self, k):
        return self.kernel("b", "b", k)

    def fab(self, k):
        return self.kernel("a", "b", k)

    def fba(self, k):
        return self.kernel("b", "a", k)

    def I(self, k):
        return self.ra(k) + self.rb(k)

    def F(self, k1, k2):
        return self.fab(k1) * self.fba(k2) + self.fba(k1) * self.fab(k2)

    def G(self, k1, k2):
        return self.F(k1, _sub(k2, k1)) + self.F(_neg(k1), _plus(k2, k1))

    def S(self, k1, k2):
        return self.ra(k1) * self.ra(k2) + self.rb(k1) * self.rb(k2)

    def T(self, k1, k2):
        return self.ra(k1) * self.rb(k2) + self.rb(k1) * self.ra(k2)

    def R(self, k1, k2=None):
        k2 = _neg(k1) if k2 is None else k2
        return self.T(k1, k2) + self.F(k1, k2)

    def U(self, k1, k2):
        s = _plus(k1, k2)
        return (self.ra(k1) * self.ra(k2) * self.rb(s)
                + self.rb(k1) * self.rb(k2) * self.ra(s))

    def V(self, k1, k2):
        s = _plus(k1, k2)
        return (self.ra(k1) * self.ra(k2) * self.ra(s)
                + self.rb(k1) * self.rb(k2) * self.rb(s))

    def F40(self, k, kp):
        return _abs2(self.ra(k) * self.ra(kp)) + _abs2(self.rb(k) * self.rb(kp))

    def F31(self, k, kp):
        mk, mkp = _neg(k), _neg(kp)
        return (self.R(k) * self.S(kp, mkp) + self.S(k, mk) * self.R(kp)
                + self.S(k, kp) * self.F(mk, mkp) + self.S(mk, kp) * self.F(k, mkp)
                + self.S(k, mkp) * self.F(mk, kp) + self.S(mk, mkp) * self.F(k, kp))

    def F22(self, k, kp):
        mk, mkp = _neg(k), _neg(kp)
        return (_abs2(self.ra(k) * self.rb(kp)) + _abs2(self.rb(k) * self.ra(kp))
                + self.R(k) * self.R(kp)
                + self.T(k, kp) * self.F(mk, mkp) + self.T(k, mkp) * self.F(mk, kp)
                + self.T(mk, kp) * self.F(k, mkp) + self.T(mk, mkp) * self.F(k, kp)
                + self.fab(k) * self.fab(mk) * self.fba(kp) * self.fba(mkp)
                + self.fba(k) * self.fba(mk) * self.fab(kp) * self.fab(mkp))

    def F30(self, k, kp):
        mk, mkp = _neg(k), _neg(kp)
        return self.V(k, kp) + self.V(k, mkp) + self.V(mk, kp) + self.V(mk, mkp)

    def F21(self, k, kp):
        mk, mkp = _neg(k), _neg(kp)
        return (self.I(k) * self.G(kp, mk) + self.I(mk) * self.G(kp, k)
                + self.I(kp) * self.G(k, mkp) + self.I(mkp) * self.G(k, kp)
                + self.I(_plus(k, kp)) * self.R(mk, mkp)
                + self.I(_sub(k, kp)) * self.R(k, mkp)
                + self.I(_sub(kp, k)) * self.R(mk, kp)
                + self.I(_neg(_plus(k, kp))) * self.R(k, kp)
                + self.U(k, kp) + self.U(k, mkp) + self.U(mk, kp) + self.U(mk, mkp))


def _neg(k):
    return -np.asarray(k)


def _plus(k1, k2):
    return np.asarray(k1) + np.asarray(k2)


def _sub(k1, k2):
    return np.asarray(k1) - np.asarray(k2)


@dataclass(frozen=True)
class AppendixValues:
    """Helper combinations at (k, k2) and the five F_ij(k, k2)."""

    I_ab: complex
    F_ab: complex
    G_ab: complex
    S_ab: complex
    T_ab: complex
    R_ab: complex
    U_ab: complex
    V_ab: complex
    F40: complex
    F31: complex
    F22: complex
    F30: complex
    F21: complex

    def weights(self) -> dict:
        """F_ij keyed by (i, j)."""
        return {(4, 0): self.F40, (3, 1): self.F31, (2, 2): self.F22,
                (3, 0): self.F30, (2, 1): self.F21}


def appendix_functions(kernel: ModeKernel, k, k2) -> AppendixValues:
    ap = Appendix(kernel)
    return AppendixValues(
        I_ab=ap.I(k), F_ab=ap.F(k, k2), G_ab=ap.G(k, k2), S_ab=ap.S(k, k2),
        T_ab=ap.T(k, k2), R_ab=ap.R(k), U_ab=ap.U(k, k2), V_ab=ap.V(k, k2),
        F40=ap.F40(k, k2), F31=ap.F31(k, k2), F22=ap.F22(k, k2),
        F30=ap.F30(k, k2), F21=ap.F21(k, k2),
    )


# --- covariances -----------------------------------------------------------------

@dataclass(frozen=True)
class CovParts:
    diag: float
    off: float

    @property
    def total(self):
        return self.diag + self.off


def ensemble_cov_closed(spec: SubspaceSpec, kernel: ModeKernel, k, k2) -> CovParts:
    """Leading diagonal and off-diagonal parts of (delta R)^2(k, k2)."""
    N, n = spec.N, spec.n
    ap = Appendix(kernel)
    diag = (Fraction(N ** 2 * n, 12) * _imbalance(kernel, k) * _imbalance(kernel, k2)
            + Fraction(n ** 3, 180) * _curvature(kernel, k) * _curvature(kernel, k2))
    mk, mk2 = _neg(k), _neg(k2)
    first = ap.fba(k) * ap.fba(mk) * ap.fab(k2) * ap.fab(mk2)
    left = ap.fba(mk) * ap.I(k) + ap.I(mk) * ap.fba(k)
    right = ap.fab(mk2) * ap.I(k2) + ap.I(mk2) * ap.fab(k2)
    bracket = first + left * right
    off = Fraction(N ** 4, 16 * n) * (bracket + _conj(bracket))
    return CovParts(_scalar(diag), _scalar(off))


def quantum_cov_closed(spec: SubspaceSpec, kernel: ModeKernel, k, k2):
    """Averaged quantum covariance from the F_ij and closed S_ij, O(N^2) dropped."""
    sums = s_sums_closed(spec)
    w = appendix_functions(kernel, k, k2).weights()
    second = (w[(4, 0)] * sums.S40 + w[(3, 1)] * sums.S31 + w[(2, 2)] * sums.S22
              + w[(3, 0)] * sums.S30 + w[(2, 1)] * sums.S21)
    r1 = mean_R_closed(spec, kernel, k) - spec.N
    r2 = mean_R_closed(spec, kernel, k2) - spec.N
    return _scalar(second) - r1 * r2 - ensemble_cov_closed(spec, kernel, k, k2).total


# --- Gaussian modes, large-time forms --------------------------------------------

def _side(k, model):
    """exp(-t^2 (k+2k0)^2 / 2) + exp(-t^2 (k-2k0)^2 / 2)."""
    k = np.asarray(k, dtype=float)
    t, k0 = model.t, k0_of_t(model)
    return np.exp(-t ** 2 * (k + 2 * k0) ** 2 / 2) + np.exp(-t ** 2 * (k - 2 * k0) ** 2 / 2)


def gaussian_mean_leading(model: GaussianModel, k):
    """Mean R / N^2 at large N with the exact kernels:
    [(rho_a + rho_b)^2 + F_ab^2 + F_ba^2] / 4."""
    kern = gaussian_kernel(model)
    k = np.asarray(k, dtype=float)
    val = ((kern("a", "a", k) + kern("b", "b", k)) ** 2
           + kern("a", "b", k) ** 2 + kern("b", "a", k) ** 2) / 4
    return np.real(val)


def gaussian_mean_large_time(model: GaussianModel, k):
    """Mean R / N^2 as three Gaussians: heights 1 and 1/4, widths 1/t."""
    k = np.asarray(k, dtype=float)
    return np.exp(-model.t ** 2 * k ** 2 / 2) + _side(k, model) / 4


def gaussian_ensemble_cov_large_time(model: GaussianModel, n, k, k2):
    return n ** 3 / 180 * _side(k, model) * _side(k2, model)


def _exp_sinh2(expo, x):
    """exp(expo) * sinh(x)^2 without overflow when expo + 2|x| stays bounded."""
    ax = np.abs(x)
    return 0.25 * np.exp(expo + 2 * ax) * (-np.expm1(-2 * ax)) ** 2


def _central(k, k2, t):
    """8 exp(-t^2 (k^2 + k2^2)/2) sinh^2(t^2 k k2 / 4)."""
    return 8 * _exp_sinh2(-t ** 2 * (k ** 2 + k2 ** 2) / 2, t ** 2 * k * k2 / 4)


def c30(model: GaussianModel, k, k2):
    k = np.asarray(k, dtype=float)
    k2 = np.asarray(k2, dtype=float)
    t, k0 = model.t, k0_of_t(model)
    h = t ** 2 / 2
    kp, km = k + 2 * k0, k - 2 * k0
    k2p, k2m = k2 + 2 * k0, k2 - 2 * k0
    val = _central(k, k2, t) - _side(k, model) * _side(k2, model) / 4
    for q in (k2p, k2m):
        val = val + 2 * _exp_sinh2(-h * (k ** 2 + q ** 2), t ** 2 * k * q / 4)
    for q in (kp, km):
        val = val + 2 * _exp_sinh2(-h * (k2 ** 2 + q ** 2), t ** 2 * k2 * q / 4)
    val = val + 0.5 * (np.exp(-h * ((k - k2) ** 2 + kp * k2p))
                       + np.exp(-h * ((k - k2) ** 2 + km * k2m)))
    val = val + 0.5 * (np.exp(-h * ((k + k2) ** 2 - km * k2p))
                       + np.exp(-h * ((k + k2) ** 2 - kp * k2m)))
    return val


def c12(model: GaussianModel, k, k2):
    k = np.asarray(k, dtype=float)
    k2 = np.asarray(k2, dtype=float)
    return (_central(k, k2, model.t) - c30(model, k, k2)) / 3


def c04(model: GaussianModel, k, k2):
    return _side(k, model) * _side(k2, model) / 180


def c03(model: GaussianModel, k, k2):
    return -c04(model, k, k2)


def gaussian_quantum_cov_large_time(model: GaussianModel, N, n, k, k2):
    return (c30(model, k, k2) * N ** 3 + c12(model, k, k2) * N * n ** 2
            + c04(model, k, k2) * n ** 4 + c03(model, k, k2) * n ** 3)


def gaussian_default_grid(model: GaussianModel, points: int = 2049) -> np.ndarray:
    """k in [-4 k0 - 8/t, 4 k0 + 8/t]; needs t > 0.  An odd point count puts k = 0 on the grid."""
    if model.t <= 0:
        raise ValueError("the default grid needs t > 0")
    edge = 4 * k0_of_t(model) + 8 / model.t
    return np.linspace(-edge, edge, points)


FIG2_REGIMES = ("low", "high")


def fig1_curve(model: GaussianModel, k_grid=None):
    """(k, mean R / N^2) with the exact kernel prefactors."""
    ks = gaussian_default_grid(model) if k_grid is None else np.asarray(k_grid, float)
    return ks, gaussian_mean_leading(model, ks)


def fig2_slice(model: GaussianModel, regime: str, N: int, n: int, k_grid=None):
    """(k, dominant quantum-variance term at k2 = 2 k0(t)).

    ``regime="low"`` (n << N^(3/4)) gives C30 N^3, ``"high"`` (n >> N^(3/4))
    gives C04 n^4.
    """
    if regime not in FIG2_REGIMES:
        raise ValueError(f"regime must be one of {FIG2_REGIMES}, got {regime!r}")
    ks = gaussian_default_grid(model) if k_grid is None else np.asarray(k_grid, float)
    k2 = model.fringe_wavevector
    if regime == "low":
        return ks, c30(model, ks, k2) * float(N) ** 3
    return ks, c04(model, ks, k2) * float(n) ** 4


@dataclass(frozen=True)
class CovReport:
    k: float
    mean: float
    ensemble_cov: float
    quantum_cov_avg: float
    provenance: str
    breakdown: dict = field(default_factory=dict)

    @property
    def total(self):
        return self.ensemble_cov + self.quantum_cov_avg


def gaussian_closed_set(spec: SubspaceSpec, model: GaussianModel, k_grid=None,
                        variant: str = "large-time") -> list[CovReport]:
    """Closed-form mean and variances of R(k) on a grid (k = k2).

    ``variant="large-time"`` uses the three-Gaussian mean and the C-coefficient
    forms; ``variant="kernel"`` evaluates the general formulas with the exact
    Gaussian kernels.
    """
    if k_grid is None:
        k_grid = gaussian_default_grid(model)
    N, n = spec.N, spec.n
    out = []
    if variant == "large-time":
        ks = np.asarray(k_grid, dtype=float)
        means = N ** 2 * gaussian_mean_large_time(model, ks)
        ens = gaussian_ensemble_cov_large_time(model, n, ks, ks)
        cs = {name: f(model, ks, ks) for name, f in
              (("C30", c30), ("C12", c12), ("C04", c04), ("C03", c03))}
        quant = cs["C30"] * N ** 3 + cs["C12"] * N * n ** 2 + cs["C04"] * n ** 4 + cs["C03"] * n ** 3
        for i, k in enumerate(ks):
            out.append(CovReport(float(k), float(means[i]), float(ens[i]), float(quant[i]),
                                 "closed", {c: float(v[i]) for c, v in cs.items()}))
    elif variant == "kernel":
        kern = gaussian_kernel(model)
        for k in np.asarray(k_grid, dtype=float):
            parts = ensemble_cov_closed(spec, kern, k, k)
            out.append(CovReport(float(k), mean_R_closed(spec, kern, k), parts.total,
                                 quantum_cov_closed(spec, kern, k, k), "closed",
                                 {"diag": parts.diag, "off": parts.off}))
    else:
        raise ValueError(f"unknown variant {variant!r}")
    return out


def average_density(model, positions, N: int) -> np.ndarray:
    """(N/2)(rho_a + rho_b) on the given positions."""
    ra, rb = model.densities(positions)
    return N / 2 * (ra + rb)
