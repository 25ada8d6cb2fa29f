"""
Monte Carlo experiments over sampled states, single-run fringe patterns,
scaling scans and report comparison.

Three report flavours share one container, :class:`StatReport`:

* ``closed``      closed-form leading-order expressions,
* ``exact``       traces over the sampling subspace (no sampling error),
* ``montecarlo``  averages over sampled states with batch-means errors.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .algebra import (build_r_poly, exact_ensemble_cov, exact_mean_R,
                      exact_quantum_cov_avg, sector_matrix, wick_product)
from .analytics import (average_density, ensemble_cov_closed, mean_R_closed,
                        plane_wave_ensemble_cov_leading, plane_wave_mean_leading,
                        plane_wave_quantum_cov_leading, quantum_cov_closed,
                        remainder_band)
from .fock import (StateVector, SubspaceSpec, batch_means_error, iter_batches,
                   make_subspace, substream)
from .modes import GaussianModel, PlaneWaveModel, kernel_for

__all__ = [
    "ExperimentConfig",
    "StatReport",
    "PatternRecord",
    "ScanReport",
    "Comparison",
    "default_grid",
    "closed_report",
    "exact_report",
    "run_ensemble",
    "state_R",
    "fringe_pattern",
    "single_run_pattern",
    "average_pattern",
    "scaling_scan",
    "crossover_exponent",
    "compare_reports",
]

QUANTITIES = ("mean", "ensemble_cov", "quantum_cov_avg")
PROVENANCES = ("closed", "exact", "montecarlo")
# combined SE never drops below round-off on an N^4-sized quantity
SE_FLOOR = 64 * np.finfo(float).eps
# the plane-wave quantum variance off the peaks is (5/4) N^2 + O(N)
DEFAULT_BAND = 2.0
# phase draws for patterns use sample streams far above any state index
PHASE_OFFSET = 1 << 40


def _grid_key(k):
    if isinstance(k, (tuple, list, np.ndarray)):
        return tuple(int(v) for v in np.atleast_1d(k))
    return float(k)


def default_grid(model, points: int = 65):
    """Plane waves: m*k0 for m = -2..2.  Gaussians: evenly spaced over the three peaks."""
    if isinstance(model, PlaneWaveModel):
        return tuple(tuple(m * v for v in model.k0) for m in range(-2, 3))
    half = 2 * model.fringe_wavevector + 4 / max(model.t, 1.0)
    return tuple(float(v) for v in np.linspace(-half, half, points))


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything a Monte Carlo run depends on.

    Parameters
    ----------
    spec : SubspaceSpec
    model : PlaneWaveModel or GaussianModel
    k_grid : sequence
        Lattice vectors (plane waves) or floats (Gaussians).
    samples : int
        Number of sampled states, at least 2.
    seed : int
        Master seed.  There is no default.
    tolerance_se : float
        Pass threshold for comparisons in standard-error units.
    batches : int
        Batch count for standard errors.
    """

    spec: SubspaceSpec
    model: object
    k_grid: tuple
    samples: int
    seed: int
    tolerance_se: float = 5.0
    batches: int = 32

    def __post_init__(self):
        if self.seed is None:
            raise ValueError("seed: a master seed is required")
        if int(self.seed) != self.seed or self.seed < 0:
            raise ValueError(f"seed: must be a non-negative integer, got {self.seed!r}")
        if self.samples < 2:
            raise ValueError(f"samples: need at least 2, got {self.samples}")
        grid = tuple(_grid_key(k) for k in self.k_grid)
        if not grid:
            raise ValueError("k_grid: must not be empty")
        if not isinstance(self.model, (PlaneWaveModel, GaussianModel)):
            raise ValueError(f"model: unsupported type {type(self.model).__name__}")
        if self.batches < 2:
            raise ValueError("batches: need at least 2")
        object.__setattr__(self, "k_grid", grid)

    def to_dict(self):
        m = self.model
        model = ({"kind": "plane-wave", "k0": list(m.k0)} if isinstance(m, PlaneWaveModel)
                 else {"kind": "gaussian", "alpha": m.alpha, "t": m.t})
        return {"N": self.spec.N, "n": self.spec.n, "model": model,
                "k_grid": [list(k) if isinstance(k, tuple) else k for k in self.k_grid],
                "samples": self.samples, "seed": self.seed,
                "tolerance_se": self.tolerance_se, "batches": self.batches}


def _num(x):
    if isinstance(x, Fraction):
        return float(x)
    if isinstance(x, complex):
        return x.real
    return float(x)


@dataclass(frozen=True)
class StatReport:
    """Mean, ensemble covariance and averaged quantum covariance of R on a grid.

    Values stay exact (``Fraction``) whenever the producing path is exact.
    Standard errors are ``None`` outside Monte Carlo.
    """

    N: int
    n: int
    model: str
    k: tuple
    mean: tuple
    ensemble_cov: tuple
    quantum_cov_avg: tuple
    provenance: str
    standard_errors: dict | None = None
    samples: int | None = None

    def __post_init__(self):
        if self.provenance not in PROVENANCES:
            raise ValueError(f"unknown provenance {self.provenance!r}")
        size = len(self.k)
        for q in QUANTITIES:
            if len(getattr(self, q)) != size:
                raise ValueError(f"{q} has {len(getattr(self, q))} entries for {size} grid points")

    @property
    def total(self):
        return tuple(a + b for a, b in zip(self.ensemble_cov, self.quantum_cov_avg))

    def se(self, quantity):
        if self.standard_errors is None:
            return (0.0,) * len(self.k)
        return self.standard_errors[quantity]

    def to_dict(self):
        out = {
            "N": self.N, "n": self.n, "model": self.model, "provenance": self.provenance,
            "k": [list(k) if isinstance(k, tuple) else k for k in self.k],
        }
        for q in QUANTITIES:
            entry = {"value": [_num(v) for v in getattr(self, q)]}
            if self.standard_errors is not None:
                entry["standard_error"] = [float(v) for v in self.standard_errors[q]]
            if all(isinstance(v, (int, Fraction)) for v in getattr(self, q)):
                entry["exact"] = [str(Fraction(v)) for v in getattr(self, q)]
            out[q] = entry
        if self.samples is not None:
            out["samples"] = self.samples
        return out


def _model_name(model):
    return kernel_for(model).name


def closed_report(spec: SubspaceSpec, model, k_grid=None) -> StatReport:
    """Leading-order closed forms at k = k2 on every grid point."""
    grid = tuple(_grid_key(k) for k in (k_grid if k_grid is not None else default_grid(model)))
    means, ens, quant = [], [], []
    if isinstance(model, PlaneWaveModel):
        for k in grid:
            means.append(plane_wave_mean_leading(spec, model, k))
            ens.append(plane_wave_ensemble_cov_leading(spec, model, k, k))
            quant.append(plane_wave_quantum_cov_leading(spec, model, k, k))
    else:
        kern = kernel_for(model)
        for k in grid:
            means.append(_num(mean_R_closed(spec, kern, k)))
            ens.append(_num(ensemble_cov_closed(spec, kern, k, k).total))
            quant.append(_num(quantum_cov_closed(spec, kern, k, k)))
    return StatReport(spec.N, spec.n, _model_name(model), grid, tuple(means), tuple(ens),
                      tuple(quant), "closed")


def exact_report(spec: SubspaceSpec, model, k_grid=None) -> StatReport:
    """Exact traces over H_n at k = k2 on every grid point."""
    grid = tuple(_grid_key(k) for k in (k_grid if k_grid is not None else default_grid(model)))
    kern = kernel_for(model)
    means, ens, quant = [], [], []
    for k in grid:
        means.append(exact_mean_R(spec, kern, k))
        ens.append(exact_ensemble_cov(spec, kern, k, k))
        quant.append(exact_quantum_cov_avg(spec, kern, k, k))
    return StatReport(spec.N, spec.n, _model_name(model), grid, tuple(means), tuple(ens),
                      tuple(quant), "exact")


def _variance_and_error(values, batches):
    """Sample variance (shifted data, so constant input gives exactly 0) and
    its batch-spread standard error."""
    shifted = values - values[0]
    var = float(np.var(shifted, ddof=1))
    b = min(batches, len(values) // 2)
    if b < 2:
        return var, float("nan")
    parts = [np.var(blk, ddof=1) for blk in np.array_split(shifted, b)]
    return var, float(np.std(parts, ddof=1) / math.sqrt(b))


def _operators(spec, model, grid):
    kern = kernel_for(model)
    ops = []
    for k in grid:
        r = sector_matrix(build_r_poly(kern, k), spec).astype(complex)
        w = sector_matrix(wick_product(k, k, kern), spec).astype(complex)
        ops.append((r, w))
    return ops


def _expect(z, m):
    return np.einsum("si,ij,sj->s", z.conj(), m, z).real


def run_ensemble(config: ExperimentConfig) -> StatReport:
    """Monte Carlo estimates of the mean, ensemble variance and averaged
    quantum variance of R at every grid point.

    Per sample, ``R = N + <r>`` and the quantum variance is
    ``<r r> - <r>^2`` with ``<r r>`` from the contraction engine.
    """
    spec, grid = config.spec, config.k_grid
    ops = _operators(spec, config.model, grid)
    R = np.empty((len(grid), config.samples))
    Q = np.empty_like(R)
    for batch in iter_batches(spec, config.seed, config.samples):
        z = batch.coeffs
        sl = slice(batch.start, batch.start + len(batch))
        for j, (r, w) in enumerate(ops):
            rr = _expect(z, r)
            R[j, sl] = spec.N + rr
            Q[j, sl] = _expect(z, w) - rr ** 2
    means, ens, quant = [], [], []
    se = {q: [] for q in QUANTITIES}
    for j in range(len(grid)):
        means.append(float(R[j].mean()))
        se["mean"].append(batch_means_error(R[j], config.batches))
        var, var_se = _variance_and_error(R[j], config.batches)
        ens.append(var)
        se["ensemble_cov"].append(var_se)
        quant.append(float(Q[j].mean()))
        se["quantum_cov_avg"].append(batch_means_error(Q[j], config.batches))
    return StatReport(spec.N, spec.n, _model_name(config.model), grid, tuple(means),
                      tuple(ens), tuple(quant), "montecarlo",
                      {q: tuple(v) for q, v in se.items()}, config.samples)


# --- single-run patterns -------------------------------------------------------

@dataclass(frozen=True)
class PatternRecord:
    """One reconstructed interference pattern.

    ``density = background * (1 + visibility * cos(wavevector . r + 2 phase))``
    """

    wavevector: np.ndarray
    phase: float
    amplitude: float
    positions: np.ndarray
    density: np.ndarray
    N: int

    def __post_init__(self):
        if np.any(self.density < 0):
            raise ValueError("pattern density must be non-negative")

    @property
    def visibility(self) -> float:
        return 2 * self.amplitude / self.N

    @property
    def period(self) -> float:
        return 2 * math.pi / float(np.linalg.norm(self.wavevector))


def state_R(state: StateVector, model, k) -> float:
    """Expectation of R(k) in one state."""
    r = sector_matrix(build_r_poly(kernel_for(model), k), state.spec)
    z = state.coeffs
    return float(state.spec.N + np.real(np.vdot(z, r @ z)))


def fringe_pattern(amplitude, N, k0, phase, positions, background=None) -> PatternRecord:
    """Pattern ``rho(r) = rhobar(r) [1 + (2A/N) cos(2 k0.r + 2 phase)]``.

    With a flat background ``N`` and ``A = N/2`` this is ``2N cos^2(k0.r + phase)``.
    """
    k0 = np.atleast_1d(np.asarray(k0, dtype=float))
    pos = np.asarray(positions, dtype=float)
    proj = pos * k0[0] if k0.size == 1 else pos @ k0
    rho = np.full(proj.shape, float(N)) if background is None else np.asarray(background, float)
    amp = float(min(max(amplitude, 0.0), N / 2))
    density = rho * (1 + (2 * amp / N) * np.cos(2 * proj + 2 * phase))
    return PatternRecord(2 * k0, float(phase), amp, pos, np.maximum(density, 0.0), N)


def _default_positions(model, points=256):
    if isinstance(model, PlaneWaveModel):
        x = np.arange(points) / points
        return x if model.dim == 1 else np.outer(x, np.ones(model.dim))
    half = 3 * math.sqrt(model.spread)
    return np.linspace(-half, half, points)


def single_run_pattern(state: StateVector, model, rng: np.random.Generator,
                       positions=None) -> PatternRecord:
    """Fringe pattern of one run.

    The amplitude comes from the state's R at the fringe wavevector,
    ``|rho(2k0)| = sqrt(R - N)`` clipped to ``[0, N/2]``.  The phase offset
    is drawn uniformly from ``[0, 2 pi)``.
    """
    N = state.spec.N
    if isinstance(model, PlaneWaveModel):
        q = tuple(int(v) for v in model.fringe_wavevector)
        k0 = model.physical_k0()
    else:
        q = model.fringe_wavevector
        k0 = model.k0
    R = state_R(state, model, q)
    amp = math.sqrt(max(R - N, 0.0))
    pos = _default_positions(model) if positions is None else np.asarray(positions, float)
    background = None
    if isinstance(model, GaussianModel):
        background = average_density(model, pos, N)
    phase = rng.uniform(0.0, 2 * math.pi)
    return fringe_pattern(amp, N, k0, phase, pos, background)


def average_pattern(spec: SubspaceSpec, model, runs: int, seed: int, positions=None):
    """Mean and standard error of ``runs`` single-run patterns, each with a
    fresh sampled state and a fresh phase."""
    if runs < 2:
        raise ValueError("runs: need at least 2")
    pos = _default_positions(model) if positions is None else np.asarray(positions, float)
    acc = []
    for batch in iter_batches(spec, seed, runs):
        for i, state in enumerate(batch):
            rng = substream(seed, PHASE_OFFSET + batch.start + i)
            acc.append(single_run_pattern(state, model, rng, pos).density)
    acc = np.array(acc)
    return acc.mean(axis=0), acc.std(axis=0, ddof=1) / math.sqrt(runs), pos


# --- scaling -------------------------------------------------------------------

def _odd_power(N, gamma):
    n = int(math.floor(N ** gamma))
    n = n if n % 2 else n - 1
    return max(1, min(n, N + 1))


def _closed_point(spec, model, k):
    if isinstance(model, PlaneWaveModel):
        return (plane_wave_mean_leading(spec, model, k),
                plane_wave_ensemble_cov_leading(spec, model, k, k)
                + plane_wave_quantum_cov_leading(spec, model, k, k))
    kern = kernel_for(model)
    return (_num(mean_R_closed(spec, kern, k)),
            _num(ensemble_cov_closed(spec, kern, k, k).total)
            + _num(quantum_cov_closed(spec, kern, k, k)))


def _exact_point(spec, model, k):
    kern = kernel_for(model)
    return (exact_mean_R(spec, kern, k),
            exact_ensemble_cov(spec, kern, k, k) + exact_quantum_cov_avg(spec, kern, k, k))


def _peak(model):
    if isinstance(model, PlaneWaveModel):
        return tuple(int(v) for v in model.fringe_wavevector)
    return model.fringe_wavevector


@dataclass(frozen=True)
class ScanReport:
    """Relative fluctuation sqrt(var)/mean at the fringe peak versus N."""

    gamma: float
    N: tuple
    n: tuple
    relative: tuple
    relative_exact: tuple
    slope: float
    slope_exact: float
    local_slopes: tuple
    excluded: tuple = ()
    band_ratio: tuple = field(default=())

    def to_dict(self):
        return {k: (list(v) if isinstance(v, tuple) else v)
                for k, v in self.__dict__.items()}


def _fit(xs, ys):
    return float(np.polyfit(np.log(xs), np.log(ys), 1)[0])


def scaling_scan(model, gamma: float, Ns: Sequence[int], spot_checks: bool = True) -> ScanReport:
    """Fit the log-log slope of the closed-form relative fluctuation at 2k0.

    ``n = floor(N**gamma)`` made odd.  The smallest N is dropped when its
    O(N^2) remainder exceeds 10% of the variance.  With ``spot_checks`` the
    exact oracle is evaluated at every point as well.
    """
    Ns = [int(N) for N in Ns]
    if len(Ns) < 3:
        raise ValueError("a scan needs at least 3 values of N")
    k = _peak(model)
    ns, rel, rel_exact, bands = [], [], [], []
    for N in Ns:
        spec = make_subspace(N, _odd_power(N, gamma))
        mean, var = _closed_point(spec, model, k)
        ns.append(spec.n)
        rel.append(math.sqrt(_num(var)) / _num(mean))
        bands.append(remainder_band(spec) / _num(var))
        if spot_checks:
            m_ex, v_ex = _exact_point(spec, model, k)
            rel_exact.append(math.sqrt(_num(v_ex)) / _num(m_ex))
    keep = list(range(len(Ns)))
    excluded = ()
    if bands[0] > 0.1:
        keep, excluded = keep[1:], (Ns[0],)
    xs = [Ns[i] for i in keep]
    slope = _fit(xs, [rel[i] for i in keep])
    slope_exact = _fit(xs, [rel_exact[i] for i in keep]) if spot_checks else float("nan")
    local = tuple(float(v) for v in np.diff(np.log(rel)) / np.diff(np.log(Ns)))
    return ScanReport(gamma, tuple(Ns), tuple(ns), tuple(rel), tuple(rel_exact), slope,
                      slope_exact, local, excluded, tuple(bands))


def crossover_exponent(model, Ns: Sequence[int], factor: float = 2.0):
    """Exponent of the subspace size at which the variance at 2k0 reaches
    ``factor`` times its n = 1 value, fitted against N.

    Returns ``(exponent, n_c list)``.
    """
    k = _peak(model)
    ncs = []
    for N in Ns:
        base = _num(_closed_point(make_subspace(N, 1), model, k)[1])
        lo, hi = 0, N // 2  # odd n = 2m + 1
        if _num(_closed_point(make_subspace(N, 2 * hi + 1), model, k)[1]) < factor * base:
            raise ValueError(f"no crossover below n = N+1 at N={N}")
        while hi - lo > 1:
            mid = (lo + hi) // 2
            v = _num(_closed_point(make_subspace(N, 2 * mid + 1), model, k)[1])
            lo, hi = (mid, hi) if v < factor * base else (lo, mid)
        ncs.append(2 * hi + 1)
    return _fit(Ns, ncs), ncs


# --- comparison ----------------------------------------------------------------

@dataclass(frozen=True)
class Comparison:
    """Per-point deviations and the overall verdict."""

    passed: bool
    mode: str
    entries: tuple
    worst: dict | None

    def to_dict(self):
        def clean(e):
            return {k: (str(v) if isinstance(v, Fraction) else v) for k, v in e.items()}
        return {"passed": self.passed, "mode": self.mode,
                "entries": [clean(e) for e in self.entries],
                "worst": clean(self.worst) if self.worst else None}


def compare_reports(a: StatReport, b: StatReport, tolerance_se: float = 5.0,
                    band_c: float = DEFAULT_BAND) -> Comparison:
    """Compare two reports point by point.

    If either report is Monte Carlo, deviations are in units of the combined
    standard error and pass below ``tolerance_se``.  Otherwise deviations are
    raw differences (exact when both sides are exact) and pass inside the
    ``band_c * N**2`` remainder band.
    """
    if a.k != b.k:
        raise ValueError("reports are on different k grids")
    if (a.N, a.n) != (b.N, b.n):
        raise ValueError(f"reports are for different subspaces ({a.N},{a.n}) and ({b.N},{b.n})")
    stat = "montecarlo" in (a.provenance, b.provenance)
    band = band_c * a.N ** 2
    entries = []
    for q in QUANTITIES:
        va, vb = getattr(a, q), getattr(b, q)
        sa, sb = a.se(q), b.se(q)
        for i, k in enumerate(a.k):
            if isinstance(va[i], Fraction) and isinstance(vb[i], Fraction):
                diff = va[i] - vb[i]
            else:
                diff = _num(va[i]) - _num(vb[i])
            if stat:
                s = max(math.hypot(sa[i], sb[i]), SE_FLOOR * a.N ** 4)
                score = 0.0 if diff == 0 else (abs(float(diff)) / s if s > 0 else math.inf)
                ok = score <= tolerance_se
            else:
                score = abs(float(diff)) / band
                ok = abs(diff) <= band
            entries.append({"quantity": q, "k": list(k) if isinstance(k, tuple) else k,
                            "deviation": diff, "score": score, "within": bool(ok)})
    worst = max(entries, key=lambda e: e["score"]) if entries else None
    return Comparison(all(e["within"] for e in entries),
                      "standard-error" if stat else "remainder-band", tuple(entries), worst)
