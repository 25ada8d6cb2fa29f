"""
Two-mode Fock sector, the sampling subspace H_n and uniform state sampling.

A Fock index ``ell`` labels the state with ``N/2 + ell`` bosons in mode a and
``N/2 - ell`` in mode b.  States are drawn uniformly from the unit sphere of
the n-dimensional subspace spanned by ``|ell| <= (n - 1)/2``.

Random numbers follow a counter-based contract: sample ``i`` of a run with
master seed ``seed`` is generated from a Philox stream keyed by ``(seed, i)``,
so any partition of the sample range over workers reproduces a serial run
bit for bit.
"""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "SubspaceError",
    "SubspaceSpec",
    "StateVector",
    "StateBatch",
    "MomentEstimate",
    "make_subspace",
    "substream",
    "sample_state",
    "sample_batch",
    "iter_batches",
    "estimate_moments",
    "uniform_moment",
    "batch_means_error",
]

NORM_TOL = 1e-12
WORKERS_ENV = "BEC_TYPICALITY_WORKERS"


class SubspaceError(ValueError):
    """Invalid particle number or subspace dimension."""


@dataclass(frozen=True)
class SubspaceSpec:
    """Total particle number ``N`` and sampling-subspace dimension ``n``."""

    N: int
    n: int

    def __post_init__(self):
        N, n = self.N, self.n
        if int(N) != N or int(n) != n:
            raise SubspaceError(f"N and n must be integers, got N={N!r}, n={n!r}")
        if N < 2:
            raise SubspaceError(f"N must be at least 2, got N={N}")
        if N % 2:
            raise SubspaceError(f"N must be even, got N={N}")
        if n < 1:
            raise SubspaceError(f"n must be at least 1, got n={n}")
        if n % 2 == 0:
            raise SubspaceError(f"n must be odd, got n={n}")
        if n > N + 1:
            raise SubspaceError(f"n must not exceed N+1={N + 1}, got n={n}")

    @property
    def half_width(self) -> int:
        return (self.n - 1) // 2

    @property
    def ells(self) -> np.ndarray:
        """Admissible Fock indices in storage order."""
        h = self.half_width
        return np.arange(-h, h + 1, dtype=np.int64)

    def index(self, ell: int) -> int:
        """Storage offset of Fock index ``ell``."""
        if abs(ell) > self.half_width:
            raise IndexError(f"Fock index {ell} outside H_n (n={self.n})")
        return ell + self.half_width

    def occupations(self, ell: int) -> tuple[int, int]:
        return self.N // 2 + ell, self.N // 2 - ell

    def contains(self, ell: int) -> bool:
        return abs(ell) <= self.half_width


def make_subspace(N: int, n: int) -> SubspaceSpec:
    return SubspaceSpec(N, n)


@dataclass(frozen=True, eq=False)
class StateVector:
    """Pure state in H_n; ``coeffs[i]`` is the amplitude of ``spec.ells[i]``."""

    spec: SubspaceSpec
    coeffs: np.ndarray

    def __post_init__(self):
        z = np.array(self.coeffs, dtype=np.complex128)
        if z.shape != (self.spec.n,):
            raise ValueError(f"expected {self.spec.n} amplitudes, got shape {z.shape}")
        norm2 = float(np.vdot(z, z).real)
        if abs(norm2 - 1.0) > NORM_TOL:
            raise ValueError(f"state is not normalized: sum |z|^2 = {norm2!r}")
        z.setflags(write=False)
        object.__setattr__(self, "coeffs", z)

    def amplitude(self, ell: int) -> complex:
        """z_ell, zero outside the subspace."""
        if not self.spec.contains(ell):
            return 0j
        return complex(self.coeffs[self.spec.index(ell)])


@dataclass(frozen=True, eq=False)
class StateBatch:
    """A block of sampled states stored row-wise, with their sample offsets."""

    spec: SubspaceSpec
    coeffs: np.ndarray
    start: int = 0

    def __post_init__(self):
        z = np.array(self.coeffs, dtype=np.complex128)
        if z.ndim != 2 or z.shape[1] != self.spec.n:
            raise ValueError(f"expected shape (M, {self.spec.n}), got {z.shape}")
        z.setflags(write=False)
        object.__setattr__(self, "coeffs", z)

    def __len__(self):
        return self.coeffs.shape[0]

    def __getitem__(self, i) -> StateVector:
        return StateVector(self.spec, self.coeffs[i])

    def __iter__(self):
        for i in range(len(self)):
            yield self[i]


@dataclass(frozen=True)
class MomentEstimate:
    value: complex
    standard_error: float
    sample_count: int


def substream(seed: int, index: int) -> np.random.Generator:
    """Generator for sample ``index`` of the run with master ``seed``."""
    if seed is None:
        raise ValueError("a master seed is required")
    if seed < 0 or index < 0:
        raise ValueError("seed and sample index must be non-negative")
    return np.random.Generator(np.random.Philox(key=[int(seed), int(index)]))


def _draw(n: int, rng: np.random.Generator) -> np.ndarray:
    if n == 1:
        # the unit circle in C^1 is a single physical state; fix the phase
        return np.ones(1, dtype=np.complex128)
    x = rng.standard_normal(2 * n)
    z = x[:n] + 1j * x[n:]
    return z / np.linalg.norm(z)


def sample_state(spec: SubspaceSpec, rng: np.random.Generator) -> StateVector:
    """One state drawn uniformly from the unit sphere of H_n."""
    return StateVector(spec, _draw(spec.n, rng))


def _sample_rows(n, seed, start, stop):
    out = np.empty((stop - start, n), dtype=np.complex128)
    for i in range(start, stop):
        out[i - start] = _draw(n, substream(seed, i))
    return out


def _default_workers():
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


def sample_batch(spec: SubspaceSpec, seed: int, count: int, start: int = 0,
                 workers: int | None = None) -> StateBatch:
    """Samples ``start .. start+count-1`` of the run with master ``seed``.

    The result does not depend on ``workers``; each sample has its own stream.
    """
    if seed is None:
        raise ValueError("a master seed is required")
    workers = _default_workers() if workers is None else workers
    if workers <= 1 or count < 2 * workers:
        return StateBatch(spec, _sample_rows(spec.n, seed, start, start + count), start)
    edges = np.linspace(start, start + count, workers + 1).astype(int)
    with ProcessPoolExecutor(workers) as pool:
        parts = pool.map(_sample_rows, [spec.n] * workers, [seed] * workers,
                         edges[:-1], edges[1:])
        rows = np.concatenate(list(parts))
    return StateBatch(spec, rows, start)


def iter_batches(spec: SubspaceSpec, seed: int, count: int, chunk: int = 20000,
                 workers: int | None = None):
    """Yield the run as consecutive batches of at most ``chunk`` samples."""
    for lo in range(0, count, chunk):
        yield sample_batch(spec, seed, min(chunk, count - lo), lo, workers)


def batch_means_error(values: np.ndarray, batches: int = 32) -> float:
    """Standard error of the mean of ``values`` from contiguous batch means."""
    values = np.asarray(values)
    m = len(values)
    b = min(batches, m)
    if b < 2:
        return float("nan")
    means = np.array([blk.mean() for blk in np.array_split(values, b)])
    dev = np.abs(means - means.mean()) ** 2
    return float(np.sqrt(dev.sum() / (b - 1) / b))


def _rows(samples) -> tuple[SubspaceSpec, list[np.ndarray]]:
    if isinstance(samples, StateBatch):
        samples = [samples]
    spec = None
    rows = []
    vectors = []
    for item in samples:
        if isinstance(item, StateBatch):
            s, block = item.spec, item.coeffs
        elif isinstance(item, StateVector):
            s, block = item.spec, None
            vectors.append(item.coeffs)
        else:
            raise TypeError(f"expected StateVector or StateBatch, got {type(item).__name__}")
        if spec is None:
            spec = s
        elif s != spec:
            raise ValueError(f"samples mix subspaces {spec} and {s}")
        if block is not None:
            if vectors:
                rows.append(np.array(vectors))
                vectors = []
            rows.append(block)
    if vectors:
        rows.append(np.array(vectors))
    if spec is None:
        raise ValueError("no samples given")
    return spec, rows


def estimate_moments(samples: Iterable[StateVector] | StateBatch | Iterable[StateBatch],
                     indices: Sequence[int], batches: int = 32) -> MomentEstimate:
    """Empirical z*_l1 z_l2 (two indices) or z*_l1 z*_l2 z_l3 z_l4 (four).

    ``samples`` may be state vectors, a batch, or an iterable of batches
    (useful for large runs generated chunk by chunk).
    """
    if len(indices) not in (2, 4):
        raise ValueError("moments take 2 or 4 Fock indices")
    spec, blocks = _rows(samples)
    pos = [spec.index(ell) for ell in indices]
    parts = []
    for z in blocks:
        if len(pos) == 2:
            parts.append(np.conj(z[:, pos[0]]) * z[:, pos[1]])
        else:
            parts.append(np.conj(z[:, pos[0]] * z[:, pos[1]]) * z[:, pos[2]] * z[:, pos[3]])
    values = np.concatenate(parts)
    return MomentEstimate(complex(values.mean()), batch_means_error(values, batches), len(values))


def uniform_moment(spec: SubspaceSpec, indices: Sequence[int]) -> Fraction:
    """Exact moment of the uniform ensemble for the index pattern of ``estimate_moments``."""
    n = spec.n
    if not all(spec.contains(ell) for ell in indices):
        raise IndexError("Fock index outside H_n")
    if len(indices) == 2:
        l1, l2 = indices
        return Fraction(int(l1 == l2), n)
    if len(indices) == 4:
        l1, l2, l3, l4 = indices
        pairs = int(l1 == l3 and l2 == l4) + int(l1 == l4 and l2 == l3)
        return Fraction(pairs, n * (n + 1))
    raise ValueError("moments take 2 or 4 Fock indices")
