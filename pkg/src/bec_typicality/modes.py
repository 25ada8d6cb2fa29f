"""
Mode models and their Fourier kernels.

A kernel returns ``F_xy(q) = \\int psi_x^*(r) psi_y(r) exp(-i q.r) dr`` for
``x, y`` in ``{"a", "b"}``.  Thus ``F_aa`` and ``F_bb`` are the Fourier
transforms of the two mode densities and ``F_ab``, ``F_ba`` those of the
interference products ``psi_a^* psi_b`` and ``psi_b^* psi_a``.

Units: plane-wave momenta are integer lattice vectors of the unit periodic
box (physical wavevector ``2*pi*m``).  The Gaussian model is one-dimensional
with lengths in units of the initial mode width, times in units of
``m sigma^2 / hbar`` and momenta in inverse widths.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "ModeKernel",
    "PlaneWaveModel",
    "GaussianModel",
    "plane_wave_kernel",
    "gaussian_kernel",
    "kernel_for",
    "k0_of_t",
    "orthogonality_report",
    "is_quasi_orthogonal",
    "ORTHOGONALITY_TOL",
]

MODES = ("a", "b")
ORTHOGONALITY_TOL = 1e-8


class ModeKernel:
    """The four Fourier kernels of a two-mode model.

    Parameters
    ----------
    funcs : dict
        Maps ``"aa"``, ``"ab"``, ``"ba"``, ``"bb"`` to callables of the
        momentum.
    lattice : bool
        True when momenta live on an integer lattice and kernel values are
        exact integers.
    """

    def __init__(self, funcs, lattice=False, name="kernel"):
        missing = {x + y for x in MODES for y in MODES} - set(funcs)
        if missing:
            raise ValueError(f"kernel lacks components {sorted(missing)}")
        self._funcs = dict(funcs)
        self.lattice = lattice
        self.name = name

    def __call__(self, x, y, q):
        return self._funcs[x + y](q)

    def table(self, q):
        """2x2 nested tuple ``((F_aa, F_ab), (F_ba, F_bb))`` at momentum ``q``."""
        f = self._funcs
        return ((f["aa"](q), f["ab"](q)), (f["ba"](q), f["bb"](q)))

    def __repr__(self):
        return f"ModeKernel({self.name}, lattice={self.lattice})"


def _lattice_vector(q):
    arr = np.atleast_1d(np.asarray(q))
    if arr.dtype.kind not in "iu":
        if not np.all(np.equal(np.mod(arr, 1), 0)):
            raise ValueError(f"momentum {q!r} is not on the integer lattice")
        arr = arr.astype(np.int64)
    return tuple(int(v) for v in arr)


@dataclass(frozen=True)
class PlaneWaveModel:
    """Counterpropagating plane waves exp(+/- i 2 pi k0.r) in a unit box."""

    k0: tuple

    def __init__(self, k0):
        vec = _lattice_vector(k0)
        if not 1 <= len(vec) <= 3:
            raise ValueError("plane-wave model supports 1 to 3 dimensions")
        if not any(vec):
            raise ValueError("k0 must be nonzero")
        object.__setattr__(self, "k0", vec)

    @property
    def dim(self):
        return len(self.k0)

    @property
    def fringe_wavevector(self) -> np.ndarray:
        """2*k0 as a lattice vector; ``R`` peaks there."""
        return 2 * np.array(self.k0, dtype=np.int64)

    def physical_k0(self) -> np.ndarray:
        return 2 * np.pi * np.array(self.k0, dtype=float)

    def densities(self, r):
        """|psi_a|^2 and |psi_b|^2, both identically 1."""
        r = np.asarray(r, dtype=float)
        shape = r.shape if self.dim == 1 else r.shape[:-1]
        return np.ones(shape), np.ones(shape)


def plane_wave_kernel(model: PlaneWaveModel) -> ModeKernel:
    """Kronecker-delta kernels of the plane-wave pair, with exact 0/1 values."""
    k0 = np.array(model.k0, dtype=np.int64)
    zero = tuple(0 for _ in k0)
    minus = tuple(int(v) for v in -2 * k0)
    plus = tuple(int(v) for v in 2 * k0)

    def delta(target):
        def f(q):
            vec = _lattice_vector(q)
            if len(vec) != len(target):
                raise ValueError(f"momentum {q!r} has wrong dimension")
            return 1 if vec == target else 0
        return f

    funcs = {"aa": delta(zero), "bb": delta(zero), "ab": delta(minus), "ba": delta(plus)}
    return ModeKernel(funcs, lattice=True, name=f"plane-wave k0={model.k0}")


@dataclass(frozen=True)
class GaussianModel:
    """Two unit-width Gaussians centred at -alpha (mode a) and +alpha (mode b),
    freely expanded for a time t."""

    alpha: float
    t: float = 0.0

    def __post_init__(self):
        if not self.alpha >= 0:
            raise ValueError(f"alpha must be non-negative, got {self.alpha}")
        if self.t < 0:
            raise ValueError(f"t must be non-negative, got {self.t}")

    @property
    def spread(self) -> float:
        """1 + t^2, the squared width growth factor."""
        return 1.0 + self.t ** 2

    @property
    def k0(self) -> float:
        return k0_of_t(self)

    @property
    def fringe_wavevector(self) -> float:
        return 2.0 * self.k0

    def physical_k0(self) -> float:
        return self.k0

    def psi(self, mode, x):
        """Time-evolved mode function."""
        x = np.asarray(x, dtype=float)
        centre = -self.alpha if mode == "a" else self.alpha
        w = 1.0 + 1j * self.t
        return np.pi ** -0.25 / np.sqrt(w) * np.exp(-(x - centre) ** 2 / (2 * w))

    def densities(self, x):
        x = np.asarray(x, dtype=float)
        s = self.spread
        norm = 1.0 / np.sqrt(np.pi * s)
        return (norm * np.exp(-(x + self.alpha) ** 2 / s),
                norm * np.exp(-(x - self.alpha) ** 2 / s))


def k0_of_t(model: GaussianModel) -> float:
    """Fringe half-wavevector alpha*t / (1 + t^2)."""
    return model.alpha * model.t / (1.0 + model.t ** 2)


def gaussian_kernel(model: GaussianModel) -> ModeKernel:
    alpha, s = model.alpha, model.spread
    k0 = k0_of_t(model)
    overlap = math.exp(-alpha ** 2 / s)

    def f_aa(k):
        k = np.asarray(k, dtype=float)
        return np.exp(-s * k ** 2 / 4 + 1j * k * alpha)

    def f_bb(k):
        return f_aa(-np.asarray(k, dtype=float))

    def f_ab(k):
        k = np.asarray(k, dtype=float)
        return overlap * np.exp(-s * (k + 2 * k0) ** 2 / 4) + 0j

    def f_ba(k):
        return f_ab(-np.asarray(k, dtype=float))

    def scalar(f):
        def g(k):
            v = f(k)
            return complex(v) if np.ndim(v) == 0 else v
        return g

    funcs = {"aa": scalar(f_aa), "bb": scalar(f_bb), "ab": scalar(f_ab), "ba": scalar(f_ba)}
    return ModeKernel(funcs, lattice=False,
                      name=f"gaussian alpha={model.alpha} t={model.t}")


def kernel_for(model) -> ModeKernel:
    """Kernel of either model type."""
    if isinstance(model, PlaneWaveModel):
        return plane_wave_kernel(model)
    if isinstance(model, GaussianModel):
        return gaussian_kernel(model)
    raise TypeError(f"unsupported model {type(model).__name__}")


def orthogonality_report(model: GaussianModel) -> float:
    """Overlap scale exp(-alpha^2) of the two Gaussian modes."""
    return math.exp(-model.alpha ** 2)


def is_quasi_orthogonal(model: GaussianModel, tol: float = ORTHOGONALITY_TOL) -> bool:
    return orthogonality_report(model) <= tol
