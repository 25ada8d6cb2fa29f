"""
Two-mode ladder-operator algebra and the field-level Wick engine.

Operators on the two-mode sector are stored as normal-ordered polynomials in
``a``, ``b`` and their adjoints.  A monomial ``(p, q, r, s)`` stands for
``(a^dag)^p (b^dag)^q a^r b^s``; it conserves particle number iff
``p + q == r + s`` and then shifts the Fock index ``ell`` by ``p - r``.

Density-density observables are handled one level up, on normal-ordered
products of Fourier components of the density,

    :rho(p_1) rho(p_2) ... rho(p_m):,

whose momenta ``p_i`` are tracked symbolically as integer combinations
``c1*k + c2*k2``.  Multiplying two such products generates Wick contractions:
each annihilator of the left factor paired with a creator of the right factor
merges the two density points into one, with the momenta added.  Projected on
two-mode states a factor ``rho(p)`` becomes ``sum_xy F_xy(p) x^dag y``, so the
exact sector operator follows once the kernel is evaluated.  The merge uses the
full field commutator, which is what makes intermediate states outside the
two modes count.  Passing ``contractions="two-mode"`` instead merges with the
two-mode completeness relation and reproduces plain ladder algebra, which is
how the two routes are checked against each other.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Number
from types import MappingProxyType

import numpy as np

from .fock import SubspaceSpec

__all__ = [
    "LadderMonomial",
    "OperatorPoly",
    "FieldQuartic",
    "normal_order_product",
    "matrix_element",
    "bands",
    "sector_matrix",
    "full_sector_matrix",
    "density_product",
    "project_to_modes",
    "build_r_poly",
    "wick_product",
    "exact_mean_R",
    "exact_ensemble_cov",
    "exact_ensemble_cov_parts",
    "exact_quantum_cov_avg",
    "exact_second_moment",
    "diagonal_weights",
]


def _is_exact(c):
    return isinstance(c, (int, Fraction)) and not isinstance(c, bool)


@dataclass(frozen=True, order=True)
class LadderMonomial:
    """``(a^dag)^p (b^dag)^q a^r b^s``."""

    p: int
    q: int
    r: int
    s: int

    def __post_init__(self):
        if min(self.p, self.q, self.r, self.s) < 0:
            raise ValueError(f"negative exponent in {self}")

    @property
    def conserves_number(self) -> bool:
        return self.p + self.q == self.r + self.s

    @property
    def shift(self) -> int:
        """Change of the Fock index ell; meaningful for conserving monomials."""
        return self.p - self.r

    @property
    def degree(self) -> int:
        """Number of creators."""
        return self.p + self.q

    def adjoint(self) -> "LadderMonomial":
        return LadderMonomial(self.r, self.s, self.p, self.q)

    def __str__(self):
        parts = []
        for op, e in (("a+", self.p), ("b+", self.q), ("a", self.r), ("b", self.s)):
            if e:
                parts.append(op if e == 1 else f"{op}^{e}")
        return " ".join(parts) or "1"


class OperatorPoly:
    """Normal-ordered polynomial in the two mode operators.

    Coefficients are plain Python numbers; integer and ``Fraction``
    coefficients stay exact through every operation.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms=None):
        clean = {}
        for mono, c in (terms or {}).items():
            if not isinstance(mono, LadderMonomial):
                mono = LadderMonomial(*mono)
            if c != 0:
                clean[mono] = c
        self._terms = MappingProxyType(clean)

    @property
    def terms(self):
        return self._terms

    @classmethod
    def monomial(cls, p, q, r, s, coeff=1):
        return cls({LadderMonomial(p, q, r, s): coeff})

    @classmethod
    def identity(cls):
        return cls.monomial(0, 0, 0, 0)

    @classmethod
    def a(cls):
        return cls.monomial(0, 0, 1, 0)

    @classmethod
    def b(cls):
        return cls.monomial(0, 0, 0, 1)

    @classmethod
    def adag(cls):
        return cls.monomial(1, 0, 0, 0)

    @classmethod
    def bdag(cls):
        return cls.monomial(0, 1, 0, 0)

    @classmethod
    def number_a(cls):
        return cls.monomial(1, 0, 1, 0)

    @classmethod
    def number_b(cls):
        return cls.monomial(0, 1, 0, 1)

    @classmethod
    def number(cls):
        return cls.number_a() + cls.number_b()

    def __len__(self):
        return len(self._terms)

    def __iter__(self):
        return iter(self._terms.items())

    def coeff(self, p, q, r, s):
        return self._terms.get(LadderMonomial(p, q, r, s), 0)

    @property
    def is_exact(self) -> bool:
        return all(_is_exact(c) for c in self._terms.values())

    @property
    def conserves_number(self) -> bool:
        return all(m.conserves_number for m in self._terms)

    def __add__(self, other):
        if isinstance(other, Number):
            other = other * OperatorPoly.identity()
        if not isinstance(other, OperatorPoly):
            return NotImplemented
        out = dict(self._terms)
        for m, c in other._terms.items():
            out[m] = out.get(m, 0) + c
        return OperatorPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return OperatorPoly({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, OperatorPoly):
            return normal_order_product(self, other)
        if isinstance(other, Number):
            return OperatorPoly({m: c * other for m, c in self._terms.items()})
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, Number):
            return self * other
        return NotImplemented

    def adjoint(self):
        return OperatorPoly({m.adjoint(): _conj(c) for m, c in self._terms.items()})

    def part(self, degree):
        """Terms with exactly ``degree`` creators."""
        return OperatorPoly({m: c for m, c in self._terms.items() if m.degree == degree})

    def __eq__(self, other):
        if not isinstance(other, OperatorPoly):
            return NotImplemented
        return dict(self._terms) == dict(other._terms)

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def allclose(self, other, atol=1e-12, rtol=1e-12):
        keys = set(self._terms) | set(other._terms)
        for m in keys:
            x, y = complex(self.coeff(*_t(m))), complex(other.coeff(*_t(m)))
            if abs(x - y) > atol + rtol * max(abs(x), abs(y)):
                return False
        return True

    def __repr__(self):
        if not self._terms:
            return "OperatorPoly(0)"
        body = " + ".join(f"({c})*[{m}]" for m, c in sorted(self._terms.items()))
        return f"OperatorPoly({body})"


def _t(m):
    return (m.p, m.q, m.r, m.s)


def _conj(c):
    return c.conjugate()


def _reorder(r, p2):
    """a^r (a^dag)^p2 = sum_j C(r,j) C(p2,j) j! (a^dag)^(p2-j) a^(r-j)."""
    return [(j, math.comb(r, j) * math.comb(p2, j) * math.factorial(j))
            for j in range(min(r, p2) + 1)]


def normal_order_product(A: OperatorPoly, B: OperatorPoly) -> OperatorPoly:
    """Normal-ordered form of ``A @ B`` using [a, a^dag] = [b, b^dag] = 1."""
    out = {}
    for m1, c1 in A.terms.items():
        for m2, c2 in B.terms.items():
            c12 = c1 * c2
            for j, wa in _reorder(m1.r, m2.p):
                for i, wb in _reorder(m1.s, m2.q):
                    key = LadderMonomial(m1.p + m2.p - j, m1.q + m2.q - i,
                                         m1.r - j + m2.r, m1.s - i + m2.s)
                    out[key] = out.get(key, 0) + c12 * (wa * wb)
    return OperatorPoly(out)


# --- Fock-basis matrix elements --------------------------------------------

def _falling(x, j):
    """x (x-1) ... (x-j+1), elementwise; object arrays stay exact."""
    out = np.ones_like(x)
    for i in range(j):
        out = out * (x - i)
    return out


def _sqrt_falling(x, j, offset=0):
    """prod_{i<j} sqrt(x - offset - i), clipped at zero."""
    out = np.ones(np.shape(x))
    for i in range(j):
        out = out * np.sqrt(np.clip(x - offset - i, 0, None))
    return out


def _monomial_band(m: LadderMonomial, N: int, ells: np.ndarray, exact: bool):
    """<ell + shift| m |ell> for every ell in ``ells``."""
    na = N // 2 + ells
    nb = N // 2 - ells
    if m.p == m.r and m.q == m.s:
        if exact:
            na, nb = na.astype(object), nb.astype(object)
            return _falling(na, m.r) * _falling(nb, m.s)
        return _falling(na.astype(float), m.r) * _falling(nb.astype(float), m.s)
    # annihilate then create: sqrt(na!/(na-r)!) * sqrt((na-r+p)!/(na-r)!)
    amp = _sqrt_falling(na, m.r) * _sqrt_falling(nb, m.s)
    amp = amp * _sqrt_falling(na - m.r + m.p, m.p) * _sqrt_falling(nb - m.s + m.q, m.q)
    valid = (na >= m.r) & (nb >= m.s)
    return np.where(valid, amp, 0.0)


def bands(P: OperatorPoly, N: int, ells) -> dict:
    """Matrix of ``P`` in the N-particle sector, stored by diagonals.

    Returns ``{shift: values}`` with ``values[i] = <ells[i]+shift| P |ells[i]>``.
    Non-conserving monomials leave the sector and are dropped.  The main
    diagonal is exact (Python integers / fractions) when ``P`` has exact
    coefficients.
    """
    ells = np.asarray(ells, dtype=np.int64)
    exact = P.is_exact
    out = {}
    for m, c in P.terms.items():
        if not m.conserves_number:
            continue
        col = _monomial_band(m, N, ells, exact and m.shift == 0)
        d = m.shift
        if d in out:
            out[d] = out[d] + c * col
        else:
            out[d] = c * col
    for d in list(out):
        if d != 0 or not exact:
            out[d] = np.asarray(out[d], dtype=complex)
    return out


def _check_full_sector(N, *ells):
    for ell in ells:
        if abs(ell) > N // 2:
            raise IndexError(f"Fock index {ell} outside the N={N} sector")


def matrix_element(spec: SubspaceSpec | int, ell1: int, P: OperatorPoly, ell2: int):
    """``<ell1| P |ell2>`` in the N-particle sector (``spec`` may be N itself)."""
    N = spec.N if isinstance(spec, SubspaceSpec) else int(spec)
    _check_full_sector(N, ell1, ell2)
    d = ell1 - ell2
    total = 0
    for m, c in P.terms.items():
        if m.conserves_number and m.shift == d:
            exact = P.is_exact and d == 0
            v = _monomial_band(m, N, np.array([ell2]), exact)[0]
            total = total + c * (v if exact else complex(v))
    return total


def _dense(P, N, ells):
    ells = np.asarray(ells, dtype=np.int64)
    n = len(ells)
    lo = ells[0]
    mat = np.zeros((n, n), dtype=complex)
    for d, vals in bands(P, N, ells).items():
        rows = np.arange(n) + d
        ok = (rows >= 0) & (rows < n)
        mat[rows[ok], np.arange(n)[ok]] += np.asarray(vals, dtype=complex)[ok]
    return mat


def sector_matrix(P: OperatorPoly, spec: SubspaceSpec) -> np.ndarray:
    """Dense block of ``P`` on H_n, rows and columns in ``spec.ells`` order."""
    return _dense(P, spec.N, spec.ells)


def full_sector_matrix(P: OperatorPoly, N: int) -> np.ndarray:
    """Dense matrix of ``P`` on all N+1 Fock states, ell = -N/2 .. N/2."""
    return _dense(P, N, np.arange(-(N // 2), N // 2 + 1))


# --- symbolic density products and Wick contractions -------------------------
#
# A factor is a tuple of momentum combos.  A single combo (c1, c2) is the
# density component rho(c1*k + c2*k2).  Longer tuples only arise from
# two-mode contractions and stand for the matrix product of their kernel
# tables.

K = (1, 0)
K2 = (0, 1)


def _neg(c):
    return (-c[0], -c[1])


def _add(c1, c2):
    return (c1[0] + c2[0], c1[1] + c2[1])


@dataclass(frozen=True)
class FieldQuartic:
    """r(k) = :rho(k) rho(-k): for a symbolic momentum label.

    ``label`` is the combo of the momentum, ``(1, 0)`` for k and ``(0, 1)``
    for k2.  Swapping the two field points maps the label to its negative and
    leaves the operator unchanged.
    """

    label: tuple = K

    @property
    def factors(self):
        return ((self.label,), (_neg(self.label),))

    def swapped(self):
        return FieldQuartic(_neg(self.label))


def density_product(left, right, contractions="field"):
    """Normal-ordered expansion of ``:left: :right:``.

    ``left`` and ``right`` are sequences of factors.  Returns a list of
    factor lists, one per partial matching of left annihilators with right
    creators (the empty matching first).
    """
    if contractions not in ("field", "two-mode"):
        raise ValueError(f"unknown contraction rule {contractions!r}")
    left, right = list(left), list(right)
    terms = []
    for size in range(min(len(left), len(right)) + 1):
        for li in itertools.combinations(range(len(left)), size):
            for rj in itertools.permutations(range(len(right)), size):
                merged = []
                for i, j in zip(li, rj):
                    if contractions == "field":
                        if len(left[i]) != 1 or len(right[j]) != 1:
                            raise ValueError("field contraction needs single-momentum factors")
                        merged.append((_add(left[i][0], right[j][0]),))
                    else:
                        merged.append(left[i] + right[j])
                rest = [f for x, f in enumerate(left) if x not in li]
                rest += [f for x, f in enumerate(right) if x not in rj]
                terms.append(rest + merged)
    return terms


def _momentum(combo, k, k2):
    c1, c2 = combo
    return c1 * np.asarray(k) + c2 * np.asarray(k2)


def _table(factor, kernel, k, k2, cache):
    mats = []
    for combo in factor:
        if combo not in cache:
            cache[combo] = kernel.table(_momentum(combo, k, k2))
        mats.append(cache[combo])
    out = mats[0]
    for m in mats[1:]:
        out = tuple(tuple(sum(out[x][z] * m[z][y] for z in range(2)) for y in range(2))
                    for x in range(2))
    return out


def project_to_modes(factors, kernel, k, k2=None, cache=None) -> OperatorPoly:
    """Two-mode reduction of ``:prod_i rho(p_i):``.

    Inside the normal-ordered product all creators (annihilators) commute, so
    each factor contributes ``sum_xy F_xy(p_i) x^dag y`` independently.
    """
    cache = {} if cache is None else cache
    k2 = k if k2 is None else k2
    acc = {(0, 0, 0, 0): 1}
    for factor in factors:
        tab = _table(factor, kernel, k, k2, cache)
        nxt = {}
        for key, c in acc.items():
            for x in range(2):
                for y in range(2):
                    v = tab[x][y]
                    if v == 0:
                        continue
                    p, q, r, s = key
                    if x == 0:
                        p += 1
                    else:
                        q += 1
                    if y == 0:
                        r += 1
                    else:
                        s += 1
                    nk = (p, q, r, s)
                    nxt[nk] = nxt.get(nk, 0) + c * v
        acc = nxt
    return OperatorPoly(acc)


def build_r_poly(kernel, k) -> OperatorPoly:
    """Two-mode part of ``r(k) = rho(-k) rho(k) - N``."""
    return project_to_modes(FieldQuartic(K).factors, kernel, k, k)


def wick_product(k, k2, kernel, contractions="field", keep=None) -> OperatorPoly:
    """Exact two-mode reduction of ``r(k) r(k2)``.

    Parameters
    ----------
    contractions : {"field", "two-mode"}
        "field" uses the full field commutator (the physical operator).
        "two-mode" keeps only the a/b part of each contraction and equals
        ``build_r_poly(k) * build_r_poly(k2)``.
    keep : iterable of int, optional
        Restrict to terms with the given numbers of contractions (0, 1, 2).
    """
    terms = density_product(FieldQuartic(K).factors, FieldQuartic(K2).factors, contractions)
    cache = {}
    total = OperatorPoly()
    for factors in terms:
        n_contracted = 4 - len(factors)
        if keep is not None and n_contracted not in keep:
            continue
        total = total + project_to_modes(factors, kernel, k, k2, cache)
    return total


def diagonal_weights(P: OperatorPoly) -> dict:
    """Coefficients of the diagonal monomials (a^dag)^i (b^dag)^j a^i b^j, keyed (i, j)."""
    return {(m.p, m.q): c for m, c in P.terms.items() if m.p == m.r and m.q == m.s}


# --- ensemble averages -------------------------------------------------------

def _real(x):
    if _is_exact(x):
        return Fraction(x)
    return float(np.real(x))


def _trace(P, spec):
    diag = bands(P, spec.N, spec.ells).get(0)
    if diag is None:
        return 0
    if diag.dtype == object:
        return Fraction(sum(diag.tolist()), spec.n)
    return diag.sum() / spec.n


def _r_mean(spec, kernel, k):
    return _real(_trace(build_r_poly(kernel, k), spec))


def exact_mean_R(spec: SubspaceSpec, kernel, k):
    """Ensemble mean of R(k) by tracing against P_n / n.

    Exact (a ``Fraction``) for lattice kernels, a float otherwise.
    """
    return spec.N + _r_mean(spec, kernel, k)


def exact_ensemble_cov_parts(spec: SubspaceSpec, kernel, k, k2):
    """Diagonal and off-diagonal parts of the ensemble covariance of R."""
    n, ells = spec.n, spec.ells
    b1 = bands(build_r_poly(kernel, k), spec.N, ells)
    b2 = bands(build_r_poly(kernel, k2), spec.N, ells)
    zero = np.zeros(n)
    d1, d2 = b1.get(0, zero), b2.get(0, zero)
    if d1.dtype == object and d2.dtype == object:
        s_diag = sum((d1 * d2).tolist())
        mean1, mean2 = Fraction(sum(d1.tolist()), n), Fraction(sum(d2.tolist()), n)
        diag = Fraction(s_diag, n * (n + 1)) - mean1 * mean2 / (n + 1)
    else:
        d1, d2 = np.asarray(d1, complex), np.asarray(d2, complex)
        diag = ((d1 * d2).sum() / (n * (n + 1)) - d1.mean() * d2.mean() / (n + 1)).real
    off = 0.0
    for d, v1 in b1.items():
        if d == 0 or -d not in b2:
            continue
        v2 = b2[-d]
        # <l+d|r|l><l|r'|l+d>, both indices inside H_n
        if d > 0:
            off += np.dot(v1[: n - d], v2[d:])
        else:
            off += np.dot(v1[-d:], v2[: n + d])
    off = float(np.real(off)) / (n * (n + 1))
    return _real(diag), off


def exact_ensemble_cov(spec: SubspaceSpec, kernel, k, k2):
    """(delta R)^2(k, k2) from the exact quartic average over H_n."""
    diag, off = exact_ensemble_cov_parts(spec, kernel, k, k2)
    return diag + off if off else diag


def exact_second_moment(spec: SubspaceSpec, kernel, k, k2):
    """Ensemble average of <r(k) r(k2)> from the field-level Wick product."""
    return _real(_trace(wick_product(k, k2, kernel), spec))


def exact_quantum_cov_avg(spec: SubspaceSpec, kernel, k, k2):
    """Ensemble average of the quantum covariance of R(k) and R(k2).

    R = r + N with N fixed on the sector, so the N cross terms cancel and
    the result is <r r'> - rbar rbar' - (delta R)^2.
    """
    second = exact_second_moment(spec, kernel, k, k2)
    m1, m2 = _r_mean(spec, kernel, k), _r_mean(spec, kernel, k2)
    return second - m1 * m2 - exact_ensemble_cov(spec, kernel, k, k2)
