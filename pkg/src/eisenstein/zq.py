"""The ring of integers of an unramified extension of Q_p, truncated at p^N.

O_K = Z_p[y]/(g(y)) where g lifts the residue-field modulus.  Elements
are coefficient tuples in the basis 1, y, ..., y^{f-1}, each reduced mod
p^N.  Scalar elements are :class:`QElem`; the vectorised helpers on
:class:`UnramRing` work on integer arrays whose last axis has length f and
are what the norm and oracle code use.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import cached_property
from math import ceil, log
from typing import Iterable, Sequence

import numpy as np

from .gf import FFElem, ResidueField

__all__ = [
    "PrecisionError",
    "UnramRing",
    "QElem",
    "zq_arith",
    "zq_inv",
    "valuation",
    "teichmuller",
    "exact_div_p",
    "reduce_to_residue",
    "padic_log",
    "log_series_length",
]


class PrecisionError(ArithmeticError):
    """Raised when a result is not determined at the working precision."""


def _int_valuation(x: int, p: int, cap: int) -> int:
    if x == 0:
        return cap
    v = 0
    while x % p == 0 and v < cap:
        x //= p
        v += 1
    return v


@dataclass(frozen=True, eq=False)
class UnramRing:
    """O_K / p^N for K/Q_p unramified with residue field ``base``."""

    base: ResidueField
    N: int
    lift_modulus: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("precision N must be at least 1")
        lm = self.lift_modulus
        if lm is None:
            lm = self.base.modulus
        lm = tuple(int(c) for c in lm)
        p, f = self.base.p, self.base.f
        if len(lm) != f + 1 or lm[-1] != 1:
            raise ValueError("lift modulus must be monic of degree f")
        if tuple(c % p for c in lm) != self.base.modulus:
            raise ValueError("lift modulus does not reduce to the residue modulus")
        object.__setattr__(self, "lift_modulus", lm)

    def __eq__(self, other):
        return (
            isinstance(other, UnramRing)
            and self.base == other.base
            and self.N == other.N
            and self.lift_modulus == other.lift_modulus
        )

    def __hash__(self):
        return hash((self.base, self.N, self.lift_modulus))

    def __repr__(self):
        return f"UnramRing(p={self.p}, f={self.f}, N={self.N})"

    @property
    def p(self) -> int:
        return self.base.p

    @property
    def f(self) -> int:
        return self.base.f

    @property
    def q(self) -> int:
        return self.base.q

    @cached_property
    def modulus(self) -> int:
        """p^N."""
        return self.p**self.N

    def with_precision(self, N: int) -> "UnramRing":
        return UnramRing(self.base, N, self.lift_modulus)

    # -- scalar construction -------------------------------------------

    def __call__(self, value) -> "QElem":
        if isinstance(value, QElem):
            if value.ring.base != self.base:
                raise ValueError("element belongs to a different residue field")
            if value.ring.N < self.N:
                raise PrecisionError("cannot raise the precision of an element")
            return QElem(self, tuple(c % self.modulus for c in value.coeffs))
        if isinstance(value, (int, np.integer)):
            return QElem(self, (int(value) % self.modulus,) + (0,) * (self.f - 1))
        coeffs = tuple(int(c) % self.modulus for c in value)
        if len(coeffs) != self.f:
            raise ValueError(f"expected {self.f} coordinates, got {len(coeffs)}")
        return QElem(self, coeffs)

    def zero(self) -> "QElem":
        return self(0)

    def one(self) -> "QElem":
        return self(1)

    def lift(self, r: FFElem) -> "QElem":
        """The lift with coordinates in [0, p)."""
        return self(self.base(r).coeffs)

    def from_array(self, a) -> "QElem":
        return self(tuple(int(x) for x in np.asarray(a).reshape(self.f)))

    # -- multiplication tensor -----------------------------------------

    @cached_property
    def mul_tensor(self) -> np.ndarray:
        """T[i, j, k]: coefficient of y^k in y^i * y^j reduced mod g."""
        f, P = self.f, self.modulus
        g = self.lift_modulus
        # powers y^0 .. y^{2f-2} reduced
        powers = []
        cur = [1] + [0] * (f - 1)
        for _ in range(2 * f - 1):
            powers.append(cur)
            top = cur[-1]
            nxt = [0] + cur[:-1]
            nxt = [(nxt[i] - top * g[i]) % P for i in range(f)]
            cur = nxt
        T = np.zeros((f, f, f), dtype=np.int64)
        for i in range(f):
            for j in range(f):
                T[i, j] = powers[i + j]
        return T

    # -- vectorised arithmetic on arrays (..., f) -------------------------

    def mul_arr(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        P = self.modulus
        if self.f == 1:
            return (a * b) % P
        outer = (a[..., :, None] * b[..., None, :]) % P
        return np.einsum("...ij,ijk->...k", outer, self.mul_tensor) % P

    def scal_arr(self, a: np.ndarray, c: int) -> np.ndarray:
        return (a * (int(c) % self.modulus)) % self.modulus

    def valuation_arr(self, a: np.ndarray) -> np.ndarray:
        """Valuation of each element (reduced over the last axis); N for zero."""
        a = np.asarray(a) % self.modulus
        v = np.full(a.shape[:-1], self.N, dtype=np.int64)
        cur = a.copy()
        for k in range(self.N):
            nz = (cur % self.p != 0).any(axis=-1)
            v = np.where(nz & (v == self.N), k, v)
            cur //= self.p
        return v

    @cached_property
    def _residue_inverse_table(self) -> np.ndarray:
        F = self.base
        table = np.zeros((F.q, self.f), dtype=np.int64)
        for x in F.nonzero():
            table[x.index] = (1 / x).coeffs
        return table

    def _residue_index_arr(self, a: np.ndarray) -> np.ndarray:
        r = np.asarray(a) % self.p
        weights = self.p ** np.arange(self.f, dtype=np.int64)
        return (r * weights).sum(axis=-1)

    def inv_arr(self, a: np.ndarray) -> np.ndarray:
        """Inverse of every element of ``a``; all must be units."""
        a = np.asarray(a) % self.modulus
        idx = self._residue_index_arr(a)
        if (idx == 0).any():
            raise ZeroDivisionError("inverting a non-unit")
        x = self._residue_inverse_table[idx]
        two = np.zeros(self.f, dtype=np.int64)
        two[0] = 2
        for _ in range(max(1, ceil(log(self.N, 2)) + 1)):
            x = self.mul_arr(x, (two - self.mul_arr(a, x)) % self.modulus)
        return x

    # -- scalar helpers used by the theorem checkers ----------------------

    @cached_property
    def _teich_cache(self) -> dict:
        return {}

    def teichmuller(self, r: FFElem) -> "QElem":
        r = self.base(r)
        cache = self._teich_cache
        if r.coeffs not in cache:
            t = self.lift(r)
            for _ in range(self.N + 1):
                nt = t ** self.q
                if nt == t:
                    break
                t = nt
            else:  # pragma: no cover
                raise AssertionError("Teichmuller iteration did not stabilise")
            cache[r.coeffs] = t
        return cache[r.coeffs]


@dataclass(frozen=True)
class QElem:
    """Element of :class:`UnramRing`."""

    ring: UnramRing = dc_field(repr=False)
    coeffs: tuple[int, ...]

    @property
    def p(self) -> int:
        return self.ring.p

    def array(self) -> np.ndarray:
        return np.array(self.coeffs, dtype=np.int64)

    def __bool__(self):
        return any(self.coeffs)

    def _coerce(self, other) -> "QElem":
        if isinstance(other, QElem):
            if other.ring != self.ring:
                raise ValueError(
                    f"mixing precisions or rings: {self.ring!r} vs {other.ring!r}"
                )
            return other
        if isinstance(other, (int, np.integer)):
            return self.ring(int(other))
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        P = self.ring.modulus
        return QElem(self.ring, tuple((x + y) % P for x, y in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        P = self.ring.modulus
        return QElem(self.ring, tuple(-x % P for x in self.coeffs))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        R = self.ring
        P = R.modulus
        if R.f == 1:
            return QElem(R, ((self.coeffs[0] * o.coeffs[0]) % P,))
        T = R.mul_tensor
        out = [0] * R.f
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    if b:
                        ab = a * b
                        for k in range(R.f):
                            out[k] += ab * int(T[i, j, k])
        return QElem(R, tuple(x % P for x in out))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return zq_inv(self) ** (-e)
        result = self.ring.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def valuation(self) -> int:
        return valuation(self)

    def residue(self) -> FFElem:
        return reduce_to_residue(self)

    def __int__(self):
        if any(self.coeffs[1:]):
            raise ValueError("element is not in Z/p^N")
        return self.coeffs[0]

    def __repr__(self):
        if self.ring.f == 1:
            return f"Q({self.coeffs[0]} mod {self.p}^{self.ring.N})"
        return f"Q({self.coeffs} mod {self.p}^{self.ring.N})"


# -- module-level operations ------------------------------------------------

def zq_arith(a: QElem, b: QElem, op: str) -> QElem:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def valuation(a: QElem) -> int:
    R = a.ring
    return min(_int_valuation(c, R.p, R.N) for c in a.coeffs)


def zq_inv(a: QElem) -> QElem:
    """Inverse of a unit by Newton iteration from the residue inverse."""
    R = a.ring
    if valuation(a) != 0:
        raise ZeroDivisionError(f"{a!r} is not a unit")
    x = R.lift(1 / a.residue())
    prec = 1
    while prec < R.N:
        x = x * (2 - a * x)
        prec *= 2
    assert a * x == R.one()
    return x


def teichmuller(r: FFElem, ring: UnramRing) -> QElem:
    """The (q-1)-th root of unity (or 0) lifting r."""
    return ring.teichmuller(r)


def exact_div_p(a: QElem, k: int) -> QElem:
    """b with p^k b = a; the result lives at precision N - k."""
    R = a.ring
    if k < 0:
        raise ValueError("k must be non-negative")
    if k > R.N:
        raise PrecisionError(f"cannot divide by p^{k} at precision {R.N}")
    if valuation(a) < k:
        raise ArithmeticError(f"valuation {valuation(a)} < {k}")
    if k == R.N:
        raise PrecisionError("quotient carries no digits")
    S = R.with_precision(R.N - k)
    pk = R.p**k
    return S(tuple(c // pk for c in a.coeffs))


def reduce_to_residue(a: QElem) -> FFElem:
    return a.ring.base(tuple(c % a.ring.p for c in a.coeffs))


def log_series_length(p: int, m: int) -> int:
    """Number of terms of the log series needed for a result mod p^m."""
    K = 1
    while K - int(log(K, p) + 1e-9) < m:
        K += 1
    return K + 1


def _padic_log_arr(R: UnramRing, u: np.ndarray, m: int) -> np.ndarray:
    """log(u)/p mod p^{m-1} for an array of 1-units (shape (..., f))."""
    p, P = R.p, R.modulus
    K = log_series_length(p, m)
    guard = max(_int_valuation(k, p, 64) for k in range(1, K + 1))
    if R.N < m + guard:
        raise PrecisionError(f"need precision >= {m + guard} for log mod p^{m}, have {R.N}")
    one = np.zeros(R.f, dtype=np.int64)
    one[0] = 1
    x = (np.asarray(u) - one) % P
    if (x % p).any():
        raise ValueError("padic_log needs u = 1 mod p")
    total = np.zeros_like(x)
    power = x.copy()
    for k in range(1, K + 1):
        v = _int_valuation(k, p, 64)
        unit = k // p**v
        term = (power // p**v) * pow(unit, -1, P) % P
        if k % 2 == 0:
            term = -term
        total = (total + term) % P
        power = R.mul_arr(power, x)
    pm = p**m
    total %= pm
    if (total % p).any():  # pragma: no cover
        raise AssertionError("log of a 1-unit must be divisible by p")
    return total // p


def padic_log(u: QElem, m: int) -> tuple[int, ...]:
    """Coordinates of log(u)/p in (Z/p^{m-1})^f."""
    R = u.ring
    if m < 2:
        raise ValueError("target level m must be at least 2")
    if valuation(u - 1) < 1:
        raise ValueError("padic_log needs u = 1 mod p")
    return tuple(int(c) for c in _padic_log_arr(R, u.array(), m))


def arr_to_qelems(R: UnramRing, a: np.ndarray) -> list[QElem]:
    a = np.asarray(a).reshape(-1, R.f)
    return [R.from_array(row) for row in a]


def qelems_to_arr(elems: Sequence[QElem] | Iterable[QElem], f: int) -> np.ndarray:
    rows = [e.coeffs for e in elems]
    return np.array(rows, dtype=np.int64).reshape(-1, f)
UnramRingCtx = UnramRing
