"""Eisenstein polynomials over O_K and arithmetic in O_L = O_K[X]/(f).

Elements of O_L are arrays of shape (n, f): coordinate i is the O_K
coefficient of pi^i.  Since p = unit * pi^n, knowing every coordinate
mod p^N means knowing the element mod pi^{nN}.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import cached_property
from math import comb
from typing import Iterable, Sequence

import numpy as np

from .gf import FFElem
from .zq import PrecisionError, QElem, UnramRing, qelems_to_arr

__all__ = [
    "EisensteinPoly",
    "LElem",
    "canonical_truncate",
    "det_local",
    "norm_from_L",
    "norm_one_minus",
    "norm_one_minus_batch",
    "norm_one_minus_pairs",
    "artin_hasse_norm_series",
    "artin_hasse_norms",
    "reverse_poly",
    "eval_poly",
    "ascending_coeffs",
    "ramification_data",
    "lower_breaks",
    "artin_hasse_norm",
    "mobius",
]


def mobius(k: int) -> int:
    result = 1
    d = 2
    while d * d <= k:
        if k % d == 0:
            k //= d
            if k % d == 0:
                return 0
            result = -result
        d += 1
    if k > 1:
        result = -result
    return result


@dataclass(frozen=True, eq=False)
class EisensteinPoly:
    """f(X) = X^n + f_1 X^{n-1} + ... + f_n with f_i in O_K.

    ``coeffs[i-1]`` is f_i, the coefficient of X^{n-i}.
    """

    ring: UnramRing
    coeffs: tuple[QElem, ...]
    check: bool = dc_field(default=True, repr=False)

    def __post_init__(self):
        R = self.ring
        coeffs = tuple(R(c) for c in self.coeffs)
        object.__setattr__(self, "coeffs", coeffs)
        n = len(coeffs)
        if n < 2:
            raise ValueError("degree must be at least 2")
        if self.check:
            for i, c in enumerate(coeffs, start=1):
                if c.valuation() < 1:
                    raise ValueError(f"f_{i} is not divisible by p")
            if coeffs[-1].valuation() != 1:
                raise ValueError("constant term must have valuation exactly 1")

    @classmethod
    def from_ints(cls, ring: UnramRing, coeffs: Iterable, check: bool = True):
        """Build from f_1..f_n given as ints or length-f sequences."""
        return cls(ring, tuple(ring(c) for c in coeffs), check)

    @property
    def n(self) -> int:
        return len(self.coeffs)

    @property
    def p(self) -> int:
        return self.ring.p

    def __getitem__(self, i: int) -> QElem:
        """f_i for 1 <= i <= n, and f_0 = 1."""
        if i == 0:
            return self.ring.one()
        if not 1 <= i <= self.n:
            raise IndexError(i)
        return self.coeffs[i - 1]

    def __eq__(self, other):
        return (
            isinstance(other, EisensteinPoly)
            and self.ring == other.ring
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.ring, self.coeffs))

    def __repr__(self):
        return f"EisensteinPoly(n={self.n}, ring={self.ring!r})"

    def v(self, i: int) -> int:
        return self[i].valuation()

    def replace(self, changes: dict[int, QElem | int], check: bool = True) -> "EisensteinPoly":
        c = list(self.coeffs)
        for i, val in changes.items():
            c[i - 1] = self.ring(val)
        return EisensteinPoly(self.ring, tuple(c), check)

    def with_ring(self, ring: UnramRing) -> "EisensteinPoly":
        return EisensteinPoly(ring, tuple(ring(c) for c in self.coeffs), self.check)

    @cached_property
    def coeff_array(self) -> np.ndarray:
        """Shape (n, f): row i-1 holds f_i."""
        return qelems_to_arr(self.coeffs, self.ring.f)

    @cached_property
    def _reduction_row(self) -> np.ndarray:
        """pi^n expressed in the basis: row j is the coefficient of pi^j."""
        # pi^n = -(f_1 pi^{n-1} + ... + f_n), so coordinate j is -f_{n-j}
        return (-self.coeff_array[::-1]) % self.ring.modulus

    def mul_by_pi(self, a: np.ndarray) -> np.ndarray:
        """Multiply O_L elements (shape (..., n, f)) by pi."""
        R = self.ring
        top = a[..., -1:, :]
        shifted = np.concatenate([np.zeros_like(a[..., :1, :]), a[..., :-1, :]], axis=-2)
        return (shifted + R.mul_arr(top, self._reduction_row)) % R.modulus

    @cached_property
    def _pi_power_cache(self) -> list[np.ndarray]:
        R = self.ring
        e = np.zeros((self.n, R.f), dtype=np.int64)
        e[0, 0] = 1
        return [e]

    def pi_power(self, k: int) -> np.ndarray:
        cache = self._pi_power_cache
        while len(cache) <= k:
            cache.append(self.mul_by_pi(cache[-1]))
        return cache[k]

    def pi_powers(self, start: int, stop: int) -> np.ndarray:
        self.pi_power(stop - 1)
        return np.stack(self._pi_power_cache[start:stop])

    def element(self, coords) -> "LElem":
        return LElem(self, np.asarray(coords, dtype=np.int64) % self.ring.modulus)


@dataclass(frozen=True, eq=False)
class LElem:
    """sum_i a_i pi^i in O_L; ``coords`` has shape (n, f)."""

    poly: EisensteinPoly = dc_field(repr=False)
    coords: np.ndarray

    @classmethod
    def from_qelems(cls, poly: EisensteinPoly, elems: Sequence[QElem]):
        if len(elems) != poly.n:
            raise ValueError("need n coordinates")
        return cls(poly, qelems_to_arr(elems, poly.ring.f))

    @classmethod
    def one(cls, poly: EisensteinPoly) -> "LElem":
        return cls(poly, poly.pi_power(0).copy())

    @classmethod
    def pi(cls, poly: EisensteinPoly, k: int = 1) -> "LElem":
        return cls(poly, poly.pi_power(k).copy())

    @classmethod
    def scalar(cls, poly: EisensteinPoly, a: QElem) -> "LElem":
        c = np.zeros((poly.n, poly.ring.f), dtype=np.int64)
        c[0] = a.array()
        return cls(poly, c)

    def _check(self, other: "LElem"):
        if other.poly != self.poly:
            raise ValueError("elements of different rings")

    def __add__(self, other: "LElem") -> "LElem":
        self._check(other)
        return LElem(self.poly, (self.coords + other.coords) % self.poly.ring.modulus)

    def __sub__(self, other: "LElem") -> "LElem":
        self._check(other)
        return LElem(self.poly, (self.coords - other.coords) % self.poly.ring.modulus)

    def __neg__(self):
        return LElem(self.poly, (-self.coords) % self.poly.ring.modulus)

    def scale(self, a: QElem) -> "LElem":
        R = self.poly.ring
        return LElem(self.poly, R.mul_arr(self.coords, a.array()))

    def mult_matrix(self) -> np.ndarray:
        """Matrix of y -> self*y; shape (n, n, f), column j = self * pi^j."""
        cols = [self.coords]
        for _ in range(self.poly.n - 1):
            cols.append(self.poly.mul_by_pi(cols[-1]))
        return np.stack(cols, axis=1)

    def __mul__(self, other: "LElem") -> "LElem":
        self._check(other)
        R = self.poly.ring
        M = self.mult_matrix()
        prod = R.mul_arr(M, other.coords[None, :, :]).sum(axis=1) % R.modulus
        return LElem(self.poly, prod)

    def __pow__(self, e: int) -> "LElem":
        if e < 0:
            raise ValueError("negative powers are not supported")
        result = LElem.one(self.poly)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        return isinstance(other, LElem) and self.poly == other.poly and np.array_equal(
            self.coords % self.poly.ring.modulus, other.coords % self.poly.ring.modulus
        )

    def vL(self) -> int | None:
        """pi-adic valuation, or None when the element is 0 at this precision."""
        return _vL_coords(self.poly, self.coords)


def _vL_coords(poly: EisensteinPoly, coords: np.ndarray) -> int | None:
    R = poly.ring
    v = R.valuation_arr(coords)
    best = None
    for j, vj in enumerate(v.tolist()):
        if vj < R.N:
            cand = poly.n * vj + j
            if best is None or cand < best:
                best = cand
    return best


# -- truncation -------------------------------------------------------------

def truncation_levels(n: int, p: int) -> tuple[int, int]:
    """(level for f_i with i < n, level for f_n)."""
    if n == p * p:
        return 3, 4
    if n == p**3:
        return 4, 5
    raise ValueError("canonical truncation is defined for degree p^2 or p^3")


def canonical_truncate(f: EisensteinPoly) -> EisensteinPoly:
    """Reduce f_i mod p^3 (i < n) and f_n mod p^4; p^4 / p^5 for degree p^3."""
    lo, hi = truncation_levels(f.n, f.p)
    R = f.ring
    out = []
    for i, c in enumerate(f.coeffs, start=1):
        m = R.p ** (hi if i == f.n else lo)
        out.append(R(tuple(x % m for x in c.coeffs)))
    return EisensteinPoly(R, tuple(out), f.check)


# -- determinants over the local ring O_K / p^N -------------------------------

def det_local(R: UnramRing, M: np.ndarray) -> QElem:
    """Determinant of an (n, n, f) matrix over O_K/p^N.

    Gaussian elimination with a pivot of minimal valuation at every step.
    Every entry of the remaining block is divisible by the pivot's power
    of p, so the elimination multipliers are exact and the result is
    correct mod p^N.
    """
    A = np.array(M, dtype=np.int64) % R.modulus
    n = A.shape[0]
    P = R.modulus
    det = np.zeros(R.f, dtype=np.int64)
    det[0] = 1
    sign = 1
    for k in range(n):
        sub = A[k:, k:]
        if R.valuation_arr(A[k, k][None])[0] == 0:
            i, j = 0, 0
        else:
            vals = R.valuation_arr(sub)
            i, j = np.unravel_index(np.argmin(vals), vals.shape)
            if vals[i, j] >= R.N:
                return R.zero()
        if i:
            A[[k, k + i]] = A[[k + i, k]]
            sign = -sign
        if j:
            A[:, [k, k + j]] = A[:, [k + j, k]]
            sign = -sign
        piv = A[k, k]
        det = R.mul_arr(det, piv)
        if k == n - 1:
            break
        v = int(R.valuation_arr(piv[None])[0])
        pv = R.p**v
        unit_inv = R.inv_arr((piv // pv)[None])[0]
        # multipliers: A[r, k] / piv; A[r, k] is divisible by p^v
        mult = R.mul_arr(A[k + 1 :, k] // pv, unit_inv)
        A[k + 1 :, k + 1 :] = (
            A[k + 1 :, k + 1 :] - R.mul_arr(mult[:, None, :], A[k, k + 1 :][None, :, :])
        ) % P
        A[k + 1 :, k] = 0
    if sign < 0:
        det = (-det) % P
    return R.from_array(det)


def _det_unit_diag_batch(R: UnramRing, M: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Batched elimination without pivoting; shape (B, n, n, f).

    Returns (determinants, ok) where ok[b] is False if some diagonal pivot
    of matrix b was not a unit (those need :func:`det_local`).
    """
    A = np.array(M, dtype=np.int64) % R.modulus
    B, n = A.shape[0], A.shape[1]
    P = R.modulus
    det = np.zeros((B, R.f), dtype=np.int64)
    det[:, 0] = 1
    ok = np.ones(B, dtype=bool)
    for k in range(n):
        piv = A[:, k, k]
        unit = (piv % R.p != 0).any(axis=-1)
        ok &= unit
        piv_safe = np.where(unit[:, None], piv, np.eye(1, R.f, 0, dtype=np.int64))
        det = R.mul_arr(det, piv)
        if k == n - 1:
            break
        inv = R.inv_arr(piv_safe)
        mult = R.mul_arr(A[:, k + 1 :, k], inv[:, None, :])
        A[:, k + 1 :, k + 1 :] = (
            A[:, k + 1 :, k + 1 :]
            - R.mul_arr(mult[:, :, None, :], A[:, k, k + 1 :][:, None, :, :])
        ) % P
    return det, ok


def norm_from_L(f: EisensteinPoly, x: LElem | np.ndarray) -> QElem:
    coords = x.coords if isinstance(x, LElem) else np.asarray(x)
    M = LElem(f, coords).mult_matrix()
    return det_local(f.ring, M)


def _one_minus_matrices(f: EisensteinPoly, pairs: Sequence[tuple[np.ndarray, int]]) -> np.ndarray:
    R = f.ring
    n = f.n
    mats = []
    eye = np.zeros((n, n, R.f), dtype=np.int64)
    eye[np.arange(n), np.arange(n), 0] = 1
    for t, ell in pairs:
        cols = f.pi_powers(ell, ell + n)  # (n, n, f): column j is pi^{ell+j}
        M = (eye - R.mul_arr(np.transpose(cols, (1, 0, 2)), t)) % R.modulus
        mats.append(M)
    return np.stack(mats)


def norm_one_minus_pairs(
    f: EisensteinPoly, pairs: Sequence[tuple[QElem, int]], chunk: int = 64
) -> np.ndarray:
    """N_{L/K}(1 - a pi^ell) for (a, ell) pairs; returns shape (len(pairs), f)."""
    R = f.ring
    pairs = [(a.array(), int(ell)) for a, ell in pairs]
    if any(e < 1 for _, e in pairs):
        raise ValueError("ell must be positive")
    out = np.zeros((len(pairs), R.f), dtype=np.int64)
    for start in range(0, len(pairs), chunk):
        part = pairs[start : start + chunk]
        mats = _one_minus_matrices(f, part)
        det, ok = _det_unit_diag_batch(R, mats)
        for b in np.nonzero(~ok)[0]:  # pragma: no cover - pivots are units mod p
            det[b] = det_local(R, mats[b]).array()
        out[start : start + len(part)] = det
    return out


def norm_one_minus_batch(
    f: EisensteinPoly, theta: QElem, ells: Sequence[int], chunk: int = 64
) -> np.ndarray:
    """N_{L/K}(1 - theta pi^ell) for several ell; returns shape (len(ells), f)."""
    return norm_one_minus_pairs(f, [(theta, e) for e in ells], chunk)


def norm_one_minus(f: EisensteinPoly, theta: QElem, ell: int) -> QElem:
    """N_{L/K}(1 - theta pi^ell)."""
    return f.ring.from_array(norm_one_minus_batch(f, theta, [ell])[0])


# -- reversal and evaluation ---------------------------------------------------

def reverse_poly(a: Sequence[QElem]) -> list[QElem]:
    """X^d a(1/X) for a given by ascending coefficients."""
    return list(reversed(list(a)))


def eval_poly(a: Sequence[QElem], x: QElem) -> QElem:
    """Evaluate ascending coefficients at x (Horner)."""
    acc = x.ring.zero()
    for c in reversed(list(a)):
        acc = acc * x + c
    return acc


def ascending_coeffs(f: EisensteinPoly) -> list[QElem]:
    """Coefficients of f from X^0 up to X^n."""
    return [f[f.n - i] for i in range(f.n + 1)]


# -- ramification polygon --------------------------------------------------------

@dataclass(frozen=True)
class RamificationData:
    """Newton polygon of f(X + pi)/X.

    ``segments`` lists (root valuation, count): ``count`` roots sigma(pi)-pi
    with v_L equal to the valuation.  ``points`` are (k, v_L(a_k)) for the
    coefficients a_k of X^k in f(X + pi), k = 1..n.
    """

    n: int
    points: tuple[tuple[int, int | None], ...]
    segments: tuple[tuple[Fraction, int], ...]

    @property
    def lower_breaks(self) -> tuple[Fraction, ...]:
        return tuple(sorted({s - 1 for s, _ in self.segments}))

    @property
    def different_valuation(self) -> int:
        return self.points[0][1]


def _lower_hull(pts: list[tuple[int, int]]) -> list[tuple[int, int]]:
    hull: list[tuple[int, int]] = []
    for pt in sorted(pts):
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop hull[-1] if it lies on or above the segment hull[-2] -> pt
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    return hull


def ramification_data(f: EisensteinPoly) -> RamificationData:
    """Lower-convex-hull data of the ramification polynomial f(X + pi)."""
    n, R = f.n, f.ring
    asc = ascending_coeffs(f)
    asc_arr = qelems_to_arr(asc, R.f)
    points: list[tuple[int, int | None]] = []
    for k in range(1, n + 1):
        # coefficient of X^k: sum_i binom(i, k) c_i pi^{i-k}; pi^{i-k} is a basis vector
        coords = np.zeros((n, R.f), dtype=np.int64)
        for j in range(0, n - k + 1):
            coords[j] = (comb(j + k, k) % R.modulus) * asc_arr[j + k] % R.modulus
        points.append((k, _vL_coords(f, coords)))
    known = [(k - 1, v) for k, v in points if v is not None]
    hull = _lower_hull(known)
    # an unknown point (v >= nN) must lie strictly above the hull
    for k, v in points:
        if v is None:
            x = k - 1
            for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
                if x1 <= x <= x2:
                    line = Fraction(y1) + Fraction(y2 - y1, x2 - x1) * (x - x1)
                    if line >= n * R.N:
                        raise PrecisionError(
                            f"coefficient of X^{k} in f(X+pi) is not determined at precision {R.N}"
                        )
    segments = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        segments.append((Fraction(y1 - y2, x2 - x1), x2 - x1))
    return RamificationData(n, tuple(points), tuple(segments))


def lower_breaks(f: EisensteinPoly) -> tuple[Fraction, ...]:
    return ramification_data(f).lower_breaks


# -- Artin-Hasse type products ----------------------------------------------------

def _padic_int_rep(num: int, den: int, p: int, digits: int) -> int:
    """Non-negative integer congruent to num/den mod p^digits (den prime to p)."""
    m = p**digits
    return num * pow(den, -1, m) % m


def _binomial_power(f: EisensteinPoly, z: np.ndarray, exponent: tuple[int, int], vz: int) -> np.ndarray:
    """(1 - z)^{num/den} in O_L via the binomial series; v_L(z) >= vz >= 1."""
    R, n = f.ring, f.n
    num, den = exponent
    target = n * R.N  # pi-adic precision of O_L elements
    jmax = target // vz + 1
    digits = R.N + jmax // (R.p - 1) + 2
    A = _padic_int_rep(num, den, R.p, digits)
    if A < jmax:
        A += R.p**digits
    P = R.modulus
    acc = LElem.one(f).coords.copy()
    power = LElem.one(f)
    mz = LElem(f, (-z) % P)
    for j in range(1, jmax + 1):
        power = power * mz
        if not power.coords.any():
            break
        c = comb(A, j) % P
        acc = (acc + c * power.coords) % P
    return acc


def artin_hasse_norm(f: EisensteinPoly, theta: QElem, ell: int, scaled: bool = True) -> QElem:
    """N_{L/K} of prod_{(k,p)=1} (1 - theta^k pi^{k ell} / ell)^{mu(k)/k}.

    Uses multiplicativity: each factor's norm is a determinant, and the
    p-adic exponent mu(k)/k is applied to that principal unit in K.  With
    ``scaled=False`` the unit is prod (1 - theta^k pi^{k ell})^{mu(k)/(k ell)}
    instead, which agrees to first order but keeps the levels k ell apart
    beyond it.
    """
    return artin_hasse_norms(f, [(theta, ell)], scaled)[0]


def artin_hasse_norms(
    f: EisensteinPoly, items: Sequence[tuple[QElem, int]], scaled: bool = True
) -> list[QElem]:
    """artin_hasse_norm for several (theta, ell) with one batched determinant pass."""
    R, n, p = f.ring, f.n, f.p
    pairs, plan = [], []
    for theta, ell in items:
        if ell < 1:
            raise ValueError("ell must be positive")
        if ell % p == 0:
            raise ValueError("ell must be prime to p")
        inv_ell = R(pow(ell, -1, R.modulus))
        # factors with k ell > n (N - 1) have norm in U_N
        ks = [k for k in range(1, n * (R.N - 1) // ell + 1) if k % p and mobius(k)]
        exps = []
        for k in ks:
            a = theta**k * inv_ell if scaled else theta**k
            pairs.append((a, k * ell))
            exps.append(_padic_int_rep(mobius(k), k if scaled else k * ell, p, R.N))
        plan.append(exps)
    norms = norm_one_minus_pairs(f, pairs) if pairs else np.zeros((0, R.f), dtype=np.int64)
    out, pos = [], 0
    for exps in plan:
        acc = R.one()
        for e in exps:
            acc = acc * R.from_array(norms[pos]) ** e
            pos += 1
        out.append(acc)
    return out


def artin_hasse_norm_series(f: EisensteinPoly, theta: QElem, ell: int) -> QElem:
    """Same norm as artin_hasse_norm, with the product expanded in L first."""
    R, n, p = f.ring, f.n, f.p
    if ell % p == 0:
        raise ValueError("ell must be prime to p")
    if ell < 1:
        raise ValueError("ell must be positive")
    inv_ell = pow(ell, -1, R.modulus)
    prod = LElem.one(f)
    k = 1
    while k * ell < n * R.N:
        if k % p and mobius(k):
            z = LElem.pi(f, k * ell).scale(theta ** k).coords
            z = (z * inv_ell) % R.modulus
            factor = _binomial_power(f, z, (mobius(k), k), k * ell)
            prod = prod * LElem(f, factor)
        k += 1
    return norm_from_L(f, prod)
