"""Range containment between additive polynomials and the p-extension test."""
from __future__ import annotations

from dataclasses import dataclass

from .gf import FFElem, LinearizedPoly, ResidueField, is_dth_power, solve_linearized

__all__ = [
    "AdditivePreconditionError",
    "DegenerateAdditiveError",
    "RangeWitness",
    "range_contained",
    "image",
    "range_contained_exhaustive",
    "is_p_extension_splitting",
    "splitting_degree",
    "has_root",
]


class AdditivePreconditionError(ValueError):
    """A does not satisfy A'(0) != 0 with all roots in the residue field."""


class DegenerateAdditiveError(ValueError):
    """A leading coefficient that the formulas divide by is zero."""


@dataclass(frozen=True)
class RangeWitness:
    """T = A o (gamma Y^{p^2} + beta Y^p + alpha Y) when ``contained``."""

    contained: bool
    alpha: FFElem | None = None
    beta: FFElem | None = None
    gamma: FFElem | None = None

    def __bool__(self):
        return self.contained


def _check_base(A: LinearizedPoly):
    if A.degree_index > 1:
        raise AdditivePreconditionError("A must have the shape a_p Y^p + a_1 Y")
    if not A[0]:
        raise AdditivePreconditionError("A'(0) must be nonzero")
    if not A[1]:
        raise DegenerateAdditiveError("a_p = 0")
    if solve_linearized(A, A.field.zero()).kernel_dim != 1:
        raise AdditivePreconditionError("A must have all its p roots in the residue field")


def range_contained(A: LinearizedPoly, T: LinearizedPoly) -> RangeWitness:
    """Decide T(k) inside A(k) by the closed-form coefficient criteria."""
    _check_base(A)
    a1, ap = A[0], A[1]
    k = max(T.degree_index, 1)
    if k > 3:
        raise ValueError("T has degree index above 3")
    t1, tp, tp2, tp3 = T[0], T[1], T[2], T[3]
    alpha = t1 / a1
    if k == 1:
        ok = tp == ap * alpha.frob(1)
        return RangeWitness(True, alpha, A.field.zero(), A.field.zero()) if ok else RangeWitness(False)
    if k == 2:
        beta = (tp2 / ap).root_p(1)
        ok = tp == ap * alpha.frob(1) + a1 * beta
        if not ok:
            return RangeWitness(False)
        beta_alt = tp / a1 - (ap / a1) * alpha.frob(1)
        if beta_alt != beta:  # pragma: no cover - algebraically forced
            raise AssertionError("inconsistent C-case witness")
        return RangeWitness(True, alpha, beta, A.field.zero())
    gamma = (tp3 / ap).root_p(1)
    lhs = (a1 / ap) * gamma + (tp / a1).frob(1)
    rhs = tp2 / ap + (ap / a1).frob(1) * alpha.frob(2)
    if lhs != rhs:
        return RangeWitness(False)
    beta = tp / a1 - (ap / a1) * alpha.frob(1)
    return RangeWitness(True, alpha, beta, gamma)


def image(T: LinearizedPoly) -> set[tuple[int, ...]]:
    """The set T(k) by enumeration (coefficient tuples)."""
    return {T(x).coeffs for x in T.field.elements()}


def range_contained_exhaustive(A: LinearizedPoly, T: LinearizedPoly) -> bool:
    return image(T) <= image(A)


def has_root(A: LinearizedPoly, c: FFElem) -> bool:
    """Does A(x) = c have a solution in the field (A may be zero)."""
    if not A:
        return not c
    return bool(solve_linearized(A, c))


def is_p_extension_splitting(A: LinearizedPoly) -> bool:
    """Splitting field of Y^{p^2} + a Y^p + b Y is a p-extension of the field.

    True iff A has a nonzero root in the field and b is a (p-1)th power.
    """
    F = A.field
    if A.degree_index != 2 or A[2] != F.one():
        raise ValueError("A must be monic of degree p^2")
    b = A[0]
    if not b:
        raise DegenerateAdditiveError("b = 0: A is inseparable")
    sol = solve_linearized(A, F.zero())
    nonzero_root = sol.kernel_dim >= 1
    return nonzero_root and is_dth_power(b, F.p - 1)[0]


# -- brute-force splitting degree over F_q -----------------------------------

def _pm_trim(a: list[FFElem]) -> list[FFElem]:
    while a and not a[-1]:
        a.pop()
    return a


def _pm_mod(a: list[FFElem], m: list[FFElem]) -> list[FFElem]:
    a = list(a)
    inv = m[-1].field.one() / m[-1]
    while len(a) >= len(m):
        c = a[-1] * inv
        shift = len(a) - len(m)
        for i, mi in enumerate(m):
            a[shift + i] = a[shift + i] - c * mi
        a.pop()
        _pm_trim(a)
    return _pm_trim(a)


def _pm_mul(a: list[FFElem], b: list[FFElem], F: ResidueField) -> list[FFElem]:
    if not a or not b:
        return []
    out = [F.zero()] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return _pm_trim(out)


def _pm_gcd(a: list[FFElem], b: list[FFElem]) -> list[FFElem]:
    a, b = _pm_trim(list(a)), _pm_trim(list(b))
    while b:
        a, b = b, _pm_mod(a, b)
    return a


def _pm_pow_mod(base: list[FFElem], e: int, m: list[FFElem], F: ResidueField) -> list[FFElem]:
    result = [F.one()]
    base = _pm_mod(base, m)
    while e:
        if e & 1:
            result = _pm_mod(_pm_mul(result, base, F), m)
        base = _pm_mod(_pm_mul(base, base, F), m)
        e >>= 1
    return result


def splitting_degree(A: LinearizedPoly, kmax: int = 8) -> int | None:
    """Degree over the field of the splitting field of a separable additive A.

    Smallest k <= kmax with A | Y^{q^k} - Y, found by polynomial gcds over
    the base field; None if no such k.
    """
    F = A.field
    if not A[0]:
        raise DegenerateAdditiveError("A is inseparable")
    d = F.p ** A.degree_index
    poly = [F.zero()] * (d + 1)
    for i, a in A.coeffs.items():
        poly[F.p**i] = a
    lead = poly[-1]
    poly = [c / lead for c in poly]
    Y = [F.zero(), F.one()]
    cur = Y
    for k in range(1, kmax + 1):
        cur = _pm_pow_mod(cur, F.q, poly, F)
        diff = list(cur) + [F.zero()] * max(0, 2 - len(cur))
        diff[1] = diff[1] - F.one()
        g = _pm_gcd(poly, _pm_trim(diff))
        if len(g) - 1 == d:
            return k
    return None
