"""Arithmetic in the residue field F_{p^f}.

Elements are stored as tuples of ``f`` integers in ``[0, p)``, the
coefficients (ascending) of a polynomial in the field generator modulo
the defining modulus.  Multiplication goes through discrete log tables,
which is fine at the sizes this package works with (q up to a few
thousand).
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import cached_property
from itertools import product
from math import gcd
from typing import Iterable, Iterator, Mapping

import numpy as np

__all__ = [
    "CONWAY",
    "ResidueField",
    "FFElem",
    "LinearizedPoly",
    "LinearizedSolution",
    "ff_arith",
    "frobenius_pow",
    "is_dth_power",
    "solve_linearized",
]

# Conway polynomials, ascending coefficients, monic.
CONWAY: dict[tuple[int, int], tuple[int, ...]] = {
    (3, 1): (1, 1),
    (3, 2): (2, 2, 1),
    (3, 3): (1, 2, 0, 1),
    (5, 1): (3, 1),
    (5, 2): (2, 4, 1),
    (5, 3): (3, 3, 0, 1),
    (7, 1): (4, 1),
    (7, 2): (3, 6, 1),
    (7, 3): (4, 0, 6, 1),
}


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


# -- dense polynomials over F_p (lists, ascending) -------------------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a: list[int], m: list[int], p: int) -> list[int]:
    a = _trim([x % p for x in a])
    m = _trim(list(m))
    inv = pow(m[-1], -1, p)
    while len(a) >= len(m):
        c = a[-1] * inv % p
        shift = len(a) - len(m)
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
        _trim(a)
    return a


def _pmul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return out


def _pgcd(a: list[int], b: list[int], p: int) -> list[int]:
    a = _trim([x % p for x in a])
    b = _trim([x % p for x in b])
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def _xpow_mod(e: int, m: list[int], p: int) -> list[int]:
    result = [1]
    base = _pmod([0, 1], m, p)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, base, p), m, p)
        base = _pmod(_pmul(base, base, p), m, p)
        e >>= 1
    return result


def _check_irreducible(modulus: tuple[int, ...], p: int) -> bool:
    m = list(modulus)
    f = len(m) - 1
    if f == 1:
        return True
    # X^{p^f} = X mod m, and gcd(X^{p^i} - X, m) = 1 for 0 < i < f
    if _trim(_sub_x(_xpow_mod(p**f, m, p), p)) != []:
        return False
    for i in range(1, f):
        if len(_pgcd(m, _sub_x(_xpow_mod(p**i, m, p), p), p)) > 1:
            return False
    return True


def _sub_x(a: list[int], p: int) -> list[int]:
    a = list(a) + [0] * max(0, 2 - len(a))
    a[1] = (a[1] - 1) % p
    return _trim(a)


@dataclass(frozen=True, eq=False)
class ResidueField:
    """The finite field F_{p^f} = F_p[y]/(modulus).

    ``modulus`` is monic, ascending, of length f+1.  When omitted the
    Conway polynomial is used for the tabulated (p, f); otherwise a
    deterministic search picks the lexicographically first irreducible.
    """

    p: int
    f: int = 1
    modulus: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.p < 3 or not _is_prime(self.p):
            raise ValueError(f"p must be an odd prime, got {self.p}")
        if self.f < 1:
            raise ValueError("residue degree must be positive")
        mod = self.modulus
        if mod is None:
            mod = CONWAY.get((self.p, self.f)) or _first_irreducible(self.p, self.f)
        mod = tuple(int(c) % self.p for c in mod)
        if len(mod) != self.f + 1 or mod[-1] != 1:
            raise ValueError("modulus must be monic of degree f")
        if not _check_irreducible(mod, self.p):
            raise ValueError(f"modulus {mod} is reducible over F_{self.p}")
        object.__setattr__(self, "modulus", mod)

    def __eq__(self, other):
        return (
            isinstance(other, ResidueField)
            and (self.p, self.f, self.modulus) == (other.p, other.f, other.modulus)
        )

    def __hash__(self):
        return hash((self.p, self.f, self.modulus))

    def __repr__(self):
        return f"ResidueField(p={self.p}, f={self.f}, modulus={self.modulus})"

    @property
    def q(self) -> int:
        return self.p**self.f

    # -- element construction ------------------------------------------

    def __call__(self, value: int | Iterable[int] | "FFElem") -> "FFElem":
        if isinstance(value, FFElem):
            if value.field != self:
                raise ValueError("element belongs to a different field")
            return value
        if isinstance(value, (int, np.integer)):
            coeffs = (int(value) % self.p,) + (0,) * (self.f - 1)
        else:
            coeffs = tuple(int(c) % self.p for c in value)
            if len(coeffs) != self.f:
                raise ValueError(f"expected {self.f} coordinates, got {len(coeffs)}")
        return FFElem(self, coeffs)

    def zero(self) -> "FFElem":
        return self(0)

    def one(self) -> "FFElem":
        return self(1)

    def gen(self) -> "FFElem":
        """The class of the polynomial generator y."""
        if self.f == 1:
            return self(-self.modulus[0])
        return self((0, 1) + (0,) * (self.f - 2))

    def from_index(self, k: int) -> "FFElem":
        digits = []
        for _ in range(self.f):
            k, r = divmod(k, self.p)
            digits.append(r)
        return FFElem(self, tuple(digits))

    def elements(self) -> Iterator["FFElem"]:
        """All q elements in lexicographic coefficient order."""
        for c in product(range(self.p), repeat=self.f):
            yield FFElem(self, c)

    def nonzero(self) -> Iterator["FFElem"]:
        for x in self.elements():
            if x:
                yield x

    def random(self, rng: np.random.Generator, nonzero: bool = False) -> "FFElem":
        while True:
            x = self.from_index(int(rng.integers(self.q)))
            if x or not nonzero:
                return x

    # -- log tables ----------------------------------------------------

    @cached_property
    def _tables(self) -> tuple[np.ndarray, np.ndarray]:
        q = self.q
        for k in range(1, q):
            g = self._index_to_coeffs(k)
            exp = np.zeros(q - 1, dtype=np.int64)
            log = np.full(q, -1, dtype=np.int64)
            cur = [1] + [0] * (self.f - 1)
            ok = True
            for e in range(q - 1):
                idx = self._coeffs_to_index(cur)
                if log[idx] != -1:
                    ok = False
                    break
                exp[e] = idx
                log[idx] = e
                cur = self._raw_mul(cur, g)
            if ok:
                return exp, log
        raise AssertionError("no primitive element found")  # pragma: no cover

    def _index_to_coeffs(self, k: int) -> list[int]:
        out = []
        for _ in range(self.f):
            k, r = divmod(k, self.p)
            out.append(r)
        return out

    def _coeffs_to_index(self, c: Iterable[int]) -> int:
        k = 0
        for x in reversed(list(c)):
            k = k * self.p + x
        return k

    def _raw_mul(self, a, b) -> list[int]:
        prod = _pmod(_pmul(list(a), list(b), self.p), list(self.modulus), self.p)
        return prod + [0] * (self.f - len(prod))

    # -- arithmetic on coefficient tuples --------------------------------

    def _log(self, x: "FFElem") -> int:
        return int(self._tables[1][x.index])

    def _exp(self, e: int) -> "FFElem":
        return self.from_index(int(self._tables[0][e % (self.q - 1)]))

    def add(self, a: "FFElem", b: "FFElem") -> "FFElem":
        return FFElem(self, tuple((x + y) % self.p for x, y in zip(a.coeffs, b.coeffs)))

    def sub(self, a: "FFElem", b: "FFElem") -> "FFElem":
        return FFElem(self, tuple((x - y) % self.p for x, y in zip(a.coeffs, b.coeffs)))

    def neg(self, a: "FFElem") -> "FFElem":
        return FFElem(self, tuple(-x % self.p for x in a.coeffs))

    def mul(self, a: "FFElem", b: "FFElem") -> "FFElem":
        if not a or not b:
            return self.zero()
        return self._exp(self._log(a) + self._log(b))

    def inv(self, a: "FFElem") -> "FFElem":
        if not a:
            raise ZeroDivisionError("inverse of zero in residue field")
        return self._exp(-self._log(a))

    def div(self, a: "FFElem", b: "FFElem") -> "FFElem":
        return self.mul(a, self.inv(b))

    def pow(self, a: "FFElem", e: int) -> "FFElem":
        if not a:
            if e < 0:
                raise ZeroDivisionError("negative power of zero")
            return self.one() if e == 0 else self.zero()
        return self._exp(self._log(a) * e)


@dataclass(frozen=True)
class FFElem:
    """Element of a :class:`ResidueField`."""

    field: ResidueField = dc_field(repr=False, compare=True)
    coeffs: tuple[int, ...]

    @property
    def index(self) -> int:
        return self.field._coeffs_to_index(self.coeffs)

    def __bool__(self):
        return any(self.coeffs)

    def _coerce(self, other) -> "FFElem":
        if isinstance(other, FFElem):
            return other
        if isinstance(other, (int, np.integer)):
            return self.field(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self.field.add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self.field.sub(self, other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self.field.sub(other, self)

    def __neg__(self):
        return self.field.neg(self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self.field.mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self.field.div(self, other)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self.field.div(other, self)

    def __pow__(self, e: int):
        return self.field.pow(self, e)

    def frob(self, k: int = 1) -> "FFElem":
        """x -> x^{p^k}; negative k gives the inverse automorphism."""
        return frobenius_pow(self, k)

    def root_p(self, k: int = 1) -> "FFElem":
        """The unique y with y^{p^k} = x."""
        return frobenius_pow(self, k, inverse=True)

    def __repr__(self):
        if self.field.f == 1:
            return f"FF({self.coeffs[0]})"
        return f"FF{self.coeffs}"


def _first_irreducible(p: int, f: int) -> tuple[int, ...]:
    for tail in product(range(p), repeat=f):
        mod = tuple(tail) + (1,)
        if mod[0] != 0 and _check_irreducible(mod, p):
            return mod
    raise AssertionError("unreachable")  # pragma: no cover


# -- operations --------------------------------------------------------------

def ff_arith(a: FFElem, b: FFElem, op: str) -> FFElem:
    F = a.field
    ops = {"add": F.add, "sub": F.sub, "mul": F.mul, "div": F.div}
    if op not in ops:
        raise ValueError(f"unknown op {op!r}")
    return ops[op](a, b)


def frobenius_pow(x: FFElem, k: int, inverse: bool = False) -> FFElem:
    F = x.field
    e = (-k if inverse else k) % F.f
    return F.pow(x, F.p**e)


def is_dth_power(x: FFElem, d: int) -> tuple[bool, FFElem | None]:
    """Decide x in (F^x)^d; return the lexicographically first root as witness."""
    F = x.field
    if not x:
        raise ValueError("is_dth_power requires a nonzero element")
    if d <= 0:
        raise ValueError("d must be positive")
    q = F.q
    ok = F.pow(x, (q - 1) // gcd(d, q - 1)) == F.one()
    if not ok:
        return False, None
    for y in F.nonzero():
        if F.pow(y, d) == x:
            return True, y
    raise AssertionError("power test and enumeration disagree")  # pragma: no cover


def dth_roots(x: FFElem, d: int) -> list[FFElem]:
    """All y in F with y^d = x, in lexicographic order."""
    F = x.field
    return [y for y in F.elements() if F.pow(y, d) == x] if d > 0 else []


# -- linearized polynomials --------------------------------------------------

@dataclass(frozen=True)
class LinearizedPoly:
    """sum_i a_i Y^{p^i}; ``coeffs`` maps the exponent index i to a_i."""

    field: ResidueField = dc_field(repr=False)
    coeffs: Mapping[int, FFElem]

    def __post_init__(self):
        clean = {int(i): self.field(c) for i, c in dict(self.coeffs).items() if self.field(c)}
        if any(i < 0 or i > 3 for i in clean):
            raise ValueError("exponent index must lie in [0, 3]")
        object.__setattr__(self, "coeffs", dict(sorted(clean.items())))

    @classmethod
    def from_list(cls, F: ResidueField, coeffs: Iterable) -> "LinearizedPoly":
        """Build from [a_0, a_1, ...] (coefficients of Y, Y^p, Y^{p^2}, ...)."""
        return cls(F, {i: F(c) for i, c in enumerate(coeffs)})

    def __getitem__(self, i: int) -> FFElem:
        return self.coeffs.get(i, self.field.zero())

    @property
    def degree_index(self) -> int:
        return max(self.coeffs) if self.coeffs else -1

    def __bool__(self):
        return bool(self.coeffs)

    def __call__(self, x: FFElem) -> FFElem:
        acc = self.field.zero()
        for i, a in self.coeffs.items():
            acc = acc + a * x.frob(i)
        return acc

    def matrix(self) -> np.ndarray:
        """The F_p-linear map x -> A(x) on coordinates (column j = image of basis j)."""
        F = self.field
        cols = []
        for j in range(F.f):
            e = F(tuple(int(i == j) for i in range(F.f)))
            cols.append(self(e).coeffs)
        return np.array(cols, dtype=np.int64).T.reshape(F.f, F.f)

    def __repr__(self):
        terms = [f"{a!r}*Y^(p^{i})" for i, a in self.coeffs.items()]
        return " + ".join(terms) or "0"


@dataclass(frozen=True)
class LinearizedSolution:
    roots: tuple[FFElem, ...]
    kernel_dim: int
    splits: bool

    def __bool__(self):
        return bool(self.roots)

    def __len__(self):
        return len(self.roots)


def _solve_mod_p(M: np.ndarray, b: np.ndarray, p: int):
    """Row-reduce [M | b] over F_p; return (particular solution or None, kernel basis)."""
    rows, cols = M.shape
    A = np.concatenate([M % p, (b % p).reshape(-1, 1)], axis=1).astype(np.int64)
    pivots = []
    r = 0
    for c in range(cols):
        nz = [i for i in range(r, rows) if A[i, c] % p]
        if not nz:
            continue
        i = nz[0]
        A[[r, i]] = A[[i, r]]
        A[r] = A[r] * pow(int(A[r, c]), -1, p) % p
        for k in range(rows):
            if k != r and A[k, c]:
                A[k] = (A[k] - A[k, c] * A[r]) % p
        pivots.append(c)
        r += 1
        if r == rows:
            break
    if any(A[i, cols] % p for i in range(r, rows)):
        sol = None
    else:
        sol = np.zeros(cols, dtype=np.int64)
        for i, c in enumerate(pivots):
            sol[c] = A[i, cols]
    free = [c for c in range(cols) if c not in pivots]
    kernel = []
    for fc in free:
        v = np.zeros(cols, dtype=np.int64)
        v[fc] = 1
        for i, c in enumerate(pivots):
            v[c] = -A[i, fc] % p
        kernel.append(v)
    return sol, kernel


def solve_linearized(A: LinearizedPoly, c: FFElem) -> LinearizedSolution:
    """All x in F with A(x) = c, via the F_p-linear map on coordinates."""
    F = A.field
    p = F.p
    if not A:
        raise ValueError("solve_linearized needs a nonzero polynomial")
    M = A.matrix()
    sol, kernel = _solve_mod_p(M, np.array(c.coeffs, dtype=np.int64), p)
    k = len(kernel)
    if sol is None:
        roots: list[FFElem] = []
    else:
        roots = []
        for combo in product(range(p), repeat=k):
            v = sol.copy()
            for a, kv in zip(combo, kernel):
                v = (v + a * kv) % p
            roots.append(F(tuple(int(t) for t in v)))
        roots.sort(key=lambda x: x.coeffs)
    if len(roots) not in (0, p**k):
        raise AssertionError("affine solution set has wrong size")
    deg = p ** A.degree_index if A[0] else None
    # as an additive map A splits over F iff its kernel has p^(degree index) elements,
    # which needs A separable (nonzero linear term)
    splits = deg is not None and p**k == deg
    return LinearizedSolution(tuple(roots), k, splits)
ResidueFieldCtx = ResidueField
