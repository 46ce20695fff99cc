"""Sums of roots of unity over tuples of distinct indices.

Sigma_lambda(ell) = sum over distinct (i_1..i_r) in [0, ell) of
zeta^{i_1 l_1 + ... + i_r l_r}.  Two evaluators: a brute force one in
Z[x]/Phi_ell and a closed formula over set partitions.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, permutations
from math import factorial
from typing import Iterator, Sequence

import numpy as np

__all__ = [
    "Partition",
    "CycInt",
    "cyclotomic_poly",
    "sigma_direct",
    "sigma_formula",
    "set_partitions",
    "delta",
    "connected_signed_count",
]


@dataclass(frozen=True)
class Partition:
    """A tuple of positive integers kept in weakly decreasing order."""

    parts: tuple[int, ...]

    def __post_init__(self):
        parts = tuple(sorted((int(x) for x in self.parts), reverse=True))
        if not parts:
            raise ValueError("a partition needs at least one part")
        if parts[-1] <= 0:
            raise ValueError("parts must be positive")
        object.__setattr__(self, "parts", parts)

    @classmethod
    def of(cls, *parts: int) -> "Partition":
        return cls(tuple(parts))

    @property
    def r(self) -> int:
        return len(self.parts)

    def __len__(self):
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def scaled(self, k: int) -> "Partition":
        return Partition(tuple(k * x for x in self.parts))

    def multiplicities(self) -> dict[int, int]:
        m: dict[int, int] = {}
        for x in self.parts:
            m[x] = m.get(x, 0) + 1
        return m


@lru_cache(maxsize=None)
def cyclotomic_poly(ell: int) -> tuple[int, ...]:
    """Phi_ell, ascending integer coefficients."""
    if ell < 1:
        raise ValueError("ell must be positive")
    # x^ell - 1 divided by Phi_d for every proper divisor d
    num = [-1] + [0] * (ell - 1) + [1]
    for d in range(1, ell):
        if ell % d == 0:
            num = _exact_divide(num, list(cyclotomic_poly(d)))
    return tuple(num)


def _exact_divide(a: list[int], b: list[int]) -> list[int]:
    a = list(a)
    q = [0] * (len(a) - len(b) + 1)
    for i in range(len(q) - 1, -1, -1):
        c = a[i + len(b) - 1] // b[-1]
        q[i] = c
        for j, bj in enumerate(b):
            a[i + j] -= c * bj
    if any(a):
        raise ArithmeticError("inexact polynomial division")
    return q


@dataclass(frozen=True)
class CycInt:
    """An element of Z[zeta_ell] as a residue mod Phi_ell."""

    ell: int
    coeffs: tuple[int, ...]

    @classmethod
    def zeta_power(cls, ell: int, k: int) -> "CycInt":
        return cls.from_dense(ell, _zeta_table(ell)[k % ell])

    @classmethod
    def from_dense(cls, ell: int, v) -> "CycInt":
        return cls(ell, tuple(int(x) for x in v))

    def __add__(self, other: "CycInt") -> "CycInt":
        return CycInt(self.ell, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def __int__(self):
        if not self.is_rational():
            raise ArithmeticError(f"{self} is not a rational integer")
        return self.coeffs[0]


@lru_cache(maxsize=None)
def _zeta_table(ell: int) -> np.ndarray:
    """Row k holds x^k reduced mod Phi_ell, k in [0, ell)."""
    phi = cyclotomic_poly(ell)
    d = len(phi) - 1
    rows = np.zeros((ell, d), dtype=np.int64)
    cur = [0] * d
    cur[0] = 1
    for k in range(ell):
        rows[k] = cur
        # multiply by x, reduce the x^d term using monic Phi
        top = cur[-1]
        cur = [0] + cur[:-1]
        for i in range(d):
            cur[i] -= top * phi[i]
    return rows


def sigma_direct(lam: Partition | Sequence[int], ell: int) -> int:
    """Brute-force Sigma_lambda(ell) in Z[x]/Phi_ell."""
    parts = list(lam.parts if isinstance(lam, Partition) else lam)
    if ell < 1:
        raise ValueError("ell must be positive")
    r = len(parts)
    table = _zeta_table(ell)
    if r > ell:
        return 0
    idx = np.array(list(permutations(range(ell), r)), dtype=np.int64).reshape(-1, r)
    exps = (idx @ np.array(parts, dtype=np.int64)) % ell
    counts = np.bincount(exps, minlength=ell)
    total = CycInt.from_dense(ell, counts @ table)
    return int(total)


def set_partitions(r: int) -> Iterator[list[list[int]]]:
    """Set partitions of range(r), via restricted growth strings."""
    if r == 0:
        yield []
        return
    a = [0] * r

    def rec(i: int, m: int):
        if i == r:
            blocks: list[list[int]] = [[] for _ in range(m + 1)]
            for j, b in enumerate(a):
                blocks[b].append(j)
            yield blocks
            return
        for b in range(m + 2):
            a[i] = b
            yield from rec(i + 1, max(m, b))

    a[0] = 0
    yield from rec(1, 0)


def sigma_formula(lam: Partition | Sequence[int], ell: int) -> int:
    """Sigma_lambda(ell) from the set-partition expansion.

    Sum over set partitions of the index set whose blocks all have
    lambda-sum divisible by ell of ell^{#blocks} * prod (-1)^{s-1} (s-1)!.
    """
    parts = list(lam.parts if isinstance(lam, Partition) else lam)
    if ell < 1:
        raise ValueError("ell must be positive")
    total = 0
    for blocks in set_partitions(len(parts)):
        if all(sum(parts[i] for i in b) % ell == 0 for b in blocks):
            term = ell ** len(blocks)
            for b in blocks:
                s = len(b)
                term *= (-1) ** (s - 1) * factorial(s - 1)
            total += term
    return total


def delta(ell: int, k: int, m: int = 1) -> int:
    """ell if ell >= m and ell | k, else 0."""
    return ell if ell >= m and k % ell == 0 else 0


def connected_signed_count(v: int) -> int:
    """Sum of (-1)^{#edges} over connected labelled graphs on v vertices."""
    if v < 1:
        raise ValueError("need at least one vertex")
    edges = list(combinations(range(v), 2))
    total = 0
    for mask in range(1 << len(edges)):
        chosen = [e for i, e in enumerate(edges) if mask >> i & 1]
        if _connected(v, chosen):
            total += (-1) ** len(chosen)
    return total


def _connected(v: int, edges: list[tuple[int, int]]) -> bool:
    parent = list(range(v))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in edges:
        parent[find(a)] = find(b)
    return len({find(x) for x in range(v)}) == 1
