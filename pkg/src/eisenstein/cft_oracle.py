"""Norm-group oracle: the p-part of K^x / N(L^x) from first principles.

L/K is totally ramified of degree n = p^k and gcd(n, q-1) = 1, so

    K^x / N(L^x)  =  U_{1,K} / N(U_{1,L}),

because N(pi) is a uniformizer of K and the norm is onto the roots of
unity of order q-1.  Since U_{1,K}^{n} = U_{k+1,K} lies in the norm group,
the quotient can be read in U_{1,K}/U_{m,K} with m = k+1, which the
p-adic logarithm identifies with (Z/p^{m-1})^f.

N(U_{1,L}) mod U_m is generated by the norms of 1 - theta pi^ell for
ell <= n(m-1): an element 1 + x with v_L(x) = j has norm in U_{ceil(j/n)},
and U_ell/U_{ell+1} is spanned additively by any F_p-basis of the residue
field, so Teichmuller lifts of such a basis suffice.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .upoly import EisensteinPoly, norm_one_minus_batch
from .zq import PrecisionError, _int_valuation, _padic_log_arr, log_series_length

__all__ = [
    "NormGroupReport",
    "OracleVerdicts",
    "default_level",
    "required_precision",
    "norm_generators",
    "invariant_factors_mod",
    "norm_subgroup",
    "oracle_verdicts",
]


@dataclass(frozen=True)
class NormGroupReport:
    p: int
    n: int
    level: int
    generator_count: int
    invariant_factors: tuple[int, ...]
    theta_mode: str = dc_field(default="basis", compare=False)

    @property
    def quotient_order(self) -> int:
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out

    @property
    def max_abelian_degree(self) -> int:
        return self.quotient_order

    def is_cyclic_of(self, n: int) -> bool:
        return self.invariant_factors == (n,)

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "degree": self.n,
            "level": self.level,
            "generator_count": self.generator_count,
            "invariant_factors": [str(d) for d in self.invariant_factors],
            "quotient_order": str(self.quotient_order),
            "is_cyclic_of_degree": self.is_cyclic_of(self.n),
        }


def default_level(n: int, p: int) -> int:
    k = 0
    while p**k < n:
        k += 1
    if p**k != n:
        raise ValueError("degree must be a power of p")
    return k + 1


def required_precision(p: int, m: int) -> int:
    """Working precision needed to read logs mod p^m."""
    K = log_series_length(p, m)
    return m + max(_int_valuation(k, p, 64) for k in range(1, K + 1))


def _thetas(f: EisensteinPoly, mode: str):
    R = f.ring
    F = R.base
    if mode == "basis":
        res = [F(tuple(int(i == j) for i in range(F.f))) for j in range(F.f)]
    elif mode == "all":
        res = list(F.nonzero())
    else:
        raise ValueError(f"unknown theta mode {mode!r}")
    return [R.teichmuller(r) for r in res]


def norm_generators(
    f: EisensteinPoly, m: int, theta_mode: str = "basis", ell_max: int | None = None
) -> np.ndarray:
    """Norms N(1 - theta pi^ell) as an array (count, f) of O_K elements."""
    ell_max = f.n * (m - 1) if ell_max is None else ell_max
    ells = list(range(1, ell_max + 1))
    blocks = [norm_one_minus_batch(f, t, ells) for t in _thetas(f, theta_mode)]
    return np.concatenate(blocks, axis=0)


def invariant_factors_mod(rows: np.ndarray, p: int, M: int) -> tuple[int, ...]:
    """Invariant factors of (Z/p^M)^f modulo the span of ``rows``.

    Diagonalizes with a minimal-valuation pivot at every step; valid since
    Z/p^M is a local ring.  Returns the nontrivial factors in descending order.
    """
    P = p**M
    A = np.array(rows, dtype=object) % P
    if A.ndim != 2:
        raise ValueError("rows must be two-dimensional")
    nrows, ncols = A.shape
    exps = []

    def vp(x):
        x = int(x) % P
        if x == 0:
            return M
        v = 0
        while x % p == 0:
            x //= p
            v += 1
        return v

    r = 0
    for c in range(ncols):
        if r >= nrows:
            exps.append(M)
            continue
        best = None
        for i in range(r, nrows):
            for j in range(c, ncols):
                v = vp(A[i, j])
                if best is None or v < best[0]:
                    best = (v, i, j)
                    if v == 0:
                        break
            if best[0] == 0:
                break
        v, i, j = best
        if v >= M:
            exps.extend([M] * (ncols - c))
            break
        A[[r, i]] = A[[i, r]]
        A[:, [c, j]] = A[:, [j, c]]
        piv = int(A[r, c])
        unit_inv = pow(piv // p**v, -1, P)
        for k in range(nrows):
            if k != r and A[k, c] % P:
                mult = (int(A[k, c]) // p**v) * unit_inv % P
                A[k] = (A[k] - mult * A[r]) % P
        for k in range(ncols):
            if k != c and A[r, k] % P:
                mult = (int(A[r, k]) // p**v) * unit_inv % P
                A[:, k] = (A[:, k] - mult * A[:, c]) % P
        exps.append(v)
        r += 1
    return tuple(sorted((p**e for e in exps if e > 0), reverse=True))


def norm_subgroup(
    f: EisensteinPoly,
    m: int | None = None,
    theta_mode: str = "basis",
    ell_max: int | None = None,
    shuffle_seed: int | None = None,
) -> NormGroupReport:
    """Invariant factors of U_{1,K}/N(U_{1,L}) read at level m."""
    R = f.ring
    p = R.p
    m = default_level(f.n, p) if m is None else m
    if m < 2:
        raise ValueError("level must be at least 2")
    need = required_precision(p, m)
    if R.N < need:
        raise PrecisionError(f"level {m} needs precision {need}, ring has {R.N}")
    gens = norm_generators(f, m, theta_mode, ell_max)
    if shuffle_seed is not None:
        gens = gens[np.random.default_rng(shuffle_seed).permutation(len(gens))]
    logs = _padic_log_arr(R, gens, m)
    factors = invariant_factors_mod(logs, p, m - 1)
    return NormGroupReport(p, f.n, m, len(gens), factors, theta_mode)


@dataclass(frozen=True)
class OracleVerdicts:
    galois: bool
    cyclic: bool
    elementary_abelian: bool
    max_abelian_degree: int
    invariant_factors: tuple[int, ...]

    def to_json(self) -> dict:
        return {
            "galois": self.galois,
            "cyclic": self.cyclic,
            "elementary_abelian": self.elementary_abelian,
            "max_abelian_degree": str(self.max_abelian_degree),
            "invariant_factors": [str(d) for d in self.invariant_factors],
        }


def oracle_verdicts(f: EisensteinPoly, report: NormGroupReport | None = None) -> OracleVerdicts:
    """Galois / cyclic / elementary-abelian verdicts from the norm group.

    For degree p^2 every group of order p^2 is abelian, so L/K is Galois
    exactly when the quotient has order p^2.  For degree p^3 only the
    cyclic verdict is meaningful; ``galois`` then means abelian of order p^3.
    """
    rep = report if report is not None else norm_subgroup(f)
    n, p = f.n, f.p
    order = rep.quotient_order
    cyclic = rep.is_cyclic_of(n)
    elem = n == p * p and rep.invariant_factors == (p, p)
    return OracleVerdicts(order == n, cyclic, elem, order, rep.invariant_factors)
