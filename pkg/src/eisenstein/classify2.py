"""Degree p^2: the cyclicity criterion and the p-group classification."""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import numpy as np

from .additive import has_root, is_p_extension_splitting
from .gf import FFElem, LinearizedPoly, ResidueField, dth_roots, is_dth_power, solve_linearized
from .upoly import EisensteinPoly
from .zq import QElem, UnramRing, exact_div_p, reduce_to_residue

__all__ = [
    "ConditionResult",
    "Theo1Report",
    "ClassificationP2",
    "I",
    "bar",
    "check_cyclic_p2",
    "classify_p2",
    "detect_regime_p2",
    "gen_p2",
    "cond7_value",
    "level_value_p2",
    "GEN_TARGETS_P2",
]


def I(a: int, b: int, p: int) -> list[int]:
    """Integers in [a, b] prime to p."""
    return [i for i in range(a, b + 1) if i % p]


def bar(x: QElem, k: int) -> FFElem | None:
    """Residue of x / p^k, or None when v(x) < k."""
    if x.valuation() < k:
        return None
    return reduce_to_residue(exact_div_p(x, k))


@dataclass(frozen=True)
class ConditionResult:
    id: str
    passed: bool
    reason: str
    evaluated: bool = True

    def to_json(self) -> dict:
        return {"id": self.id, "passed": self.passed, "evaluated": self.evaluated, "reason": self.reason}


def _ff_json(x):
    if x is None:
        return None
    return [str(c) for c in x.coeffs]


@dataclass
class Theo1Report:
    p: int
    conditions: list[ConditionResult]
    F_p: FFElem | None = None
    F_p2: FFElem | None = None
    G: dict[int, FFElem] = dc_field(default_factory=dict)
    V_kernel_dim: int | None = None
    theta_bar: FFElem | None = None
    theta: QElem | None = None
    cond7_roots: tuple[FFElem, ...] = ()
    cond7_by_theta: dict[tuple, bool] = dc_field(default_factory=dict)

    @property
    def cyclic(self) -> bool:
        return all(c.passed for c in self.conditions)

    @property
    def first_failed(self) -> int | None:
        for c in self.conditions:
            if not c.passed:
                return int(c.id)
        return None

    def passed(self, cid: int | str) -> bool:
        return self.by_id(cid).passed

    def by_id(self, cid: int | str) -> ConditionResult:
        for c in self.conditions:
            if c.id == str(cid):
                return c
        raise KeyError(cid)

    @property
    def theta_independent(self) -> bool:
        return len(set(self.cond7_by_theta.values())) <= 1

    def to_json(self) -> dict:
        return {
            "kind": "cyclic_p2",
            "cyclic": self.cyclic,
            "first_failed": self.first_failed,
            "conditions": [c.to_json() for c in self.conditions],
            "F_p": _ff_json(self.F_p),
            "F_p2": _ff_json(self.F_p2),
            "G": {str(k): _ff_json(v) for k, v in sorted(self.G.items())},
            "V_kernel_dim": self.V_kernel_dim,
            "theta_bar": _ff_json(self.theta_bar),
            "cond7_roots": [_ff_json(r) for r in self.cond7_roots],
            "theta_independent": self.theta_independent,
        }


def _check_degree(f: EisensteinPoly) -> int:
    p = f.p
    if f.n != p * p:
        raise ValueError(f"expected degree p^2 = {p * p}, got {f.n}")
    if p == 2:  # pragma: no cover - the residue field rejects p = 2
        raise ValueError("p = 2 is not supported")
    return p


def profile_conditions_p2(f: EisensteinPoly) -> tuple[ConditionResult, ConditionResult]:
    p = _check_degree(f)
    n = f.n
    bad1 = []
    if f.v(p) != 1:
        bad1.append(f"v(f_{p}) = {f.v(p)} != 1")
    bad1 += [f"v(f_{p * i}) = {f.v(p * i)} < 2" for i in I(2, p - 1, p) if f.v(p * i) < 2]
    bad2 = [f"v(f_{i}) = {f.v(i)} < 2" for i in I(1, p - 1, p) if f.v(i) < 2]
    if f.v(p + 1) != 2:
        bad2.append(f"v(f_{p + 1}) = {f.v(p + 1)} != 2")
    bad2 += [f"v(f_{i}) = {f.v(i)} < 3" for i in I(p + 2, n - 1, p) if f.v(i) < 3]
    c1 = ConditionResult("1", not bad1, "; ".join(bad1) or "valuations of f_p and f_pi as required")
    c2 = ConditionResult("2", not bad2, "; ".join(bad2) or "valuations of prime-to-p coefficients as required")
    return c1, c2


def cond7_value(f: EisensteinPoly, theta_bar: FFElem, G1: FFElem) -> FFElem:
    """Residue of (f_{p^2} theta^{p^2} + f_p theta^p)/p^2 + G_1 theta_bar."""
    p = f.p
    R = f.ring
    t = R.teichmuller(theta_bar)
    s = f[p * p] * t ** (p * p) + f[p] * t**p
    return reduce_to_residue(exact_div_p(s, 2)) + G1 * theta_bar


def level_value_p2(f: EisensteinPoly, ell: int, theta: QElem) -> QElem:
    """c_ell(theta) mod p^3 for ell in [2, p+1] prime to p.

    1 + c_ell(theta) is the norm of the level-ell Artin-Hasse unit modulo
    p^3; its p^2 digit is the level polynomial A_ell at the residue of theta.
    """
    p = _check_degree(f)
    if ell not in I(2, p + 1, p):
        raise ValueError(f"ell must lie in [2, {p + 1}] and be prime to p")
    R = f.ring
    if ell == 2:
        half = R(pow(2, -1, R.modulus))
        return f[2] * theta + (f[2 * p] - half * f[p] ** 2) * theta**p - half * f[p * p] ** 2 * theta ** (p * p)
    if ell == p + 1:
        return f[p + 1] * theta - f[p] * f[p * p] * theta**p
    return f[ell] * theta + f[p * ell] * theta**p


def _skip(cid: str, why: str) -> ConditionResult:
    return ConditionResult(cid, False, f"not evaluated: {why}", evaluated=False)


def check_cyclic_p2(f: EisensteinPoly) -> Theo1Report:
    """Evaluate the seven coefficient conditions for a cyclic degree-p^2 extension."""
    p = _check_degree(f)
    n = f.n
    c1, c2 = profile_conditions_p2(f)
    conds = [c1, c2]
    Fp = bar(f[p], 1)
    Fp2 = bar(f[n], 1)
    G = {i: bar(f[i], 2) for i in range(1, n) if i != p}
    G = {i: g for i, g in G.items() if g is not None}
    rep = Theo1Report(p, conds, Fp, Fp2, G)
    K = Fp2.field
    if not Fp:
        why = "F_p = 0"
        conds += [_skip(str(i), why) for i in range(3, 8)]
        return rep
    A = LinearizedPoly(K, {0: Fp, 1: Fp2})
    rep.V_kernel_dim = solve_linearized(A, K.zero()).kernel_dim
    ratio = -Fp / Fp2
    ok3, _ = is_dth_power(ratio, p - 1)
    conds.append(ConditionResult("3", ok3, f"-F_p/F_p2 {'is' if ok3 else 'is not'} a (p-1)th power"))
    # 4
    Gp1 = G.get(p + 1)
    if Gp1 is None:
        conds.append(_skip("4", f"v(f_{p + 1}) < 2"))
    else:
        ok = Gp1**p == -(Fp ** (p + 1))
        conds.append(ConditionResult("4", ok, "G_{p+1}^p = -F_p^{p+1}" + ("" if ok else " fails")))
    # 5
    bad, missing = [], []
    for ell in I(3, p - 1, p):
        Gl, Gpl = G.get(ell), G.get(p * ell)
        if Gl is None or Gpl is None:
            missing.append(ell)
        elif Gpl != Fp2 * (Gl / Fp) ** p:
            bad.append(ell)
    if missing:
        conds.append(_skip("5", f"G undefined for ell in {missing}"))
    else:
        conds.append(ConditionResult("5", not bad, f"fails for ell in {bad}" if bad else "G_{p ell} = F_p2 (G_ell/F_p)^p for all ell"))
    # 6
    G2, G2p = G.get(2), G.get(2 * p)
    if G2 is None or G2p is None:
        conds.append(_skip("6", "G_2 or G_2p undefined"))
    else:
        half = K(pow(2, -1, p))
        rhs = Fp2 * (G2 / Fp) ** p + half * Fp * (Fp - Fp2.root_p(1))
        ok = G2p == rhs
        conds.append(ConditionResult("6", ok, "G_2p identity " + ("holds" if ok else "fails")))
    # 7
    G1 = G.get(1)
    roots = dth_roots(ratio, p * (p - 1))
    rep.cond7_roots = tuple(roots)
    if G1 is None:
        conds.append(_skip("7", "v(f_1) < 2"))
    elif not roots:
        conds.append(_skip("7", "no theta with theta^(p(p-1)) = -F_p/F_p2"))
    else:
        for tb in roots:
            rep.cond7_by_theta[tb.coeffs] = has_root(A, cond7_value(f, tb, G1))
        tb = roots[0]
        rep.theta_bar = tb
        rep.theta = f.ring.teichmuller(tb)
        ok = rep.cond7_by_theta[tb.coeffs]
        reason = "F_p2 X^p + F_p X = c_1 " + ("is solvable" if ok else "has no root")
        if not rep.theta_independent:
            reason += " (verdict depends on theta)"
        conds.append(ConditionResult("7", ok, reason))
    return rep


# -- classification -------------------------------------------------------------


@dataclass
class ClassificationP2:
    """Closure data for one polynomial.

    For module length l + 1 with an unramified part, upper_breaks_over_F is
    1, 2, ..., l - 1, p + 1.  An alternative reading gives 1, ..., m - 2, p + 1;
    the two differ by one index and the first is used here.
    """

    regime: str
    ell: int | None
    p_group_closure: bool
    galois: bool
    cyclic: bool
    elementary_abelian: bool
    module_length: int | None
    has_unramified_part: bool | None
    upper_breaks_over_F: list[int] | None
    split: str
    exponent: int | None
    predicted_max_abelian_degree: int
    expected_lower_breaks: tuple[Fraction, ...]
    theo1: Theo1Report | None = None
    notes: list[str] = dc_field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "kind": "classification_p2",
            "regime": self.regime if self.ell is None else f"{self.regime}({self.ell})",
            "p_group_closure": self.p_group_closure,
            "galois": self.galois,
            "cyclic": self.cyclic,
            "elementary_abelian": self.elementary_abelian,
            "module_length": self.module_length,
            "has_unramified_part": self.has_unramified_part,
            "upper_breaks_over_F": self.upper_breaks_over_F,
            "split": self.split,
            "exponent": None if self.exponent is None else str(self.exponent),
            "predicted_max_abelian_degree": str(self.predicted_max_abelian_degree),
            "notes": self.notes,
        }


def _ell_r(p: int, ell: int) -> int:
    return p * p - (p - 1) * ell + p


def detect_regime_p2(f: EisensteinPoly) -> tuple[str, int | None]:
    p = _check_degree(f)
    n = f.n
    v = f.v
    mult_ok = all(v(p * i) >= 2 for i in I(2, p - 1, p))
    if v(p) == 1 and mult_ok:
        for ell in list(range(2, p)) + [p + 1]:
            r = _ell_r(p, ell)
            if (
                all(v(i) >= 2 for i in I(1, r - 1, p))
                and v(r) == 2
                and all(v(i) >= 3 for i in I(r + 1, n - 1, p))
            ):
                return ("BreakPplus1", None) if ell == p + 1 else ("BreakEll", ell)
    if mult_ok and v(1) == 1 and all(v(i) >= 2 for i in I(2, n - 1, p)):
        return "Break1", None
    return "Unclassified", None


def _root_p_power(x: FFElem, num: int, p: int) -> FFElem:
    """x^{num/p}."""
    return (x**num).root_p(1)


def classify_p2(f: EisensteinPoly) -> ClassificationP2:
    """Galois-closure classification for the valuation regimes covered by the theory."""
    p = _check_degree(f)
    n = f.n
    regime, ell = detect_regime_p2(f)
    pp = p * p
    if regime == "BreakPplus1":
        rep = check_cyclic_p2(f)
        Fp, Fp2, G = rep.F_p, rep.F_p2, rep.G
        K = Fp2.field
        cond3 = rep.passed(3)
        closure = False
        if cond3:
            closure = is_dth_power(G[p + 1] / (Fp * Fp2), p - 1)[0]
        base = dict(
            regime=regime,
            ell=None,
            expected_lower_breaks=(Fraction(1), Fraction(p + 1)),
            theo1=rep,
            elementary_abelian=False,
        )
        if not closure:
            return ClassificationP2(
                p_group_closure=False, galois=False, cyclic=False, module_length=None,
                has_unramified_part=None, upper_breaks_over_F=None, split="not-applicable",
                exponent=None, predicted_max_abelian_degree=p if cond3 else 1, **base,
            )
        out = dict(p_group_closure=True, predicted_max_abelian_degree=p, **base)
        if not rep.passed(4):
            return ClassificationP2(
                galois=False, cyclic=False, module_length=p, has_unramified_part=False,
                upper_breaks_over_F=list(range(1, p)) + [p + 1], split="split", exponent=pp, **out,
            )
        ratio = -Fp / Fp2
        failed = None
        for l in sorted(I(3, p - 1, p), reverse=True):
            if G[p * l] != Fp2 * (G[l] / Fp) ** p:
                failed = l
                break
        if failed is None and not rep.passed(6):
            failed = 2
        if failed is not None:
            l = failed
            s = _root_p_power(ratio, l, p)
            U = LinearizedPoly(K, {0: Fp, 1: Fp2 * s})
            root = has_root(U, G[p * l] * s + G[l])
            m = l if root else l + 1
            return ClassificationP2(
                galois=False, cyclic=False, module_length=m, has_unramified_part=not root,
                upper_breaks_over_F=list(range(1, l)) + [p + 1],
                split="split" if m == p else "nonsplit", exponent=pp, **out,
            )
        if not rep.passed(7):
            return ClassificationP2(
                galois=False, cyclic=False, module_length=2, has_unramified_part=True,
                upper_breaks_over_F=[p + 1], split="split" if p == 2 else "nonsplit", exponent=pp, **out,
            )
        out["predicted_max_abelian_degree"] = pp
        return ClassificationP2(
            galois=True, cyclic=True, module_length=1, has_unramified_part=False,
            upper_breaks_over_F=[p + 1], split="nonsplit", exponent=pp, **out,
        )

    if regime == "BreakEll":
        r = _ell_r(p, ell)
        Fp, Fp2, Gr = bar(f[p], 1), bar(f[n], 1), bar(f[r], 2)
        K = Fp2.field
        ratio = -Fp / Fp2
        rho = is_dth_power(ratio, p - 1)[0]
        eta_val = K(ell) * Gr / (Fp * Fp2)
        eta = is_dth_power(eta_val, p - 1)[0]
        base = dict(
            regime=regime, ell=ell, cyclic=False, galois=False, elementary_abelian=False,
            expected_lower_breaks=(Fraction(1), Fraction(ell)),
            predicted_max_abelian_degree=p if rho else 1,
        )
        if not (rho and eta):
            return ClassificationP2(
                p_group_closure=False, module_length=None, has_unramified_part=None,
                upper_breaks_over_F=None, split="not-applicable", exponent=None, **base,
            )
        U = LinearizedPoly(K, {1: ratio**ell, 0: -eta_val})
        root = has_root(U, K.one())
        m = ell if root else ell + 1
        return ClassificationP2(
            p_group_closure=True, module_length=m, has_unramified_part=not root,
            upper_breaks_over_F=list(range(1, ell + 1)), split="split",
            exponent=pp if m == p else p, **base,
        )

    if regime == "Break1":
        F1, Fp, Fp2 = bar(f[1], 1), bar(f[p], 1), bar(f[n], 1)
        K = Fp2.field
        A = LinearizedPoly(K, {0: F1, 1: Fp, 2: Fp2})
        kdim = solve_linearized(A, K.zero()).kernel_dim
        monic = LinearizedPoly(K, {0: F1 / Fp2, 1: Fp / Fp2, 2: K.one()})
        closure = is_p_extension_splitting(monic)
        base = dict(
            regime=regime, ell=None, cyclic=False,
            expected_lower_breaks=(Fraction(1),), predicted_max_abelian_degree=p**kdim,
        )
        if not closure:
            return ClassificationP2(
                p_group_closure=False, galois=False, elementary_abelian=False, module_length=None,
                has_unramified_part=None, upper_breaks_over_F=None, split="not-applicable",
                exponent=None, **base,
            )
        if kdim == 2:
            return ClassificationP2(
                p_group_closure=True, galois=True, elementary_abelian=True, module_length=1,
                has_unramified_part=False, upper_breaks_over_F=[1], split="split", exponent=p, **base,
            )
        return ClassificationP2(
            p_group_closure=True, galois=False, elementary_abelian=False, module_length=2,
            has_unramified_part=True, upper_breaks_over_F=[1], split="split", exponent=p, **base,
        )

    return ClassificationP2(
        regime="Unclassified", ell=None, p_group_closure=False, galois=False, cyclic=False,
        elementary_abelian=False, module_length=None, has_unramified_part=None,
        upper_breaks_over_F=None, split="not-applicable", exponent=None,
        predicted_max_abelian_degree=0, expected_lower_breaks=(),
        notes=["valuation profile outside the covered regimes; no group is claimed"],
    )


# -- generators -------------------------------------------------------------------

GEN_TARGETS_P2 = ("cyclic", "fail:1..7", "random_profile", "ell:<l>", "break1", "random")


class _Builder:
    """Collects f_i as (valuation shift, residue) pairs plus noise."""

    def __init__(self, ring: UnramRing, n: int, rng: np.random.Generator):
        self.R, self.n, self.rng = ring, n, rng
        self.p = ring.p
        self.vals: dict[int, QElem] = {}

    def rand_int(self, k: int) -> QElem:
        """Random element of p^k O_K (mod p^N)."""
        R = self.R
        if k >= R.N:
            return R.zero()
        span = R.p ** (R.N - k)
        return R(tuple(int(x) * R.p**k for x in self.rng.integers(0, span, R.f)))

    def set(self, i: int, residue: FFElem, k: int, extra: QElem | None = None):
        x = self.R.lift(residue) * self.R.p**k
        self.vals[i] = x if extra is None else x + extra

    def build(self, noise: bool = True) -> EisensteinPoly:
        R, p, n = self.R, self.p, self.n
        lo, hi = (3, 4) if n == p * p else (4, 5)
        coeffs = []
        for i in range(1, n + 1):
            x = self.vals.get(i, R.zero())
            if noise:
                x = x + self.rand_int(hi if i == n else lo)
            coeffs.append(x)
        return EisensteinPoly(R, tuple(coeffs))


def _rand(K: ResidueField, rng, nonzero=False) -> FFElem:
    return K.random(rng, nonzero=nonzero)


def _non_power(K: ResidueField, d: int, rng) -> FFElem:
    cands = [x for x in K.nonzero() if not is_dth_power(x, d)[0]]
    return cands[int(rng.integers(len(cands)))]


def _power(K: ResidueField, d: int, rng) -> FFElem:
    return _rand(K, rng, True) ** d


def gen_p2(p: int, f: int = 1, target: str = "cyclic", seed: int = 0, N: int = 6,
           ring: UnramRing | None = None) -> EisensteinPoly:
    """Deterministic degree-p^2 polynomial for a generation target.

    Targets: ``cyclic``; ``fail:i`` (i = 1..7) breaking exactly condition i
    of the cyclicity criterion (condition 7 also fails for i = 3, as it
    needs the root theta); ``random_profile`` (only conditions 1-2 are
    forced); ``ell:l`` for the break-l profile; ``break1``; ``random``
    (any Eisenstein polynomial with small valuations).
    """
    R = ring if ring is not None else UnramRing(ResidueField(p, f), N)
    K = R.base
    n = p * p
    rng = np.random.default_rng([seed, p, f, _target_code(target)])
    B = _Builder(R, n, rng)

    if target == "random":
        for i in range(1, n):
            B.vals[i] = B.rand_int(int(rng.integers(1, 4)))
        B.set(n, _rand(K, rng, True), 1, B.rand_int(2))
        return B.build()
    if target.startswith("ell:"):
        return _gen_ell(B, K, int(target[4:]), rng)
    if target == "break1":
        return _gen_break1(B, K, rng)

    fail = int(target[5:]) if target.startswith("fail:") else None
    if target not in ("cyclic", "random_profile") and fail is None:
        raise ValueError(f"unknown target {target!r}")
    if fail is not None and not 1 <= fail <= 7:
        raise ValueError("fail target must be in 1..7")
    if fail == 5 and not I(3, p - 1, p):
        raise ValueError("condition 5 is vacuous for p = 3")

    Fp2 = _rand(K, rng, True)
    if target == "random_profile":
        Fp = _rand(K, rng, True)
    elif fail == 3:
        Fp = -Fp2 * _non_power(K, p - 1, rng)
    else:
        Fp = -Fp2 * _power(K, p - 1, rng)
    G: dict[int, FFElem] = {}
    for l in I(2, p - 1, p):
        G[l] = _rand(K, rng)
    if target == "random_profile":
        G[p + 1] = _rand(K, rng, True)
        for l in I(2, p - 1, p):
            G[p * l] = _rand(K, rng)
        G[1] = _rand(K, rng)
    else:
        G[p + 1] = (-(Fp ** (p + 1))).root_p(1)
        for l in I(3, p - 1, p):
            G[p * l] = Fp2 * (G[l] / Fp) ** p
        half = K(pow(2, -1, p))
        G[2 * p] = Fp2 * (G[2] / Fp) ** p + half * Fp * (Fp - Fp2.root_p(1))
        if fail == 4:
            G[p + 1] = G[p + 1] + _nonzero_shift(K, G[p + 1], rng)
        elif fail == 5:
            l = I(3, p - 1, p)[int(rng.integers(len(I(3, p - 1, p))))]
            G[p * l] = G[p * l] + _rand(K, rng, True)
        elif fail == 6:
            G[2 * p] = G[2 * p] + _rand(K, rng, True)

    # f_p and f_{p^2} with a random p^2 digit: condition 7 sees it
    B.set(p, Fp, 1, B.rand_int(2))
    B.set(n, Fp2, 1, B.rand_int(2))
    for i, g in G.items():
        if i != 1:
            B.set(i, g, 2)
    if target != "random_profile":
        G1 = _rand(K, rng)
        ratio = -Fp / Fp2
        roots = dth_roots(ratio, p * (p - 1))
        if roots:
            tb = roots[0]
            A = LinearizedPoly(K, {0: Fp, 1: Fp2})
            partial = EisensteinPoly(R, tuple(B.vals.get(i, R.zero()) if i != n else B.vals[n]
                                              for i in range(1, n + 1)), check=False)
            y = _rand(K, rng)
            c0 = cond7_value(partial, tb, K.zero())
            G1 = (A(y) - c0) / tb
            if fail == 7:
                image = {A(x).coeffs for x in K.elements()}
                outside = [w for w in K.elements() if w.coeffs not in image]
                w = outside[int(rng.integers(len(outside)))]
                G1 = G1 + w / tb
        G[1] = G1
    B.set(1, G[1], 2)
    if fail == 1:
        B.set(p, _rand(K, rng, True), 2)
    if fail == 2:
        B.vals[p + 1] = B.rand_int(3)
    return B.build()


def _nonzero_shift(K: ResidueField, x: FFElem, rng) -> FFElem:
    """A nonzero d with x + d nonzero."""
    while True:
        d = _rand(K, rng, True)
        if x + d:
            return d


def _target_code(target: str) -> int:
    return sum((i + 1) * ord(c) for i, c in enumerate(target))


def _gen_ell(B: _Builder, K: ResidueField, ell: int, rng) -> EisensteinPoly:
    p, n = B.p, B.n
    if not 2 <= ell <= p - 1:
        raise ValueError("ell must lie in [2, p-1]")
    r = _ell_r(p, ell)
    Fp2 = _rand(K, rng, True)
    # bias towards p-group closures so every branch is exercised
    if rng.random() < 0.7:
        Fp = -Fp2 * _power(K, p - 1, rng)
    else:
        Fp = _rand(K, rng, True)
    if rng.random() < 0.7:
        Gr = _power(K, p - 1, rng) * Fp * Fp2 / K(ell)
    else:
        Gr = _rand(K, rng, True)
    B.set(p, Fp, 1, B.rand_int(2))
    B.set(n, Fp2, 1, B.rand_int(2))
    for i in I(2, p - 1, p):
        B.vals[p * i] = B.rand_int(2)
    for i in I(1, r - 1, p):
        B.vals[i] = B.rand_int(2)
    B.set(r, Gr, 2)
    return B.build()


def _gen_break1(B: _Builder, K: ResidueField, rng) -> EisensteinPoly:
    p, n = B.p, B.n
    Fp2 = _rand(K, rng, True)
    mode = rng.random()
    if mode < 0.4 and K.f >= 2:
        # kernel spanned by two independent elements: splits completely
        w1 = _rand(K, rng, True)
        while True:
            w2 = _rand(K, rng, True)
            t = w2 / w1
            if t**p != t:
                break
        d = w1 ** (p - 1)
        c = (w2**p - d * w2) ** (p - 1)
        a, b = -(d**p + c), c * d
    elif mode < 0.75:
        # one F_p-line of roots and b a (p-1)th power
        d = _rand(K, rng, True) ** (p - 1)
        c = _power(K, p - 1, rng)
        a, b = -(d**p + c), c * d
    else:
        a, b = _rand(K, rng), _rand(K, rng, True)
    Fp, F1 = Fp2 * a, Fp2 * b
    B.set(1, F1, 1, B.rand_int(2))
    if Fp:
        B.set(p, Fp, 1, B.rand_int(2))
    else:
        B.vals[p] = B.rand_int(2)
    B.set(n, Fp2, 1, B.rand_int(2))
    for i in I(2, p - 1, p):
        B.vals[p * i] = B.rand_int(2)
    for i in I(2, n - 1, p):
        B.vals[i] = B.rand_int(2)
    return B.build()
