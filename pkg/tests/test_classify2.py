import pytest
from hypothesis import given, settings, strategies as st

from eisenstein.additive import has_root
from eisenstein.classify2 import (
    I,
    bar,
    check_cyclic_p2,
    classify_p2,
    detect_regime_p2,
    gen_p2,
    level_value_p2,
)
from eisenstein.gf import LinearizedPoly, ResidueField
from eisenstein.upoly import EisensteinPoly, artin_hasse_norm
from eisenstein.zq import UnramRing


def test_helpers():
    assert I(2, 10, 3) == [2, 4, 5, 7, 8, 10]
    R = UnramRing(ResidueField(3), 4)
    assert bar(R(18), 2) == ResidueField(3)(2)
    assert bar(R(3), 2) is None


def test_x9_plus_3_fails_first_condition():
    f = EisensteinPoly.from_ints(UnramRing(ResidueField(3), 6), [0] * 8 + [3])
    rep = check_cyclic_p2(f)
    assert not rep.cyclic and rep.first_failed == 1


@pytest.mark.parametrize("p,fdeg", [(3, 1), (3, 2), (5, 1)])
def test_generated_cyclic_passes_everything(p, fdeg):
    for seed in range(3):
        rep = check_cyclic_p2(gen_p2(p, fdeg, "cyclic", seed))
        assert rep.cyclic and rep.first_failed is None
        assert rep.theta_independent


@pytest.mark.parametrize("p,fdeg", [(3, 1), (3, 2), (5, 1)])
@pytest.mark.parametrize("i", range(1, 8))
def test_targeted_failures_are_localised(p, fdeg, i):
    if i == 5 and p == 3:
        with pytest.raises(ValueError):
            gen_p2(p, fdeg, "fail:5", 0)
        return
    for seed in range(2):
        rep = check_cyclic_p2(gen_p2(p, fdeg, f"fail:{i}", seed))
        assert rep.first_failed == i
        if i >= 3:
            failed = {int(c.id) for c in rep.conditions if not c.passed and int(c.id) >= 3}
            # without the root theta, condition 7 cannot be met either
            assert failed == ({3, 7} if i == 3 else {i})


def test_condition3_over_qp_is_sign_relation():
    for seed in range(25):
        f = gen_p2(5, 1, "random_profile", seed)
        rep = check_cyclic_p2(f)
        assert rep.passed(3) == (rep.F_p2 == -rep.F_p)


def test_unknown_target():
    with pytest.raises(ValueError):
        gen_p2(3, 1, "nonsense", 0)
    with pytest.raises(ValueError):
        gen_p2(3, 1, "fail:9", 0)


def test_classification_of_cyclic():
    c = classify_p2(gen_p2(3, 1, "cyclic", 0))
    assert c.regime == "BreakPplus1" and c.cyclic and c.galois and c.module_length == 1
    assert c.predicted_max_abelian_degree == 9


def test_closure_with_module_of_length_p():
    # over F_9, a condition-4 failure can still leave a p-group closure
    c = classify_p2(gen_p2(3, 2, "fail:4", 5))
    assert c.p_group_closure and not c.galois
    assert c.module_length == 3 and c.upper_breaks_over_F == [1, 2, 4]
    # over F_3 it never does: G_4 / (F_3 F_9) = -1 is not a square
    for seed in range(5):
        assert not classify_p2(gen_p2(3, 1, "fail:4", seed)).p_group_closure


def test_regimes():
    assert detect_regime_p2(gen_p2(3, 1, "cyclic", 0)) == ("BreakPplus1", None)
    assert detect_regime_p2(gen_p2(5, 1, "ell:3", 0)) == ("BreakEll", 3)
    assert detect_regime_p2(gen_p2(3, 1, "break1", 0)) == ("Break1", None)


def test_report_json_round_trips_condition_ids():
    js = check_cyclic_p2(gen_p2(3, 1, "fail:6", 0)).to_json()
    assert js["kind"] == "cyclic_p2" and js["first_failed"] == 6
    assert [c["id"] for c in js["conditions"]] == [str(i) for i in range(1, 8)]


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(["cyclic", "random_profile", "fail:4", "fail:6", "fail:7"]), st.integers(0, 10**5))
def test_level_value_is_unscaled_artin_hasse_norm(target, seed):
    f = gen_p2(3, 1, target, seed)
    R = f.ring
    for r in R.base.nonzero():
        t = R.teichmuller(r)
        for ell in (2, 4):
            x = artin_hasse_norm(f, t, ell, scaled=False)
            assert (x - 1 - level_value_p2(f, ell, t)).valuation() >= 3


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**5))
def test_level_value_digit_is_level_polynomial(seed):
    # the p^2 digit of c_ell(theta) lands in A(k) for all theta when conditions 4-6 hold
    f = gen_p2(5, 1, "cyclic", seed)
    rep = check_cyclic_p2(f)
    R = f.ring
    A = LinearizedPoly(R.base, {0: rep.F_p, 1: rep.F_p2})
    for ell in I(2, 6, 5):
        for r in R.base.nonzero():
            assert has_root(A, bar(level_value_p2(f, ell, R.teichmuller(r)), 2))
