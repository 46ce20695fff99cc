import pytest
from hypothesis import given, settings, strategies as st

from eisenstein.cft_oracle import oracle_verdicts
from eisenstein.classify2 import check_cyclic_p2
from eisenstein.classify3 import (
    LITERAL_FLAGS,
    _asc_to_poly,
    check_cyclic_p3,
    gen_p3,
    level_polynomial,
    lubin_tate_poly,
    near_miss_sites,
    shadow_poly,
)
from eisenstein.gf import ResidueField
from eisenstein.upoly import EisensteinPoly
from eisenstein.zq import UnramRing


@pytest.fixture(scope="module")
def cyclic():
    return gen_p3(5, 1, "cyclic", 0)


def test_rejects_unsupported_inputs():
    R = UnramRing(ResidueField(3), 7)
    with pytest.raises(ValueError, match="not supported"):
        check_cyclic_p3(EisensteinPoly.from_ints(R, [0] * 26 + [3]))
    with pytest.raises(ValueError, match="degree"):
        check_cyclic_p3(EisensteinPoly.from_ints(UnramRing(ResidueField(5), 7), [0] * 24 + [5]))


def test_profile_failure(cyclic):
    bad = cyclic.replace({25: cyclic[25] * 5})
    rep = check_cyclic_p3(bad)
    assert rep.first_failed == 1 and not rep.cyclic


def test_cyclic_seed_passes(cyclic):
    rep = check_cyclic_p3(cyclic)
    assert rep.cyclic and rep.first_failed is None
    assert rep.lift_independent and not rep.discrepancies
    js = rep.to_json()
    assert js["kind"] == "cyclic_p3" and len(js["conditions"]) == 18


def test_lubin_tate_division_poly_passes():
    R = UnramRing(ResidueField(5), 7)
    f = _asc_to_poly(R, lubin_tate_poly(R, R(1), 4))
    assert f.n == 125 and check_cyclic_p3(f).cyclic


def test_shadow_conditions_match_degree_p2_checker():
    for target in ["cyclic", "near:10:2", "near:15:2", "near:125:2", "random_profile"]:
        f = gen_p3(5, 1, target, 3)
        rep = check_cyclic_p3(f)
        if not all(rep.passed(i) for i in (1, 2, 3)):
            continue
        sh = check_cyclic_p2(shadow_poly(f))
        for mine, theirs in zip(range(4, 8), range(3, 7)):
            assert rep.passed(mine) == sh.passed(theirs)


def test_every_near_miss_is_rejected():
    sites = near_miss_sites(5)
    assert len(sites) == 60
    for i, k in sites:
        rep = check_cyclic_p3(gen_p3(5, 1, f"near:{i}:{k}", 11))
        assert not rep.cyclic and not rep.discrepancies, (i, k)


def test_consistent_pairs_stay_cyclic():
    for seed in range(4):
        assert check_cyclic_p3(gen_p3(5, 1, "pair", seed)).cyclic


def test_printed_forms_reject_cyclic_polynomials(cyclic):
    # the literal Y-coefficient and the extra Q term each break a known cyclic case
    assert check_cyclic_p3(cyclic, variant="literal").first_failed == 14
    assert check_cyclic_p3(cyclic, variant="y_coeff").first_failed == 14
    assert check_cyclic_p3(cyclic, variant="q_extra").first_failed == 15
    for flag in ("tau_exp", "omega_exp"):
        assert check_cyclic_p3(cyclic, variant=flag).cyclic
    with pytest.raises(ValueError):
        check_cyclic_p3(cyclic, variant="bogus")
    assert "y_coeff" in LITERAL_FLAGS


def test_level_polynomials(cyclic):
    rep = check_cyclic_p3(cyclic)
    assert level_polynomial(rep, 2) is None
    for ell in (7, 11, 13, 26, 31):
        assert level_polynomial(rep, ell) is not None


@pytest.mark.parametrize("target", ["cyclic", "pair", "near:26:3", "near:27:3", "near:31:3"])
def test_printed_condition_9_matches_containment(target):
    rep = check_cyclic_p3(gen_p3(5, 1, target, 7))
    assert rep.printed_identity
    for ell, ok in rep.printed_identity.items():
        assert ok == rep.level_verdicts[ell]


def test_generator_is_deterministic():
    assert gen_p3(5, 1, "near", 4) == gen_p3(5, 1, "near", 4)
    assert gen_p3(5, 1, "cyclic", 4) != gen_p3(5, 1, "cyclic", 5)
    with pytest.raises(ValueError):
        gen_p3(5, 1, "fail:3", 0)


@pytest.mark.parametrize("target, factors", [("cyclic", (125,)), ("near:13:3", (25,)), ("near:20:2", (5,))])
def test_oracle_agrees(target, factors):
    f = gen_p3(5, 1, target, 2)
    v = oracle_verdicts(f)
    assert v.invariant_factors == factors
    assert check_cyclic_p3(f).cyclic == v.cyclic


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from(["cyclic", "near", "pair"]))
def test_generated_targets_have_expected_verdict(seed, target):
    rep = check_cyclic_p3(gen_p3(5, 1, target, seed))
    assert rep.cyclic == (target != "near")
    assert not rep.discrepancies
