import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from eisenstein.gf import (
    LinearizedPoly,
    ResidueField,
    dth_roots,
    ff_arith,
    frobenius_pow,
    is_dth_power,
    solve_linearized,
)

F3 = ResidueField(3)
F9i = ResidueField(3, 2, (1, 0, 1))  # F_3[X]/(X^2 + 1)
FIELDS = [ResidueField(3), ResidueField(3, 2), ResidueField(5, 1), ResidueField(5, 2), ResidueField(7, 1)]


def elems(F, nonzero=False):
    lo = 1 if nonzero else 0
    return st.integers(lo, F.q - 1).map(F.from_index)


def test_small_products():
    assert F3(2) * F3(2) == F3(1)
    X = F9i((0, 1))
    assert X * X == F9i(-1) == F9i(2)
    assert F3(1) / F3(2) == F3(2)
    assert ff_arith(F3(2), F3(2), "mul") == F3(1)
    with pytest.raises(ValueError):
        ff_arith(F3(1), F3(1), "pow")


def test_frobenius_examples():
    X = F9i((0, 1))
    assert frobenius_pow(X, 1) == -X
    assert frobenius_pow(-X, 1, inverse=True) == X
    for x in F3.elements():
        assert frobenius_pow(x, 1) == x


def test_dth_power_examples():
    assert is_dth_power(F3(1), 2) == (True, F3(1))
    assert is_dth_power(F3(2), 2) == (False, None)
    ok, w = is_dth_power(ResidueField(3, 2)(2), 2)
    assert ok and w * w == ResidueField(3, 2)(2)
    with pytest.raises(ValueError):
        is_dth_power(F3(0), 2)


def test_linearized_solutions():
    zero_map = LinearizedPoly.from_list(F3, [2, 1])  # Y^3 + 2Y
    sol = solve_linearized(zero_map, F3(0))
    assert {r.coeffs for r in sol.roots} == {(0,), (1,), (2,)}
    assert not solve_linearized(zero_map, F3(1))
    cube = LinearizedPoly.from_list(F3, [0, 1])
    assert solve_linearized(cube, F3(2)).roots == (F3(2),)


def test_reducible_modulus_rejected():
    with pytest.raises(ValueError):
        ResidueField(3, 2, (2, 0, 1))  # X^2 - 1
    with pytest.raises(ValueError):
        ResidueField(4)


@pytest.mark.parametrize("F", FIELDS, ids=repr)
def test_multiplicative_group_is_cyclic(F):
    g = F.gen()
    seen = {(g**k).coeffs for k in range(F.q - 1)}
    assert len(seen) == F.q - 1


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(FIELDS).flatmap(lambda F: st.tuples(elems(F), elems(F), elems(F, True))))
def test_field_axioms(t):
    a, b, c = t
    assert (a + b) * c == a * c + b * c
    assert (a * b) / c * c == a * b
    assert a - a == a.field.zero()


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(FIELDS).flatmap(lambda F: st.tuples(elems(F), st.integers(-3, 3))))
def test_frobenius_roundtrip(t):
    x, k = t
    assert x.frob(k).root_p(k) == x
    assert x.frob(x.field.f) == x


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(FIELDS).flatmap(lambda F: st.tuples(elems(F, True), st.integers(1, 12))))
def test_dth_power_matches_enumeration(t):
    x, d = t
    ok, _ = is_dth_power(x, d)
    assert ok == bool(dth_roots(x, d))


@settings(max_examples=60, deadline=None)
@given(
    st.sampled_from(FIELDS[:4]).flatmap(
        lambda F: st.tuples(st.lists(elems(F), min_size=1, max_size=3), elems(F))
    )
)
def test_solve_linearized_matches_enumeration(t):
    coeffs, c = t
    F = c.field
    A = LinearizedPoly.from_list(F, coeffs)
    if not A:
        with pytest.raises(ValueError):
            solve_linearized(A, c)
        return
    brute = {x.coeffs for x in F.elements() if A(x) == c}
    assert {r.coeffs for r in solve_linearized(A, c).roots} == brute


def test_linearized_matrix_is_linear():
    F = ResidueField(5, 2)
    A = LinearizedPoly.from_list(F, [F.gen(), 1, 3])
    M = A.matrix()
    for x in list(F.elements())[:10]:
        v = M @ np.array(x.coeffs) % 5
        assert tuple(int(c) for c in v) == A(x).coeffs
