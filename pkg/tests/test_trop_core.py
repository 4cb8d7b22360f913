import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tropica.trop_core import (
    NEG_INF,
    TropicalPolynomial,
    as_rational,
    deq_add,
    deq_eval,
    deq_sum,
    legendre_dual,
    legendre_of_lift,
    maslov_add,
    trop_add,
    trop_eval,
    trop_mul,
)

rationals = st.fractions(min_value=-100, max_value=100, max_denominator=50)
elements = st.one_of(rationals, st.just(NEG_INF))
exps2 = st.tuples(st.integers(-3, 3), st.integers(-3, 3))


@settings(max_examples=300)
@given(elements, elements, elements)
def test_semiring_laws(a, b, c):
    assert trop_add(a, b) == trop_add(b, a)
    assert trop_mul(a, b) == trop_mul(b, a)
    assert trop_add(trop_add(a, b), c) == trop_add(a, trop_add(b, c))
    assert trop_mul(trop_mul(a, b), c) == trop_mul(a, trop_mul(b, c))
    assert trop_mul(a, trop_add(b, c)) == trop_add(trop_mul(a, b), trop_mul(a, c))
    assert trop_add(a, a) == a
    assert trop_add(a, NEG_INF) == a
    assert trop_mul(a, 0) == a
    assert trop_mul(a, NEG_INF) is NEG_INF


def test_neg_inf_is_singleton_and_ordered():
    import pickle

    assert pickle.loads(pickle.dumps(NEG_INF)) is NEG_INF
    assert NEG_INF < -(10**100)
    assert not NEG_INF > Fraction(-5)


def test_as_rational_is_exact():
    assert as_rational(0.1) == Fraction(3602879701896397, 36028797018963968)
    assert as_rational("3/4") == Fraction(3, 4)
    with pytest.raises(ValueError):
        as_rational(float("nan"))
    with pytest.raises(TypeError):
        as_rational(True)


def test_evaluate_and_argmax():
    F = TropicalPolynomial({(0, 0): 0, (1, 0): 0, (0, 1): 0})
    assert trop_eval(F, (1, 2)) == (2, frozenset({(0, 1)}))
    val, arg = F.evaluate((0, 0))
    assert val == 0 and len(arg) == 3


def test_duplicate_exponents_max_merge():
    F = TropicalPolynomial([((1, 0), 1), ((1, 0), 3), ((0, 0), 0)])
    assert F.coefficients[(1, 0)] == 3


@settings(max_examples=100)
@given(st.dictionaries(exps2, rationals, min_size=1, max_size=8))
def test_json_round_trip(terms):
    F = TropicalPolynomial(terms)
    assert TropicalPolynomial.from_json(F.to_json()) == F


@settings(max_examples=100)
@given(st.dictionaries(exps2, rationals, min_size=1, max_size=8), st.tuples(rationals, rationals))
def test_legendre_dual_bounds(terms, x):
    F = TropicalPolynomial(terms)
    dual = legendre_dual(F)
    # envelope dominates the coefficients and reproduces F by a max over lattice points
    for e, c in F.coefficients.items():
        assert dual[e] >= c
    G = legendre_of_lift(dual)
    assert G(x) == F(x)


def test_legendre_dual_3d_lp():
    F = TropicalPolynomial({(0, 0, 0): 0, (2, 0, 0): 0, (0, 2, 0): 0, (0, 0, 2): 0, (1, 1, 0): -5})
    d = legendre_dual(F)
    assert d[(1, 0, 0)] == pytest.approx(0)
    assert d[(1, 1, 0)] == pytest.approx(0, abs=1e-9)
    assert (1, 1, 1) not in d


floats = st.floats(-50, 50, allow_nan=False)


@settings(max_examples=500)
@given(floats, floats, st.floats(1.0001, 1e6))
def test_deq_add_sandwich(x, y, t):
    s = deq_add(x, y, t)
    assert max(x, y) <= s <= max(x, y) + math.log(2) / math.log(t) + 1e-12


def test_deq_add_limits_and_errors():
    assert deq_add(1.0, 2.0, 1e300) == pytest.approx(2.0)
    assert deq_add(0.0, 0.0, math.e) == pytest.approx(math.log(2))
    assert deq_add(-math.inf, 3.0, 10) == 3.0
    with pytest.raises(ValueError):
        deq_add(0, 0, 1.0)


def test_deq_sum_matches_pairwise():
    vals = [0.3, -1.2, 2.5, 2.5]
    acc = vals[0]
    for v in vals[1:]:
        acc = deq_add(acc, v, 7.0)
    assert deq_sum(vals, 7.0) == pytest.approx(acc)


def test_maslov_add():
    assert maslov_add(2.0, 3.0, 1.0) == pytest.approx(5.0)
    assert maslov_add(2.0, 3.0, 0.0) == 3.0
    assert maslov_add(2.0, 3.0, 1e-3) == pytest.approx(3.0, rel=1e-6)
    with pytest.raises(ValueError):
        maslov_add(-1.0, 1.0, 1.0)


def test_deq_eval_sandwich():
    coeffs = {(0, 0): 0.0, (1, 0): 0.5, (0, 1): -1.0}
    F = TropicalPolynomial(coeffs)
    for x in [(0.0, 0.0), (3.0, -2.0), (-1.0, 4.0)]:
        v = deq_eval(coeffs, x, 100.0)
        assert F.evaluate_float(x) <= v <= F.evaluate_float(x) + math.log(3) / math.log(100.0) + 1e-12
