from fractions import Fraction

import pytest
from hypothesis import given

from conftest import lie_elements, series
from kzlog.freealg import (
    DomainError,
    NumericSeries,
    Series,
    StructureMismatch,
    exp,
    grouplike_defect,
    is_grouplike,
    log,
    mul,
    multidegree_component,
    unshuffle_coproduct,
)

x0 = Series.generator(0, 2, 3)
x1 = Series.generator(1, 2, 3)


def test_product_is_concatenation():
    assert mul(x0, x1) == Series.word((0, 1), 2, 3)
    assert (x0 * x1)[(1, 0)] == 0


def test_product_truncates():
    a = Series.word((0, 1), 2, 3)
    assert mul(a, a) == Series.zero(2, 3)


def test_mismatched_structures_refuse():
    with pytest.raises(StructureMismatch):
        x0 + Series.generator(0, 3, 3)
    with pytest.raises(StructureMismatch):
        x0 * Series.generator(0, 2, 4)


def test_floats_rejected_in_exact_series():
    with pytest.raises(TypeError):
        Series(2, 2, {(0,): 0.5})


def test_exp_of_generator():
    e = exp(x0)
    assert e == Series(2, 3, {(): 1, (0,): 1, (0, 0): Fraction(1, 2), (0, 0, 0): Fraction(1, 6)})


def test_log_requires_unit_constant():
    with pytest.raises(DomainError, match="constant term"):
        log(x0)
    with pytest.raises(DomainError):
        log(Series(2, 2, {(): 2}))


def test_exp_requires_zero_constant():
    with pytest.raises(DomainError):
        exp(Series.one(2, 2))


def test_bch_degree_two():
    z = log(mul(exp(x0), exp(x1)))
    assert z[(0,)] == 1 and z[(1,)] == 1
    assert z[(0, 1)] == Fraction(1, 2) and z[(1, 0)] == Fraction(-1, 2)


@given(series(constant=0))
def test_log_exp_roundtrip(a):
    assert log(exp(a)) == a


@given(series(constant=1))
def test_exp_log_roundtrip(X):
    assert exp(log(X)) == X


@given(series(), series(), series())
def test_associative(a, b, c):
    assert mul(mul(a, b), c) == mul(a, mul(b, c))


@given(series(), series(), series())
def test_distributive(a, b, c):
    assert mul(a, b + c) == mul(a, b) + mul(a, c)


def test_coproduct_of_generator_is_primitive():
    d = unshuffle_coproduct(x0)
    assert d[((0,), ())] == 1 and d[((), (0,))] == 1 and len(d) == 2


@given(lie_elements(degree=4))
def test_exp_of_lie_is_grouplike(ell):
    assert is_grouplike(exp(ell.expand()))


def test_spurious_term_breaks_grouplike():
    X = exp(x0 + x1) + Series.word((0, 1), 2, 3, Fraction(1, 3))
    assert not is_grouplike(X)
    (u, v), lhs, rhs = grouplike_defect(X)
    assert lhs != rhs


def test_numeric_grouplike_tolerance():
    X = NumericSeries.from_exact(exp(x0 + x1))
    assert is_grouplike(X, tol=1e-12)
    Y = X + NumericSeries(2, 3, {(0, 1): 1e-6})
    assert not is_grouplike(Y, tol=1e-8)


def test_bounded_product_matches_multidegree_component():
    y = [Series.generator(i, 3, 3) for i in range(3)]
    full = mul(mul(exp(y[0]), exp(y[1])), exp(y[2]))
    b = (1, 1, 1)
    bounded = mul(mul(exp(y[0], b), exp(y[1], b), b), exp(y[2], b), b)
    assert multidegree_component(full, b) == multidegree_component(bounded, b)


def test_document_roundtrip():
    X = exp(x0 + x1 * Fraction(2, 3))
    assert Series.from_document(X.to_document()) == X
    N = NumericSeries.from_exact(X, tolerance=1e-9)
    back = NumericSeries.from_document(N.to_document())
    assert back.distance(N) == 0 and back.tolerance == 1e-9


def test_numeric_rejects_nonfinite():
    with pytest.raises(ValueError):
        NumericSeries(2, 2, {(0,): float("nan")})


# worked examples


def test_product_of_unit_shifts():
    one = Series.one(2, 2)
    a = one + Series.generator(0, 2, 2)
    b = one + Series.generator(1, 2, 2)
    assert mul(a, b) == Series(2, 2, {(): 1, (0,): 1, (1,): 1, (0, 1): 1})
    assert mul(one, a) == a


def test_square_truncated_at_degree_one():
    g = Series.generator(0, 2, 1)
    assert mul(g, g) == Series.zero(2, 1)


def test_coproduct_examples():
    d1 = unshuffle_coproduct(Series.one(2, 2))
    assert d1[((), ())] == 1 and len(d1) == 1
    d = unshuffle_coproduct(Series.word((0, 1), 2, 2))
    assert {k: v for k, v in d.items()} == {
        ((0, 1), ()): 1,
        ((0,), (1,)): 1,
        ((1,), (0,)): 1,
        ((), (0, 1)): 1,
    }


def test_grouplike_examples():
    assert is_grouplike(Series.one(2, 4))
    x = Series.generator(0, 2, 4) + Series.generator(1, 2, 4)
    assert is_grouplike(exp(x))
    assert not is_grouplike(Series(2, 2, {(): 1, (0, 1): 1}))


def test_exp_zero_and_log_exp_generator():
    assert exp(Series.zero(2, 3)) == Series.one(2, 3)
    for N in range(1, 6):
        g = Series.generator(0, 2, N)
        assert log(exp(g)) == g


def test_multidegree_examples():
    X = Series(2, 2, {(): 1, (0,): 1, (0, 1): 1})
    assert multidegree_component(X, (1, 1)) == Series.word((0, 1), 2, 2)
    assert multidegree_component(X, (0, 0)) == Series.one(2, 2)
    e = exp(Series.generator(0, 1, 3))
    assert multidegree_component(e, (3,)) == Series(1, 3, {(0, 0, 0): Fraction(1, 6)})
