from fractions import Fraction

import pytest
from hypothesis import given

from conftest import lie_elements
from kzlog.freealg import DomainError, NumericSeries, Series, all_words, exp, mul
from kzlog.freelie import (
    LieElement,
    bracketing,
    eulerian_projection,
    is_lyndon,
    is_primitive,
    lie_coordinates,
    lie_project_p,
    lyndon_basis,
    pbw_monomials,
    standard_factorization,
    symmetrize,
    witt_dimension,
)


def test_lyndon_words_small():
    assert lyndon_basis(2, 1) == [(0,), (1,)]
    assert lyndon_basis(2, 3) == [(0, 0, 1), (0, 1, 1)]
    assert lyndon_basis(2, 4) == [(0, 0, 0, 1), (0, 0, 1, 1), (0, 1, 1, 1)]
    assert not is_lyndon((0, 1, 0, 1)) and not is_lyndon((1, 0))


@pytest.mark.parametrize(
    "n, counts",
    [(2, (2, 1, 2, 3, 6, 9, 18, 30)), (3, (3, 3, 8, 18, 48, 116))],
)
def test_witt_counts(n, counts):
    for d, expected in enumerate(counts, start=1):
        assert len(lyndon_basis(n, d)) == witt_dimension(n, d) == expected


def test_standard_factorization():
    assert standard_factorization((0, 0, 1, 1)) == ((0,), (0, 1, 1))
    assert standard_factorization((0, 0, 1, 0, 1)) == ((0, 0, 1), (0, 1))
    with pytest.raises(DomainError):
        standard_factorization((1, 0))


def test_bracketing_expansions():
    assert bracketing((0, 1)) == Series(2, 2, {(0, 1): 1, (1, 0): -1})
    # [x0, [x0, x1]]
    assert bracketing((0, 0, 1)) == Series(2, 3, {(0, 0, 1): 1, (0, 1, 0): -2, (1, 0, 0): 1})


def test_bracketing_leading_word_is_smallest():
    for w in lyndon_basis(3, 5):
        assert min(bracketing(w).words()) == w
        assert bracketing(w)[w] == 1


@given(lie_elements(alphabet=3, degree=4))
def test_coordinates_roundtrip(ell):
    assert lie_coordinates(ell.expand()) == ell


def test_non_lie_detected():
    with pytest.raises(DomainError, match="not a Lie element"):
        lie_coordinates(Series.word((0, 1), 2, 2))


def test_numeric_coordinates_with_tolerance():
    X = NumericSeries(2, 2, {(0, 1): 0.5, (1, 0): -0.5 + 1e-12})
    assert lie_coordinates(X, tol=1e-9)[(0, 1)] == 0.5
    with pytest.raises(DomainError):
        lie_coordinates(X)


@given(lie_elements(degree=4))
def test_lie_elements_are_primitive(ell):
    assert is_primitive(ell.expand())


def test_products_are_not_primitive():
    x0, x1 = Series.generator(0, 2, 2), Series.generator(1, 2, 2)
    assert not is_primitive(mul(x0, x1))
    assert not is_primitive(Series.one(2, 2))


def test_pbw_monomial_count_matches_words():
    for counts in [(2, 1), (2, 2), (3, 2), (1, 1, 1), (2, 1, 1)]:
        n = sum(counts)
        words = [w for w in all_words(len(counts), n) if tuple(w.count(a) for a in range(len(counts))) == counts]
        assert len(pbw_monomials(len(counts), counts)) == len(words)


def test_symmetrize_two_letters():
    s = symmetrize(((1,), (0,)))
    assert s == Series(2, 2, {(0, 1): Fraction(1, 2), (1, 0): Fraction(1, 2)})


@given(lie_elements(degree=5))
def test_projection_fixes_lie_elements(ell):
    assert lie_project_p(ell.expand()) == ell


def test_projection_kills_symmetric_products():
    for m in pbw_monomials(2, (2, 2)):
        if len(m) > 1:
            assert not lie_project_p(symmetrize(m, 2, 4))


@given(lie_elements(degree=4))
def test_eulerian_fixes_lie_elements(ell):
    X = ell.expand()
    assert eulerian_projection(X) == X


def test_eulerian_agrees_with_projection_on_words():
    for d in range(1, 5):
        for w in all_words(2, d):
            X = Series.word(w, 2, 4)
            assert eulerian_projection(X) == lie_project_p(X).expand()


def test_eulerian_of_exp_is_log():
    ell = LieElement(2, 4, {(0,): 1, (1,): Fraction(1, 2), (0, 1): 3})
    assert eulerian_projection(exp(ell.expand())) == ell.expand()


def test_document_roundtrip():
    ell = LieElement(2, 3, {(0, 1): Fraction(2, 3), (0, 1, 1): -1})
    assert LieElement.from_document(ell.to_document()) == ell
    f = LieElement(2, 3, {(0, 1): 0.25})
    assert LieElement.from_document(f.to_document()) == f


def test_non_lyndon_key_rejected():
    with pytest.raises(DomainError):
        LieElement(2, 2, {(1, 0): 1})


def test_symmetrize_examples():
    assert symmetrize(((0, 1),)) == bracketing((0, 1))
    assert symmetrize(((0,), (0,))) == Series(1, 2, {(0, 0): 1})


def test_projection_examples():
    x0 = Series.generator(0, 2, 2)
    assert lie_project_p(x0) == LieElement(2, 2, {(0,): 1})
    assert not lie_project_p(Series.word((0, 0), 2, 2))
    assert lie_project_p(Series.word((0, 1), 2, 2)) == LieElement(2, 2, {(0, 1): Fraction(1, 2)})


def test_eulerian_examples():
    assert eulerian_projection(Series.generator(0, 2, 2)) == Series.generator(0, 2, 2)
    half = Fraction(1, 2)
    assert eulerian_projection(Series.word((0, 1), 2, 2)) == Series(2, 2, {(0, 1): half, (1, 0): -half})
    assert not eulerian_projection(Series.one(2, 2))


def test_primitive_examples():
    assert is_primitive(Series.generator(0, 2, 2))
    assert is_primitive(bracketing((0, 1), 2, 2))
    assert not is_primitive(Series.word((0, 1), 2, 2))


def test_lyndon_count_examples():
    assert len(lyndon_basis(2, 2)) == 1 and len(lyndon_basis(2, 5)) == 6
