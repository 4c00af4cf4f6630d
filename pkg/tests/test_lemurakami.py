import math
from fractions import Fraction

import pytest

from kzlog.cbh import cbh_map
from kzlog.freealg import DomainError, Series, is_grouplike, log
from kzlog.freelie import is_primitive, lie_coordinates
from kzlog.lemurakami import (
    AdmissibleSeq,
    MZVCombination,
    SymbolicSeries,
    admissible_seqs,
    c_coefficients,
    cbh_of_phi_symbolic,
    lie_evaluate,
    log_phi_symbolic,
    phi_numeric,
    phi_symbolic,
)
from kzlog.mzv import omega_value

w10 = AdmissibleSeq((1, 0))
ZETA2 = math.pi**2 / 6


def series_evaluator(a):
    return omega_value(a, 1e-9).value


def test_admissible_examples():
    assert admissible_seqs(1) == []
    assert admissible_seqs(2) == [w10]
    assert admissible_seqs(3) == [AdmissibleSeq((1, 0, 0)), AdmissibleSeq((1, 1, 0))]
    assert [len(admissible_seqs(n)) for n in range(2, 9)] == [2 ** (n - 2) for n in range(2, 9)]


def test_admissible_validation():
    with pytest.raises(DomainError):
        AdmissibleSeq((0, 1))
    with pytest.raises(DomainError):
        AdmissibleSeq((1, 2, 0))
    assert AdmissibleSeq.parse("1,1,0") == AdmissibleSeq((1, 1, 0))


def brute_force_c(bits):
    """Literal expansion: build each word as a product of one-letter series."""
    n = len(bits)
    zeros = [a for a in range(n) if bits[a] == 0]
    ones = [a for a in range(n) if bits[a] == 1]
    total = Series.zero(2, n)
    for smask in range(1 << len(zeros)):
        S = {zeros[i] for i in range(len(zeros)) if smask >> i & 1}
        for tmask in range(1 << len(ones)):
            T = {ones[i] for i in range(len(ones)) if tmask >> i & 1}
            term = Series.one(2, n)
            for _ in T:
                term = term * Series.generator(1, 2, n)
            for al in reversed(range(n)):
                if al not in S | T:
                    term = term * Series.generator(bits[al], 2, n)
            for _ in S:
                term = term * Series.generator(0, 2, n)
            total = total + term * (-1) ** (len(S) + len(T))
    return {w: int(c) for w, c in total.items()}


def test_c_coefficients_example():
    assert c_coefficients((1, 0)) == {(0, 1): 1, (1, 0): -1}


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_c_coefficients_match_brute_force(n):
    for a in admissible_seqs(n):
        assert c_coefficients(a) == brute_force_c(a.bits)


def test_c_coefficients_homogeneous():
    for a in admissible_seqs(5):
        assert all(len(w) == 5 for w in c_coefficients(a))


def test_phi_symbolic_examples():
    assert not phi_symbolic(1).higher
    phi2 = phi_symbolic(2)
    assert phi2[(0, 1)] == MZVCombination.symbol(w10)
    assert phi2[(1, 0)] == MZVCombination.symbol(w10, -1)
    symbols = {s for w, c in phi_symbolic(3).items() if len(w) == 3 for s, _ in c.items()}
    assert symbols == {AdmissibleSeq((1, 0, 0)), AdmissibleSeq((1, 1, 0))}


def test_log_phi_symbolic_examples():
    assert not log_phi_symbolic(1)
    ell = log_phi_symbolic(2)
    assert dict(ell.items()) == {(0, 1): MZVCombination.symbol(w10)}


@pytest.mark.parametrize("N", [1, 2, 3, 4, 5])
def test_log_phi_two_ways_exact(N):
    assert log_phi_symbolic(N) == cbh_of_phi_symbolic(N)


def test_phi_numeric_examples():
    assert phi_numeric(0, series_evaluator).distance(Series.one(2, 0)) == 0
    phi = phi_numeric(2, lambda a: -ZETA2)
    assert phi[(0, 1)] == pytest.approx(-ZETA2) and phi[(1, 0)] == pytest.approx(ZETA2)


def test_numeric_phi_is_grouplike():
    assert is_grouplike(phi_numeric(4, series_evaluator), tol=1e-8)


def test_numeric_log_matches_substitution():
    numeric = lie_coordinates(log(phi_numeric(4, series_evaluator)), tol=1e-9)
    substituted = lie_evaluate(log_phi_symbolic(4), series_evaluator)
    assert numeric.distance(substituted) <= 1e-6
    assert is_primitive(substituted.expand(), tol=1e-8)


def test_evaluator_errors_name_the_symbol():
    def broken(a):
        raise ValueError("no value")

    with pytest.raises(ValueError, match=r"ω_\{1,0\}"):
        phi_numeric(2, broken)


def test_combination_arithmetic():
    a = MZVCombination.symbol(w10, 2)
    b = MZVCombination.symbol((1, 1, 0), Fraction(1, 3))
    assert (a + b - a) == b
    assert (a * Fraction(1, 2)) == MZVCombination.symbol(w10)
    assert not (a - a)
    assert MZVCombination.from_document(b.to_document()) == b


def test_symbolic_series_document_roundtrip():
    s = phi_symbolic(3).higher
    assert SymbolicSeries.from_document(s.to_document()) == s


def test_symbolic_series_rejects_numbers():
    with pytest.raises(TypeError):
        SymbolicSeries(2, {(0, 1): Fraction(1, 2)})


def test_cbh_map_on_symbolic_series():
    assert cbh_map(phi_symbolic(2).higher)[(0, 1)] == MZVCombination.symbol(w10)
