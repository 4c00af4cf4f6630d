from fractions import Fraction
from itertools import product

from hypothesis import settings, strategies as st

from kzlog.freealg import Series
from kzlog.freelie import LieElement, lyndon_words_upto

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")

small_fractions = st.builds(
    Fraction,
    st.integers(-10, 10),
    st.integers(1, 10),
)


@st.composite
def series(draw, alphabet=2, degree=3, constant=None):
    words = [w for d in range(degree + 1) for w in product(range(alphabet), repeat=d)]
    picked = draw(st.lists(st.sampled_from(words), max_size=6))
    terms = {w: draw(small_fractions) for w in picked}
    if constant is not None:
        terms[()] = constant
    return Series(alphabet, degree, terms)


@st.composite
def lie_elements(draw, alphabet=2, degree=4):
    basis = lyndon_words_upto(alphabet, degree)
    picked = draw(st.lists(st.sampled_from(basis), min_size=1, max_size=4, unique=True))
    return LieElement(alphabet, degree, {w: draw(small_fractions) for w in picked})


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
