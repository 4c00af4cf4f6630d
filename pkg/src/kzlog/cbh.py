"""Multilinear Campbell–Baker–Hausdorff terms and the linear map cbh_n.

CBH_k(y_1, …, y_k) is the part of log(e^{y_1} ⋯ e^{y_k}) in which every y_i
occurs exactly once. cbh_n sends a word x_{i_1} ⋯ x_{i_k} to
CBH_k(x_{i_1}, …, x_{i_k}) and 1 to 0; on group-like elements it is the
logarithm.
"""

from __future__ import annotations

from functools import lru_cache

from .freealg import DomainError, Series, exp, grouplike_defect, log, mul, multidegree_component
from .freelie import LieElement, lie_coordinates


@lru_cache(maxsize=None)
def cbh_multilinear_series(k: int) -> Series:
    """CBH_k as a series over the letters 0..k-1 (letter j-1 stands for y_j)."""
    if k < 1:
        raise ValueError(f"arity must be >= 1, got {k}")
    # every letter at most once: the multilinear part of a product only needs
    # the multilinear parts of its factors
    bound = (1,) * k
    product = Series.one(k, k)
    for j in range(k):
        product = mul(product, exp(Series.generator(j, k, k), bound), bound)
    return multidegree_component(log(product, bound), bound)


@lru_cache(maxsize=None)
def cbh_multilinear(k: int) -> LieElement:
    """CBH_k in Lyndon coordinates of the free Lie algebra on k letters."""
    return lie_coordinates(cbh_multilinear_series(k))


def substitute(k: int, letters) -> dict:
    """CBH_k(x_{letters[0]}, …, x_{letters[k-1]}) as {word: coefficient}."""
    out = {}
    for sigma, c in cbh_multilinear_series(k).items():
        w = tuple(letters[j] for j in sigma)
        out[w] = out[w] + c if w in out else c
    return {w: c for w, c in out.items() if c}


@lru_cache(maxsize=None)
def _cbh_word_coords(w):
    if not w:
        return ()
    alphabet = max(w) + 1
    image = Series(alphabet, len(w), substitute(len(w), w))
    return tuple(lie_coordinates(image).items())


def cbh_word(w, alphabet: int, degree: int | None = None) -> LieElement:
    """cbh_n on a single word."""
    w = tuple(w)
    degree = len(w) if degree is None else degree
    return LieElement(alphabet, degree, dict(_cbh_word_coords(w)))


def cbh_map(X: Series) -> LieElement:
    """Linear extension of cbh_n to a truncated series.

    Works for any coefficient type that can be scaled by fractions, which
    lets the same map act on exact, float and symbolic series.
    """
    coords = {}
    for w, c in X.items():
        for ell, k in _cbh_word_coords(w):
            t = c * k
            coords[ell] = coords[ell] + t if ell in coords else t
    return LieElement(X.alphabet, X.degree, coords)


def log_via_cbh(X: Series) -> LieElement:
    """log(X) for group-like X, computed as cbh_map(X)."""
    if X.constant != 1:
        raise DomainError(f"not group-like: constant term is {X.constant}, expected 1")
    defect = grouplike_defect(X)
    if defect is not None:
        (u, v), lhs, rhs = defect
        raise DomainError(
            f"not group-like: coefficient of {u}⊗{v} is {lhs} in Δ(X) but {rhs} in X⊗X"
        )
    return cbh_map(X)


def bch(a: Series, b: Series) -> Series:
    """log(e^a e^b) through the truncated exponential and logarithm."""
    return log(mul(exp(a), exp(b)))
