"""Numeric values of the iterated integrals ω_a over admissible words.

Two routes that share nothing:

* `mzv_quadrature` integrates ∫_0^1 ω_{a_1} ∘ ⋯ ∘ ω_{a_n} with ω_0 = dt/t and
  ω_1 = dt/(t-1) recursively on a mesh graded toward both endpoints;
* `mzv_series` sums ζ(s_1, …, s_k) = Σ_{n_1 > ⋯ > n_k ≥ 1} ∏ n_j^{-s_j} directly,
  with a closed-form enclosure of the tail.

`word_to_composition` is the dictionary between the two; it is only trusted
because the tests check it against the quadrature.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from ._panels import Mesh
from .freealg import DomainError

SERIES_TERM_CAP = 10**7


class ResourceError(RuntimeError):
    """A tolerance could not be met within the iteration budget."""

    def __init__(self, message, value=None, error_bound=None):
        super().__init__(message)
        self.value = value
        self.error_bound = error_bound


@dataclass(frozen=True)
class Composition:
    exponents: tuple

    def __post_init__(self):
        s = tuple(int(x) for x in self.exponents)
        if not s or any(x < 1 for x in s):
            raise DomainError(f"composition needs positive exponents, got {self.exponents}")
        if s[0] < 2:
            raise DomainError(f"divergent: first exponent must be >= 2, got {s}")
        object.__setattr__(self, "exponents", s)

    @property
    def weight(self):
        return sum(self.exponents)

    @property
    def depth(self):
        return len(self.exponents)

    def __str__(self):
        return "ζ(" + ",".join(map(str, self.exponents)) + ")"


@dataclass(frozen=True)
class EvalResult:
    value: float
    error_bound: float
    method: Literal["series", "quadrature"]

    def to_document(self):
        return {"value": self.value, "error_bound": self.error_bound, "method": self.method}


def _bits(a):
    bits = tuple(getattr(a, "bits", a))
    if len(bits) < 2 or bits[0] != 1 or bits[-1] != 0 or any(b not in (0, 1) for b in bits):
        raise DomainError(f"{bits} is not admissible (need a_1 = 1, a_n = 0, bits in {{0,1}})")
    return bits


def word_to_composition(a) -> tuple:
    """(composition, sign) with ω_a = sign · ζ(composition).

    Each 1 opens a block and a block followed by m zeros gives the exponent
    m + 1. The block nearest t = 0 is the innermost index, so exponents are
    read right to left. The sign is (-1)^(number of ones).
    """
    bits = _bits(a)
    blocks = []
    for b in bits:
        if b == 1:
            blocks.append(1)
        else:
            blocks[-1] += 1
    sign = -1 if bits.count(1) % 2 else 1
    return Composition(tuple(reversed(blocks))), sign


def composition_to_word(c: Composition) -> tuple:
    bits = []
    for s in reversed(c.exponents):
        bits.append(1)
        bits.extend([0] * (s - 1))
    return tuple(bits)


# --- nested sums ---


def _tail_enclosure(s, j, M):
    """Bounds on Σ_{n_1 > ⋯ > n_j > M} ∏_{i ≤ j} n_i^{-s_i}.

    Upper: the sum is below the integral over x_1 ≥ ⋯ ≥ x_j ≥ M, which scales
    to M^{j-w} / ∏_i (σ_i - i) with σ_i the partial weights. Lower: the
    region x_i ≥ x_{i+1} + 1, x_j ≥ M + 1 sits inside the union of unit cells
    above the lattice points, and shifting it back costs at most a factor
    (1 + j/(M+1))^{-w}.
    """
    w = sum(s[:j])
    c = 1.0
    sigma = 0
    for i in range(j):
        sigma += s[i]
        c /= sigma - (i + 1)
    upper = c * float(M) ** (j - w)
    lower = c * float(M + 1) ** (j - w) * (1.0 + j / (M + 1)) ** (-w)
    return lower, upper


def _partial_sums(s, M):
    """g[j] = Σ_{M ≥ n_{j+1} > ⋯ > n_k ≥ 1} ∏ n_i^{-s_i}, for j = 0..k (g[k] = 1).

    Accumulated in extended precision; the returned rounding bound charges
    every prefix sum M ulps of its value at that precision.
    """
    k = len(s)
    n = np.arange(1, M + 1, dtype=np.longdouble)
    eps = float(np.finfo(np.longdouble).eps)
    g = [1.0] * (k + 1)
    inner = np.ones(M, dtype=np.longdouble)
    rounding = 0.0
    for j in range(k - 1, -1, -1):
        prefix = np.cumsum(n ** (-s[j]) * inner)
        g[j] = float(prefix[-1])
        rounding += (M + 2) * eps * g[j] * (k - j)
        inner = np.concatenate([[0.0], prefix[:-1]])  # strict inequality n_j > n_{j+1}
    return g, rounding


def mzv_series(c, tol: float = 1e-10) -> EvalResult:
    """ζ(c) by direct nested summation with a rigorous tail enclosure.

    Splitting on how many indices exceed M gives the exact identity
    ζ = Σ_j T_j(M) · g_{j+1}(M), where g are finite partial sums and T_j are
    all-large tails, enclosed by `_tail_enclosure`. M doubles until the
    enclosure plus rounding is within `tol`.
    """
    if not isinstance(c, Composition):
        c = Composition(tuple(c))
    if tol <= 0:
        raise ValueError("tol must be positive")
    s = c.exponents
    k = len(s)
    M = 1024
    best = None
    while True:
        g, rounding = _partial_sums(s, M)
        lo = hi = 0.0
        for j in range(1, k + 1):
            tl, th = _tail_enclosure(s, j, M)
            lo += tl * g[j]
            hi += th * g[j]
        value = g[0] + 0.5 * (lo + hi)
        bound = 0.5 * (hi - lo) + rounding
        best = (value, bound)
        if bound <= tol:
            return EvalResult(value, bound, "series")
        if 2 * M > SERIES_TERM_CAP:
            raise ResourceError(
                f"{c}: bound {bound:.3g} above tol {tol:.3g} at {M} terms",
                value=best[0],
                error_bound=best[1],
            )
        M *= 2


# --- iterated-integral quadrature ---


def _iterated_integral(bits, mesh):
    t = mesh.nodes
    forms = {0: 1.0 / t, 1: -1.0 / mesh.right_gap}
    F = np.ones_like(t)
    for b in bits[:-1]:
        F = mesh.cumulative(F * forms[b])
    return mesh.integrate(F * forms[bits[-1]])


def mzv_quadrature(a, tol: float = 1e-10, order: int = 20) -> EvalResult:
    """ω_a as an iterated integral over 0 ≤ t_1 ≤ ⋯ ≤ t_n ≤ 1.

    Admissibility keeps both endpoints integrable: the innermost form is ω_1,
    finite at 0, and the outermost is ω_0, finite at 1. The error estimate is
    the change under halving every panel.
    """
    bits = _bits(a)
    if tol <= 0:
        raise ValueError("tol must be positive")
    mesh = Mesh.graded(order)
    coarse = _iterated_integral(bits, mesh)
    for _ in range(3):
        mesh = mesh.refined()
        fine = _iterated_integral(bits, mesh)
        bound = abs(fine - coarse) + 64 * np.finfo(float).eps * max(1.0, abs(fine))
        if bound <= tol:
            return EvalResult(fine, bound, "quadrature")
        coarse = fine
    raise ResourceError(
        f"{bits}: quadrature estimate {bound:.3g} above tol {tol:.3g}", value=fine, error_bound=bound
    )


def omega_value(a, tol: float = 1e-10, method: str = "series") -> EvalResult:
    """Numeric ω_a by either method (series goes through the dictionary)."""
    if method == "quadrature":
        return mzv_quadrature(a, tol)
    comp, sign = word_to_composition(a)
    r = mzv_series(comp, tol)
    return EvalResult(sign * r.value, r.error_bound, "series")
