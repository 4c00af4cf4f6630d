"""Parallel transport in the truncated free algebra.

A connection is a function z -> h(z) with values in the degree-1 part. Its
holonomy solves H'(z) = h(z) H(z). Three independent ways to get at it live
here: a fixed-step fourth-order integrator (`ode_transport`), word-by-word
iterated integrals (`chen_series`), and the CBH-integral formula for the
logarithm of the holonomy (`log_holonomy_cbh`, `log_holonomy_cbh_direct`).
The KZ associator is the renormalized holonomy of h(z) = A_0/z + A_1/(z-1)
from 0 to 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Callable

import numpy as np

from ._panels import Mesh
from .cbh import cbh_map, cbh_multilinear_series
from .freealg import DomainError, NumericSeries, exp, mul, word_key
from .freelie import LieElement, lie_coordinates
from .mzv import ResourceError

__all__ = [
    "NumericSeries",
    "ConnectionPath",
    "SimplexIntegrator",
    "constant_path",
    "piecewise_constant_path",
    "polynomial_path",
    "kz_path",
    "ode_transport",
    "kz_associator_numeric",
    "kz_associator_extrapolated",
    "kz_associator_literal",
    "chen_series",
    "log_holonomy_cbh",
    "log_holonomy_cbh_direct",
]


@dataclass(frozen=True)
class ConnectionPath:
    """z -> Σ_j c_j(z) x_j, with `coefficients` vectorized over z.

    `coefficients(z)` returns an array of shape (alphabet, *z.shape).
    Integrators refuse intervals that contain a point of `singularities` and
    put panel edges on `breakpoints`.
    """

    coefficients: Callable[[np.ndarray], np.ndarray]
    alphabet: int
    singularities: tuple = ()
    breakpoints: tuple = ()

    def values(self, z):
        z = np.asarray(z, dtype=float)
        c = np.asarray(self.coefficients(z), dtype=float)
        return np.broadcast_to(c, (self.alphabet,) + z.shape)

    def __call__(self, z: float, degree: int = 1) -> NumericSeries:
        c = self.values(np.array(z))
        return NumericSeries(self.alphabet, degree, {(j,): c[j] for j in range(self.alphabet)})

    def check_interval(self, a, b):
        lo, hi = min(a, b), max(a, b)
        for p in self.singularities:
            if lo <= p <= hi:
                raise DomainError(f"singularity at z={p} inside [{lo}, {hi}]")


def constant_path(vector, alphabet=None) -> ConnectionPath:
    v = np.asarray(vector, dtype=float)
    alphabet = alphabet or len(v)

    def coefficients(z):
        return v.reshape((-1,) + (1,) * np.ndim(z)) * np.ones_like(z)

    return ConnectionPath(coefficients, alphabet)


def piecewise_constant_path(pieces, alphabet) -> ConnectionPath:
    """pieces: [(right end of the piece, vector), ...] in increasing order."""
    ends = np.array([p[0] for p in pieces], dtype=float)
    vecs = np.array([p[1] for p in pieces], dtype=float)

    def coefficients(z):
        idx = np.clip(np.searchsorted(ends, z, side="left"), 0, len(ends) - 1)
        return np.moveaxis(vecs[idx], -1, 0)

    return ConnectionPath(coefficients, alphabet, breakpoints=tuple(ends[:-1]))


def polynomial_path(coeffs) -> ConnectionPath:
    """coeffs[j] lists the power-basis coefficients of c_j, lowest first."""
    coeffs = [np.asarray(c, dtype=float) for c in coeffs]

    def coefficients(z):
        return np.stack([np.polynomial.polynomial.polyval(z, c) for c in coeffs])

    return ConnectionPath(coefficients, len(coeffs))


def kz_path() -> ConnectionPath:
    """A_0/z + A_1/(z-1), letters 0 and 1."""

    def coefficients(z):
        return np.stack([1.0 / z, 1.0 / (z - 1.0)])

    return ConnectionPath(coefficients, 2, singularities=(0.0, 1.0))


@lru_cache(maxsize=None)
def _word_index(alphabet, degree):
    words = sorted(
        (w for d in range(degree + 1) for w in product(range(alphabet), repeat=d)), key=word_key
    )
    index = {w: i for i, w in enumerate(words)}
    M = len(words)
    # left[j] @ v multiplies the series v on the left by x_j, dropping overflow
    left = np.zeros((alphabet, M, M))
    for w, i in index.items():
        if len(w) < degree:
            for j in range(alphabet):
                left[j, index[(j,) + w], i] = 1.0
    return words, index, left


def _to_series(alphabet, degree, v, tolerance=0.0):
    words, _, _ = _word_index(alphabet, degree)
    return NumericSeries(alphabet, degree, dict(zip(words, v)), tolerance)


def ode_transport(path: ConnectionPath, z0: float, z1: float, steps: int, degree: int = 4) -> NumericSeries:
    """Classical Runge–Kutta for G' = h(z) G, G(z0) = 1, returning G(z1).

    The interval is split at the path's breakpoints, steps shared in
    proportion to length, so no step straddles a jump.
    """
    if steps < 1:
        raise ValueError("steps must be >= 1")
    path.check_interval(z0, z1)
    lo, hi = min(z0, z1), max(z0, z1)
    cuts = sorted(p for p in path.breakpoints if lo < p < hi)
    if cuts:
        knots = [z0] + (cuts if z1 > z0 else cuts[::-1]) + [z1]
        total = abs(z1 - z0)
        G = None
        for a, b in zip(knots[:-1], knots[1:]):
            n = max(1, round(steps * abs(b - a) / total))
            piece = _rk4(path, a, b, n, degree)
            G = piece if G is None else mul(piece, G)
        return G
    return _rk4(path, z0, z1, steps, degree)


def _rk4(path, z0, z1, steps, degree):
    n = path.alphabet
    _, index, left = _word_index(n, degree)
    step = (z1 - z0) / steps
    grid = z0 + step * np.arange(steps + 1)
    grid[-1] = z1
    # endpoints sampled one ulp inside so a jump at the end of a segment is seen from the correct side
    sample = grid.copy()
    sample[0], sample[-1] = np.nextafter(z0, z1), np.nextafter(z1, z0)
    c_nodes = path.values(sample)
    c_mid = path.values(grid[:-1] + 0.5 * step)
    G = np.zeros(len(index))
    G[index[()]] = 1.0

    def rhs(c, v):
        return c @ (left @ v)

    for k in range(steps):
        ca, cm, cb = c_nodes[:, k], c_mid[:, k], c_nodes[:, k + 1]
        k1 = rhs(ca, G)
        k2 = rhs(cm, G + 0.5 * step * k1)
        k3 = rhs(cm, G + 0.5 * step * k2)
        k4 = rhs(cb, G + step * k3)
        G = G + (step / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
    return _to_series(n, degree, G)


def _logit_kz_path():
    # z = 1/(1+e^{-s}); dz/ds = z(1-z) turns A_0/z + A_1/(z-1) into A_0(1-z) - A_1 z
    def coefficients(s):
        z = 1.0 / (1.0 + np.exp(-s))
        return np.stack([1.0 - z, -z])

    return ConnectionPath(coefficients, 2)


def _boundary_slope(A, B):
    """K with (1 - ad_A) K = -B, i.e. K = -Σ_k ad_A^k B (finite by nilpotency)."""
    term = B
    K = B * 0.0
    while term:
        K = K - term
        term = mul(A, term) - mul(term, A)
    return K


def kz_associator_numeric(N: int, eps: float, steps: int = 20000, corrected: bool = True) -> NumericSeries:
    """G_1(1-ε)^{-1} · T(ε → 1-ε) · G_0(ε), the finite-ε associator.

    G_0 and G_1 are the solutions normalized as z^{A_0} at 0 and (1-z)^{A_1}
    at 1; their ratio G_1^{-1} G_0 is constant. Uncorrected, the cut-point
    values are ε^{A_0} and ε^{A_1}, which is ε^{-A_1} T ε^{A_0}. With
    `corrected`, the next term of the expansion at each end is kept:
    G_0(z) = (1 + z K_0 + O(z^2)) z^{A_0} with (1 - ad A_0) K_0 = -A_1, and
    symmetrically at 1. The transport runs in the logit variable, where the
    connection is bounded.
    """
    if not 0 < eps < 0.5:
        raise ValueError(f"eps must lie in (0, 1/2), got {eps}")
    s0 = math.log(eps / (1 - eps))
    T = ode_transport(_logit_kz_path(), s0, -s0, steps, N)
    le = math.log(eps)
    A0 = NumericSeries.generator(0, 2, N)
    A1 = NumericSeries.generator(1, 2, N)
    one = NumericSeries.one(2, N)
    G0 = exp(A0 * le)
    G1_inv = exp(A1 * -le)
    if corrected:
        G0 = mul(one + _boundary_slope(A0, A1) * eps, G0)
        G1_inv = mul(G1_inv, _inverse(one + _boundary_slope(A1, A0) * eps))
    return mul(mul(G1_inv, T), G0)


def kz_associator_extrapolated(N: int, eps=(1e-3, 5e-4), steps: int = 20000) -> NumericSeries:
    """Two-point Richardson extrapolation of `kz_associator_numeric` to ε = 0.

    Assumes the leading ε-dependence is linear. The attached tolerance is the
    size of the extrapolation correction.
    """
    e1, e2 = eps
    P1 = kz_associator_numeric(N, e1, steps)
    P2 = kz_associator_numeric(N, e2, steps)
    ext = (P2 * e1 - P1 * e2) * (1.0 / (e1 - e2))
    return ext.with_tolerance(ext.distance(P2))


def kz_associator_literal(N: int, eps: float, steps: int = 20000, midpoint: float = 0.5) -> NumericSeries:
    """The other orientation, G_1(z) G_0(z)^{-1}, evaluated at one interior z.

    Unlike G_1^{-1} G_0 this depends on z; it is exposed only so reports can
    show which orientation matches the series expansion.
    """
    path = _logit_kz_path()
    sm = math.log(midpoint / (1 - midpoint))
    s0 = math.log(eps / (1 - eps))
    le = math.log(eps)
    A0 = NumericSeries.generator(0, 2, N)
    A1 = NumericSeries.generator(1, 2, N)
    G0 = mul(ode_transport(path, s0, sm, steps, N), exp(A0 * le))
    G1 = mul(ode_transport(path, -s0, sm, steps, N), exp(A1 * le))
    G0_inv = _inverse(G0)
    return mul(G1, G0_inv)


def _inverse(X: NumericSeries) -> NumericSeries:
    one = X.one(X.alphabet, X.degree)
    Y = one - X * (1.0 / X.constant)
    out, power = one, one
    for _ in range(X.degree):
        power = mul(power, Y)
        out = out + power
    return out * (1.0 / X.constant)


@dataclass(frozen=True)
class SimplexIntegrator:
    """Composite Gauss–Legendre on `panels` panels per smooth piece.

    Every integral is computed on the mesh and on its halving; the difference
    is reported as the error estimate.
    """

    order: int = 16
    panels: int = 8
    max_halvings: int = 4
    tol: float = 1e-11

    def mesh(self, path, a, b):
        return Mesh.uniform(a, b, self.panels, self.order, path.breakpoints)


def _chen_on_mesh(path, mesh, N):
    c = path.values(mesh.nodes)
    n = path.alphabet
    running = {(): np.ones_like(mesh.nodes)}
    coeffs = {(): 1.0}
    for length in range(1, N + 1):
        nxt = {}
        for u, F in running.items():
            for j in range(n):
                g = c[j] * F
                w = (j,) + u
                coeffs[w] = mesh.integrate(g)
                if length < N:
                    nxt[w] = mesh.cumulative(g)
        running = nxt
    return coeffs


def chen_series(path: ConnectionPath, a: float, b: float, integrator: SimplexIntegrator | None = None, N: int = 4) -> NumericSeries:
    """Iterated integrals of the path, one per word.

    The coefficient of x_{j_n} ⋯ x_{j_1} is the integral over
    a ≤ z_1 ≤ ⋯ ≤ z_n ≤ b of c_{j_n}(z_n) ⋯ c_{j_1}(z_1), computed by
    recursive cumulative quadrature.
    """
    integrator = integrator or SimplexIntegrator()
    path.check_interval(a, b)
    mesh = integrator.mesh(path, a, b)
    prev = _chen_on_mesh(path, mesh, N)
    for _ in range(integrator.max_halvings):
        mesh = mesh.refined()
        cur = _chen_on_mesh(path, mesh, N)
        err = max(abs(cur[w] - prev[w]) for w in cur)
        if err <= integrator.tol:
            break
        prev = cur
    else:
        raise ResourceError(f"Chen series did not settle: last change {err:.3g}")
    return NumericSeries(path.alphabet, N, cur, tolerance=err)


def log_holonomy_cbh(path: ConnectionPath, a: float, b: float, integrator: SimplexIntegrator | None = None, N: int = 4) -> LieElement:
    """Σ_n ∫ CBH_n(h(z_n), …, h(z_1)) over the ordered simplex, in Lyndon coordinates.

    CBH_n is multilinear, so integrating it against the sampled path is the
    same as applying cbh to each iterated integral of the Chen series.
    """
    return cbh_map(chen_series(path, a, b, integrator, N))


def log_holonomy_cbh_direct(path: ConnectionPath, a: float, b: float, N: int = 3, points: int = 16, tol: float = 1e-9) -> LieElement:
    """Same right-hand side, by cubature of the sampled CBH_n values.

    The simplex a ≤ z_1 ≤ ⋯ ≤ z_n ≤ b is the image of the unit cube under
    z_n = a + (b-a) u_n, z_{i} = a + (z_{i+1} - a) u_i, and each CBH_n is
    evaluated on the actual vectors h(z_n), …, h(z_1) at every sample. Meant
    for smooth paths and small N.
    """
    path.check_interval(a, b)
    n_letters = path.alphabet
    u, wu = np.polynomial.legendre.leggauss(points)
    u = 0.5 * (u + 1.0)
    wu = 0.5 * wu
    terms = {}
    for n in range(1, N + 1):
        grids = np.meshgrid(*([u] * n), indexing="ij")
        weights = np.ones_like(grids[0])
        for g in np.meshgrid(*([wu] * n), indexing="ij"):
            weights = weights * g
        # grids[i] drives z_{i+1}
        z = [None] * n
        z[n - 1] = a + (b - a) * grids[n - 1]
        jac = np.full_like(weights, b - a)
        for i in range(n - 2, -1, -1):
            z[i] = a + (z[i + 1] - a) * grids[i]
            jac = jac * (z[i + 1] - a)
        wts = (weights * jac).ravel()
        # y_1 = h(z_n), …, y_n = h(z_1)
        ys = [path.values(z[n - 1 - k]).reshape(n_letters, -1) for k in range(n)]
        total = np.zeros((n_letters,) * n)
        for sigma, coef in cbh_multilinear_series(n).items():
            acc = ys[sigma[0]] * wts
            for pos in range(1, n):
                acc = np.einsum("i...p,jp->i...jp", acc, ys[sigma[pos]])
            total += float(coef) * acc.sum(axis=-1)
        for idx in np.ndindex(*total.shape):
            terms[idx] = terms.get(idx, 0.0) + total[idx]
    series = NumericSeries(n_letters, N, terms)
    return lie_coordinates(series, tol=tol)
