"""Composite Gauss–Legendre panels with cumulative (indefinite) integration.

A mesh is a sorted array of panel edges. On each panel the integrand is
sampled at Gauss–Legendre nodes; `cumulative` returns the running integral
from the left end of the mesh evaluated at every node, which is what
recursive iterated integrals need.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np
from numpy.polynomial import legendre as L


@lru_cache(maxsize=None)
def rule(order: int):
    """Nodes, weights and the node-to-node antiderivative matrix on [-1, 1]."""
    x, w = L.leggauss(order)
    V = L.legvander(x, order - 1)
    lagrange = np.linalg.inv(V)  # column j: Legendre coefficients of the j-th Lagrange basis
    anti = L.legint(lagrange, lbnd=-1, axis=0)
    Q = L.legvander(x, order) @ anti
    x.flags.writeable = w.flags.writeable = Q.flags.writeable = False
    return x, w, Q


class Mesh:
    """Panels [edges[i], edges[i+1]] sampled at `order` Gauss nodes each.

    `gaps[i]` is the distance from edges[i] to the right end of the mesh. A
    graded mesh supplies it directly so that `right_gap` (the same distance at
    every node) stays accurate where 1 - node would cancel.
    """

    def __init__(self, edges, order: int, gaps=None):
        edges = np.asarray(edges, dtype=float)
        if gaps is None:
            gaps = edges[-1] - edges
            widths = np.diff(edges)
        else:
            gaps = np.asarray(gaps, dtype=float)
            # take each width from whichever coordinate is small there
            widths = np.where(gaps[1:] >= edges[1:], np.diff(edges), -np.diff(gaps))
        if np.any(widths <= 0):
            raise ValueError("panel edges must be strictly increasing")
        x, w, Q = rule(order)
        self.order = order
        self.edges = edges
        self.gaps = gaps
        self.half = 0.5 * widths
        mid = 0.5 * (edges[1:] + edges[:-1])
        self.nodes = mid[:, None] + self.half[:, None] * x[None, :]
        gmid = 0.5 * (gaps[1:] + gaps[:-1])
        ghalf = 0.5 * (gaps[:-1] - gaps[1:])
        self.right_gap = gmid[:, None] - ghalf[:, None] * x[None, :]
        self._w = w
        self._Q = Q

    @classmethod
    def uniform(cls, a, b, panels, order, breakpoints=()):
        cuts = sorted({a, b, *(p for p in breakpoints if a < p < b)})
        edges = []
        for lo, hi in zip(cuts[:-1], cuts[1:]):
            edges.extend(np.linspace(lo, hi, panels + 1)[:-1])
        edges.append(b)
        return cls(edges, order)

    @classmethod
    def graded(cls, order, ratio=0.25, smallest=1e-30, middle=0.5):
        """Mesh of [0, 1] refined geometrically toward both ends."""
        left = [0.0]
        d = smallest
        while d < middle:
            left.append(d)
            d /= ratio
        right = []  # distances to 1, decreasing
        d = (1.0 - middle) * ratio
        while d > smallest:
            right.append(d)
            d *= ratio
        right += [smallest, 0.0]
        edges = np.array(left + [middle] + [1.0 - g for g in right])
        gaps = np.array([1.0 - e for e in left] + [1.0 - middle] + right)
        return cls(edges, order, gaps)

    def refined(self):
        """Every panel split in two, same order."""
        edges = np.empty(2 * len(self.edges) - 1)
        edges[0::2] = self.edges
        edges[1::2] = 0.5 * (self.edges[1:] + self.edges[:-1])
        gaps = np.empty_like(edges)
        gaps[0::2] = self.gaps
        gaps[1::2] = 0.5 * (self.gaps[1:] + self.gaps[:-1])
        return Mesh(edges, self.order, gaps)

    def integrate(self, f):
        """Definite integral over the whole mesh of samples f (panels x order)."""
        return float(np.sum(self.half * (f @ self._w)))

    def cumulative(self, f):
        """Running integral from the left end, at every node (panels x order)."""
        within = self.half[:, None] * (f @ self._Q.T)
        totals = self.half * (f @ self._w)
        offsets = np.concatenate([[0.0], np.cumsum(totals)[:-1]])
        return offsets[:, None] + within
