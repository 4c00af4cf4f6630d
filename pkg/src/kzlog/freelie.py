"""Free Lie algebra in the Lyndon basis, and projections of F_n onto it.

Two independent routes to the projection onto the Lie part:

* `lie_project_p` inverts the symmetrization map S(f_n) -> F_n on each
  multidegree block and keeps the S^1 component;
* `eulerian_projection` applies the convolution logarithm of the identity.
"""

from __future__ import annotations

import heapq
import threading
from fractions import Fraction
from functools import lru_cache
from math import factorial, prod

from sympy import divisors, mobius
from sympy.utilities.iterables import multiset_permutations

from .freealg import (
    DomainError,
    NumericSeries,
    Series,
    letter_counts,
    mul,
    unshuffle_coproduct,
)

BASIS_CONVENTION = "lyndon-lex-standard-factorization"


def is_lyndon(w) -> bool:
    w = tuple(w)
    if not w:
        return False
    return all(w < w[i:] + w[:i] for i in range(1, len(w)))


def _lyndon_upto(alphabet, n):
    # Duval's generation, lexicographic order, all lengths <= n
    w = [-1]
    while w:
        w[-1] += 1
        yield tuple(w)
        m = len(w)
        while len(w) < n:
            w.append(w[len(w) - m])
        while w and w[-1] == alphabet - 1:
            w.pop()


@lru_cache(maxsize=None)
def _lyndon_table(alphabet, n):
    table = {}
    for w in _lyndon_upto(alphabet, n):
        table.setdefault(len(w), []).append(w)
    return table


def lyndon_basis(alphabet: int, degree: int) -> list:
    """Lyndon words of length `degree`, lexicographically sorted."""
    if degree < 1:
        raise ValueError(f"degree must be >= 1, got {degree}")
    return list(_lyndon_table(alphabet, degree).get(degree, []))


def lyndon_words_upto(alphabet: int, degree: int) -> list:
    out = []
    for d in range(1, degree + 1):
        out.extend(lyndon_basis(alphabet, d))
    return out


def witt_dimension(alphabet: int, degree: int) -> int:
    total = sum(mobius(e) * alphabet ** (degree // e) for e in divisors(degree))
    return total // degree


def standard_factorization(w):
    """Split a Lyndon word as uv with v its longest proper Lyndon suffix."""
    w = tuple(w)
    if not is_lyndon(w):
        raise DomainError(f"{w} is not a Lyndon word")
    if len(w) < 2:
        raise DomainError("a single letter has no standard factorization")
    for i in range(1, len(w)):
        if is_lyndon(w[i:]):
            return w[:i], w[i:]
    raise AssertionError("unreachable: last letter is always Lyndon")


@lru_cache(maxsize=None)
def _bracket_terms(w):
    if len(w) == 1:
        return {w: 1}
    u, v = standard_factorization(w)
    pu, pv = _bracket_terms(u), _bracket_terms(v)
    out = {}
    for a, ca in pu.items():
        for b, cb in pv.items():
            out[a + b] = out.get(a + b, 0) + ca * cb
            out[b + a] = out.get(b + a, 0) - ca * cb
    return {k: c for k, c in out.items() if c}


def bracketing(w, alphabet: int | None = None, degree: int | None = None) -> Series:
    """Expand the standard bracketing of a Lyndon word into a series."""
    w = tuple(w)
    if not is_lyndon(w):
        raise DomainError(f"{w} is not a Lyndon word")
    alphabet = alphabet or max(w) + 1
    degree = len(w) if degree is None else degree
    return Series(alphabet, degree, _bracket_terms(w))


class LieElement:
    """Element of the truncated free Lie algebra, in Lyndon coordinates.

    Coefficients may be exact rationals, floats or any type supporting +, -
    and multiplication by integers and fractions.
    """

    __slots__ = ("alphabet", "degree", "_coords")

    def __init__(self, alphabet: int, degree: int, coords=()):
        items = coords.items() if hasattr(coords, "items") else coords
        acc = {}
        for w, c in items:
            w = tuple(int(a) for a in w)
            if not is_lyndon(w):
                raise DomainError(f"{w} is not a Lyndon word")
            if any(a >= alphabet for a in w):
                raise ValueError(f"{w} uses letters outside alphabet of size {alphabet}")
            if len(w) > degree:
                continue
            if isinstance(c, int):
                c = Fraction(c)
            acc[w] = acc[w] + c if w in acc else c
        self.alphabet = alphabet
        self.degree = degree
        self._coords = {w: acc[w] for w in sorted(acc, key=lambda w: (len(w), w)) if acc[w]}

    def items(self):
        return self._coords.items()

    def __getitem__(self, w):
        return self._coords.get(tuple(w), 0)

    def __len__(self):
        return len(self._coords)

    def __bool__(self):
        return bool(self._coords)

    def __eq__(self, other):
        if not isinstance(other, LieElement):
            return NotImplemented
        return (
            self.alphabet == other.alphabet
            and self.degree == other.degree
            and self._coords == other._coords
        )

    __hash__ = None

    def __add__(self, other):
        if other.alphabet != self.alphabet or other.degree != self.degree:
            raise ValueError("alphabet/degree mismatch")
        out = dict(self._coords)
        for w, c in other._coords.items():
            out[w] = out[w] + c if w in out else c
        return LieElement(self.alphabet, self.degree, out)

    def __neg__(self):
        return LieElement(self.alphabet, self.degree, {w: -c for w, c in self._coords.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        return LieElement(self.alphabet, self.degree, {w: c * scalar for w, c in self._coords.items()})

    __rmul__ = __mul__

    def max_abs(self) -> float:
        return max((abs(float(c)) for c in self._coords.values()), default=0.0)

    def distance(self, other: "LieElement") -> float:
        keys = set(self._coords) | set(other._coords)
        return max((abs(float(self[w]) - float(other[w])) for w in keys), default=0.0)

    def expand(self, series_cls=None) -> Series:
        """The Lie polynomial these coordinates describe."""
        if series_cls is None:
            floats = any(isinstance(c, float) for c in self._coords.values())
            series_cls = NumericSeries if floats else Series
        out = {}
        for w, c in self._coords.items():
            for u, k in _bracket_terms(w).items():
                t = c * k
                out[u] = out[u] + t if u in out else t
        return series_cls(self.alphabet, self.degree, out)

    def __repr__(self):
        if not self._coords:
            return "LieElement(0)"
        body = " + ".join(f"({c})*P[{''.join(map(str, w))}]" for w, c in self._coords.items())
        return f"LieElement({body})"

    def to_document(self) -> dict:
        terms = []
        for w, c in self._coords.items():
            if isinstance(c, float):
                terms.append({"word": list(w), "value": repr(c)})
            else:
                c = Fraction(c)
                terms.append({"word": list(w), "num": str(c.numerator), "den": str(c.denominator)})
        return {
            "alphabet": self.alphabet,
            "degree": self.degree,
            "basis": BASIS_CONVENTION,
            "terms": terms,
        }

    @classmethod
    def from_document(cls, doc) -> "LieElement":
        if doc.get("basis", BASIS_CONVENTION) != BASIS_CONVENTION:
            raise ValueError(f"unsupported basis convention {doc['basis']!r}")
        coords = {}
        for t in doc["terms"]:
            if "value" in t:
                coords[tuple(t["word"])] = float(t["value"])
            else:
                coords[tuple(t["word"])] = Fraction(int(t["num"]), int(t["den"]))
        return cls(int(doc["alphabet"]), int(doc["degree"]), coords)


def lie_coordinates(X: Series, tol: float | None = None) -> LieElement:
    """Lyndon coordinates of a Lie polynomial.

    The bracketing of a Lyndon word w is w plus lexicographically larger words
    of the same length, so peeling off Lyndon words in increasing order is
    triangular. Whatever is left must vanish (exactly, or within `tol`),
    otherwise X is not a Lie element.
    """
    if X.constant if tol is None else abs(float(X.constant)) > tol:
        raise DomainError(f"Lie elements have no constant term, got {X.constant}")
    residual = {w: c for w, c in X.items() if w}
    coords = {}
    for d in range(1, X.degree + 1):
        # bracketing only adds larger words, so a min-heap visits each word once
        heap = [w for w in residual if len(w) == d]
        heapq.heapify(heap)
        seen = set(heap)
        while heap:
            ell = heapq.heappop(heap)
            c = residual[ell]
            if not c or not is_lyndon(ell):
                continue
            coords[ell] = c
            for u, k in _bracket_terms(ell).items():
                if u in residual:
                    residual[u] = residual[u] - c * k
                else:
                    residual[u] = -(c * k)
                if u not in seen:
                    seen.add(u)
                    heapq.heappush(heap, u)
    for w, c in residual.items():
        bad = c if tol is None else abs(float(c)) > tol
        if bad:
            raise DomainError(f"not a Lie element: residual {c} on word {w}")
    return LieElement(X.alphabet, X.degree, coords)


# --- PBW basis and the symmetrization projection ---


def _lyndon_with_counts(alphabet, counts):
    n = sum(counts)
    out = []
    for w in _lyndon_upto(alphabet, n):
        d = letter_counts(w, alphabet)
        if all(x <= m for x, m in zip(d, counts)):
            out.append((w, d))
    return sorted(out, key=lambda item: item[0])


def pbw_monomials(alphabet: int, counts) -> list:
    """Nonincreasing tuples of Lyndon words whose letter counts add to `counts`.

    Ordered by number of factors, then lexicographically.
    """
    counts = tuple(counts)
    pool = _lyndon_with_counts(alphabet, counts)
    out = []

    def extend(prefix, remaining, start):
        if not any(remaining):
            out.append(tuple(prefix))
            return
        # nonincreasing in the fixed Lyndon order: only reuse indices >= start
        for i in range(start, len(pool)):
            w, d = pool[i]
            if all(x <= r for x, r in zip(d, remaining)):
                prefix.append(w)
                extend(prefix, tuple(r - x for r, x in zip(remaining, d)), i)
                prefix.pop()

    extend([], counts, 0)
    # sequences were built in increasing pool order; store them nonincreasing
    monos = [tuple(reversed(m)) for m in out]
    return sorted(monos, key=lambda m: (len(m), m))


def symmetrize(m, alphabet: int | None = None, degree: int | None = None) -> Series:
    """(1/k!) Σ_σ P[l_σ(1)] ⋯ P[l_σ(k)] for the PBW monomial m = (l_1, …, l_k)."""
    m = tuple(tuple(w) for w in m)
    if alphabet is None:
        alphabet = max((max(w) for w in m), default=0) + 1
    total = sum(len(w) for w in m)
    degree = total if degree is None else degree
    return Series(alphabet, degree, _symmetrize_terms(m))


@lru_cache(maxsize=None)
def _symmetrize_terms(m):
    k = len(m)
    if k == 0:
        return {(): Fraction(1)}
    mult = {}
    for w in m:
        mult[w] = mult.get(w, 0) + 1
    weight = Fraction(prod(factorial(v) for v in mult.values()), factorial(k))
    alphabet = max(max(w) for w in m) + 1
    total = sum(len(w) for w in m)
    brackets = {w: Series(alphabet, total, _bracket_terms(w)) for w in mult}
    acc = Series.zero(alphabet, total)
    for order in multiset_permutations(list(m)):
        term = Series.one(alphabet, total)
        for w in order:
            term = mul(term, brackets[tuple(w)])
        acc = acc + term
    return {w: c * weight for w, c in acc.items()}


def _words_with_counts(alphabet, counts):
    letters = [a for a, c in enumerate(counts) for _ in range(c)]
    return sorted(tuple(p) for p in multiset_permutations(letters))


def _invert(matrix):
    """Exact inverse of a square matrix of Fractions by Gauss–Jordan elimination."""
    n = len(matrix)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(matrix)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            raise ArithmeticError("singular PBW change-of-basis matrix")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = 1 / aug[col][col]
        row = aug[col]
        for j in range(col, 2 * n):
            row[j] *= inv
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                other = aug[r]
                for j in range(col, 2 * n):
                    if row[j]:
                        other[j] -= f * row[j]
    return [row[n:] for row in aug]


_block_lock = threading.Lock()
_blocks: dict = {}


def _projection_block(alphabet, counts):
    """word -> {Lyndon word: coefficient} giving p on one multidegree block."""
    key = (alphabet, counts)
    block = _blocks.get(key)
    if block is not None:
        return block
    words = _words_with_counts(alphabet, counts)
    monos = pbw_monomials(alphabet, counts)
    if len(monos) != len(words):
        raise ArithmeticError(
            f"PBW count {len(monos)} != word count {len(words)} for multidegree {counts}"
        )
    index = {w: i for i, w in enumerate(words)}
    # column j of M is symmetrize(monos[j]) written in the word basis
    M = [[Fraction(0)] * len(monos) for _ in words]
    for j, m in enumerate(monos):
        for w, c in _symmetrize_terms(m).items():
            M[index[w]][j] = c
    Minv = _invert(M)
    block = {}
    for j, m in enumerate(monos):
        if len(m) != 1:
            continue
        ell = m[0]
        for w, i in index.items():
            c = Minv[j][i]
            if c:
                block.setdefault(w, {})[ell] = c
    with _block_lock:
        _blocks.setdefault(key, block)
    return _blocks[key]


def p_of_word(w, alphabet: int) -> dict:
    """Lyndon coordinates of the S^1 component of sym^{-1}(w)."""
    w = tuple(w)
    if not w:
        return {}
    return _projection_block(alphabet, letter_counts(w, alphabet)).get(w, {})


def lie_project_p(X: Series) -> LieElement:
    """The projection F_n -> f_n through the inverse of symmetrization.

    The constant term is sent to 0.
    """
    coords = {}
    for w, c in X.items():
        for ell, k in p_of_word(w, X.alphabet).items():
            t = c * k
            coords[ell] = coords[ell] + t if ell in coords else t
    return LieElement(X.alphabet, X.degree, coords)


# --- Eulerian idempotent ---


@lru_cache(maxsize=None)
def _reduced_convolution_power(w, k):
    """(id - ε)^{*k} applied to the word w, as {word: integer}."""
    n = len(w)
    if k == 1:
        return {w: 1} if n else {}
    if n < k:
        return {}
    out = {}
    positions = range(n)
    # first factor takes a nonempty proper subword, the rest recurse
    for mask in range(1, (1 << n) - 1):
        left = tuple(w[i] for i in positions if mask >> i & 1)
        right = tuple(w[i] for i in positions if not mask >> i & 1)
        for v, c in _reduced_convolution_power(right, k - 1).items():
            u = left + v
            out[u] = out.get(u, 0) + c
    return {u: c for u, c in out.items() if c}


@lru_cache(maxsize=None)
def _eulerian_word(w):
    out = {}
    for k in range(1, len(w) + 1):
        coeff = Fraction((-1) ** (k - 1), k)
        for u, c in _reduced_convolution_power(w, k).items():
            out[u] = out.get(u, 0) + coeff * c
    return {u: c for u, c in out.items() if c}


def eulerian_projection(X: Series) -> Series:
    """Σ_k ((-1)^{k-1}/k) m^{(k-1)} ∘ π^{⊗k} ∘ Δ^{(k-1)} applied to X."""
    out = {}
    for w, c in X.items():
        for u, k in _eulerian_word(w).items():
            t = c * k
            out[u] = out[u] + t if u in out else t
    return X._like(out)


def is_primitive(X: Series, tol: float | None = None) -> bool:
    """Δ(X) = X⊗1 + 1⊗X, exactly or within `tol`.

    Δ(X) always carries X[w] on w⊗1 and 1⊗w, so this amounts to a vanishing
    constant term and vanishing cross terms u⊗v with u, v nonempty.
    """
    if tol is None:
        if X.constant:
            return False
        return all(not c for (u, v), c in unshuffle_coproduct(X).items() if u and v)
    if abs(float(X.constant)) > tol:
        return False
    return all(abs(float(c)) <= tol for (u, v), c in unshuffle_coproduct(X).items() if u and v)
