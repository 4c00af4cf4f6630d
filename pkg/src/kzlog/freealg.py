"""Truncated free associative algebra over an alphabet of integer letters.

A word is a tuple of letter indices. A series is a finite map word -> coefficient
holding every word of length <= its truncation degree. Words are always iterated
in (length, lexicographic) order.

`Series` carries exact rational coefficients. `NumericSeries` is its float twin,
used for ODE transports and numeric associators; the two share all of the
arithmetic below, which only needs +, - and * on coefficients.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Iterator, Mapping


class AlgebraError(Exception):
    pass


class StructureMismatch(AlgebraError, ValueError):
    """Operands live in different truncated algebras."""


class DomainError(AlgebraError, ValueError):
    """An operation's precondition on its input does not hold."""


Word = tuple


def word_key(w):
    return (len(w), w)


def all_words(alphabet: int, length: int) -> Iterator[tuple]:
    """Words of exactly `length` letters, in lexicographic order."""
    if length == 0:
        yield ()
        return
    for head in range(alphabet):
        for tail in all_words(alphabet, length - 1):
            yield (head,) + tail


def letter_counts(w, alphabet: int) -> tuple:
    counts = [0] * alphabet
    for a in w:
        counts[a] += 1
    return tuple(counts)


class Series:
    """Exact truncated noncommutative power series.

    Instances are immutable; every operation returns a new series. Zero
    coefficients are never stored, so equality is equality of term maps.
    """

    __slots__ = ("alphabet", "degree", "_terms")

    @staticmethod
    def _coerce(c):
        if isinstance(c, float):
            raise TypeError("Series holds exact coefficients; use NumericSeries for floats")
        return Fraction(c)

    def __init__(self, alphabet: int, degree: int, terms: Mapping | Iterable = ()):
        if alphabet < 1:
            raise ValueError(f"alphabet size must be positive, got {alphabet}")
        if degree < 0:
            raise ValueError(f"truncation degree must be >= 0, got {degree}")
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc = {}
        for w, c in items:
            w = tuple(int(a) for a in w)
            for a in w:
                if not 0 <= a < alphabet:
                    raise ValueError(f"letter {a} outside alphabet of size {alphabet}")
            if len(w) > degree:
                continue
            c = self._coerce(c)
            acc[w] = acc[w] + c if w in acc else c
        self.alphabet = alphabet
        self.degree = degree
        self._terms = {w: acc[w] for w in sorted(acc, key=word_key) if acc[w]}

    @classmethod
    def _raw(cls, alphabet, degree, terms):
        # terms already validated; drops zeros and fixes the order
        obj = object.__new__(cls)
        obj.alphabet = alphabet
        obj.degree = degree
        obj._terms = {w: terms[w] for w in sorted(terms, key=word_key) if terms[w]}
        return obj

    def _like(self, terms):
        return self._raw(self.alphabet, self.degree, terms)

    # construction helpers

    @classmethod
    def zero(cls, alphabet, degree):
        return cls._raw(alphabet, degree, {})

    @classmethod
    def one(cls, alphabet, degree):
        return cls(alphabet, degree, {(): 1})

    @classmethod
    def generator(cls, i, alphabet, degree):
        return cls(alphabet, degree, {(i,): 1})

    @classmethod
    def word(cls, w, alphabet, degree, coefficient=1):
        return cls(alphabet, degree, {tuple(w): coefficient})

    # mapping-like access

    def __getitem__(self, w):
        return self._terms.get(tuple(w), self._coerce(0))

    def items(self):
        return self._terms.items()

    def words(self):
        return self._terms.keys()

    def __iter__(self):
        return iter(self._terms)

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    @property
    def constant(self):
        return self[()]

    def homogeneous(self, d: int) -> "Series":
        return self._like({w: c for w, c in self._terms.items() if len(w) == d})

    def max_abs(self) -> float:
        return max((abs(float(c)) for c in self._terms.values()), default=0.0)

    def map_coefficients(self, fn, cls=None):
        cls = cls or type(self)
        return cls(self.alphabet, self.degree, {w: fn(c) for w, c in self._terms.items()})

    # arithmetic

    def _check(self, other):
        if not isinstance(other, Series):
            raise TypeError(f"expected a series, got {type(other).__name__}")
        if other.alphabet != self.alphabet or other.degree != self.degree:
            raise StructureMismatch(
                f"alphabet/degree mismatch: ({self.alphabet}, {self.degree}) vs "
                f"({other.alphabet}, {other.degree})"
            )

    def __eq__(self, other):
        if not isinstance(other, Series):
            return NotImplemented
        return (
            self.alphabet == other.alphabet
            and self.degree == other.degree
            and self._terms == other._terms
        )

    __hash__ = None

    def __add__(self, other):
        if not isinstance(other, Series):
            if other == 0:
                return self
            return self + self.one(self.alphabet, self.degree) * other
        self._check(other)
        out = dict(self._terms)
        for w, c in other._terms.items():
            out[w] = out[w] + c if w in out else c
        return self._like(out)

    __radd__ = __add__

    def __neg__(self):
        return self._like({w: -c for w, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Series):
            return mul(self, other)
        return self._like({w: c * other for w, c in self._terms.items()})

    def __rmul__(self, other):
        return self._like({w: other * c for w, c in self._terms.items()})

    def __truediv__(self, other):
        if isinstance(other, int):
            other = Fraction(other)
        return self._like({w: c / other for w, c in self._terms.items()})

    def __pow__(self, k: int):
        out = self.one(self.alphabet, self.degree)
        for _ in range(k):
            out = mul(out, self)
        return out

    def __repr__(self):
        if not self._terms:
            return f"{type(self).__name__}(0)"
        parts = []
        for w, c in self._terms.items():
            name = "".join(f"x{a}" for a in w) or "1"
            parts.append(f"({c})*{name}")
        return f"{type(self).__name__}({' + '.join(parts)})"

    # serialization

    def to_document(self) -> dict:
        terms = []
        for w, c in self._terms.items():
            c = Fraction(c)
            terms.append({"word": list(w), "num": str(c.numerator), "den": str(c.denominator)})
        return {"alphabet": self.alphabet, "degree": self.degree, "terms": terms}

    @classmethod
    def from_document(cls, doc: Mapping) -> "Series":
        terms = {
            tuple(t["word"]): Fraction(int(t["num"]), int(t["den"])) for t in doc["terms"]
        }
        return cls(int(doc["alphabet"]), int(doc["degree"]), terms)


class NumericSeries(Series):
    """Truncated series with float coefficients."""

    __slots__ = ("tolerance",)

    @staticmethod
    def _coerce(c):
        c = float(c)
        if not math.isfinite(c):
            raise ValueError(f"non-finite coefficient {c}")
        return c

    def __init__(self, alphabet, degree, terms=(), tolerance: float = 0.0):
        super().__init__(alphabet, degree, terms)
        self.tolerance = float(tolerance)

    @classmethod
    def _raw(cls, alphabet, degree, terms):
        obj = super()._raw(alphabet, degree, terms)
        obj.tolerance = 0.0
        return obj

    def _like(self, terms):
        obj = self._raw(self.alphabet, self.degree, terms)
        obj.tolerance = self.tolerance
        return obj

    def with_tolerance(self, tolerance):
        obj = self._like(self._terms)
        obj.tolerance = float(tolerance)
        return obj

    def __truediv__(self, other):
        return self._like({w: c / other for w, c in self._terms.items()})

    @classmethod
    def from_exact(cls, X: Series, tolerance=0.0):
        return cls(X.alphabet, X.degree, {w: float(c) for w, c in X.items()}, tolerance)

    def distance(self, other: Series) -> float:
        """Max-norm of the coefficient difference."""
        if other.alphabet != self.alphabet or other.degree != self.degree:
            raise StructureMismatch("alphabet/degree mismatch")
        keys = set(self.words()) | set(other.words())
        return max((abs(float(self[w]) - float(other[w])) for w in keys), default=0.0)

    def to_document(self) -> dict:
        terms = [{"word": list(w), "value": repr(c)} for w, c in self.items()]
        return {
            "alphabet": self.alphabet,
            "degree": self.degree,
            "tolerance": self.tolerance,
            "terms": terms,
        }

    @classmethod
    def from_document(cls, doc):
        terms = {tuple(t["word"]): float(t["value"]) for t in doc["terms"]}
        return cls(int(doc["alphabet"]), int(doc["degree"]), terms, doc.get("tolerance", 0.0))


def mul(a: Series, b: Series, bound: tuple | None = None) -> Series:
    """Concatenation product truncated at the common degree.

    With `bound`, only words whose letter counts stay componentwise below
    `bound` are kept. That quotient is multiplicative, so the kept part of a
    product only depends on the kept parts of its factors.
    """
    a._check(b)
    N = a.degree
    out = {}
    if bound is None:
        b_by_len = {}
        for v, c in b.items():
            b_by_len.setdefault(len(v), []).append((v, c))
        for u, cu in a.items():
            room = N - len(u)
            for length in range(room + 1):
                for v, cv in b_by_len.get(length, ()):
                    w = u + v
                    p = cu * cv
                    out[w] = out[w] + p if w in out else p
        return a._like(out)

    n = a.alphabet
    groups_a = _group_by_counts(a, n, bound)
    groups_b = _group_by_counts(b, n, bound)
    for da, terms_a in groups_a.items():
        for db, terms_b in groups_b.items():
            total = tuple(x + y for x, y in zip(da, db))
            if sum(total) > N or any(t > m for t, m in zip(total, bound)):
                continue
            for u, cu in terms_a:
                for v, cv in terms_b:
                    w = u + v
                    p = cu * cv
                    out[w] = out[w] + p if w in out else p
    return a._like(out)


def _group_by_counts(X, n, bound):
    groups = {}
    for w, c in X.items():
        d = letter_counts(w, n)
        if any(x > m for x, m in zip(d, bound)):
            continue
        groups.setdefault(d, []).append((w, c))
    return groups


class TensorSeries:
    """Element of F ⊗ F truncated at total degree N: (u, v) -> coefficient."""

    __slots__ = ("degree", "_terms")

    def __init__(self, degree: int, terms: Mapping):
        self.degree = degree
        self._terms = {
            k: terms[k]
            for k in sorted(terms, key=lambda uv: (len(uv[0]) + len(uv[1]), uv))
            if terms[k]
        }

    def items(self):
        return self._terms.items()

    def __getitem__(self, uv):
        return self._terms.get(uv, 0)

    def __len__(self):
        return len(self._terms)

    def __eq__(self, other):
        if not isinstance(other, TensorSeries):
            return NotImplemented
        return self.degree == other.degree and self._terms == other._terms

    __hash__ = None

    def __sub__(self, other):
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out[k] - c if k in out else -c
        return TensorSeries(self.degree, out)

    def max_abs(self) -> float:
        return max((abs(float(c)) for c in self._terms.values()), default=0.0)

    def __repr__(self):
        return f"TensorSeries({self._terms!r})"


def _split_word(w):
    """All (subword at S, subword at complement) pairs over position subsets S."""
    n = len(w)
    idx = range(n)
    for k in range(n + 1):
        for S in combinations(idx, k):
            chosen = set(S)
            yield (
                tuple(w[i] for i in S),
                tuple(w[i] for i in idx if i not in chosen),
            )


def unshuffle_coproduct(X: Series) -> TensorSeries:
    """The coproduct for which every letter is primitive."""
    out = {}
    for w, c in X.items():
        for pair in _split_word(w):
            out[pair] = out[pair] + c if pair in out else c
    return TensorSeries(X.degree, out)


def outer(X: Series, Y: Series) -> TensorSeries:
    """X ⊗ Y restricted to total degree <= N."""
    X._check(Y)
    N = X.degree
    out = {}
    for u, cu in X.items():
        for v, cv in Y.items():
            if len(u) + len(v) <= N:
                out[(u, v)] = cu * cv
    return TensorSeries(N, out)


def grouplike_defect(X: Series, tol: float | None = None):
    """First tensor coefficient where Δ(X) and X⊗X differ, or None.

    Returns ((u, v), coefficient in Δ(X), coefficient in X⊗X). With `tol`,
    differences up to `tol` in absolute value are accepted.
    """
    lhs = unshuffle_coproduct(X)
    rhs = outer(X, X)
    keys = sorted(
        set(k for k, _ in lhs.items()) | set(k for k, _ in rhs.items()),
        key=lambda uv: (len(uv[0]) + len(uv[1]), uv),
    )
    for k in keys:
        left, right = lhs[k], rhs[k]
        if tol is None:
            if left != right:
                return k, left, right
        elif abs(float(left) - float(right)) > tol:
            return k, left, right
    return None


def is_grouplike(X: Series, tol: float | None = None) -> bool:
    """Constant term 1 and Δ(X) = X⊗X, exactly or within `tol`."""
    c0 = X.constant
    if tol is None:
        if c0 != 1:
            return False
    elif abs(float(c0) - 1.0) > tol:
        return False
    return grouplike_defect(X, tol) is None


def exp(ell: Series, bound: tuple | None = None) -> Series:
    """Truncated exponential of a series without constant term."""
    if ell.constant:
        raise DomainError(f"exp needs zero constant term, got {ell.constant}")
    one = ell.one(ell.alphabet, ell.degree)
    out = one
    power = one
    for k in range(1, ell.degree + 1):
        power = mul(power, ell, bound) / k
        if not power:
            break
        out = out + power
    return out


def log(X: Series, bound: tuple | None = None) -> Series:
    """Truncated logarithm of a series with constant term 1."""
    if X.constant != 1:
        raise DomainError(f"log needs constant term 1, got {X.constant}")
    one = X.one(X.alphabet, X.degree)
    Y = X - one
    out = X.zero(X.alphabet, X.degree)
    power = one
    for k in range(1, X.degree + 1):
        power = mul(power, Y, bound)
        if not power:
            break
        term = power / k
        out = out + term if k % 2 else out - term
    return out


def multidegree_component(X: Series, d) -> Series:
    """Keep the words in which letter i occurs exactly d[i] times."""
    d = tuple(d)
    if len(d) != X.alphabet:
        raise ValueError(f"multidegree has {len(d)} entries, alphabet has {X.alphabet}")
    return X._like({w: c for w, c in X.items() if letter_counts(w, X.alphabet) == d})


def multidegrees(X: Series) -> list:
    return sorted({letter_counts(w, X.alphabet) for w in X.words()})
