"""Le–Murakami expansion of the KZ associator and its logarithm.

Words over {A_0, A_1} are letter tuples read left to right, so (0, 1) is
A_0 A_1. The reversed index convention A_{i_n} ⋯ A_{i_1} of the expansion is
handled entirely inside `c_coefficients`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product

from .cbh import cbh_map
from .freealg import DomainError, NumericSeries, Series
from .freelie import LieElement


@dataclass(frozen=True, order=True)
class AdmissibleSeq:
    bits: tuple

    def __post_init__(self):
        bits = tuple(int(b) for b in self.bits)
        if any(b not in (0, 1) for b in bits):
            raise DomainError(f"{bits}: entries must be 0 or 1")
        if len(bits) < 2 or bits[0] != 1 or bits[-1] != 0:
            raise DomainError(f"{bits} is not admissible (need a_1 = 1 and a_n = 0)")
        object.__setattr__(self, "bits", bits)

    def __len__(self):
        return len(self.bits)

    def __str__(self):
        return ",".join(map(str, self.bits))

    @classmethod
    def parse(cls, text: str) -> "AdmissibleSeq":
        return cls(tuple(int(t) for t in text.replace(" ", "").split(",") if t))


# the formal symbol ω_a is identified with its index sequence
MZVSymbol = AdmissibleSeq


class MZVCombination:
    """Finite rational linear combination of ω-symbols."""

    __slots__ = ("_terms",)

    def __init__(self, terms=()):
        items = terms.items() if hasattr(terms, "items") else terms
        acc = {}
        for sym, c in items:
            if not isinstance(sym, AdmissibleSeq):
                sym = AdmissibleSeq(tuple(sym))
            acc[sym] = acc.get(sym, 0) + Fraction(c)
        self._terms = {k: acc[k] for k in sorted(acc, key=lambda a: (len(a), a.bits)) if acc[k]}

    @classmethod
    def symbol(cls, a, coefficient=1):
        return cls({a: coefficient})

    def items(self):
        return self._terms.items()

    def __getitem__(self, sym):
        if not isinstance(sym, AdmissibleSeq):
            sym = AdmissibleSeq(tuple(sym))
        return self._terms.get(sym, Fraction(0))

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if isinstance(other, MZVCombination):
            return self._terms == other._terms
        if other == 0:
            return not self._terms
        return NotImplemented

    __hash__ = None

    def __add__(self, other):
        if not isinstance(other, MZVCombination):
            if other == 0:
                return self
            return NotImplemented
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, 0) + c
        return MZVCombination(out)

    __radd__ = __add__

    def __neg__(self):
        return MZVCombination({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        if isinstance(scalar, MZVCombination):
            raise TypeError("products of ω-symbols are not represented")
        return MZVCombination({k: c * scalar for k, c in self._terms.items()})

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return MZVCombination({k: c / scalar for k, c in self._terms.items()})

    def evaluate(self, evaluator) -> float:
        total = 0.0
        for sym, c in self._terms.items():
            try:
                value = float(evaluator(sym))
            except Exception as exc:
                raise type(exc)(f"evaluating ω_{{{sym}}}: {exc}") from exc
            total += float(c) * value
        return total

    def __repr__(self):
        if not self._terms:
            return "0"
        return " + ".join(f"({c})ω[{k}]" for k, c in self._terms.items())

    def to_document(self):
        return [
            {"seq": str(k), "num": str(c.numerator), "den": str(c.denominator)}
            for k, c in self._terms.items()
        ]

    @classmethod
    def from_document(cls, doc):
        return cls({AdmissibleSeq.parse(t["seq"]): Fraction(int(t["num"]), int(t["den"])) for t in doc})


class SymbolicSeries(Series):
    """Series over {A_0, A_1} whose coefficients are ω-combinations."""

    __slots__ = ()

    @staticmethod
    def _coerce(c):
        if isinstance(c, MZVCombination):
            return c
        if c == 0:
            return MZVCombination()
        raise TypeError(f"SymbolicSeries coefficients are ω-combinations, got {c!r}")

    def __init__(self, degree, terms=(), alphabet=2):
        super().__init__(alphabet, degree, terms)

    @classmethod
    def _raw(cls, alphabet, degree, terms):
        return super()._raw(alphabet, degree, terms)

    @classmethod
    def one(cls, alphabet=2, degree=0):
        raise TypeError("the unit is not an ω-combination; keep constant terms separate")

    def __truediv__(self, other):
        return self._like({w: c / other for w, c in self.items()})

    def to_document(self) -> dict:
        terms = [{"word": list(w), "symbols": c.to_document()} for w, c in self.items()]
        return {"alphabet": self.alphabet, "degree": self.degree, "terms": terms}

    @classmethod
    def from_document(cls, doc):
        terms = {tuple(t["word"]): MZVCombination.from_document(t["symbols"]) for t in doc["terms"]}
        return cls(int(doc["degree"]), terms, int(doc.get("alphabet", 2)))

    def evaluate(self, evaluator, constant=1.0, tolerance=0.0) -> NumericSeries:
        terms = {w: c.evaluate(evaluator) for w, c in self.items()}
        terms[()] = terms.get((), 0.0) + constant
        return NumericSeries(self.alphabet, self.degree, terms, tolerance)


class PhiSymbolic:
    """Φ truncated at degree N: the constant 1 plus a SymbolicSeries.

    The unit is kept apart because it is a number, not an ω-combination.
    """

    def __init__(self, degree: int, higher: SymbolicSeries):
        self.degree = degree
        self.constant = Fraction(1)
        self.higher = higher

    def items(self):
        return self.higher.items()

    def __getitem__(self, w):
        return self.higher[w]

    def __eq__(self, other):
        if not isinstance(other, PhiSymbolic):
            return NotImplemented
        return self.degree == other.degree and self.higher == other.higher

    __hash__ = None

    def to_document(self) -> dict:
        doc = self.higher.to_document()
        doc["constant"] = "1"
        return doc

    def __repr__(self):
        return f"PhiSymbolic(1 + {self.higher!r})"


def admissible_seqs(n: int) -> list:
    """All admissible sequences of length n, lexicographically."""
    if n < 1:
        raise ValueError(f"length must be >= 1, got {n}")
    if n == 1:
        return []
    return [AdmissibleSeq((1,) + mid + (0,)) for mid in product((0, 1), repeat=n - 2)]


def c_coefficients(a) -> dict:
    """Integer coefficients C^a, keyed by the word A_{i_n} ⋯ A_{i_1} as written.

    Expands Σ_{S,T} (-1)^{|S|+|T|} A_1^{|T|} A(a)^{S,T} A_0^{|S|} over
    S ⊆ {α : a_α = 0}, T ⊆ {β : a_β = 1}, where A(a)^{S,T} multiplies the
    A_{a_α} with α ∉ S ∪ T in decreasing order of α. The index tuple
    (i_1, …, i_n) of a key is the key reversed.
    """
    if not isinstance(a, AdmissibleSeq):
        a = AdmissibleSeq(tuple(a))
    bits = a.bits
    n = len(bits)
    zeros = [al for al in range(n) if bits[al] == 0]
    ones = [be for be in range(n) if bits[be] == 1]
    out = {}
    for s_size in range(len(zeros) + 1):
        for S in combinations(zeros, s_size):
            for t_size in range(len(ones) + 1):
                for T in combinations(ones, t_size):
                    removed = set(S) | set(T)
                    middle = tuple(bits[al] for al in range(n - 1, -1, -1) if al not in removed)
                    w = (1,) * len(T) + middle + (0,) * len(S)
                    sign = -1 if (len(S) + len(T)) % 2 else 1
                    out[w] = out.get(w, 0) + sign
    return {w: c for w, c in sorted(out.items(), key=lambda kv: kv[0]) if c}


def phi_symbolic(N: int) -> PhiSymbolic:
    """1 + Σ_{2 ≤ n ≤ N} Σ_{a admissible} ω_a · Σ_w C^a_w w."""
    if N < 0:
        raise ValueError("degree must be >= 0")
    terms = {}
    for n in range(2, N + 1):
        for a in admissible_seqs(n):
            for w, c in c_coefficients(a).items():
                terms.setdefault(w, {})[a] = c
    higher = SymbolicSeries(N, {w: MZVCombination(t) for w, t in terms.items()})
    return PhiSymbolic(N, higher)


def log_phi_symbolic(N: int) -> LieElement:
    """Σ_n Σ_a Σ_i ω_a C^a_i cbh(A_{i_n} ⋯ A_{i_1}), built one sequence at a time."""
    if N < 0:
        raise ValueError("degree must be >= 0")
    total = LieElement(2, N)
    for n in range(2, N + 1):
        for a in admissible_seqs(n):
            image = cbh_map(Series(2, N, c_coefficients(a)))
            total = total + image * MZVCombination.symbol(a)
    return total


def cbh_of_phi_symbolic(N: int) -> LieElement:
    """cbh_map applied coefficientwise to phi_symbolic(N); cbh(1) = 0."""
    return cbh_map(phi_symbolic(N).higher)


def phi_numeric(N: int, evaluator) -> NumericSeries:
    """Substitute numbers for the ω-symbols of phi_symbolic(N)."""
    return phi_symbolic(N).higher.evaluate(evaluator, constant=1.0)


def lie_evaluate(ell: LieElement, evaluator) -> LieElement:
    """Numeric Lyndon coordinates from symbolic ones."""
    return LieElement(ell.alphabet, ell.degree, {w: c.evaluate(evaluator) for w, c in ell.items()})


def symbolic_lie_document(ell: LieElement) -> dict:
    from .freelie import BASIS_CONVENTION

    return {
        "alphabet": ell.alphabet,
        "degree": ell.degree,
        "basis": BASIS_CONVENTION,
        "terms": [{"word": list(w), "symbols": c.to_document()} for w, c in ell.items()],
    }
