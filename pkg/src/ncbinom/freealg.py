"""Free associative algebra with unit over the exact cyclotomic scalars.

Polynomials are finite linear combinations of words over a fixed ordered
alphabet of named generators.  Nothing here knows about commutation
relations; products simply concatenate words.  The empty word is the
unit I.

Values are immutable after construction (term dicts are never mutated),
so they can be shared freely.  Equality is exact, term by term.
"""

from __future__ import annotations

from dataclasses import dataclass

from .scalars import ZERO, CycloScalar, scalar_from_json, scalar_to_json

Word = tuple[int, ...]

EMPTY_WORD: Word = ()


@dataclass(frozen=True)
class Alphabet:
    """Ordered generator names; the position in `names` is the order index."""

    names: tuple[str, ...]

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"duplicate generator names in {self.names}")

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown generator {name!r}; alphabet is {self.names}") from None

    def __len__(self) -> int:
        return len(self.names)

    def word_str(self, word: Word) -> str:
        if not word:
            return "I"
        return " ".join(self.names[i] for i in word)


class NcPoly:
    """Finite map word -> nonzero scalar coefficient, over one alphabet."""

    __slots__ = ("alphabet", "terms")

    def __init__(self, alphabet: Alphabet, terms: dict[Word, CycloScalar] | None = None):
        object.__setattr__(self, "alphabet", alphabet)
        clean = {}
        if terms:
            for word, coeff in terms.items():
                coeff = CycloScalar.of(coeff)
                if not coeff.is_zero:
                    clean[tuple(word)] = coeff
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("NcPoly is immutable")

    # ---- constructors -------------------------------------------------

    @classmethod
    def _raw(cls, alphabet: Alphabet, clean_terms: dict[Word, CycloScalar]) -> NcPoly:
        # internal fast path: terms must already be pruned and coerced
        obj = object.__new__(cls)
        object.__setattr__(obj, "alphabet", alphabet)
        object.__setattr__(obj, "terms", clean_terms)
        return obj

    @staticmethod
    def zero(alphabet: Alphabet) -> NcPoly:
        return NcPoly(alphabet)

    @staticmethod
    def unit(alphabet: Alphabet) -> NcPoly:
        return NcPoly(alphabet, {EMPTY_WORD: CycloScalar.of(1)})

    @staticmethod
    def generator(alphabet: Alphabet, name: str) -> NcPoly:
        return NcPoly(alphabet, {(alphabet.index(name),): CycloScalar.of(1)})

    @staticmethod
    def scalar(alphabet: Alphabet, value) -> NcPoly:
        return NcPoly(alphabet, {EMPTY_WORD: CycloScalar.of(value)})

    # ---- structure ----------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, *names: str) -> CycloScalar:
        word = tuple(self.alphabet.index(n) for n in names)
        return self.terms.get(word, ZERO)

    def max_word_length(self) -> int:
        return max((len(w) for w in self.terms), default=0)

    def letter_degree(self, name: str) -> int:
        """Largest number of occurrences of one generator in any word."""
        idx = self.alphabet.index(name)
        return max((w.count(idx) for w in self.terms), default=0)

    def _require_same_alphabet(self, other: NcPoly) -> None:
        if self.alphabet != other.alphabet:
            raise ValueError(
                f"alphabet mismatch: {self.alphabet.names} vs {other.alphabet.names}"
            )

    # ---- arithmetic ---------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, NcPoly):
            return NotImplemented
        return self.alphabet == other.alphabet and self.terms == other.terms

    def __add__(self, other: NcPoly) -> NcPoly:
        if not isinstance(other, NcPoly):
            return NotImplemented
        self._require_same_alphabet(other)
        out = dict(self.terms)
        for word, coeff in other.terms.items():
            acc = out.get(word)
            if acc is None:
                out[word] = coeff
            else:
                total = acc + coeff
                if total.is_zero:
                    del out[word]
                else:
                    out[word] = total
        return NcPoly._raw(self.alphabet, out)

    def __neg__(self) -> NcPoly:
        return NcPoly._raw(self.alphabet, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other: NcPoly) -> NcPoly:
        if not isinstance(other, NcPoly):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other) -> NcPoly:
        if isinstance(other, NcPoly):
            self._require_same_alphabet(other)
            out: dict[Word, CycloScalar] = {}
            for w1, c1 in self.terms.items():
                for w2, c2 in other.terms.items():
                    word = w1 + w2
                    prod = c1 * c2
                    acc = out.get(word)
                    out[word] = prod if acc is None else acc + prod
            return NcPoly._raw(
                self.alphabet, {w: c for w, c in out.items() if not c.is_zero}
            )
        return self._scaled(other)

    def __rmul__(self, other) -> NcPoly:
        return self._scaled(other)

    def _scaled(self, value) -> NcPoly:
        c = CycloScalar.of(value)
        if c.is_zero:
            return NcPoly._raw(self.alphabet, {})
        # nonzero scalar times nonzero coefficient stays nonzero in a field
        return NcPoly._raw(self.alphabet, {w: c * t for w, t in self.terms.items()})

    def __pow__(self, exponent: int) -> NcPoly:
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("polynomial powers take non-negative integer exponents")
        # zero exponent always yields I, including for the zero polynomial
        result = NcPoly.unit(self.alphabet)
        for _ in range(exponent):
            result = result * self
        return result

    # ---- endomorphisms ------------------------------------------------

    def substitute(self, name: str, replacement: NcPoly) -> NcPoly:
        """Algebra map sending one generator to `replacement`, fixing the rest."""
        self._require_same_alphabet(replacement)
        target = self.alphabet.index(name)
        out = NcPoly.zero(self.alphabet)
        single_letter_cache: dict[int, NcPoly] = {}
        for word, coeff in self.terms.items():
            image = NcPoly.scalar(self.alphabet, coeff)
            for letter in word:
                if letter == target:
                    image = image * replacement
                else:
                    piece = single_letter_cache.get(letter)
                    if piece is None:
                        piece = NcPoly(self.alphabet, {(letter,): CycloScalar.of(1)})
                        single_letter_cache[letter] = piece
                    image = image * piece
            out = out + image
        return out

    # ---- canonical output ---------------------------------------------

    def sorted_terms(self) -> list[tuple[Word, CycloScalar]]:
        # longest words first, then descending lexicographic on indices,
        # so normal-ordered output reads highest-degree-first
        return sorted(
            self.terms.items(), key=lambda kv: (-len(kv[0]), tuple(-i for i in kv[0]))
        )

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        pieces = []
        for idx, (word, coeff) in enumerate(self.sorted_terms()):
            negative = _leading_negative(coeff)
            mag = -coeff if negative else coeff
            body = _term_str(self.alphabet, word, mag)
            if idx == 0:
                pieces.append(f"-{body}" if negative else body)
            else:
                pieces.append(f" - {body}" if negative else f" + {body}")
        return "".join(pieces)

    def __repr__(self) -> str:
        return f"NcPoly({self})"

    def to_json(self) -> list[dict]:
        return [
            {"word": [self.alphabet.names[i] for i in word], "coeff": scalar_to_json(coeff)}
            for word, coeff in self.sorted_terms()
        ]

    @staticmethod
    def from_json(alphabet: Alphabet, obj) -> NcPoly:
        terms: dict[Word, CycloScalar] = {}
        for entry in obj:
            word = tuple(alphabet.index(n) for n in entry["word"])
            coeff = scalar_from_json(entry["coeff"])
            terms[word] = terms.get(word, ZERO) + coeff
        return NcPoly(alphabet, terms)


def _leading_negative(coeff: CycloScalar) -> bool:
    for c in coeff.coords:
        if c != 0:
            return c < 0
    return False


def _term_str(alphabet: Alphabet, word: Word, coeff: CycloScalar) -> str:
    coeff_str = str(coeff)
    if " " in coeff_str:
        coeff_str = f"({coeff_str})"
    if not word:
        return coeff_str if coeff_str != "1" else "I"
    if coeff_str == "1":
        return alphabet.word_str(word)
    return f"{coeff_str} * {alphabet.word_str(word)}"


def ordered_product(alphabet: Alphabet, factors) -> NcPoly:
    """Product of the factors left to right; the empty product is I."""
    result = NcPoly.unit(alphabet)
    for factor in factors:
        result = result * factor
    return result


def commutator(p: NcPoly, q: NcPoly) -> NcPoly:
    return p * q - q * p
