"""Normal ordering of free-algebra elements under commutation presets.

Each preset carries adjacent-pair rewrite rules over its alphabet.  A rule
replaces one two-letter subword by a polynomial whose monomials are each
the swapped (ascending) pair, a single letter, or the empty word.  That
shape is what guarantees termination: every application either strictly
lowers the inversion count of a word at constant length, or strictly
shortens the word, so the measure (length, inversions) drops
lexicographically.  Uniqueness of normal forms is not assumed; it is
checked by `check_confluence`, which reduces every short word under
several independent strategies and compares the outcomes.

The designated kernel generator D must be last in alphabet order.  In a
normal form all remaining D letters sit in a trailing block, which makes
"restrict to the D-kernel" a purely syntactic deletion and "evaluate on a
D-eigenvector" a substitution of the trailing block by a scalar power.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .freealg import Alphabet, NcPoly, Word
from .scalars import ZERO, CycloScalar

DEFAULT_STEP_BUDGET = 10_000_000


class RewriteBudgetError(RuntimeError):
    """Step budget exhausted; signals a malformed (non-terminating) preset."""


@dataclass(frozen=True)
class RewriteRule:
    """Replace the adjacent pair `left` by the polynomial `right`."""

    left: tuple[int, int]
    right: NcPoly


def _validate_rule(alphabet: Alphabet, rule: RewriteRule) -> None:
    a, b = rule.left
    size = len(alphabet)
    if not (0 <= a < size and 0 <= b < size):
        raise ValueError(f"rule pair {rule.left} outside alphabet of size {size}")
    for word in rule.right.terms:
        if len(word) > 2:
            raise ValueError("replacement monomials may have at most two letters")
        if len(word) == 2:
            if word != (b, a) or not a > b:
                raise ValueError(
                    "a two-letter replacement must be the swapped descending pair"
                )


class RelationPreset:
    """Named rule set over an alphabet, with the scalar parameters baked in."""

    def __init__(
        self,
        name: str,
        alphabet: Alphabet,
        rules: tuple[RewriteRule, ...],
        params: dict[str, CycloScalar] | None = None,
        d_name: str = "D",
    ):
        self.name = name
        self.alphabet = alphabet
        self.rules = rules
        self.params = dict(params or {})
        self.d_name = d_name
        self.d_index = alphabet.index(d_name)
        if self.d_index != len(alphabet) - 1:
            raise ValueError(f"{d_name} must be the maximal generator of {alphabet.names}")
        rule_map: dict[tuple[int, int], dict[Word, CycloScalar]] = {}
        for rule in rules:
            _validate_rule(alphabet, rule)
            if rule.left in rule_map:
                raise ValueError(f"duplicate rule for pair {rule.left}")
            rule_map[rule.left] = dict(rule.right.terms)
        self._rule_map = rule_map
        self._nf_cache: dict[Word, dict[Word, CycloScalar]] = {}

    def __repr__(self) -> str:
        return f"RelationPreset({self.name!r})"

    def generator(self, name: str) -> NcPoly:
        return NcPoly.generator(self.alphabet, name)

    def unit(self) -> NcPoly:
        return NcPoly.unit(self.alphabet)

    # ---- word-level normalization (memoized leftmost strategy) --------

    def _word_normal_form(self, word: Word, budget: list[int]) -> dict[Word, CycloScalar]:
        cache = self._nf_cache
        cached = cache.get(word)
        if cached is not None:
            return cached
        rule_map = self._rule_map
        pos = -1
        for i in range(len(word) - 1):
            if (word[i], word[i + 1]) in rule_map:
                pos = i
                break
        if pos < 0:
            result = {word: CycloScalar.of(1)}
        else:
            budget[0] -= 1
            if budget[0] < 0:
                raise RewriteBudgetError(
                    f"step budget exceeded while normalizing under preset {self.name}"
                )
            head, tail = word[:pos], word[pos + 2 :]
            acc: dict[Word, CycloScalar] = {}
            for sub, coeff in rule_map[(word[pos], word[pos + 1])].items():
                for w2, c2 in self._word_normal_form(head + sub + tail, budget).items():
                    prod = coeff * c2
                    prev = acc.get(w2)
                    total = prod if prev is None else prev + prod
                    if total.is_zero:
                        acc.pop(w2, None)
                    else:
                        acc[w2] = total
            result = acc
        cache[word] = result
        return result


def normalize(p: NcPoly, preset: RelationPreset, step_budget: int = DEFAULT_STEP_BUDGET) -> NcPoly:
    """Rewrite to the unique normal form under the preset's relations."""
    if p.alphabet != preset.alphabet:
        raise ValueError(
            f"polynomial alphabet {p.alphabet.names} does not match preset {preset.name}"
        )
    budget = [step_budget]
    out: dict[Word, CycloScalar] = {}
    for word, coeff in p.terms.items():
        for w2, c2 in preset._word_normal_form(word, budget).items():
            prev = out.get(w2)
            prod = coeff * c2
            out[w2] = prod if prev is None else prev + prod
    return NcPoly(preset.alphabet, out)


def restrict_to_kernel(p: NcPoly, preset: RelationPreset) -> NcPoly:
    """Normal form with every monomial containing D deleted (action on ker D)."""
    nf = normalize(p, preset)
    d = preset.d_index
    return NcPoly(preset.alphabet, {w: c for w, c in nf.terms.items() if d not in w})


def kernel_eval(p: NcPoly, preset: RelationPreset, mu: CycloScalar) -> NcPoly:
    """Normal form with each trailing D-block D^c replaced by the scalar mu^c."""
    nf = normalize(p, preset)
    d = preset.d_index
    mu = CycloScalar.of(mu)
    out: dict[Word, CycloScalar] = {}
    for word, coeff in nf.terms.items():
        count = 0
        while count < len(word) and word[len(word) - 1 - count] == d:
            count += 1
        prefix = word[: len(word) - count]
        value = coeff * mu**count
        prev = out.get(prefix)
        out[prefix] = value if prev is None else prev + value
    return NcPoly(preset.alphabet, out)


# ---- confluence self-check --------------------------------------------


@dataclass(frozen=True)
class ConfluenceReport:
    preset_name: str
    degree: int
    words_checked: int
    divergent: tuple[tuple[str, tuple[str, ...]], ...]  # (word, distinct normal forms)

    @property
    def ok(self) -> bool:
        return not self.divergent

    def __str__(self) -> str:
        if self.ok:
            return (
                f"{self.preset_name}: confluent on all {self.words_checked} words "
                f"up to length {self.degree}"
            )
        listing = "; ".join(
            f"{word} -> {{{' | '.join(forms)}}}" for word, forms in self.divergent
        )
        return f"{self.preset_name}: divergent on {listing}"


def _reduce_word_with_choice(
    preset: RelationPreset, word: Word, choose, rng, budget: list[int]
) -> dict[Word, CycloScalar]:
    """Full reduction contracting one redex per step, chosen by `choose`."""
    rule_map = preset._rule_map
    result: dict[Word, CycloScalar] = {}
    stack: list[tuple[Word, CycloScalar]] = [(word, CycloScalar.of(1))]
    while stack:
        w, c = stack.pop()
        redexes = [i for i in range(len(w) - 1) if (w[i], w[i + 1]) in rule_map]
        if not redexes:
            prev = result.get(w)
            total = c if prev is None else prev + c
            if total.is_zero:
                result.pop(w, None)
            else:
                result[w] = total
            continue
        budget[0] -= 1
        if budget[0] < 0:
            raise RewriteBudgetError("step budget exceeded in strategy reduction")
        i = choose(redexes, rng)
        for sub, rc in rule_map[(w[i], w[i + 1])].items():
            stack.append((w[:i] + sub + w[i + 2 :], c * rc))
    return result


def _all_words(alphabet_size: int, max_length: int):
    for length in range(2, max_length + 1):
        indices = [0] * length
        while True:
            yield tuple(indices)
            k = length - 1
            while k >= 0 and indices[k] == alphabet_size - 1:
                indices[k] = 0
                k -= 1
            if k < 0:
                break
            indices[k] += 1


def check_confluence(
    preset: RelationPreset,
    degree: int,
    randomized_runs: int = 4,
    seed: int = 0,
    step_budget: int = DEFAULT_STEP_BUDGET,
) -> ConfluenceReport:
    """Reduce every word up to `degree` under several strategies and compare.

    Strategies: leftmost redex, rightmost redex, `randomized_runs` seeded
    random choices, plus the memoized engine itself.  Divergence is
    reported, never raised.
    """
    if degree < 3:
        raise ValueError("confluence check needs degree >= 3")
    divergent: list[tuple[str, tuple[str, ...]]] = []
    budget = [step_budget]
    count = 0
    for word in _all_words(len(preset.alphabet), degree):
        count += 1
        outcomes: list[dict[Word, CycloScalar]] = []
        outcomes.append(
            _reduce_word_with_choice(preset, word, lambda r, _: r[0], None, budget)
        )
        outcomes.append(
            _reduce_word_with_choice(preset, word, lambda r, _: r[-1], None, budget)
        )
        for run in range(randomized_runs):
            rng = random.Random((seed * 1_000_003 + run) ^ hash(word))
            outcomes.append(
                _reduce_word_with_choice(
                    preset, word, lambda r, g: g.choice(r), rng, budget
                )
            )
        outcomes.append(preset._word_normal_form(word, budget))
        first = outcomes[0]
        if any(o != first for o in outcomes[1:]):
            distinct: list[str] = []
            for o in outcomes:
                text = str(NcPoly(preset.alphabet, o))
                if text not in distinct:
                    distinct.append(text)
            divergent.append((preset.alphabet.word_str(word), tuple(distinct)))
    return ConfluenceReport(preset.name, degree, count, tuple(divergent))


# ---- shipped presets ----------------------------------------------------

PRESET_NAMES = (
    "first-order-plus",
    "first-order-minus",
    "second-order",
    "second-order-central",
    "invertible-plus",
    "invertible-minus",
    "partial-vw",
    "free",
)


def _pair(alphabet: Alphabet, upper: str, lower: str, right: NcPoly) -> RewriteRule:
    return RewriteRule((alphabet.index(upper), alphabet.index(lower)), right)


def first_order_plus(lam) -> RelationPreset:
    """DU -> UD + lam*U, i.e. the commutator of D with U is lam*U."""
    lam = CycloScalar.of(lam)
    alpha = Alphabet(("U", "D"))
    u, d = NcPoly.generator(alpha, "U"), NcPoly.generator(alpha, "D")
    rules = (_pair(alpha, "D", "U", u * d + lam * u),)
    return RelationPreset("first-order-plus", alpha, rules, {"lambda": lam})


def first_order_minus(lam) -> RelationPreset:
    """DU -> UD - lam*U."""
    lam = CycloScalar.of(lam)
    alpha = Alphabet(("U", "D"))
    u, d = NcPoly.generator(alpha, "U"), NcPoly.generator(alpha, "D")
    rules = (_pair(alpha, "D", "U", u * d - lam * u),)
    return RelationPreset("first-order-minus", alpha, rules, {"lambda": lam})


def second_order(lam) -> RelationPreset:
    """C names the commutator of D and U; D moves past C at cost lam^2*U."""
    lam = CycloScalar.of(lam)
    alpha = Alphabet(("U", "C", "D"))
    u = NcPoly.generator(alpha, "U")
    c = NcPoly.generator(alpha, "C")
    d = NcPoly.generator(alpha, "D")
    rules = (
        _pair(alpha, "D", "U", u * d + c),
        _pair(alpha, "D", "C", c * d + (lam * lam) * u),
        _pair(alpha, "C", "U", u * c),
    )
    return RelationPreset("second-order", alpha, rules, {"lambda": lam})


def second_order_central() -> RelationPreset:
    """Second-order preset with a central commutator (the lam = 0 case)."""
    preset = second_order(ZERO)
    return RelationPreset("second-order-central", preset.alphabet, preset.rules, {"lambda": ZERO})


def _invertible(name: str, lam: CycloScalar, sign: int) -> RelationPreset:
    alpha = Alphabet(("Uinv", "U", "D"))
    uinv = NcPoly.generator(alpha, "Uinv")
    u = NcPoly.generator(alpha, "U")
    d = NcPoly.generator(alpha, "D")
    unit = NcPoly.unit(alpha)
    rules = (
        _pair(alpha, "D", "U", u * d + (sign * lam) * u),
        _pair(alpha, "D", "Uinv", uinv * d - (sign * lam) * uinv),
        _pair(alpha, "U", "Uinv", unit),
        RewriteRule((alpha.index("Uinv"), alpha.index("U")), unit),
    )
    return RelationPreset(name, alpha, rules, {"lambda": lam})


def invertible_plus(lam) -> RelationPreset:
    return _invertible("invertible-plus", CycloScalar.of(lam), +1)


def invertible_minus(lam) -> RelationPreset:
    return _invertible("invertible-minus", CycloScalar.of(lam), -1)


def partial_vw(lam, mu) -> RelationPreset:
    """V and W commute; D moves past W at cost lam*W and past V at cost mu*V.

    The D-V rule is a sufficient extra hypothesis: without any D-V
    relation the two remaining rules are not confluent (see the
    incomplete fixture below), so the free-hanging case is exercised on
    the function-space realization instead.
    """
    lam = CycloScalar.of(lam)
    mu = CycloScalar.of(mu)
    alpha = Alphabet(("V", "W", "D"))
    v = NcPoly.generator(alpha, "V")
    w = NcPoly.generator(alpha, "W")
    d = NcPoly.generator(alpha, "D")
    rules = (
        _pair(alpha, "W", "V", v * w),
        _pair(alpha, "D", "V", v * d + mu * v),
        _pair(alpha, "D", "W", w * d + lam * w),
    )
    return RelationPreset("partial-vw", alpha, rules, {"lambda": lam, "mu": mu})


def incomplete_vw_fixture(lam) -> RelationPreset:
    """Deliberately incomplete rule set; diverges on the word D W V."""
    lam = CycloScalar.of(lam)
    alpha = Alphabet(("V", "W", "D"))
    v = NcPoly.generator(alpha, "V")
    w = NcPoly.generator(alpha, "W")
    d = NcPoly.generator(alpha, "D")
    rules = (
        _pair(alpha, "W", "V", v * w),
        _pair(alpha, "D", "W", w * d + lam * w),
    )
    return RelationPreset("partial-vw-incomplete", alpha, rules, {"lambda": lam})


def free_preset(names: tuple[str, ...] = ("U", "D")) -> RelationPreset:
    return RelationPreset("free", Alphabet(names), (), {})


def make_preset(name: str, lam=ZERO, mu=ZERO) -> RelationPreset:
    lam = CycloScalar.of(lam)
    mu = CycloScalar.of(mu)
    if name == "first-order-plus":
        return first_order_plus(lam)
    if name == "first-order-minus":
        return first_order_minus(lam)
    if name == "second-order":
        return second_order(lam)
    if name == "second-order-central":
        return second_order_central()
    if name == "invertible-plus":
        return invertible_plus(lam)
    if name == "invertible-minus":
        return invertible_minus(lam)
    if name == "partial-vw":
        return partial_vw(lam, mu)
    if name == "free":
        return free_preset()
    raise ValueError(f"unknown preset {name!r}; choose one of {PRESET_NAMES}")


_preset_cache: dict[tuple, RelationPreset] = {}


def cached_preset(name: str, lam=ZERO, mu=ZERO) -> RelationPreset:
    """Shared preset instances so normal-form memo tables are reused."""
    lam = CycloScalar.of(lam)
    mu = CycloScalar.of(mu)
    key = (name, lam.coords, mu.coords)
    preset = _preset_cache.get(key)
    if preset is None:
        preset = make_preset(name, lam, mu)
        _preset_cache[key] = preset
    return preset
