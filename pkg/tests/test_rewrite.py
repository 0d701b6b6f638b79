"""Normal ordering: presets, termination guard, kernel ops, confluence."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ncbinom.binomial import binom, build_binomial
from ncbinom.freealg import NcPoly, commutator
from ncbinom.rewrite import (
    PRESET_NAMES,
    RewriteBudgetError,
    RewriteRule,
    RelationPreset,
    check_confluence,
    first_order_minus,
    first_order_plus,
    incomplete_vw_fixture,
    invertible_plus,
    kernel_eval,
    make_preset,
    normalize,
    partial_vw,
    restrict_to_kernel,
    second_order,
)
from ncbinom.scalars import ONE, ZERO, parse_scalar


def gens(preset, *names):
    return tuple(preset.generator(n) for n in names)


def test_normalize_basic_swap():
    p = first_order_plus(ONE)
    u, d = gens(p, "U", "D")
    assert normalize(d * u, p) == u * d + u
    p0 = first_order_plus(ZERO)
    u0, d0 = gens(p0, "U", "D")
    assert normalize(d0 * u0, p0) == u0 * d0


def test_normalize_two_steps():
    lam = parse_scalar("2")
    p = first_order_plus(lam)
    u, d = gens(p, "U", "D")
    # two hand rewrite steps: D D U -> U D D + 2*lam U D + lam^2 U
    expected = u * d * d + (2 * lam) * (u * d) + (lam * lam) * u
    assert normalize(d * d * u, p) == expected


@pytest.mark.parametrize("m", range(1, 7))
def test_power_commutation_identity(m):
    lam = parse_scalar("1/2")
    p = first_order_plus(lam)
    u, d = gens(p, "U", "D")
    lhs = normalize(d * u**m, p)
    rhs = normalize(u**m * d + (lam * m) * u**m, p)
    assert lhs == rhs


def test_inverse_cancellation():
    p = invertible_plus(ONE)
    uinv, u = gens(p, "Uinv", "U")
    assert normalize(u * uinv, p) == p.unit()
    assert normalize(uinv * u, p) == p.unit()


@pytest.mark.parametrize("m", range(1, 5))
def test_power_commutation_extends_to_negative_powers(m):
    lam = parse_scalar("2")
    p = invertible_plus(lam)
    uinv, d = gens(p, "Uinv", "D")
    # commuting D past the m-th inverse power costs -lam*m
    lhs = normalize(d * uinv**m, p)
    rhs = normalize(uinv**m * d - (lam * m) * uinv**m, p)
    assert lhs == rhs


@pytest.mark.parametrize("m", range(1, 6))
def test_central_commutator_power_rule(m):
    from ncbinom.rewrite import second_order_central

    p = second_order_central()
    u, c, d = gens(p, "U", "C", "D")
    lhs = normalize(commutator(d, u**m), p)
    rhs = normalize(m * (c * u ** (m - 1)), p)
    assert lhs == rhs


def test_restrict_examples():
    lam = ONE
    p = first_order_minus(lam)
    u, d = gens(p, "U", "D")
    assert restrict_to_kernel(d, p).is_zero
    assert restrict_to_kernel(p.unit(), p) == p.unit()
    # free expansion of the n=2 combination, restricted: -2*lam*U
    b2 = d * d + d * u - u * d + lam * d - lam * u
    assert restrict_to_kernel(b2, p) == (-2 * lam) * u


def test_kernel_eval_examples():
    lam = parse_scalar("3")
    p = first_order_plus(lam)
    u, d = gens(p, "U", "D")
    unit = p.unit()
    mu = parse_scalar("i")
    assert kernel_eval(d, p, mu) == mu * unit
    product = unit
    for j in range(3):
        product = product * (d + (lam * j) * unit)
    for j0 in range(3):
        assert kernel_eval(product, p, -(lam * j0)).is_zero
    assert not kernel_eval(product, p, lam).is_zero


def test_kernel_eval_of_binomial():
    lam = ONE
    p = first_order_plus(lam)
    u, d = gens(p, "U", "D")
    b3 = build_binomial(3, lam, u, d)
    assert kernel_eval(b3, p, -lam).is_zero


def test_commuting_collapse_reproduces_plain_power():
    p = first_order_plus(ZERO)
    u, d = gens(p, "U", "D")
    for n in range(7):
        b = build_binomial(n, ZERO, u, d)
        assert normalize(b, p) == d**n


def test_second_order_names_the_commutator():
    p = second_order(ONE)
    u, c, d = gens(p, "U", "C", "D")
    assert normalize(commutator(d, u), p) == c


def test_step_budget_guard():
    p = first_order_plus(ONE)
    u, d = gens(p, "U", "D")
    with pytest.raises(RewriteBudgetError):
        normalize((d**4) * (u**4), p, step_budget=3)


def test_rule_invariant_rejects_bad_replacements():
    p = first_order_plus(ONE)
    u, d = gens(p, "U", "D")
    # replacement keeping the descending pair would not terminate
    with pytest.raises(ValueError):
        RelationPreset(
            "bad", p.alphabet, (RewriteRule((1, 0), d * u),), {}
        )
    with pytest.raises(ValueError):
        RelationPreset(
            "bad2", p.alphabet, (RewriteRule((1, 0), u * d * u),), {}
        )


def test_d_must_be_maximal():
    from ncbinom.freealg import Alphabet

    with pytest.raises(ValueError):
        RelationPreset("bad", Alphabet(("D", "U")), (), {})


def test_confluence_first_order_degree6():
    report = check_confluence(first_order_plus(ONE), 6)
    assert report.ok


def test_confluence_second_order_degree6():
    report = check_confluence(second_order(parse_scalar("2")), 6)
    assert report.ok


def test_confluence_rejects_small_degree():
    with pytest.raises(ValueError):
        check_confluence(first_order_plus(ONE), 2)


def test_incomplete_vw_fixture_diverges_on_dwv():
    report = check_confluence(incomplete_vw_fixture(ONE), 3)
    assert not report.ok
    words = [w for w, _ in report.divergent]
    assert "D W V" in words
    forms = dict(report.divergent)["D W V"]
    assert set(forms) == {"W D V + V W", "D V W"}


def test_complete_vw_is_confluent():
    report = check_confluence(partial_vw(ONE, parse_scalar("2")), 4)
    assert report.ok


def test_make_preset_names():
    for name in PRESET_NAMES:
        preset = make_preset(name, ONE, ONE)
        assert preset.name == name
    with pytest.raises(ValueError):
        make_preset("nope")


# random polynomials over the first-order alphabet
words2 = st.lists(st.integers(min_value=0, max_value=1), max_size=4).map(tuple)
polys2 = st.dictionaries(words2, st.integers(min_value=-3, max_value=3), max_size=3).map(
    lambda t: NcPoly(first_order_plus(ONE).alphabet, t)
)

# and over the second-order alphabet
words3 = st.lists(st.integers(min_value=0, max_value=2), max_size=4).map(tuple)
polys3 = st.dictionaries(words3, st.integers(min_value=-3, max_value=3), max_size=3).map(
    lambda t: NcPoly(second_order(ONE).alphabet, t)
)

_plus = first_order_plus(parse_scalar("1/2"))
_second = second_order(ONE)


@given(polys2)
def test_normalize_idempotent(p):
    p = NcPoly(_plus.alphabet, p.terms)
    once = normalize(p, _plus)
    assert normalize(once, _plus) == once


@given(polys2, polys2)
def test_normalize_linear(p, q):
    p = NcPoly(_plus.alphabet, p.terms)
    q = NcPoly(_plus.alphabet, q.terms)
    a = parse_scalar("2+i")
    assert normalize(a * p + q, _plus) == a * normalize(p, _plus) + normalize(q, _plus)


@settings(max_examples=60)
@given(polys3, polys3)
def test_normalize_multiplicative_mod_relations(p, q):
    lhs = normalize(p * q, _second)
    rhs = normalize(normalize(p, _second) * normalize(q, _second), _second)
    assert lhs == rhs


def test_pascal_binomials():
    assert [binom(5, k) for k in range(6)] == [1, 5, 10, 10, 5, 1]
    assert binom(10, 3) == 120
    assert binom(3, 5) == 0
