"""Function-space realization: exact calculus, vector variants, oracles."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ncbinom.binomial import build_binomial
from ncbinom.freealg import Alphabet, NcPoly, commutator
from ncbinom.realize import (
    Derivation,
    FuncExpr,
    Matrix,
    MultiplyBy,
    VecFunc,
    X_D_DX,
    XINV_D_DX,
    apply_assigned,
    cos_func,
    random_func_expr,
    safe_block,
    sin_func,
    third_order_scan,
    truncated_shift_matrix,
    verify_change_of_variables,
    verify_exponential,
    verify_linear,
    verify_shift_binomial_matrices,
    verify_sine,
    verify_vector_item,
    verify_w_independence_realized,
)
from ncbinom.rewrite import cached_preset, normalize
from ncbinom.scalars import CycloScalar, IMAG, ONE, ZERO, parse_scalar

UD = Alphabet(("U", "D"))
U = NcPoly.generator(UD, "U")
D = NcPoly.generator(UD, "D")


def test_differentiate_examples():
    f = FuncExpr.term(1, c=2, alpha=3)
    expected = FuncExpr.term(2, c=1, alpha=3) + FuncExpr.term(3, c=2, alpha=3)
    assert f.differentiate() == expected
    assert FuncExpr.one().differentiate().is_zero
    lam = parse_scalar("1/2")
    gauss = FuncExpr.exponential(0, lam)
    # the eigen-relation that drives the change-of-variables identity
    assert gauss.differentiate(XINV_D_DX) == gauss.scaled(2 * lam)


def test_x_d_dx_on_powers():
    mono = FuncExpr.monomial(parse_scalar("i"))
    assert mono.differentiate(X_D_DX) == mono.scaled(IMAG)


def test_mul_examples():
    lam = parse_scalar("3")
    assert FuncExpr.exponential(lam) * FuncExpr.exponential(-lam) == FuncExpr.one()
    s, c = sin_func(ONE), cos_func(ONE)
    assert s * s + c * c == FuncExpr.one()
    mono = FuncExpr.monomial(parse_scalar("1/2"))
    assert FuncExpr.monomial(1) * mono == FuncExpr.monomial(parse_scalar("3/2"))


def test_apply_examples():
    lam = parse_scalar("2")
    asg = {"D": Derivation(), "U": MultiplyBy(FuncExpr.exponential(lam))}
    f = FuncExpr.exponential(lam)
    assert apply_assigned(D, asg, f) == f.scaled(lam)
    g = FuncExpr.term(1, c=3, alpha=1)
    assert apply_assigned(build_binomial(1, lam, U, D), asg, g) == g.differentiate()
    # the commutator of D with multiplication by e^{lam x} is lam times it
    comm = commutator(D, U)
    assert apply_assigned(comm, asg, g) == (FuncExpr.exponential(lam) * g).scaled(lam)


def test_apply_requires_assignment():
    with pytest.raises(ValueError):
        apply_assigned(D * U, {"D": Derivation()}, FuncExpr.one())


def test_sin_cos_commutator_closure():
    lam = parse_scalar("2")
    asg = {"D": Derivation(), "U": MultiplyBy(sin_func(lam))}
    f = FuncExpr.term(1, c=1, alpha=parse_scalar("1/2"))
    first = apply_assigned(commutator(D, U), asg, f)
    assert first == (cos_func(lam) * f).scaled(lam)
    second = apply_assigned(commutator(D, commutator(D, U)), asg, f)
    assert second == (sin_func(lam) * f).scaled(-(lam * lam))


keys = st.tuples(
    st.integers(min_value=0, max_value=3),
    st.fractions(min_value=-3, max_value=3, max_denominator=4),
)
funcs = st.dictionaries(keys, st.integers(min_value=-4, max_value=4), max_size=4).map(
    lambda d: FuncExpr(
        {
            (CycloScalar.of(c), CycloScalar.of(a), ZERO): CycloScalar.of(v)
            for (c, a), v in d.items()
        }
    )
)


@given(funcs, funcs)
def test_leibniz_rule(f, g):
    lhs = (f * g).differentiate()
    rhs = f.differentiate() * g + f * g.differentiate()
    assert lhs == rhs


@settings(max_examples=40)
@given(funcs)
def test_apply_is_homomorphism(f):
    lam = ONE
    asg = {"D": Derivation(), "U": MultiplyBy(FuncExpr.exponential(lam))}
    p = D * U + 2 * U
    q = U * D - D
    lhs = apply_assigned(p * q, asg, f)
    rhs = apply_assigned(p, asg, apply_assigned(q, asg, f))
    assert lhs == rhs


def test_exponential_identities():
    assert verify_exponential(1, ONE, 0).passed
    lam = ONE
    asg = {"D": Derivation(), "U": MultiplyBy(FuncExpr.exponential(-lam))}
    got = apply_assigned(build_binomial(2, lam, U, D), asg, FuncExpr.one())
    assert got == FuncExpr.exponential(-lam).scaled(-2)
    got4 = apply_assigned(build_binomial(4, lam, U, D), asg, FuncExpr.one())
    assert got4 == FuncExpr.exponential(-2 * lam).scaled(12)
    assert verify_exponential(4, ONE, 2).passed
    with pytest.raises(ValueError):
        verify_exponential(3, ONE, 3)


def test_sine_identities():
    assert verify_sine(1, ONE).passed
    lam = ONE
    asg = {"D": Derivation(), "U": MultiplyBy(sin_func(lam))}
    got = apply_assigned(build_binomial(2, IMAG * lam, U, D), asg, FuncExpr.one())
    assert got == FuncExpr.exponential(-IMAG)
    assert verify_sine(2, ONE).passed
    assert verify_sine(3, parse_scalar("2")).passed


def test_linear_identities():
    rep = verify_linear(2, 1, 0)
    assert rep.passed
    asg = {"D": Derivation(), "U": MultiplyBy(FuncExpr.monomial(1))}
    got = apply_assigned(build_binomial(2, ZERO, U, D), asg, FuncExpr.one())
    assert got == FuncExpr.one()
    assert verify_linear(3, 2, 5).passed
    assert verify_linear(4, 1, 1).passed


def test_change_of_variables():
    assert verify_change_of_variables(1, ONE, 0, "gauss").passed
    assert verify_change_of_variables(3, ONE, 1, "gauss").passed
    # fractional multiplier exercises exponents outside the integers
    assert verify_change_of_variables(2, parse_scalar("1/2"), 1, "log").passed
    with pytest.raises(ValueError):
        verify_change_of_variables(2, ONE, 2, "gauss")
    with pytest.raises(ValueError):
        verify_change_of_variables(2, ONE, 0, "polar")


def test_vector_items_small():
    for item in range(1, 9):
        rep = verify_vector_item(item, 3, ONE, 2, 99)
        assert rep.passed, (item, rep.residual)
    rep = verify_vector_item(3, 2, ONE, 2, 7)
    assert rep.passed
    rep4 = verify_vector_item(4, 2, ONE, 2, 7)
    assert rep4.passed and rep4.params["minus_also_zero"] is False


def test_vector_rejects_bad_item():
    with pytest.raises(ValueError):
        verify_vector_item(9, 2, ONE, 2, 7)
    with pytest.raises(ValueError):
        verify_vector_item(1, 2, ONE, 0, 7)


def test_matrix_arithmetic():
    a = Matrix([[1, 2], [3, 4]])
    ident = Matrix.identity(2)
    assert a * ident == a
    assert (a - a).is_zero
    assert a**0 == ident
    assert a**2 == a * a
    with pytest.raises(ValueError):
        Matrix([[1, 2], [3]])


def test_eq5_matrix_oracle():
    rep = verify_shift_binomial_matrices(1, 2, 7)
    assert rep.passed
    assert verify_shift_binomial_matrices(4, 3, 42).passed
    assert verify_shift_binomial_matrices(6, 2, 7).passed


def test_w_independence_realized():
    for n in (1, 2, 4):
        assert verify_w_independence_realized(n, ONE, 1729).passed
    assert verify_w_independence_realized(3, parse_scalar("1/2"), 4).passed


def test_truncated_shift_examples():
    preset = cached_preset("first-order-plus", ONE)
    alpha = preset.alphabet
    u = NcPoly.generator(alpha, "U")
    d = NcPoly.generator(alpha, "D")
    relation = d * u - u * d - 1 * u
    mat = truncated_shift_matrix(relation, preset, 6)
    assert safe_block(mat, 5).is_zero
    assert truncated_shift_matrix(NcPoly.unit(alpha), preset, 4) == Matrix.identity(5)
    with pytest.raises(ValueError):
        truncated_shift_matrix(d * u, preset, 2)


def test_shift_matrix_agrees_with_normalize():
    rng = random.Random(31337)
    for preset_name in ("first-order-plus", "first-order-minus"):
        preset = cached_preset(preset_name, parse_scalar("1/2"))
        alpha = preset.alphabet
        for _ in range(50):
            terms = {}
            for _ in range(rng.randint(1, 4)):
                word = tuple(rng.randint(0, 1) for _ in range(rng.randint(0, 5)))
                terms[word] = terms.get(word, 0) + rng.randint(-4, 4)
            p = NcPoly(alpha, terms)
            u_deg = p.letter_degree("U")
            size = u_deg + 3
            lhs = truncated_shift_matrix(p, preset, size)
            rhs = truncated_shift_matrix(normalize(p, preset), preset, size)
            block = size - u_deg
            assert safe_block(lhs, block) == safe_block(rhs, block)


def test_pipeline_consistency():
    # normalizing before applying the operators never changes the result
    lam = parse_scalar("2")
    preset = cached_preset("first-order-plus", lam)
    alpha = preset.alphabet
    u = NcPoly.generator(alpha, "U")
    d = NcPoly.generator(alpha, "D")
    asg = {"U": MultiplyBy(FuncExpr.exponential(lam)), "D": Derivation()}
    rng = random.Random(5)
    for n in range(5):
        b = build_binomial(n, lam, u, d)
        f = random_func_expr(rng)
        assert apply_assigned(b, asg, f) == apply_assigned(normalize(b, preset), asg, f)


def test_third_order_scan():
    reports = third_order_scan([3], ONE)
    assert len(reports) == 4
    assert all(r.passed for r in reports)  # pass means residual nonzero
    with pytest.raises(ValueError):
        third_order_scan([2], ONE)
    with pytest.raises(ValueError):
        third_order_scan([3], ZERO)


def test_third_order_base_function_is_genuinely_third_order():
    from ncbinom.scalars import OMEGA

    lam = ONE
    u = (
        FuncExpr.exponential(lam)
        + FuncExpr.exponential(OMEGA * lam)
        + FuncExpr.exponential(OMEGA * OMEGA * lam)
    )
    d3 = u.differentiate().differentiate().differentiate()
    assert d3 == u.scaled(lam**3)
    # no first- or second-order collapse
    assert u.differentiate() != u.scaled(lam)
    assert u.differentiate().differentiate() != u.scaled(lam * lam)


def test_vecfunc_basics():
    v = VecFunc.constant([1, 2])
    w = VecFunc.constant([1, 2])
    assert v == w
    assert (v - w).is_zero
    assert v.differentiate().is_zero
    with pytest.raises(ValueError):
        v + VecFunc.constant([1, 2, 3])
