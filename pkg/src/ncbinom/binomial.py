"""Construction of the binomial-type combination and its symbolic checks.

The central object is the degree-n combination

    sum over k of  C(n,k) * [product over j < k of (D - U + j*lam*I)] * U^(n-k)

with the product factors multiplied left to right in increasing j.  All
builders expand in the free algebra; the verifiers then compare normal
forms under the relation preset appropriate to each identity.  Every
comparison is exact, with no numeric tolerance anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .freealg import Alphabet, NcPoly, commutator, ordered_product
from .report import Clause, VerificationReport, report_from_clauses
from .rewrite import (
    RelationPreset,
    cached_preset,
    kernel_eval,
    normalize,
    restrict_to_kernel,
)
from .scalars import ZERO, CycloScalar


@lru_cache(maxsize=None)
def binom(n: int, k: int) -> int:
    """Binomial coefficient by the Pascal recurrence, exact at any size."""
    if k < 0 or k > n:
        return 0
    if k == 0 or k == n:
        return 1
    return binom(n - 1, k - 1) + binom(n - 1, k)


def double_factorial(k: int) -> int:
    """k!! = k * (k-2)!!, with (-1)!! = 0!! = 1."""
    if k < -1:
        raise ValueError("double factorial defined for k >= -1")
    result = 1
    while k > 1:
        result *= k
        k -= 2
    return result


def build_binomial(n: int, lam, u: NcPoly, d: NcPoly) -> NcPoly:
    """Free expansion of the degree-n combination of u and d."""
    if n < 0:
        raise ValueError("n must be non-negative")
    lam = CycloScalar.of(lam)
    alpha = u.alphabet
    unit = NcPoly.unit(alpha)
    total = NcPoly.zero(alpha)
    prefix = unit  # product of (d - u + j*lam*I) for j < k
    u_powers = [unit]
    for _ in range(n):
        u_powers.append(u_powers[-1] * u)
    for k in range(n + 1):
        total = total + binom(n, k) * (prefix * u_powers[n - k])
        prefix = prefix * (d - u + (lam * k) * unit)
    return total


def build_binomial_alt(n: int, lam, u: NcPoly, d: NcPoly) -> NcPoly:
    """Equivalent expansion that factors out one (D + k*lam*I); needs n > 0."""
    if n <= 0:
        raise ValueError("alternative expansion requires n > 0")
    lam = CycloScalar.of(lam)
    alpha = u.alphabet
    unit = NcPoly.unit(alpha)
    total = NcPoly.zero(alpha)
    prefix = unit
    u_powers = [unit]
    for _ in range(n):
        u_powers.append(u_powers[-1] * u)
    for k in range(n):
        middle = d + (lam * k) * unit
        total = total + binom(n - 1, k) * (prefix * middle * u_powers[n - 1 - k])
        prefix = prefix * (d - u + (lam * k) * unit)
    return total


def falling_product(n: int, lam, d: NcPoly) -> NcPoly:
    """Ordered product of (D + j*lam*I) for j = 0 .. n-1."""
    lam = CycloScalar.of(lam)
    unit = NcPoly.unit(d.alphabet)
    return ordered_product(d.alphabet, (d + (lam * j) * unit for j in range(n)))


@dataclass(frozen=True)
class BinomialSpec:
    """One concrete instance: degree, scalar, preset, and generator roles."""

    n: int
    lam: CycloScalar
    preset: RelationPreset
    u_name: str = "U"
    d_name: str = "D"

    def u(self) -> NcPoly:
        return self.preset.generator(self.u_name)

    def d(self) -> NcPoly:
        return self.preset.generator(self.d_name)

    def build(self) -> NcPoly:
        return build_binomial(self.n, self.lam, self.u(), self.d())

    def build_alt(self) -> NcPoly:
        return build_binomial_alt(self.n, self.lam, self.u(), self.d())


@dataclass(frozen=True)
class ExpectedForm:
    """Tagged closed form: 'zero', 'double-factorial-power', or 'product-form'."""

    tag: str
    payload: NcPoly


def expected_even_restriction(n: int, base: NcPoly, preset: RelationPreset) -> ExpectedForm:
    """(n-1)!! * base^(n/2), normalized; the even-case closed form."""
    if n % 2 != 0 or n <= 0:
        raise ValueError("even-case closed form needs even n > 0")
    payload = normalize(double_factorial(n - 1) * base ** (n // 2), preset)
    return ExpectedForm("double-factorial-power", payload)


# ---- symbolic verifiers --------------------------------------------------


def verify_u_independence(n: int, lam) -> VerificationReport:
    """The combination collapses to the product of (D + j*lam*I) factors."""
    lam = CycloScalar.of(lam)
    preset = cached_preset("first-order-plus", lam)
    spec = BinomialSpec(n, lam, preset)
    lhs = normalize(spec.build(), preset)
    expected = ExpectedForm(
        "product-form", normalize(falling_product(n, lam, spec.d()), preset)
    )
    clauses = [
        Clause("product-form", lhs, expected.payload),
        Clause("no-U", NcPoly.scalar(preset.alphabet, lhs.letter_degree("U")),
               NcPoly.zero(preset.alphabet)),
    ]
    return report_from_clauses("thm-nou", {"n": n, "lambda": str(lam)}, clauses)


def verify_ascending_recurrence(n: int, lam) -> VerificationReport:
    """B(n) equals B(n-1) * (D + (n-1)*lam*I) modulo the plus relations."""
    if n < 1:
        raise ValueError("recurrence needs n >= 1")
    lam = CycloScalar.of(lam)
    preset = cached_preset("first-order-plus", lam)
    spec = BinomialSpec(n, lam, preset)
    unit = preset.unit()
    lhs = normalize(spec.build(), preset)
    rhs = normalize(
        build_binomial(n - 1, lam, spec.u(), spec.d()) * (spec.d() + (lam * (n - 1)) * unit),
        preset,
    )
    return report_from_clauses("rec-3", {"n": n, "lambda": str(lam)}, [Clause("", lhs, rhs)])


def verify_minus_commutator_theorem(n: int, lam) -> VerificationReport:
    """Kernel restriction under DU -> UD - lam*U: parity dichotomy and shift."""
    lam = CycloScalar.of(lam)
    preset = cached_preset("first-order-minus", lam)
    spec = BinomialSpec(n, lam, preset)
    b = spec.build()
    restricted = restrict_to_kernel(b, preset)
    zero = NcPoly.zero(preset.alphabet)
    clauses = []
    if n % 2 == 1:
        clauses.append(Clause("odd-vanishes", restricted, zero))
    elif n > 0:
        expected = expected_even_restriction(n, (-2 * lam) * spec.u(), preset)
        clauses.append(Clause("even-closed-form", restricted, expected.payload))
    unit = preset.unit()
    shifted = restrict_to_kernel((2 * spec.d() + (lam * n) * unit) * b, preset)
    clauses.append(Clause("shifted-vanishes", shifted, zero))
    return report_from_clauses("thm-wrongsign", {"n": n, "lambda": str(lam)}, clauses)


def verify_minus_recurrence(n: int, lam) -> VerificationReport:
    """Three-term recurrence under the minus relations (two-term at n = 2)."""
    if n < 2:
        raise ValueError("recurrence needs n >= 2")
    lam = CycloScalar.of(lam)
    preset = cached_preset("first-order-minus", lam)
    spec = BinomialSpec(n, lam, preset)
    u, d, unit = spec.u(), spec.d(), preset.unit()
    lhs = normalize(spec.build(), preset)
    rhs_free = build_binomial(n - 1, lam, u, d) * (d + (lam * (n - 1)) * unit)
    rhs_free = rhs_free - (2 * (n - 1)) * lam * (u * build_binomial(n - 2, lam, u, d))
    if n > 2:
        rhs_free = rhs_free + (2 * (n - 1) * (n - 2)) * (lam * lam) * (
            u * build_binomial(n - 3, lam, u, d)
        )
    rhs = normalize(rhs_free, preset)
    return report_from_clauses("rec-6", {"n": n, "lambda": str(lam)}, [Clause("", lhs, rhs)])


def verify_second_commutator_theorem(n: int, lam) -> VerificationReport:
    """Kernel restriction when the second commutator is lam^2 * U.

    The generator C stands for the commutator of D and U.  At lam = 0 the
    same rules degenerate to a central C, and the two-step recurrence is
    cross-checked as an extra clause.
    """
    lam = CycloScalar.of(lam)
    preset = cached_preset("second-order", lam)
    spec = BinomialSpec(n, lam, preset)
    b = spec.build()
    c = preset.generator("C")
    u, d, unit = spec.u(), spec.d(), preset.unit()
    restricted = restrict_to_kernel(b, preset)
    zero = NcPoly.zero(preset.alphabet)
    clauses = [Clause("c-names-commutator", normalize(commutator(d, u), preset), c)]
    if n % 2 == 1:
        clauses.append(Clause("odd-vanishes", restricted, zero))
    elif n > 0:
        expected = expected_even_restriction(n, c - lam * u, preset)
        clauses.append(Clause("even-closed-form", restricted, expected.payload))
    shifted = restrict_to_kernel((2 * d + (lam * n) * unit) * b, preset)
    clauses.append(Clause("shifted-vanishes", shifted, zero))
    if lam.is_zero and n >= 3:
        prev = restrict_to_kernel(build_binomial(n - 2, lam, u, d), preset)
        clauses.append(
            Clause("two-step-recurrence", restricted, normalize((n - 1) * (c * prev), preset))
        )
    return report_from_clauses("thm-2nd", {"n": n, "lambda": str(lam)}, clauses)


def verify_central_recurrence(n: int) -> VerificationReport:
    """Restriction drops by two degrees at multiplier (n-1)*C when lam = 0."""
    if n < 3:
        raise ValueError("two-step recurrence needs n >= 3")
    preset = cached_preset("second-order-central", ZERO)
    spec = BinomialSpec(n, ZERO, preset)
    c = preset.generator("C")
    lhs = restrict_to_kernel(spec.build(), preset)
    prev = restrict_to_kernel(
        build_binomial(n - 2, ZERO, spec.u(), spec.d()), preset
    )
    rhs = normalize((n - 1) * (c * prev), preset)
    return report_from_clauses("rec-7", {"n": n}, [Clause("", lhs, rhs)])


def verify_kernel_vectors(n: int, lam, j: int) -> VerificationReport:
    """Eigenvector evaluation at mu = -j*lam annihilates the combination.

    Out-of-range j is allowed and simply fails, serving as the negative
    control case.
    """
    if j < 0:
        raise ValueError("j must be non-negative")
    lam = CycloScalar.of(lam)
    preset = cached_preset("first-order-plus", lam)
    spec = BinomialSpec(n, lam, preset)
    value = kernel_eval(spec.build(), preset, -(lam * j))
    zero = NcPoly.zero(preset.alphabet)
    return report_from_clauses(
        "cor-kernel", {"n": n, "lambda": str(lam), "j": j}, [Clause("", value, zero)]
    )


def verify_w_independence(n: int, lam, mu) -> VerificationReport:
    """Replacing V by V + W does not change the combination, abstractly."""
    lam = CycloScalar.of(lam)
    mu = CycloScalar.of(mu)
    preset = cached_preset("partial-vw", lam, mu)
    v = preset.generator("V")
    w = preset.generator("W")
    d = preset.generator("D")
    lhs = normalize(build_binomial(n, lam, v + w, d), preset)
    rhs = normalize(build_binomial(n, lam, v, d), preset)
    return report_from_clauses(
        "cor-vw",
        {"n": n, "lambda": str(lam), "mu": str(mu), "variant": "abstract"},
        [Clause("", lhs, rhs)],
    )


def verify_alt_expansion(n: int, lam) -> VerificationReport:
    """The two expansions agree term by term with no relations applied."""
    if n < 1:
        raise ValueError("alternative expansion requires n > 0")
    lam = CycloScalar.of(lam)
    preset = cached_preset("free")
    spec = BinomialSpec(n, lam, preset)
    return report_from_clauses(
        "lemma-l2",
        {"n": n, "lambda": str(lam)},
        [Clause("", spec.build(), spec.build_alt())],
    )


def verify_inverse_factorization(n: int, lam) -> VerificationReport:
    """B(n) equals (D * Uinv)^n * U^n once U is invertible."""
    lam = CycloScalar.of(lam)
    preset = cached_preset("invertible-plus", lam)
    spec = BinomialSpec(n, lam, preset)
    uinv = preset.generator("Uinv")
    lhs = normalize(spec.build(), preset)
    rhs = normalize((spec.d() * uinv) ** n * spec.u() ** n, preset)
    return report_from_clauses(
        "lemma-l3", {"n": n, "lambda": str(lam)}, [Clause("", lhs, rhs)]
    )


def verify_shift_binomial(n: int) -> VerificationReport:
    """Shifting A1 down and A2 up by the unit leaves the binomial sum fixed."""
    alpha = Alphabet(("A1", "A2"))
    a1 = NcPoly.generator(alpha, "A1")
    a2 = NcPoly.generator(alpha, "A2")
    unit = NcPoly.unit(alpha)
    lhs = NcPoly.zero(alpha)
    rhs = NcPoly.zero(alpha)
    for k in range(n + 1):
        lhs = lhs + binom(n, k) * ((a1 - unit) ** k * (a2 + unit) ** (n - k))
        rhs = rhs + binom(n, k) * (a1**k * a2 ** (n - k))
    return report_from_clauses("lemma-eq5", {"n": n}, [Clause("", lhs, rhs)])


def verify_noncommuting_binomial_form(n: int, lam) -> VerificationReport:
    """B(n) as a binomial sum in DU - U^2 and U^2, times Uinv^n."""
    lam = CycloScalar.of(lam)
    preset = cached_preset("invertible-minus", lam)
    spec = BinomialSpec(n, lam, preset)
    u, d = spec.u(), spec.d()
    uinv = preset.generator("Uinv")
    core = NcPoly.zero(preset.alphabet)
    for k in range(n + 1):
        core = core + binom(n, k) * ((d * u - u * u) ** k * (u * u) ** (n - k))
    lhs = normalize(spec.build(), preset)
    rhs = normalize(core * uinv**n, preset)
    return report_from_clauses(
        "final-remark", {"n": n, "lambda": str(lam)}, [Clause("", lhs, rhs)]
    )
