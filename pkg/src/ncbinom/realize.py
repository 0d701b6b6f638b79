"""Exact realization of the abstract identities on function spaces.

The carrier is the span of basis functions x^c * exp(a*x + b*x^2) with
exact scalar exponents; it is closed under the three derivations used
here (d/dx, x*d/dx, x^(-1)*d/dx) and under pointwise multiplication, so
every identity can be evaluated with no analysis and no floating point.
Sines enter through their exponential encoding, which keeps the
arithmetic in the ground field (it contains i).

Also here: constant matrices over the scalars (for the vector-valued
variants and the shifted-binomial matrix oracle), vector- and
matrix-valued functions, the truncated shift representation that serves
as an independent check on the rewrite engine, and the scan showing that
no candidate scalar makes the combination vanish for a genuinely
third-order exponential sum.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .binomial import binom, build_binomial, double_factorial
from .freealg import Alphabet, NcPoly
from .report import Clause, VerificationReport, report_from_clauses
from .rewrite import RelationPreset
from .scalars import IMAG, OMEGA, ONE, ZERO, CycloScalar

# derivation kinds
D_DX = "d/dx"
X_D_DX = "x*d/dx"
XINV_D_DX = "x^-1*d/dx"
DERIVATION_KINDS = (D_DX, X_D_DX, XINV_D_DX)

FuncKey = tuple[CycloScalar, CycloScalar, CycloScalar]  # (c, alpha, beta)


class FuncExpr:
    """Finite sum of terms coeff * x^c * exp(alpha*x + beta*x^2), exact."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[FuncKey, CycloScalar] | None = None):
        clean = {}
        if terms:
            for key, coeff in terms.items():
                coeff = CycloScalar.of(coeff)
                if not coeff.is_zero:
                    clean[key] = coeff
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("FuncExpr is immutable")

    @classmethod
    def _raw(cls, clean_terms: dict[FuncKey, CycloScalar]) -> FuncExpr:
        # internal fast path: terms must already be pruned and coerced
        obj = object.__new__(cls)
        object.__setattr__(obj, "terms", clean_terms)
        return obj

    @staticmethod
    def zero() -> FuncExpr:
        return FuncExpr()

    @staticmethod
    def term(coeff, c=0, alpha=0, beta=0) -> FuncExpr:
        key = (CycloScalar.of(c), CycloScalar.of(alpha), CycloScalar.of(beta))
        return FuncExpr({key: CycloScalar.of(coeff)})

    @staticmethod
    def one() -> FuncExpr:
        return FuncExpr.term(1)

    @staticmethod
    def monomial(c) -> FuncExpr:
        return FuncExpr.term(1, c=c)

    @staticmethod
    def exponential(alpha, beta=0) -> FuncExpr:
        return FuncExpr.term(1, alpha=alpha, beta=beta)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if not isinstance(other, FuncExpr):
            return NotImplemented
        return self.terms == other.terms

    def __add__(self, other: FuncExpr) -> FuncExpr:
        out = dict(self.terms)
        for key, coeff in other.terms.items():
            prev = out.get(key)
            if prev is None:
                out[key] = coeff
            else:
                total = prev + coeff
                if total.is_zero:
                    del out[key]
                else:
                    out[key] = total
        return FuncExpr._raw(out)

    def __neg__(self) -> FuncExpr:
        return FuncExpr._raw({k: -c for k, c in self.terms.items()})

    def __sub__(self, other: FuncExpr) -> FuncExpr:
        return self + (-other)

    def __mul__(self, other) -> FuncExpr:
        if isinstance(other, FuncExpr):
            out: dict[FuncKey, CycloScalar] = {}
            for (c1, a1, b1), v1 in self.terms.items():
                for (c2, a2, b2), v2 in other.terms.items():
                    key = (c1 + c2, a1 + a2, b1 + b2)
                    prod = v1 * v2
                    prev = out.get(key)
                    out[key] = prod if prev is None else prev + prod
            return FuncExpr._raw({k: v for k, v in out.items() if not v.is_zero})
        return self.scaled(other)

    def __rmul__(self, other) -> FuncExpr:
        return self.scaled(other)

    def scaled(self, value) -> FuncExpr:
        c = CycloScalar.of(value)
        if c.is_zero:
            return FuncExpr._raw({})
        return FuncExpr._raw({k: c * v for k, v in self.terms.items()})

    def differentiate(self, kind: str = D_DX) -> FuncExpr:
        """Exact image under one of the three derivations.

        d/dx sends x^c e^{ax+bx^2} to c x^(c-1) + a x^c + 2b x^(c+1), all
        times the same exponential; the other kinds shift the power of x
        by +1 or -1 afterwards.
        """
        if kind not in DERIVATION_KINDS:
            raise ValueError(f"unknown derivation kind {kind!r}")
        shift = {D_DX: 0, X_D_DX: 1, XINV_D_DX: -1}[kind]
        out: dict[FuncKey, CycloScalar] = {}

        def put(key: FuncKey, value: CycloScalar) -> None:
            if value.is_zero:
                return
            prev = out.get(key)
            total = value if prev is None else prev + value
            if total.is_zero:
                out.pop(key, None)
            else:
                out[key] = total

        for (c, a, b), v in self.terms.items():
            base = c + (shift - 1)
            put((base, a, b), v * c)
            put((base + 1, a, b), v * a)
            put((base + 2, a, b), v * (2 * b))
        return FuncExpr._raw(out)

    def sorted_terms(self) -> list[tuple[FuncKey, CycloScalar]]:
        return sorted(
            self.terms.items(),
            key=lambda kv: (kv[0][0].sort_key(), kv[0][1].sort_key(), kv[0][2].sort_key()),
        )

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        pieces = []
        for key, coeff in self.sorted_terms():
            pieces.append(_func_term_str(key, coeff))
        return " + ".join(pieces)

    def __repr__(self) -> str:
        return f"FuncExpr({self})"


def _wrap(scalar: CycloScalar) -> str:
    text = str(scalar)
    return f"({text})" if " " in text else text


def _func_term_str(key: FuncKey, coeff: CycloScalar) -> str:
    c, a, b = key
    factors = []
    if not c.is_zero:
        factors.append("x" if c == ONE else f"x^{_wrap(c)}")
    if not a.is_zero or not b.is_zero:
        inner = []
        if not a.is_zero:
            inner.append(f"{_wrap(a)}*x")
        if not b.is_zero:
            inner.append(f"{_wrap(b)}*x^2")
        factors.append(f"exp({' + '.join(inner)})")
    coeff_str = _wrap(coeff)
    if not factors:
        return coeff_str
    if coeff == ONE:
        return " * ".join(factors)
    return " * ".join([coeff_str] + factors)


def sin_func(lam) -> FuncExpr:
    """sin(lam*x) encoded as (e^{i lam x} - e^{-i lam x}) / 2i."""
    lam = CycloScalar.of(lam)
    half_over_i = (2 * IMAG).inv()
    return (FuncExpr.exponential(IMAG * lam) - FuncExpr.exponential(-(IMAG * lam))) * half_over_i


def cos_func(lam) -> FuncExpr:
    lam = CycloScalar.of(lam)
    half = CycloScalar.of(Fraction(1, 2))
    return (FuncExpr.exponential(IMAG * lam) + FuncExpr.exponential(-(IMAG * lam))) * half


# ---- constant matrices over the scalars ---------------------------------


class Matrix:
    """Dense exact matrix; rows of CycloScalar entries."""

    __slots__ = ("rows",)

    def __init__(self, rows):
        data = tuple(tuple(CycloScalar.of(x) for x in row) for row in rows)
        if data and any(len(r) != len(data[0]) for r in data):
            raise ValueError("ragged matrix")
        object.__setattr__(self, "rows", data)

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    @staticmethod
    def identity(n: int) -> Matrix:
        return Matrix([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @staticmethod
    def zeros(n: int, m: int | None = None) -> Matrix:
        m = n if m is None else m
        return Matrix([[0] * m for _ in range(n)])

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.rows), len(self.rows[0]) if self.rows else 0)

    @property
    def is_zero(self) -> bool:
        return all(x.is_zero for row in self.rows for x in row)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.rows == other.rows

    def __add__(self, other: Matrix) -> Matrix:
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return Matrix(
            [
                [a + b for a, b in zip(r1, r2)]
                for r1, r2 in zip(self.rows, other.rows)
            ]
        )

    def __sub__(self, other: Matrix) -> Matrix:
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return Matrix(
            [
                [a - b for a, b in zip(r1, r2)]
                for r1, r2 in zip(self.rows, other.rows)
            ]
        )

    def __mul__(self, other):
        if isinstance(other, Matrix):
            n, k = self.shape
            k2, m = other.shape
            if k != k2:
                raise ValueError("shape mismatch")
            cols = list(zip(*other.rows)) if other.rows else []
            out = []
            for row in self.rows:
                out.append(
                    [
                        sum((a * b for a, b in zip(row, col)), ZERO)
                        for col in cols
                    ]
                )
            return Matrix(out)
        c = CycloScalar.of(other)
        return Matrix([[c * x for x in row] for row in self.rows])

    __rmul__ = __mul__

    def __pow__(self, e: int) -> Matrix:
        n, m = self.shape
        if n != m:
            raise ValueError("power of a non-square matrix")
        result = Matrix.identity(n)
        for _ in range(e):
            result = result * self
        return result

    def col_vector(self, j: int) -> tuple[CycloScalar, ...]:
        return tuple(row[j] for row in self.rows)

    def __str__(self) -> str:
        return "[" + ", ".join(
            "[" + ", ".join(str(x) for x in row) + "]" for row in self.rows
        ) + "]"

    def __repr__(self) -> str:
        return f"Matrix({self})"


def random_rational(rng: random.Random, span: int = 5) -> Fraction:
    num = rng.randint(-span, span)
    den = rng.randint(1, 4)
    return Fraction(num, den)


def random_matrix(rng: random.Random, m: int, span: int = 5) -> Matrix:
    return Matrix([[random_rational(rng, span) for _ in range(m)] for _ in range(m)])


def random_vector(rng: random.Random, m: int, span: int = 5) -> tuple[CycloScalar, ...]:
    return tuple(CycloScalar.of(random_rational(rng, span)) for _ in range(m))


def derive_seed(seed: int, *parts: int) -> int:
    x = seed & 0xFFFFFFFFFFFFFFFF
    for p in parts:
        x = (x * 6364136223846793005 + p + 1442695040888963407) & 0xFFFFFFFFFFFFFFFF
    return x


# ---- vector and matrix valued functions ----------------------------------


class VecFunc:
    """Column vector of function expressions."""

    __slots__ = ("entries",)

    def __init__(self, entries):
        object.__setattr__(self, "entries", tuple(entries))

    def __setattr__(self, name, value):
        raise AttributeError("VecFunc is immutable")

    @staticmethod
    def constant(values) -> VecFunc:
        return VecFunc([FuncExpr.term(v) for v in values])

    @staticmethod
    def zero(m: int) -> VecFunc:
        return VecFunc([FuncExpr.zero()] * m)

    @property
    def dim(self) -> int:
        return len(self.entries)

    @property
    def is_zero(self) -> bool:
        return all(e.is_zero for e in self.entries)

    def __eq__(self, other) -> bool:
        if not isinstance(other, VecFunc):
            return NotImplemented
        return self.entries == other.entries

    def __add__(self, other: VecFunc) -> VecFunc:
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")
        return VecFunc([a + b for a, b in zip(self.entries, other.entries)])

    def __sub__(self, other: VecFunc) -> VecFunc:
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")
        return VecFunc([a - b for a, b in zip(self.entries, other.entries)])

    def scaled(self, value) -> VecFunc:
        return VecFunc([e.scaled(value) for e in self.entries])

    def times_func(self, f: FuncExpr) -> VecFunc:
        return VecFunc([e * f for e in self.entries])

    def differentiate(self, kind: str = D_DX) -> VecFunc:
        return VecFunc([e.differentiate(kind) for e in self.entries])

    def __str__(self) -> str:
        return "[" + ", ".join(str(e) for e in self.entries) + "]"


class FuncMatrix:
    """Square matrix of function expressions, used as a multiplication operator."""

    __slots__ = ("rows",)

    def __init__(self, rows):
        data = tuple(tuple(rows_entry for rows_entry in row) for row in rows)
        if any(len(r) != len(data) for r in data):
            raise ValueError("multiplication matrices must be square")
        object.__setattr__(self, "rows", data)

    def __setattr__(self, name, value):
        raise AttributeError("FuncMatrix is immutable")

    @staticmethod
    def from_constant(a: Matrix, f: FuncExpr | None = None) -> FuncMatrix:
        f = FuncExpr.one() if f is None else f
        return FuncMatrix([[f.scaled(x) for x in row] for row in a.rows])

    @property
    def dim(self) -> int:
        return len(self.rows)

    def __add__(self, other: FuncMatrix) -> FuncMatrix:
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")
        return FuncMatrix(
            [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)]
        )

    def matvec(self, v: VecFunc) -> VecFunc:
        if v.dim != self.dim:
            raise ValueError("dimension mismatch")
        out = []
        for row in self.rows:
            acc = FuncExpr.zero()
            for entry, comp in zip(row, v.entries):
                acc = acc + entry * comp
            out.append(acc)
        return VecFunc(out)


# ---- operator assignments -------------------------------------------------


@dataclass(frozen=True)
class Derivation:
    kind: str = D_DX

    def __post_init__(self):
        if self.kind not in DERIVATION_KINDS:
            raise ValueError(f"unknown derivation kind {self.kind!r}")


@dataclass(frozen=True)
class MultiplyBy:
    func: FuncExpr


@dataclass(frozen=True)
class MultiplyByMatrix:
    matrix: FuncMatrix


Operator = Derivation | MultiplyBy | MultiplyByMatrix
OperatorAssignment = dict[str, Operator]


def _apply_operator(op: Operator, f):
    if isinstance(op, Derivation):
        return f.differentiate(op.kind)
    if isinstance(op, MultiplyBy):
        if isinstance(f, VecFunc):
            return f.times_func(op.func)
        return op.func * f
    if isinstance(op, MultiplyByMatrix):
        if not isinstance(f, VecFunc):
            raise ValueError("matrix multiplication operators act on vector functions")
        return op.matrix.matvec(f)
    raise TypeError(f"not an operator: {op!r}")


def apply_assigned(p: NcPoly, assignment: OperatorAssignment, f):
    """Act with p on f; the rightmost letter of each word acts first.

    Distinct words share suffixes heavily, so images of suffixes are
    cached instead of recomputed word by word.
    """
    names = p.alphabet.names
    for word in p.terms:
        for letter in word:
            if names[letter] not in assignment:
                raise ValueError(f"generator {names[letter]!r} has no assigned operator")
    suffix_cache: dict[tuple[int, ...], object] = {(): f}

    def image_of(word):
        g = suffix_cache.get(word)
        if g is None:
            g = _apply_operator(assignment[names[word[0]]], image_of(word[1:]))
            suffix_cache[word] = g
        return g

    def merge(acc: dict, func: FuncExpr, coeff: CycloScalar) -> None:
        for key, value in func.terms.items():
            prev = acc.get(key)
            total = coeff * value if prev is None else prev + coeff * value
            if total.is_zero:
                acc.pop(key, None)
            else:
                acc[key] = total

    if isinstance(f, VecFunc):
        acc_vec = [dict() for _ in range(f.dim)]
        for word, coeff in p.terms.items():
            image = image_of(word)
            for slot, entry in zip(acc_vec, image.entries):
                merge(slot, entry, coeff)
        return VecFunc([FuncExpr._raw(slot) for slot in acc_vec])
    acc: dict = {}
    for word, coeff in p.terms.items():
        merge(acc, image_of(word), coeff)
    return FuncExpr._raw(acc)


# ---- scalar-function verifiers --------------------------------------------

_UD = Alphabet(("U", "D"))


def _abstract(n: int, lam) -> NcPoly:
    return build_binomial(
        n, lam, NcPoly.generator(_UD, "U"), NcPoly.generator(_UD, "D")
    )


def verify_exponential(n: int, lam, j: int | None) -> VerificationReport:
    """All four displayed identities for exponential multiplication operators."""
    lam = CycloScalar.of(lam)
    if j is not None and not (0 <= j <= n - 1):
        raise ValueError(f"j={j} outside 0..{n - 1}")
    zero = FuncExpr.zero()
    clauses = []
    if j is not None and n > 0:
        grow = {"U": MultiplyBy(FuncExpr.exponential(lam)), "D": Derivation()}
        target = FuncExpr.exponential(-(lam * j))
        clauses.append(
            Clause("kernel-target", apply_assigned(_abstract(n, lam), grow, target), zero)
        )
    decay = {"U": MultiplyBy(FuncExpr.exponential(-lam)), "D": Derivation()}
    result = apply_assigned(_abstract(n, lam), decay, FuncExpr.one())
    if n % 2 == 1:
        clauses.append(Clause("odd-vanishes", result, zero))
    elif n > 0:
        half = CycloScalar.of(Fraction(n, 2))
        expected = FuncExpr.exponential(-(lam * half)).scaled(
            double_factorial(n - 1) * (-2 * lam) ** (n // 2)
        )
        clauses.append(Clause("even-closed-form", result, expected))
    if n > 0:
        shifted = result.differentiate().scaled(2) + result.scaled(lam * n)
        clauses.append(Clause("shifted-vanishes", shifted, zero))
    params = {"n": n, "lambda": str(lam)}
    if j is not None:
        params["j"] = j
    return report_from_clauses("exp", params, clauses)


def verify_sine(n: int, lam) -> VerificationReport:
    """Sine multiplication operator with binomial parameter i*lam."""
    lam = CycloScalar.of(lam)
    ilam = IMAG * lam
    asg = {"U": MultiplyBy(sin_func(lam)), "D": Derivation()}
    result = apply_assigned(_abstract(n, ilam), asg, FuncExpr.one())
    zero = FuncExpr.zero()
    clauses = []
    if n % 2 == 1:
        clauses.append(Clause("odd-vanishes", result, zero))
    elif n > 0:
        half = CycloScalar.of(Fraction(n, 2))
        expected = FuncExpr.exponential(-(ilam * half)).scaled(
            double_factorial(n - 1) * lam ** (n // 2)
        )
        clauses.append(Clause("even-closed-form", result, expected))
    if n > 0:
        shifted = result.differentiate().scaled(2) + result.scaled(ilam * n)
        clauses.append(Clause("shifted-vanishes", shifted, zero))
    return report_from_clauses("sin", {"n": n, "lambda": str(lam)}, clauses)


def verify_linear(n: int, a, b) -> VerificationReport:
    """Multiplication by a*x + b with zero binomial parameter."""
    a = CycloScalar.of(a)
    b = CycloScalar.of(b)
    u = FuncExpr.monomial(1).scaled(a) + FuncExpr.term(b)
    asg = {"U": MultiplyBy(u), "D": Derivation()}
    result = apply_assigned(_abstract(n, ZERO), asg, FuncExpr.one())
    zero = FuncExpr.zero()
    clauses = []
    if n % 2 == 1:
        clauses.append(Clause("odd-vanishes", result, zero))
    elif n > 0:
        expected = FuncExpr.term(double_factorial(n - 1) * a ** (n // 2))
        clauses.append(Clause("even-closed-form", result, expected))
    if n > 0:
        clauses.append(Clause("derivative-vanishes", result.differentiate(), zero))
    return report_from_clauses(
        "linear", {"n": n, "a": str(a), "b": str(b)}, clauses
    )


def verify_change_of_variables(n: int, lam, j: int, variant: str) -> VerificationReport:
    """Identities transported by x -> x^2/2 (gauss) and x -> ln x (log)."""
    lam = CycloScalar.of(lam)
    if not (0 <= j <= n - 1):
        raise ValueError(f"j={j} outside 0..{n - 1}")
    half = CycloScalar.of(Fraction(1, 2))
    if variant == "gauss":
        asg = {
            "U": MultiplyBy(FuncExpr.exponential(0, lam * half)),
            "D": Derivation(XINV_D_DX),
        }
        target = FuncExpr.exponential(0, -(lam * half * j))
    elif variant == "log":
        asg = {"U": MultiplyBy(FuncExpr.monomial(lam)), "D": Derivation(X_D_DX)}
        target = FuncExpr.monomial(-(lam * j))
    else:
        raise ValueError(f"unknown change-of-variables variant {variant!r}")
    result = apply_assigned(_abstract(n, lam), asg, target)
    return report_from_clauses(
        "chvar-" + variant,
        {"n": n, "lambda": str(lam), "j": j},
        [Clause("", result, FuncExpr.zero())],
    )


# ---- vector-function verifiers ---------------------------------------------


def verify_vector_item(item: int, n: int, lam, m: int, seed: int) -> VerificationReport:
    """One of the eight vector-valued statements, with seeded exact data."""
    lam = CycloScalar.of(lam)
    if m < 1:
        raise ValueError("dimension must be at least 1")
    rng = random.Random(derive_seed(seed, item, n, m))
    a = random_matrix(rng, m)
    cvec = VecFunc.constant(random_vector(rng, m))
    zero = VecFunc.zero(m)
    deriv = {"D": Derivation()}
    params = {"item": item, "n": n, "lambda": str(lam), "m": m, "seed": seed}
    clauses: list[Clause] = []

    if item == 1:
        asg = deriv | {"U": MultiplyByMatrix(FuncMatrix.from_constant(a, FuncExpr.exponential(lam)))}
        b = _abstract(n, lam)
        for j in range(n):
            target_scalar = FuncExpr.exponential(-(lam * j))
            for col in range(m):
                basis = VecFunc(
                    [target_scalar if i == col else FuncExpr.zero() for i in range(m)]
                )
                clauses.append(Clause(f"j={j},col={col}", apply_assigned(b, asg, basis), zero))
    elif item in (2, 3, 4):
        asg = deriv | {
            "U": MultiplyByMatrix(FuncMatrix.from_constant(a, FuncExpr.exponential(-lam)))
        }
        result = apply_assigned(_abstract(n, lam), asg, cvec)
        if item == 2:
            if n % 2 == 1:
                clauses.append(Clause("odd-vanishes", result, zero))
        elif item == 3:
            if n % 2 == 0 and n > 0:
                half = CycloScalar.of(Fraction(n, 2))
                scale = double_factorial(n - 1) * (-2 * lam) ** (n // 2)
                power_c = _matvec_const(a ** (n // 2), cvec)
                expected = power_c.times_func(
                    FuncExpr.exponential(-(lam * half)).scaled(scale)
                )
                clauses.append(Clause("even-closed-form", result, expected))
        else:  # item 4: the sign probe on (2 d/dx +/- lam n)
            plus = result.differentiate().scaled(2) + result.scaled(lam * n)
            minus = result.differentiate().scaled(2) - result.scaled(lam * n)
            clauses.append(Clause("shift-plus-vanishes", plus, zero))
            params["minus_also_zero"] = minus.is_zero
    elif item in (5, 6, 7):
        ilam = IMAG * lam
        asg = deriv | {"U": MultiplyByMatrix(FuncMatrix.from_constant(a, sin_func(lam)))}
        result = apply_assigned(_abstract(n, ilam), asg, cvec)
        if item == 5:
            if n % 2 == 1:
                clauses.append(Clause("odd-vanishes", result, zero))
        elif item == 6:
            if n % 2 == 0 and n > 0:
                half = CycloScalar.of(Fraction(n, 2))
                scale = double_factorial(n - 1) * lam ** (n // 2)
                power_c = _matvec_const(a ** (n // 2), cvec)
                expected = power_c.times_func(
                    FuncExpr.exponential(-(ilam * half)).scaled(scale)
                )
                clauses.append(Clause("even-closed-form", result, expected))
        else:
            if n > 0:
                shifted = result.differentiate().scaled(2) + result.scaled(ilam * n)
                clauses.append(Clause("shifted-vanishes", shifted, zero))
    elif item == 8:
        a1 = a
        coeffs = [random_rational(rng, 3) for _ in range(3)]
        a2 = (
            Matrix.identity(m) * coeffs[0]
            + a1 * coeffs[1]
            + (a1 * a1) * coeffs[2]
        )
        if a1 * a2 != a2 * a1:
            raise ValueError("item 8 requires commuting matrices")
        x_part = FuncMatrix.from_constant(a1, FuncExpr.monomial(1))
        const_part = FuncMatrix.from_constant(a2)
        asg = deriv | {"U": MultiplyByMatrix(x_part + const_part)}
        result = apply_assigned(_abstract(n, ZERO), asg, cvec)
        if n % 2 == 1:
            clauses.append(Clause("odd-vanishes", result, zero))
        elif n > 0:
            scale = double_factorial(n - 1)
            expected = _matvec_const(a1 ** (n // 2), cvec).scaled(scale)
            clauses.append(Clause("even-closed-form", result, expected))
        if n > 0:
            clauses.append(Clause("derivative-vanishes", result.differentiate(), zero))
    else:
        raise ValueError("vector item must be 1..8")
    return report_from_clauses("vector", params, clauses)


def _matvec_const(a: Matrix, v: VecFunc) -> VecFunc:
    return FuncMatrix.from_constant(a).matvec(v)


def verify_shift_binomial_matrices(n: int, dim: int, seed: int) -> VerificationReport:
    """Matrix oracle for the shifted binomial sum identity."""
    if dim < 2:
        raise ValueError("matrix oracle needs dim >= 2")
    rng = random.Random(derive_seed(seed, n, dim))
    a1 = random_matrix(rng, dim)
    a2 = random_matrix(rng, dim)
    ident = Matrix.identity(dim)
    lhs = Matrix.zeros(dim)
    rhs = Matrix.zeros(dim)
    for k in range(n + 1):
        lhs = lhs + binom(n, k) * ((a1 - ident) ** k * (a2 + ident) ** (n - k))
        rhs = rhs + binom(n, k) * (a1**k * a2 ** (n - k))
    return report_from_clauses(
        "eq5-matrix", {"n": n, "dim": dim, "seed": seed}, [Clause("", lhs, rhs)]
    )


# ---- realized W-independence ------------------------------------------------


def random_func_expr(rng: random.Random, nterms: int = 2) -> FuncExpr:
    out = FuncExpr.zero()
    for _ in range(nterms):
        coeff = random_rational(rng, 4)
        c = rng.randint(0, 2)
        alpha = Fraction(rng.randint(-2, 2), rng.randint(1, 2))
        out = out + FuncExpr.term(coeff, c=c, alpha=alpha)
    return out


def verify_w_independence_realized(n: int, lam, seed: int, samples: int = 5) -> VerificationReport:
    """W-independence with concrete multiplication operators.

    V multiplies by a pseudo-random exponential-polynomial (so no
    relation between D and V is assumed at all); W multiplies by
    e^{lam*x}.  The two combinations must agree on every sample input.
    """
    lam = CycloScalar.of(lam)
    rng = random.Random(derive_seed(seed, n))
    v = random_func_expr(rng)
    w = FuncExpr.exponential(lam)
    b = _abstract(n, lam)
    with_w = {"U": MultiplyBy(v + w), "D": Derivation()}
    without_w = {"U": MultiplyBy(v), "D": Derivation()}
    clauses = []
    for idx in range(samples):
        f = random_func_expr(rng)
        clauses.append(
            Clause(
                f"sample-{idx}",
                apply_assigned(b, with_w, f),
                apply_assigned(b, without_w, f),
            )
        )
    return report_from_clauses(
        "cor-vw",
        {"n": n, "lambda": str(lam), "seed": seed, "variant": "realized"},
        clauses,
    )


# ---- truncated shift representation (oracle for the rewrite engine) --------


def truncated_shift_matrix(p: NcPoly, preset: RelationPreset, size: int) -> Matrix:
    """Matrix of p with U a raising shift and D diagonal, on e_0 .. e_size.

    For the plus preset D has eigenvalue k*lam on e_k; for the minus
    preset, -k*lam.  Entries are exact wherever no basis vector escapes
    the truncation; `size` must exceed the U-degree of p by at least 2.
    """
    if preset.name not in ("first-order-plus", "first-order-minus"):
        raise ValueError("shift representation exists for the first-order presets only")
    lam = preset.params["lambda"]
    sign = 1 if preset.name == "first-order-plus" else -1
    u_deg = p.letter_degree("U")
    if size < u_deg + 2:
        raise ValueError(f"size {size} too small; need at least U-degree + 2 = {u_deg + 2}")
    dim = size + 1
    u_idx = p.alphabet.index("U")
    d_idx = p.alphabet.index("D")
    total = Matrix.zeros(dim)
    ident = Matrix.identity(dim)
    shift = Matrix([[1 if i == j + 1 else 0 for j in range(dim)] for i in range(dim)])
    diag = Matrix(
        [[(sign * i) * lam if i == j else ZERO for j in range(dim)] for i in range(dim)]
    )
    letters = {u_idx: shift, d_idx: diag}
    for word, coeff in p.terms.items():
        mat = ident
        for letter in word:
            mat = mat * letters[letter]
        total = total + coeff * mat
    return total


def safe_block(mat: Matrix, size: int) -> Matrix:
    return Matrix([row[: size + 1] for row in mat.rows[: size + 1]])


# ---- third-order scan --------------------------------------------------------


def third_order_scan(n_list, lam, mu_candidates=None) -> list[VerificationReport]:
    """Residuals of the combination for a genuinely third-order exponential sum.

    u = e^{lam x} + e^{w lam x} + e^{w^2 lam x} satisfies u''' = lam^3 u
    and no lower-order equation of that shape.  A case passes when its
    residual is nonzero, i.e. when the candidate parameter fails to
    reproduce the first-order collapse; n = 1 is excluded as degenerate.
    """
    lam = CycloScalar.of(lam)
    if lam.is_zero:
        raise ValueError("the third-order scan needs lam != 0")
    if mu_candidates is None:
        mu_candidates = (lam, OMEGA * lam, OMEGA * OMEGA * lam, IMAG * lam)
    u = (
        FuncExpr.exponential(lam)
        + FuncExpr.exponential(OMEGA * lam)
        + FuncExpr.exponential(OMEGA * OMEGA * lam)
    )
    reports = []
    for n in n_list:
        if n % 2 == 0 or n < 3:
            raise ValueError("the scan covers odd n >= 3")
        for mu in mu_candidates:
            mu = CycloScalar.of(mu)
            asg = {"U": MultiplyBy(u), "D": Derivation()}
            result = apply_assigned(_abstract(n, mu), asg, FuncExpr.one())
            reports.append(
                report_from_clauses(
                    "third-order",
                    {"n": n, "lambda": str(lam), "mu": str(mu)},
                    [Clause("nonvanishing-residual", result, FuncExpr.zero(), expect_zero=False)],
                )
            )
    return reports
