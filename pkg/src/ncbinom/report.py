"""Structured pass/fail records for identity checks.

A report captures one verified case: the suite, the case parameters, the
canonical left and right forms, and their difference.  Status is "pass"
exactly when every clause's residual is the zero element (or, for
negative expectations such as the third-order scan, when it is nonzero).
"""

from __future__ import annotations

from dataclasses import dataclass

PASS = "pass"
FAIL = "fail"
SKIPPED = "skipped"


@dataclass(frozen=True)
class VerificationReport:
    suite: str
    params: dict
    status: str
    lhs: str
    rhs: str
    residual: str

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def to_json_obj(self) -> dict:
        return {
            "suite": self.suite,
            "params": self.params,
            "status": self.status,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "residual": self.residual,
        }

    def to_text_line(self) -> str:
        params = " ".join(f"{k}={v}" for k, v in self.params.items())
        return f"[{self.status.upper():>7}] {self.suite} {params}".rstrip()


@dataclass(frozen=True)
class Clause:
    """One comparison inside a case; values must support '-', is_zero, str."""

    label: str
    lhs: object
    rhs: object
    expect_zero: bool = True

    def residual(self):
        return self.lhs - self.rhs

    def holds(self) -> bool:
        zero = self.residual().is_zero
        return zero if self.expect_zero else not zero


def report_from_clauses(suite: str, params: dict, clauses: list[Clause]) -> VerificationReport:
    if not clauses:
        return VerificationReport(suite, params, PASS, "", "", "0")
    ok = all(c.holds() for c in clauses)
    if len(clauses) == 1 and not clauses[0].label:
        c = clauses[0]
        return VerificationReport(
            suite, params, PASS if ok else FAIL, str(c.lhs), str(c.rhs), str(c.residual())
        )
    lhs = " | ".join(f"{c.label}: {c.lhs}" for c in clauses)
    rhs = " | ".join(f"{c.label}: {c.rhs}" for c in clauses)
    residual = " | ".join(f"{c.label}: {c.residual()}" for c in clauses)
    return VerificationReport(suite, params, PASS if ok else FAIL, lhs, rhs, residual)


def skipped_report(suite: str, params: dict, reason: str) -> VerificationReport:
    return VerificationReport(suite, params, SKIPPED, "", "", reason)
