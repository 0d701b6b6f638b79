"""Command-line harness: expand expressions, run verification suites.

Exit codes: 0 when every non-skipped case passes, 1 when any case fails,
2 on usage or literal-parse errors.  Output is deterministic: identical
flags and seed give byte-identical output, regardless of --jobs.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from . import binomial, realize
from .report import FAIL, PASS, VerificationReport, skipped_report
from .rewrite import (
    PRESET_NAMES,
    cached_preset,
    check_confluence,
    incomplete_vw_fixture,
    make_preset,
    normalize,
)
from .freealg import NcPoly
from .scalars import ScalarParseError, ZERO, format_scalar, parse_scalar

DEFAULT_SEED = 1729
DEFAULT_CONFLUENCE_DEGREE = 6

BASE_LAMBDAS = ("1", "2", "-3", "1/2", "i", "1+i")

# suite name -> (default n_max, default lambda literals or None, needs nonzero lambda)
SUITE_META: dict[str, tuple[int | None, tuple[str, ...] | None, bool]] = {
    "thm-nou": (10, BASE_LAMBDAS + ("0",), False),
    "rec-3": (10, BASE_LAMBDAS, False),
    "thm-wrongsign": (10, BASE_LAMBDAS, True),
    "rec-6": (8, BASE_LAMBDAS, True),
    "thm-2nd": (8, BASE_LAMBDAS + ("0",), False),
    "rec-7": (8, None, False),
    "cor-kernel": (8, BASE_LAMBDAS, False),
    "cor-vw": (8, BASE_LAMBDAS, False),
    "lemma-l2": (10, BASE_LAMBDAS + ("0",), False),
    "lemma-l3": (8, BASE_LAMBDAS, False),
    "lemma-eq5": (8, None, False),
    "final-remark": (8, BASE_LAMBDAS, False),
    "exp": (8, BASE_LAMBDAS, False),
    "sin": (8, BASE_LAMBDAS, True),
    "linear": (8, None, False),
    "chvar-gauss": (6, BASE_LAMBDAS, True),
    "chvar-log": (6, BASE_LAMBDAS, True),
    "vector": (6, BASE_LAMBDAS, False),
    "eq5-matrix": (6, None, False),
    "third-order": (5, ("1",), True),
    "confluence": (None, None, False),
}

SUITE_ORDER = tuple(SUITE_META)

VW_MU_SAMPLES = ("0", "2")
LINEAR_AB_SAMPLES = ((1, 0), (2, 5))
EQ5_DIMS = (2, 3)
EQ5_SEEDS = (7, 42)
VECTOR_DIMS = (2, 3)


@dataclass(frozen=True)
class SuiteConfig:
    n_max: int | None = None
    lambdas: tuple[str, ...] | None = None  # canonical literals
    j: int | None = None
    m: int | None = None
    seed: int | None = None
    degree: int = DEFAULT_CONFLUENCE_DEGREE
    jobs: int = 1


def _canonical_lambdas(suite: str, cfg: SuiteConfig) -> tuple[str, ...]:
    _, default, _ = SUITE_META[suite]
    literals = cfg.lambdas if cfg.lambdas is not None else (default or ())
    return tuple(format_scalar(parse_scalar(s)) for s in literals)


def _suite_n_max(suite: str, cfg: SuiteConfig) -> int:
    default, _, _ = SUITE_META[suite]
    if cfg.n_max is not None:
        return cfg.n_max
    return default if default is not None else 0


def iter_cases(suite: str, cfg: SuiteConfig) -> list[dict]:
    """Deterministic case list for one suite."""
    if suite not in SUITE_META:
        raise ValueError(f"unknown suite {suite!r}")
    n_max = _suite_n_max(suite, cfg)
    lambdas = _canonical_lambdas(suite, cfg)
    _, _, needs_nonzero = SUITE_META[suite]
    seed = cfg.seed if cfg.seed is not None else DEFAULT_SEED
    cases: list[dict] = []

    def lam_cases(min_n: int, extra=None):
        for lam in lambdas:
            zero_lam = parse_scalar(lam).is_zero
            for n in range(min_n, n_max + 1):
                case = {"suite": suite, "n": n, "lambda": lam}
                if extra:
                    case.update(extra)
                if zero_lam and needs_nonzero:
                    case["skip"] = "hypothesis requires lambda != 0"
                cases.append(case)

    if suite in ("thm-nou", "thm-wrongsign", "thm-2nd", "lemma-l3", "final-remark"):
        lam_cases(0)
    elif suite in ("rec-3", "lemma-l2"):
        lam_cases(1)
    elif suite == "rec-6":
        lam_cases(2)
    elif suite == "rec-7":
        cases.extend({"suite": suite, "n": n} for n in range(3, n_max + 1))
    elif suite == "cor-kernel":
        for lam in lambdas:
            for n in range(0, n_max + 1):
                js = [cfg.j] if cfg.j is not None else list(range(n))
                for j in js:
                    cases.append({"suite": suite, "n": n, "lambda": lam, "j": j})
    elif suite == "cor-vw":
        for lam in lambdas:
            for n in range(0, n_max + 1):
                for mu in VW_MU_SAMPLES:
                    cases.append(
                        {"suite": suite, "n": n, "lambda": lam, "mu": mu, "variant": "abstract"}
                    )
                # function-space check grows fast; degree 6 already covers the claim
                if n <= 6:
                    cases.append(
                        {"suite": suite, "n": n, "lambda": lam, "seed": seed,
                         "variant": "realized"}
                    )
    elif suite == "lemma-eq5":
        cases.extend({"suite": suite, "n": n} for n in range(0, n_max + 1))
    elif suite == "exp":
        for lam in lambdas:
            for n in range(0, n_max + 1):
                js = [None] if n == 0 else (
                    [cfg.j] if cfg.j is not None else list(range(n))
                )
                for j in js:
                    if j is not None and j > n - 1:
                        continue
                    cases.append({"suite": suite, "n": n, "lambda": lam, "j": j})
    elif suite == "sin":
        lam_cases(0)
    elif suite == "linear":
        for a, b in LINEAR_AB_SAMPLES:
            for n in range(0, n_max + 1):
                cases.append({"suite": suite, "n": n, "a": a, "b": b})
    elif suite in ("chvar-gauss", "chvar-log"):
        for lam in lambdas:
            zero_lam = parse_scalar(lam).is_zero
            for n in range(1, n_max + 1):
                js = [cfg.j] if cfg.j is not None else list(range(n))
                for j in js:
                    if j > n - 1:
                        continue
                    case = {"suite": suite, "n": n, "lambda": lam, "j": j}
                    if zero_lam and needs_nonzero:
                        case["skip"] = "hypothesis requires lambda != 0"
                    cases.append(case)
    elif suite == "vector":
        dims = (cfg.m,) if cfg.m is not None else VECTOR_DIMS
        for item in range(1, 8):
            for lam in lambdas:
                zero_lam = parse_scalar(lam).is_zero
                for n in range(0, n_max + 1):
                    for m in dims:
                        case = {
                            "suite": suite, "item": item, "n": n,
                            "lambda": lam, "m": m, "seed": seed,
                        }
                        if zero_lam and item in (5, 6, 7):
                            case["skip"] = "sine items need lambda != 0"
                        cases.append(case)
        for n in range(0, n_max + 1):
            for m in dims:
                cases.append({"suite": suite, "item": 8, "n": n, "m": m, "seed": seed})
    elif suite == "eq5-matrix":
        dims = (cfg.m,) if cfg.m is not None else EQ5_DIMS
        seeds = (cfg.seed,) if cfg.seed is not None else EQ5_SEEDS
        for n in range(0, n_max + 1):
            for dim in dims:
                for s in seeds:
                    cases.append({"suite": suite, "n": n, "dim": dim, "seed": s})
    elif suite == "third-order":
        for lam_text in lambdas:
            lam = parse_scalar(lam_text)
            if lam.is_zero:
                cases.append(
                    {"suite": suite, "n": 3, "lambda": lam_text,
                     "skip": "scan needs lambda != 0"}
                )
                continue
            from .scalars import IMAG, OMEGA

            mus = (lam, OMEGA * lam, OMEGA * OMEGA * lam, IMAG * lam)
            for n in range(3, n_max + 1, 2):
                for mu in mus:
                    cases.append(
                        {"suite": suite, "n": n, "lambda": lam_text, "mu": format_scalar(mu)}
                    )
    elif suite == "confluence":
        for name in PRESET_NAMES:
            cases.append({"suite": suite, "preset": name, "degree": cfg.degree})
    return cases


def run_case(case: dict) -> VerificationReport:
    """Execute one case; pure function of the case dict."""
    suite = case["suite"]
    if "skip" in case:
        params = {k: v for k, v in case.items() if k not in ("suite", "skip")}
        return skipped_report(suite, params, case["skip"])
    lam = parse_scalar(case["lambda"]) if "lambda" in case else ZERO
    if suite == "thm-nou":
        return binomial.verify_u_independence(case["n"], lam)
    if suite == "rec-3":
        return binomial.verify_ascending_recurrence(case["n"], lam)
    if suite == "thm-wrongsign":
        return binomial.verify_minus_commutator_theorem(case["n"], lam)
    if suite == "rec-6":
        return binomial.verify_minus_recurrence(case["n"], lam)
    if suite == "thm-2nd":
        return binomial.verify_second_commutator_theorem(case["n"], lam)
    if suite == "rec-7":
        return binomial.verify_central_recurrence(case["n"])
    if suite == "cor-kernel":
        return binomial.verify_kernel_vectors(case["n"], lam, case["j"])
    if suite == "cor-vw":
        if case["variant"] == "abstract":
            return binomial.verify_w_independence(case["n"], lam, parse_scalar(case["mu"]))
        return realize.verify_w_independence_realized(case["n"], lam, case["seed"])
    if suite == "lemma-l2":
        return binomial.verify_alt_expansion(case["n"], lam)
    if suite == "lemma-l3":
        return binomial.verify_inverse_factorization(case["n"], lam)
    if suite == "lemma-eq5":
        return binomial.verify_shift_binomial(case["n"])
    if suite == "final-remark":
        return binomial.verify_noncommuting_binomial_form(case["n"], lam)
    if suite == "exp":
        return realize.verify_exponential(case["n"], lam, case["j"])
    if suite == "sin":
        return realize.verify_sine(case["n"], lam)
    if suite == "linear":
        return realize.verify_linear(case["n"], case["a"], case["b"])
    if suite == "chvar-gauss":
        return realize.verify_change_of_variables(case["n"], lam, case["j"], "gauss")
    if suite == "chvar-log":
        return realize.verify_change_of_variables(case["n"], lam, case["j"], "log")
    if suite == "vector":
        return realize.verify_vector_item(
            case["item"], case["n"], lam, case["m"], case["seed"]
        )
    if suite == "eq5-matrix":
        return realize.verify_shift_binomial_matrices(case["n"], case["dim"], case["seed"])
    if suite == "third-order":
        reports = realize.third_order_scan([case["n"]], lam, [parse_scalar(case["mu"])])
        return reports[0]
    if suite == "confluence":
        preset = cached_preset(case["preset"], 1, 2)
        conf = check_confluence(preset, case["degree"])
        return VerificationReport(
            suite,
            {"preset": case["preset"], "degree": case["degree"]},
            PASS if conf.ok else FAIL,
            f"words-checked: {conf.words_checked}",
            "confluent",
            "0" if conf.ok else str(conf),
        )
    raise ValueError(f"unknown suite {suite!r}")


def _emit_reports(reports: list[VerificationReport], fmt: str, out) -> dict:
    counts = {"total": len(reports), "passed": 0, "failed": 0, "skipped": 0}
    for rep in reports:
        counts["passed" if rep.status == PASS else
               "failed" if rep.status == FAIL else "skipped"] += 1
        if fmt == "json":
            out.write(json.dumps(rep.to_json_obj()) + "\n")
        else:
            out.write(rep.to_text_line() + "\n")
    if fmt == "json":
        out.write(json.dumps({"summary": counts}) + "\n")
    else:
        out.write(
            "total={total} passed={passed} failed={failed} skipped={skipped}\n".format(**counts)
        )
    return counts


def _run_cases(cases: list[dict], jobs: int) -> list[VerificationReport]:
    if jobs > 1 and len(cases) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(run_case, cases, chunksize=8))
    return [run_case(c) for c in cases]


def cmd_verify(args, out) -> int:
    suites = list(SUITE_ORDER) if args.suite == "all" else [args.suite]
    cfg = SuiteConfig(
        n_max=args.n_max,
        lambdas=tuple(args.lambdas.split(",")) if args.lambdas else None,
        j=args.j,
        m=args.m,
        seed=args.seed,
        degree=args.degree,
        jobs=args.jobs,
    )
    cases = []
    for suite in suites:
        cases.extend(iter_cases(suite, cfg))
    reports = _run_cases(cases, cfg.jobs)
    counts = _emit_reports(reports, args.format, out)
    return 1 if counts["failed"] else 0


def cmd_expand(args, out) -> int:
    lam = parse_scalar(args.lambdas) if args.lambdas else ZERO
    preset_name = args.preset or "free"
    preset = make_preset(preset_name, lam, ZERO)
    names = preset.alphabet.names
    if "U" not in names or "D" not in names:
        raise ValueError(f"preset {preset_name!r} has no U/D generators to expand over")
    free_form = binomial.build_binomial(
        args.n, lam, preset.generator("U"), preset.generator("D")
    )
    normal_form = normalize(free_form, preset)
    if args.format == "json":
        out.write(
            json.dumps(
                {
                    "n": args.n,
                    "lambda": format_scalar(lam),
                    "preset": preset_name,
                    "free": str(free_form),
                    "normal": str(normal_form),
                }
            )
            + "\n"
        )
    else:
        out.write(f"free: {free_form}\n")
        out.write(f"normal ({preset_name}): {normal_form}\n")
    return 0


def _selfcheck_scalar_axioms(seed: int, samples: int) -> VerificationReport:
    rng = random.Random(seed)
    from fractions import Fraction

    from .scalars import CycloScalar, ONE

    def rand_scalar():
        return CycloScalar(
            tuple(Fraction(rng.randint(-6, 6), rng.randint(1, 4)) for _ in range(4))
        )

    failures = 0
    for _ in range(samples):
        a, b, c = rand_scalar(), rand_scalar(), rand_scalar()
        ok = (
            (a + b) + c == a + (b + c)
            and (a * b) * c == a * (b * c)
            and a * (b + c) == a * b + a * c
            and a + b == b + a
            and a * b == b * a
            and (a - a).is_zero
        )
        if ok and not a.is_zero:
            ok = a * a.inv() == ONE
        if not ok:
            failures += 1
    status = PASS if failures == 0 else FAIL
    return VerificationReport(
        "selfcheck", {"check": "scalar-axioms", "samples": samples, "seed": seed},
        status, f"failures: {failures}", "failures: 0", str(failures)
    )


def _selfcheck_rho_agreement(seed: int, count: int) -> VerificationReport:
    rng = random.Random(seed)
    mismatches = 0
    for preset_name in ("first-order-plus", "first-order-minus"):
        preset = cached_preset(preset_name, 1)
        alpha = preset.alphabet
        for _ in range(count):
            terms = {}
            for _ in range(rng.randint(1, 4)):
                word = tuple(rng.randint(0, 1) for _ in range(rng.randint(0, 5)))
                terms[word] = terms.get(word, 0) + rng.randint(-4, 4)
            p = NcPoly(alpha, terms)
            u_deg = p.letter_degree("U")
            size = u_deg + 3
            lhs = realize.truncated_shift_matrix(p, preset, size)
            rhs = realize.truncated_shift_matrix(normalize(p, preset), preset, size)
            block = size - u_deg
            if realize.safe_block(lhs, block) != realize.safe_block(rhs, block):
                mismatches += 1
    status = PASS if mismatches == 0 else FAIL
    return VerificationReport(
        "selfcheck", {"check": "shift-representation", "count": count, "seed": seed},
        status, f"mismatches: {mismatches}", "mismatches: 0", str(mismatches)
    )


def cmd_selfcheck(args, out) -> int:
    seed = args.seed if args.seed is not None else DEFAULT_SEED
    reports = [_selfcheck_scalar_axioms(seed, 1000)]
    for name in PRESET_NAMES:
        preset = cached_preset(name, 1, 2)
        conf = check_confluence(preset, args.degree)
        reports.append(
            VerificationReport(
                "selfcheck", {"check": "confluence", "preset": name, "degree": args.degree},
                PASS if conf.ok else FAIL,
                f"words-checked: {conf.words_checked}", "confluent",
                "0" if conf.ok else str(conf),
            )
        )
    if args.with_broken_fixture:
        fixture = incomplete_vw_fixture(parse_scalar("1"))
        conf = check_confluence(fixture, max(3, args.degree))
        reports.append(
            VerificationReport(
                "selfcheck",
                {"check": "confluence", "preset": fixture.name, "degree": max(3, args.degree)},
                PASS if conf.ok else FAIL,
                f"words-checked: {conf.words_checked}", "confluent",
                "0" if conf.ok else str(conf),
            )
        )
    reports.append(_selfcheck_rho_agreement(seed, 40))
    counts = _emit_reports(reports, args.format, out)
    return 1 if counts["failed"] else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ncbinom",
        description="Exact verification of binomial-type identities for "
        "non-commuting operators.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    expand = sub.add_parser("expand", help="print one combination, free and normalized")
    expand.add_argument("--n", type=int, required=True)
    expand.add_argument("--lambda", dest="lambdas", default="0", metavar="SCALAR")
    expand.add_argument("--preset", choices=PRESET_NAMES, default="free")
    expand.add_argument("--format", choices=("text", "json"), default="text")

    verify = sub.add_parser("verify", help="run a verification suite")
    verify.add_argument("suite_pos", nargs="?", metavar="SUITE")
    verify.add_argument("--suite", dest="suite_flag")
    verify.add_argument("--n-max", dest="n_max", type=int)
    verify.add_argument("--lambda", dest="lambdas", metavar="LIST")
    verify.add_argument("--j", type=int)
    verify.add_argument("--m", type=int)
    verify.add_argument("--seed", type=int)
    verify.add_argument("--degree", type=int, default=DEFAULT_CONFLUENCE_DEGREE)
    verify.add_argument("--jobs", type=int, default=1)
    verify.add_argument("--format", choices=("text", "json"), default="text")

    selfcheck = sub.add_parser("selfcheck", help="engine soundness checks")
    selfcheck.add_argument("--degree", type=int, default=DEFAULT_CONFLUENCE_DEGREE)
    selfcheck.add_argument("--seed", type=int)
    selfcheck.add_argument("--format", choices=("text", "json"), default="text")
    selfcheck.add_argument("--with-broken-fixture", action="store_true")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = sys.stdout
    try:
        if args.command == "expand":
            return cmd_expand(args, out)
        if args.command == "verify":
            suite = args.suite_flag or args.suite_pos
            if not suite:
                parser.error("verify needs a suite (positional or --suite)")
            if args.suite_flag and args.suite_pos and args.suite_flag != args.suite_pos:
                parser.error("conflicting suite names given")
            if suite != "all" and suite not in SUITE_META:
                parser.error(
                    f"unknown suite {suite!r}; choose from {', '.join(SUITE_ORDER)} or all"
                )
            args.suite = suite
            return cmd_verify(args, out)
        if args.command == "selfcheck":
            return cmd_selfcheck(args, out)
        parser.error(f"unknown command {args.command!r}")
    except ScalarParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 2


if __name__ == "__main__":
    sys.exit(main())
