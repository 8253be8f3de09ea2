"""Command-line front end: solve, check, and reproduce.

Exit codes: 0 success (nonempty solution set / check passed), 1 input error,
2 enumeration cap exceeded, 3 empty solution set, 4 check failed.  Reports
go to stdout and are byte-identical for identical inputs and flags; timing
and diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time

from .concepts import CONCEPT_NAMES, SolveReport, Solver
from .dsl import canonical_text, parse
from .economy import Economy
from .errors import (
    BadMatchingSpec,
    DslError,
    DynmatchError,
    NotACandidate,
    SizeLimitExceeded,
)
from .framework import check_consistency, check_generalized_consistency, is_phi_solution
from .matching import (
    DEFAULT_MAX_MATCHINGS,
    matching_text,
    parse_matching_text,
)
from .reproduce import RUNNERS

SCHEMA = "solve-report/1"

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_SIZE = 2
EXIT_EMPTY = 3
EXIT_CHECK_FAILED = 4


def _load(path: str) -> tuple[Economy, str]:
    """Parse an economy file; returns the economy and its content digest."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    doc = parse(text)
    digest = hashlib.sha256(canonical_text(text).encode()).hexdigest()
    return doc.to_economy(), digest


def _value(x) -> str:
    return str(x)


def _witness_dict(w) -> dict:
    return {
        "kind": w.kind,
        "period": w.period,
        "agents": list(w.agents),
        "payoffs": [_value(p) for p in w.payoffs],
    }


def _report_dict(report: SolveReport, digest: str, threads: int) -> dict:
    return {
        "schema": SCHEMA,
        "economy_digest": digest,
        "concept": report.concept,
        "flags": {
            "empty_conjectures": report.empty_policy,
            "max_matchings": report.max_matchings,
            "threads": threads,
        },
        "solutions": [matching_text(m) for m in report.solutions],
        "candidates": [matching_text(m) for m in report.candidates],
        "consistency": [
            {
                "matching": matching_text(m),
                "passed": passed,
                "failures": [{"period": t, "agent": k} for t, k in fails],
            }
            for m, passed, fails in report.consistency
        ],
        "witnesses": [
            {"matching": matching_text(m), **_witness_dict(w)}
            for m, w in report.witnesses
        ],
    }


def _print_report(report: SolveReport) -> None:
    print(f"concept: {report.concept}")
    print(f"solutions ({len(report.solutions)}):")
    for m in report.solutions:
        print(f"  {matching_text(m)}")
    print(f"candidates ({len(report.candidates)}):")
    for m, passed, fails in report.consistency:
        status = "consistent" if passed else (
            "inconsistent at " + ", ".join(f"(t={t}, {k})" for t, k in fails)
        )
        print(f"  {matching_text(m)}  [{status}]")
    for m, w in report.witnesses:
        print(
            f"rejected {matching_text(m)}: {w.kind} block at t={w.period} "
            f"by {', '.join(w.agents)}"
        )


def _read_matching_arg(economy: Economy, spec: str):
    if spec.startswith("@"):
        with open(spec[1:], encoding="utf-8") as fh:
            spec = fh.read()
    return parse_matching_text(economy, spec)


def cmd_solve(args) -> int:
    economy, digest = _load(args.file)
    solver = Solver(args.empty_conjectures, args.max_matchings)
    start = time.perf_counter()
    report = solver.solve(args.concept, economy)
    elapsed = time.perf_counter() - start
    print(f"solved in {elapsed:.3f}s", file=sys.stderr)
    if args.json:
        print(json.dumps(_report_dict(report, digest, args.threads), indent=2, sort_keys=True))
    else:
        _print_report(report)
    return EXIT_OK if report.solutions else EXIT_EMPTY


def cmd_check(args) -> int:
    economy, _ = _load(args.file)
    solver = Solver(args.empty_conjectures, args.max_matchings)
    family = solver.family(args.concept)
    if args.check in ("cc", "solution") and args.matching is None:
        print(f"--matching is required for --check {args.check}", file=sys.stderr)
        return EXIT_INPUT
    if args.check == "gc":
        verdict = check_generalized_consistency(
            economy, family, args.empty_conjectures, args.max_matchings
        )
        if verdict.passed:
            print("generalized consistency: pass")
            return EXIT_OK
        print("generalized consistency: fail")
        for m, t, k in verdict.failures:
            print(f"  {matching_text(m)} not conjectured by {k} at t={t}")
        return EXIT_CHECK_FAILED
    m = _read_matching_arg(economy, args.matching)
    if args.check == "cc":
        verdict = check_consistency(
            economy, m, family, args.empty_conjectures, args.max_matchings
        )
        if verdict.passed:
            print("consistency: pass")
            return EXIT_OK
        print("consistency: fail")
        for t, k in verdict.failures:
            print(f"  not conjectured by {k} at t={t}")
        return EXIT_CHECK_FAILED
    result = is_phi_solution(economy, m, family, args.empty_conjectures)
    if result is True:
        print("solution: pass")
        return EXIT_OK
    print(
        f"solution: fail — {result.kind} block at t={result.period} "
        f"by {', '.join(result.agents)}"
    )
    return EXIT_CHECK_FAILED


def cmd_reproduce(args) -> int:
    claims = RUNNERS[args.example]()
    all_pass = True
    for label, passed, detail in claims:
        mark = "PASS" if passed else "FAIL"
        all_pass &= passed
        print(f"{mark}  {label} ({detail})")
    return EXIT_OK if all_pass else EXIT_CHECK_FAILED


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("file", help="economy file (.econ)")
    p.add_argument("--concept", choices=CONCEPT_NAMES, required=True)
    p.add_argument(
        "--empty-conjectures",
        choices=("vacuous", "strict"),
        default="vacuous",
        help="how an empty conjecture set constrains its owner",
    )
    p.add_argument("--max-matchings", type=int, default=DEFAULT_MAX_MATCHINGS)
    p.add_argument(
        "--threads",
        type=int,
        default=1,
        help="solver thread budget (currently evaluated sequentially)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dynmatch",
        description="Exact solver for two-sided irreversible dynamic matching markets",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="compute solutions and candidates")
    _add_common(p_solve)
    p_solve.add_argument("--json", action="store_true", help="machine-readable report")
    p_solve.set_defaults(func=cmd_solve)

    p_check = sub.add_parser("check", help="verify a matching or a concept")
    _add_common(p_check)
    p_check.add_argument(
        "--check", choices=("cc", "gc", "solution"), default="solution"
    )
    p_check.add_argument(
        "--matching", help="inline matching text ('t=1: a1-b1 | t=2: -') or @file"
    )
    p_check.set_defaults(func=cmd_check)

    p_rep = sub.add_parser("reproduce", help="re-run the bundled reference claims")
    p_rep.add_argument("example", choices=sorted(RUNNERS))
    p_rep.set_defaults(func=cmd_reproduce)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SizeLimitExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SIZE
    except (DslError, BadMatchingSpec, NotACandidate, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except DynmatchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
