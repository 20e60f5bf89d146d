"""Command-line interface.

Exit codes: 0 pass / member, 1 fail / non-member, 2 none-up-to-bound,
3 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from .actions import build_instance
from .algebra import membership, y_positive_monomial_algebra
from .harness import (
    FAIL,
    NONE_UP_TO_BOUND,
    PASS,
    ScenarioConfig,
    list_scenarios,
    run_scenario,
    verify_report,
)
from .poly import ParseError

_VERDICT_CODES = {PASS: 0, FAIL: 1, NONE_UP_TO_BOUND: 2}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit(2); the contract is 3
        raise UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="ikernel",
        description="Exact invariant-ring computations with re-checkable reports.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run one verification scenario")
    run_p.add_argument("--scenario", required=True)
    run_p.add_argument("--n", type=int, default=1)
    run_p.add_argument("--m", type=int, default=1)
    run_p.add_argument("--max-degree", type=int, default=8)
    run_p.add_argument(
        "--bound",
        action="append",
        default=[],
        metavar="KEY=V",
        help="override a search bound (relation_degree, coeff_degree, max_power)",
    )
    run_p.add_argument("--output", choices=("text", "json"), default="text")
    run_p.add_argument("--out", help="write the report to this file")

    sub.add_parser("list", help="list the scenario catalogue")

    verify_p = sub.add_parser("verify", help="re-check every certificate in a report")
    verify_p.add_argument("report", help="path to a JSON report")

    member_p = sub.add_parser("membership", help="test membership in a standard algebra")
    member_p.add_argument("--algebra", choices=("anm", "monomial"), default="anm")
    member_p.add_argument("--n", type=int, default=1)
    member_p.add_argument("--m", type=int, default=1)
    member_p.add_argument("--poly", required=True)
    member_p.add_argument("--output", choices=("text", "json"), default="text")
    return parser


def _parse_bounds(pairs: Sequence[str]) -> dict[str, int]:
    bounds: dict[str, int] = {}
    for pair in pairs:
        key, sep, value = pair.partition("=")
        if not sep or not key:
            raise UsageError(f"malformed bound {pair!r}; expected KEY=V")
        try:
            bounds[key] = int(value)
        except ValueError:
            raise UsageError(f"bound value for {key!r} must be an integer") from None
    return bounds


def _cmd_run(args) -> int:
    cfg = ScenarioConfig(
        scenario=args.scenario,
        n=args.n,
        m=args.m,
        max_degree=args.max_degree,
        bounds=_parse_bounds(args.bound),
        output=args.output,
    )
    try:
        cfg.validate()
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    report = run_scenario(cfg)
    rendered = report.to_json() if args.output == "json" else report.to_text()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(report.to_json())
            handle.write("\n")
        print(f"{report.scenario}: {report.verdict} (report written to {args.out})")
    else:
        print(rendered)
    return _VERDICT_CODES[report.verdict]


def _cmd_list(_args) -> int:
    for entry in list_scenarios():
        print(f"{entry['name']}: {entry['description']}")
    return 0


def _cmd_verify(args) -> int:
    try:
        with open(args.report, encoding="utf-8") as handle:
            data = json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read report: {exc}") from None
    result = verify_report(data)
    if result.ok:
        print(f"verified {result.total} certificate(s): all re-evaluate exactly")
        return 0
    for failure in result.failures:
        print(failure, file=sys.stderr)
    print(f"verified {result.total} certificate(s): {len(result.failures)} failure(s)")
    return 1


def _cmd_membership(args) -> int:
    if args.n < 1 or args.m < 1:
        raise UsageError("n and m must be positive")
    inst = build_instance(args.n, args.m)
    try:
        candidate = inst.varsys.parse(args.poly)
    except ParseError as exc:
        raise UsageError(str(exc)) from None
    if args.algebra == "anm":
        algebra = inst.algebra
    else:
        degree = max(candidate.degree(), 1)
        algebra = y_positive_monomial_algebra(
            inst.varsys, inst.x_names, inst.y_names, degree
        )
    certificate = membership(algebra, candidate)
    if certificate is None:
        print(f"{args.poly}: not a member")
        return 1
    if args.output == "json":
        print(json.dumps(certificate.to_json_dict(), indent=2, sort_keys=True))
    else:
        print(f"{candidate} = {certificate.expression}")
    return 0


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "list":
            return _cmd_list(args)
        if args.command == "verify":
            return _cmd_verify(args)
        if args.command == "membership":
            return _cmd_membership(args)
        raise UsageError(f"unknown command {args.command!r}")
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
