"""Command line entry point: ``relaxed-minimax run|gen|check``."""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

from .generators import KINDS, generate
from .report import reports_to_csv, reports_to_json, reports_to_text
from .runner import run_suite
from .scenarios import SuiteError, dump_json, load_scenario, load_suite

__all__ = ["main", "build_parser", "REPORT_DIR_ENV"]

REPORT_DIR_ENV = "RELAXED_MINIMAX_REPORT_DIR"

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def _positive_float(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="relaxed-minimax",
        description="Verify relaxed minimax inequalities and convex-analysis identities on scenario files.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a suite of scenarios")
    run.add_argument("suite", help="suite JSON file")
    run.add_argument("--tol", type=_positive_float, help="override the default tolerances")
    run.add_argument("--jobs", type=_positive_int, default=1, help="worker processes (default 1)")
    run.add_argument("--report", help=f"JSON report path (default: ${REPORT_DIR_ENV}/<suite>.report.json if set)")
    run.add_argument("--csv", help="CSV gap table path")
    run.add_argument("--no-timing", action="store_true", help="omit wall times from the JSON report")
    run.add_argument("--quiet", action="store_true", help="print only the summary line")

    gen = sub.add_parser("gen", help="generate a random scenario")
    gen.add_argument("--kind", required=True, choices=KINDS)
    gen.add_argument("--seed", required=True, type=int)
    gen.add_argument("--param", action="append", default=[], metavar="KEY=VALUE", help="generator parameter (repeatable)")
    gen.add_argument("--out", required=True, help="output file ('-' for stdout)")

    check = sub.add_parser("check", help="verify a single scenario file")
    check.add_argument("scenario")
    check.add_argument("--tol", type=_positive_float)
    return parser


def _parse_param(text: str):
    if "=" not in text:
        raise SuiteError(f"--param expects KEY=VALUE, got {text!r}")
    key, raw = text.split("=", 1)
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    return key, value


def _write(path: str, text: str) -> None:
    try:
        p = Path(path)
        if p.parent and not p.parent.exists():
            p.parent.mkdir(parents=True, exist_ok=True)
        p.write_text(text, encoding="utf-8")
    except OSError as exc:
        raise SuiteError(f"cannot write {path}: {exc.strerror or exc}") from exc


def _exit_code(summary: dict) -> int:
    return EXIT_FAIL if summary["fail"] or summary["error"] else EXIT_OK


def _cmd_run(args) -> int:
    scenarios = load_suite(args.suite)
    reports, summary = run_suite(scenarios, jobs=args.jobs, tol=args.tol)
    report_path = args.report
    if report_path is None and os.environ.get(REPORT_DIR_ENV):
        report_path = str(Path(os.environ[REPORT_DIR_ENV]) / (Path(args.suite).stem + ".report.json"))
    if report_path:
        _write(report_path, reports_to_json(reports, summary, timing=not args.no_timing))
    if args.csv:
        _write(args.csv, reports_to_csv(reports))
    text = reports_to_text(reports, summary)
    sys.stdout.write(text.splitlines()[-1] + "\n" if args.quiet else text)
    return _exit_code(summary)


def _cmd_gen(args) -> int:
    params = dict(_parse_param(p) for p in args.param)
    try:
        scenario = generate(args.kind, args.seed, params)
    except (ValueError, TypeError) as exc:
        raise SuiteError(str(exc)) from exc
    text = dump_json(scenario)
    if args.out == "-":
        sys.stdout.write(text)
    else:
        _write(args.out, text)
    return EXIT_OK


def _cmd_check(args) -> int:
    sc = load_scenario(args.scenario)
    reports, summary = run_suite([sc], jobs=1, tol=args.tol)
    sys.stdout.write(json.dumps(reports[0].to_dict(), indent=2, sort_keys=True) + "\n")
    return _exit_code(summary)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    handler = {"run": _cmd_run, "gen": _cmd_gen, "check": _cmd_check}[args.command]
    try:
        return handler(args)
    except SuiteError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
