"""Scenario files, random generators, the suite runner and the CLI."""

from .generators import KINDS, generate
from .report import reports_to_csv, reports_to_json, reports_to_text
from .runner import Report, run_scenario, run_suite, summarize
from .scenarios import DEFAULT_TOLERANCES, Scenario, SuiteError, load_scenario, load_suite, parse_suite

__all__ = [
    "DEFAULT_TOLERANCES",
    "KINDS",
    "Report",
    "Scenario",
    "SuiteError",
    "generate",
    "load_scenario",
    "load_suite",
    "parse_suite",
    "reports_to_csv",
    "reports_to_json",
    "reports_to_text",
    "run_scenario",
    "run_suite",
    "summarize",
]
