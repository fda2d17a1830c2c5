"""Python access to the unique continuation laboratory."""

import csv
import io
import json

from ._core import (
    ParseError,
    PreconditionError,
    bump_cutoff,
    csd,
    directional_derivatives,
    list_suites_text,
    peano_branches,
    rank_one_counterexample,
    suites,
)
from ._core import run_suite_raw as _run_suite_raw

__all__ = [
    "ParseError",
    "PreconditionError",
    "bump_cutoff",
    "csd",
    "directional_derivatives",
    "list_suites_text",
    "peano_branches",
    "rank_one_counterexample",
    "run_suite",
    "suites",
]


def run_suite(suite, seed=42, jobs=1, **overrides):
    """Run a suite in-process; returns (report dict, table rows as dicts)."""
    report, table = _run_suite_raw(suite, seed, jobs, overrides)
    return json.loads(report), list(csv.DictReader(io.StringIO(table)))
