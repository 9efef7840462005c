'''Tabular summary of verification runs.'''
from __future__ import annotations

import logging
import pathlib

import polars as pl

logger = logging.getLogger(__name__)

SCHEMA = {
    "suite": pl.Utf8,
    "type": pl.Utf8,
    "cases": pl.Int64,
    "violations": pl.Int64,
    "seconds": pl.Float64,
    "counterexample": pl.Utf8,
}


class VerificationReport(object):
    '''Collects SuiteResults and renders them as one row per counterexample.

    A (suite, type) pair without counterexamples keeps a single row with an
    empty counterexample so every run shows up in the table.
    '''

    def __init__(self, results=()):
        self.results = list(results)

    @property
    def passed(self):
        return all(r.passed for r in self.results)

    @property
    def violations(self):
        return sum(r.violations for r in self.results)

    def to_frame(self):
        rows = []
        for r in self.results:
            for example in (sorted(r.counterexamples) or [""]):
                rows.append({"suite": r.suite, "type": r.type, "cases": r.cases,
                             "violations": r.violations, "seconds": round(r.seconds, 3),
                             "counterexample": example})
        return pl.DataFrame(rows, schema=SCHEMA).sort(["suite", "type", "counterexample"])

    def summary(self):
        '''One row per (suite, type).'''
        return (self.to_frame()
                .group_by(["suite", "type"], maintain_order=True)
                .agg(pl.col("cases").first(), pl.col("violations").first())
                .sort(["suite", "type"]))

    def write_csv(self, path):
        path = pathlib.Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        self.to_frame().write_csv(path)
        logger.info(f"verification report written to {path}")
        return path

    def render(self):
        '''Plain text for stdout; timings are left out so reruns print the same bytes.'''
        lines = []
        for row in self.summary().iter_rows(named=True):
            status = "ok" if row["violations"] == 0 else "FAIL"
            lines.append(f"{row['suite']:<18} {row['type']:<4} {row['cases']:>9} cases  "
                         f"{row['violations']:>5} violations  {status}")
        for r in sorted(self.results, key=lambda r: (r.suite, r.type)):
            for example in sorted(r.counterexamples):
                lines.append(f"  {r.suite} {r.type}: {example}")
        return "\n".join(lines) + "\n"
