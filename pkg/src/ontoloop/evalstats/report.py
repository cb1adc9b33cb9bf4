"""Ratings report: per-test mean tables plus three staged comparisons.

The same numbers are rendered twice, as aligned plain text for terminals
and as a JSON tree (with per-model (test, mean) points for bar charts).
Generation is deterministic: identical records give byte-identical output.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

from ontoloop.evalstats.records import RatingRecord, model_labels
from ontoloop.evalstats.stats import (
    SignTestResult,
    TestAverages,
    average_by_test,
    sign_test,
)

STANDARD_COMPARISONS = ((1, 8), (1, 6), (6, 8))
TABLE_METRICS = ("accuracy", "coherence")


@dataclass(frozen=True, slots=True)
class ComparisonAnalysis:
    """One numbered comparison: both metrics tested over the same pair."""

    index: int
    from_test: int
    to_test: int
    accuracy: SignTestResult
    coherence: SignTestResult

    def result(self, metric: str) -> SignTestResult:
        return getattr(self, metric)


@dataclass(frozen=True, slots=True)
class AnalysisResults:
    records: tuple[RatingRecord, ...]
    tables: tuple[TestAverages, ...]
    comparisons: tuple[ComparisonAnalysis, ...]


@dataclass(frozen=True, slots=True)
class RatingsReport:
    text: str
    data: dict

    def to_json(self) -> str:
        return json.dumps(self.data, sort_keys=True, ensure_ascii=False, indent=2)


def analyze(
    records: Iterable[RatingRecord],
    comparisons: Sequence[tuple[int, int]] = STANDARD_COMPARISONS,
) -> AnalysisResults:
    """Compute mean tables and sign tests; empty input gives empty results."""
    records = tuple(records)
    if not records:
        return AnalysisResults((), (), ())
    tables = tuple(average_by_test(records, metric) for metric in TABLE_METRICS)
    numbered = tuple(
        ComparisonAnalysis(
            index,
            from_test,
            to_test,
            accuracy=sign_test(records, "accuracy", from_test, to_test),
            coherence=sign_test(records, "coherence", from_test, to_test),
        )
        for index, (from_test, to_test) in enumerate(comparisons, start=1)
    )
    return AnalysisResults(records, tables, numbered)


def format_p(p: float) -> str:
    """Scientific notation below 0.001, else three decimals."""
    return f"{p:.2e}" if p < 1e-3 else f"{p:.3f}"


def emit_report(results: AnalysisResults) -> RatingsReport:
    return RatingsReport(text=_render_text(results), data=_render_data(results))


def _render_text(results: AnalysisResults) -> str:
    lines = ["Ratings evaluation", "==================", ""]
    lines.append(f"records: {len(results.records)}")
    models = model_labels(results.records)
    if models:
        lines.append("models:  " + ", ".join(models))
    lines.append("")
    if not results.tables:
        lines += ["(no score tables: empty record set)", ""]
    for table in results.tables:
        lines += _render_table(table)
        lines.append("")
    if not results.comparisons:
        lines += ["(no comparisons: empty record set)", ""]
    for comparison in results.comparisons:
        lines += _render_comparison(comparison)
        lines.append("")
    return "\n".join(lines).rstrip("\n") + "\n"


def _render_table(table: TestAverages) -> list[str]:
    title = f"Mean {table.metric} by test"
    label_width = max(len(model) for model in (*table.models, "pooled", "model"))
    header = "model".ljust(label_width)
    header += "".join(f"t{test}".rjust(6) for test in table.tests)
    header += "change".rjust(8) + "overall".rjust(9)
    rows = [title, "-" * len(title), header]
    for model in table.models:
        means = table.per_model[model]
        row = model.ljust(label_width)
        row += "".join(f"{means[test]:.2f}".rjust(6) for test in table.tests)
        row += f"{table.model_change(model):+.2f}".rjust(8)
        row += f"{table.overall[model]:.2f}".rjust(9)
        rows.append(row)
    pooled = "pooled".ljust(label_width)
    pooled += "".join(f"{table.pooled[test]:.2f}".rjust(6) for test in table.tests)
    pooled += f"{table.change:+.2f}".rjust(8)
    rows.append(pooled)
    return rows


def _render_comparison(comparison: ComparisonAnalysis) -> list[str]:
    title = (
        f"Analysis {comparison.index}: "
        f"test {comparison.from_test} vs test {comparison.to_test}"
    )
    rows = [title, "-" * len(title)]
    for metric in TABLE_METRICS:
        result = comparison.result(metric)
        line = (
            f"  {metric:<9}: improvements {result.improvements}/{result.n_effective}"
            f", declines {result.declines}, ties {result.ties}"
        )
        if result.degenerate:
            line += "; all ties, no effective pairs"
        line += f"; p = {format_p(result.p_two_sided)}"
        line += f"; 95% CI [{result.ci[0]:.3f}, {result.ci[1]:.3f}]"
        rows.append(line)
    return rows


def _render_data(results: AnalysisResults) -> dict:
    return {
        "records": len(results.records),
        "models": list(model_labels(results.records)),
        "tables": [
            {
                "metric": table.metric,
                "tests": list(table.tests),
                "pooled": [table.pooled[test] for test in table.tests],
                "change": table.change,
                "models": [
                    {
                        "model": model,
                        "points": [
                            [test, table.per_model[model][test]]
                            for test in table.tests
                        ],
                        "change": table.model_change(model),
                        "overall": table.overall[model],
                    }
                    for model in table.models
                ],
            }
            for table in results.tables
        ],
        "analyses": [
            {
                "analysis": comparison.index,
                "from_test": comparison.from_test,
                "to_test": comparison.to_test,
                **{
                    metric: _result_data(comparison.result(metric))
                    for metric in TABLE_METRICS
                },
            }
            for comparison in results.comparisons
        ],
    }


def _result_data(result: SignTestResult) -> dict:
    return {
        "improvements": result.improvements,
        "declines": result.declines,
        "ties": result.ties,
        "n_effective": result.n_effective,
        "p_two_sided": result.p_two_sided,
        "ci": [result.ci[0], result.ci[1]],
        "degenerate": result.degenerate,
    }
