"""Rating dataset, exact sign-test statistics, and report generation."""
from ontoloop.evalstats.records import (
    CSV_HEADER,
    METRICS,
    RatingRecord,
    embedded_ratings,
    load_ratings,
    model_labels,
)
from ontoloop.evalstats.report import (
    STANDARD_COMPARISONS,
    AnalysisResults,
    ComparisonAnalysis,
    RatingsReport,
    analyze,
    emit_report,
    format_p,
)
from ontoloop.evalstats.stats import (
    DECLINE,
    IMPROVE,
    TIE,
    PairedComparison,
    SignTestResult,
    TestAverages,
    average_by_test,
    binom_two_sided,
    exact_ci,
    pair_signs,
    sign_test,
)

__all__ = [
    "CSV_HEADER",
    "METRICS",
    "STANDARD_COMPARISONS",
    "AnalysisResults",
    "ComparisonAnalysis",
    "DECLINE",
    "IMPROVE",
    "PairedComparison",
    "RatingRecord",
    "RatingsReport",
    "SignTestResult",
    "TIE",
    "TestAverages",
    "analyze",
    "average_by_test",
    "binom_two_sided",
    "embedded_ratings",
    "emit_report",
    "exact_ci",
    "format_p",
    "load_ratings",
    "model_labels",
    "pair_signs",
    "sign_test",
]
