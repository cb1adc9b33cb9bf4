"""Exact paired sign tests and descriptive tables over rating records.

All probabilities are computed exactly: the two-sided binomial p as an
integer ratio and the confidence interval by inverting the binomial tails
(Clopper-Pearson), so no scale beyond float rounding is lost.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Iterable, Mapping

from ontoloop.errors import RatingsError, ValidationError
from ontoloop.evalstats.records import RatingRecord, model_labels

IMPROVE = "improve"
DECLINE = "decline"
TIE = "tie"

_BISECT_STEPS = 200


def binom_two_sided(k: int, n: int) -> float:
    """Exact two-sided binomial test of k successes in n trials at p=0.5.

    Sums the probability of every outcome no likelier than the observed
    one. With a fair coin the masses are comb(n, i)/2**n, so the sum stays
    in integer arithmetic until the final division.
    """
    _check_counts(k, n)
    observed = comb(n, k)
    matched = sum(c for i in range(n + 1) if (c := comb(n, i)) <= observed)
    return matched / 2**n


def exact_ci(k: int, n: int, level: float = 0.95) -> tuple[float, float]:
    """Clopper-Pearson interval for a proportion of k successes in n trials.

    Each bound makes the opposite binomial tail equal to half the excluded
    probability; the one-sided cases have closed forms and the rest is
    solved by bisection on the monotone tail.
    """
    _check_counts(k, n)
    if not 0 < level < 1:
        raise ValidationError(f"confidence level {level} outside (0, 1)")
    half_alpha = (1 - level) / 2
    if k == 0:
        lower = 0.0
    elif k == n:
        lower = half_alpha ** (1 / n)
    else:
        lower = _invert_tail(lambda p: _upper_tail(k, n, p), half_alpha, rising=True)
    if k == n:
        upper = 1.0
    elif k == 0:
        upper = 1 - half_alpha ** (1 / n)
    else:
        upper = _invert_tail(lambda p: _lower_tail(k, n, p), half_alpha, rising=False)
    return lower, upper


def _check_counts(k: int, n: int) -> None:
    if n < 1:
        raise ValidationError(f"need at least one trial, got n={n}")
    if not 0 <= k <= n:
        raise ValidationError(f"successes {k} outside 0..{n}")


def _upper_tail(k: int, n: int, p: float) -> float:
    return sum(comb(n, i) * p**i * (1 - p) ** (n - i) for i in range(k, n + 1))


def _lower_tail(k: int, n: int, p: float) -> float:
    return sum(comb(n, i) * p**i * (1 - p) ** (n - i) for i in range(0, k + 1))


def _invert_tail(tail, target: float, *, rising: bool) -> float:
    lo, hi = 0.0, 1.0
    for _ in range(_BISECT_STEPS):
        mid = (lo + hi) / 2
        if (tail(mid) < target) == rising:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


@dataclass(frozen=True, slots=True)
class PairedComparison:
    """Per model-cycle delta signs between two tests of one metric."""

    metric: str
    from_test: int
    to_test: int
    signs: tuple[tuple[str, int, str], ...]

    def count(self, sign: str) -> int:
        return sum(1 for _, _, s in self.signs if s == sign)


@dataclass(frozen=True, slots=True)
class SignTestResult:
    metric: str
    from_test: int
    to_test: int
    improvements: int
    declines: int
    ties: int
    p_two_sided: float
    ci: tuple[float, float]
    degenerate: bool = False

    @property
    def n_effective(self) -> int:
        return self.improvements + self.declines

    @property
    def pairs(self) -> int:
        return self.improvements + self.declines + self.ties


def pair_signs(
    records: Iterable[RatingRecord], metric: str, from_test: int, to_test: int
) -> PairedComparison:
    """Classify every model-cycle pair as improve, decline, or tie."""
    records = tuple(records)
    scores: dict[tuple[str, int], dict[int, int]] = {}
    order: list[tuple[str, int]] = []
    for record in records:
        if record.test not in (from_test, to_test):
            continue
        key = (record.model, record.cycle)
        if key not in scores:
            scores[key] = {}
            order.append(key)
        if record.test in scores[key]:
            raise RatingsError(
                f"duplicate rating for {record.model} cycle {record.cycle} "
                f"test {record.test}"
            )
        scores[key][record.test] = record.score(metric)
    signs: list[tuple[str, int, str]] = []
    for model, cycle in order:
        have = scores[(model, cycle)]
        for test in (from_test, to_test):
            if test not in have:
                raise RatingsError(
                    f"{model} cycle {cycle} has no rating for test {test}"
                )
        delta = have[to_test] - have[from_test]
        sign = IMPROVE if delta > 0 else DECLINE if delta < 0 else TIE
        signs.append((model, cycle, sign))
    return PairedComparison(metric, from_test, to_test, tuple(signs))


def sign_test(
    records: Iterable[RatingRecord],
    metric: str,
    from_test: int,
    to_test: int,
    level: float = 0.95,
) -> SignTestResult:
    """Exact sign test on paired deltas, ties excluded from the trials.

    With nothing but ties there is no evidence either way: the result is
    flagged degenerate with p=1.0 and the full-width interval.
    """
    comparison = pair_signs(records, metric, from_test, to_test)
    improvements = comparison.count(IMPROVE)
    declines = comparison.count(DECLINE)
    ties = comparison.count(TIE)
    n_effective = improvements + declines
    if n_effective == 0:
        return SignTestResult(
            metric, from_test, to_test, improvements, declines, ties,
            p_two_sided=1.0, ci=(0.0, 1.0), degenerate=True,
        )
    return SignTestResult(
        metric, from_test, to_test, improvements, declines, ties,
        p_two_sided=binom_two_sided(improvements, n_effective),
        ci=exact_ci(improvements, n_effective, level),
    )


@dataclass(frozen=True, slots=True)
class TestAverages:
    """Per-test means of one metric, pooled and broken out per model."""

    metric: str
    tests: tuple[int, ...]
    models: tuple[str, ...]
    pooled: Mapping[int, float]
    per_model: Mapping[str, Mapping[int, float]]
    overall: Mapping[str, float]

    @property
    def change(self) -> float:
        """Last-test mean minus first-test mean, pooled."""
        return self.pooled[self.tests[-1]] - self.pooled[self.tests[0]]

    def model_change(self, model: str) -> float:
        means = self.per_model[model]
        return means[self.tests[-1]] - means[self.tests[0]]


def average_by_test(records: Iterable[RatingRecord], metric: str) -> TestAverages:
    """Mean score per test across model-cycle pairs, plus per-model views."""
    records = tuple(records)
    if not records:
        raise RatingsError("cannot average an empty record set")
    models = model_labels(records)
    tests = tuple(sorted({record.test for record in records}))
    pooled = {
        test: _mean([r.score(metric) for r in records if r.test == test])
        for test in tests
    }
    per_model = {
        model: {
            test: _mean(
                [r.score(metric) for r in records
                 if r.model == model and r.test == test]
            )
            for test in tests
        }
        for model in models
    }
    overall = {
        model: _mean([r.score(metric) for r in records if r.model == model])
        for model in models
    }
    return TestAverages(metric, tests, models, pooled, per_model, overall)


def _mean(values: list[int]) -> float:
    if not values:
        raise RatingsError("a test is missing for one of the models")
    return sum(values) / len(values)
