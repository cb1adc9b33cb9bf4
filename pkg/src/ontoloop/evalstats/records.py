"""Rating records and the packaged benchmark dataset.

The dataset ships as a CSV asset: one row per (model, cycle, test) with
integer accuracy/coherence/relevance scores on a 0..5 scale. Three models
rated over five cycles of eight tests give 120 rows.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from functools import cache
from importlib import resources

from ontoloop.errors import RatingsError

CSV_HEADER = ("model", "cycle", "test", "accuracy", "coherence", "relevance")
METRICS = ("accuracy", "coherence", "relevance")

CYCLES = range(1, 6)
TESTS = range(1, 9)
_SCALE = range(0, 6)


@dataclass(frozen=True, slots=True)
class RatingRecord:
    """One rater judgment of one generated answer."""

    model: str
    cycle: int
    test: int
    accuracy: int
    coherence: int
    relevance: int

    def __post_init__(self) -> None:
        if not self.model or not self.model.strip():
            raise RatingsError("model label must be non-empty")
        if self.cycle not in CYCLES:
            raise RatingsError(f"cycle {self.cycle} outside 1..5")
        if self.test not in TESTS:
            raise RatingsError(f"test {self.test} outside 1..8")
        for metric in METRICS:
            score = getattr(self, metric)
            if score not in _SCALE:
                raise RatingsError(f"{metric} {score} outside the 0..5 scale")

    def score(self, metric: str) -> int:
        if metric not in METRICS:
            raise RatingsError(f"unknown metric {metric!r}")
        return getattr(self, metric)


def load_ratings(source: str) -> tuple[RatingRecord, ...]:
    """Parse CSV text into records. Errors name the offending line."""
    reader = csv.reader(io.StringIO(source))
    try:
        header = next(reader)
    except StopIteration:
        raise RatingsError("line 1: missing header row") from None
    if tuple(cell.strip() for cell in header) != CSV_HEADER:
        raise RatingsError(f"line 1: header must be {','.join(CSV_HEADER)}")
    records: list[RatingRecord] = []
    for row in reader:
        line = reader.line_num
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        if len(row) != len(CSV_HEADER):
            raise RatingsError(
                f"line {line}: expected {len(CSV_HEADER)} fields, got {len(row)}"
            )
        try:
            numbers = [int(cell) for cell in row[1:]]
        except ValueError:
            raise RatingsError(f"line {line}: non-integer score field") from None
        try:
            records.append(RatingRecord(row[0].strip(), *numbers))
        except RatingsError as exc:
            raise RatingsError(f"line {line}: {exc}") from None
    return tuple(records)


@cache
def embedded_ratings() -> tuple[RatingRecord, ...]:
    """The packaged reference dataset.

    Relevance is 5 on every row by construction; that is re-asserted here
    so a corrupted asset cannot load silently.
    """
    text = (
        resources.files("ontoloop.evalstats")
        .joinpath("data/ratings.csv")
        .read_text("utf-8")
    )
    records = load_ratings(text)
    for index, record in enumerate(records, start=2):
        if record.relevance != 5:
            raise RatingsError(
                f"line {index}: packaged dataset must have relevance 5, "
                f"got {record.relevance}"
            )
    return records


def model_labels(records: tuple[RatingRecord, ...]) -> tuple[str, ...]:
    """Distinct model labels in first-appearance order."""
    seen: dict[str, None] = {}
    for record in records:
        seen.setdefault(record.model, None)
    return tuple(seen)
