"""Scoring for competing explanations and for evidence quality.

An explanation is ranked by how probable it is times how good an
explanation it would be if true; the second factor is the plain mean of
five qualities (unifying power, simplicity, coherence, depth, breadth).
The multiplicative form means a lovely-but-impossible story scores zero.

Evidence is assessed on four validity scales and five profile scales,
each combined as an unweighted mean.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from ontoloop.errors import ValidationError

_LOVELINESS_FIELDS = (
    "explanatory_power",
    "simplicity",
    "coherence",
    "depth",
    "breadth",
)


def _check_unit(value: float, label: str) -> float:
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        raise ValidationError(f"{label} must be a number, got {type(value).__name__}")
    if not 0.0 <= value <= 1.0:
        raise ValidationError(f"{label} {value!r} is outside [0, 1]")
    return float(value)


@dataclass(frozen=True)
class ExplanationScore:
    likelihood: float
    explanatory_power: float
    simplicity: float
    coherence: float
    depth: float
    breadth: float

    def __post_init__(self):
        _check_unit(self.likelihood, "likelihood")
        for name in _LOVELINESS_FIELDS:
            _check_unit(getattr(self, name), name)

    @property
    def loveliness(self) -> float:
        return sum(getattr(self, name) for name in _LOVELINESS_FIELDS) / 5.0

    @property
    def aggregate(self) -> float:
        return self.likelihood * self.loveliness


def score_explanation(
    likelihood: float,
    explanatory_power: float,
    simplicity: float,
    coherence: float,
    depth: float,
    breadth: float,
) -> ExplanationScore:
    return ExplanationScore(
        likelihood=likelihood,
        explanatory_power=explanatory_power,
        simplicity=simplicity,
        coherence=coherence,
        depth=depth,
        breadth=breadth,
    )


@dataclass(frozen=True)
class RankedCandidate:
    claim_id: str
    score: ExplanationScore

    @property
    def aggregate(self) -> float:
        return self.score.aggregate


@dataclass(frozen=True)
class SelectionReport:
    """Winner plus the alternatives that were considered and set aside."""

    winner: str
    ranking: tuple[RankedCandidate, ...]

    @property
    def rejected(self) -> tuple[str, ...]:
        return tuple(c.claim_id for c in self.ranking if c.claim_id != self.winner)


def select_best_claim(
    candidates: Sequence[tuple[str, ExplanationScore]],
) -> SelectionReport:
    """Pick the highest aggregate; ties go to the smallest claim id."""
    if not candidates:
        raise ValidationError("cannot select from zero candidates")
    ranked = sorted(
        (RankedCandidate(claim_id=c, score=s) for c, s in candidates),
        key=lambda r: (-r.aggregate, r.claim_id),
    )
    return SelectionReport(winner=ranked[0].claim_id, ranking=tuple(ranked))


@dataclass(frozen=True)
class EvidenceAssessment:
    face: float
    criterion: float
    construct: float
    content: float
    comprehensiveness: float
    relevance: float
    objectivity: float
    quantity: float
    consistency: float

    def __post_init__(self):
        for name in (
            "face",
            "criterion",
            "construct",
            "content",
            "comprehensiveness",
            "relevance",
            "objectivity",
            "quantity",
            "consistency",
        ):
            _check_unit(getattr(self, name), name)

    @property
    def validity_score(self) -> float:
        return (self.face + self.criterion + self.construct + self.content) / 4.0

    @property
    def profile_score(self) -> float:
        return (
            self.comprehensiveness
            + self.relevance
            + self.objectivity
            + self.quantity
            + self.consistency
        ) / 5.0


def assess_evidence(
    face: float,
    criterion: float,
    construct: float,
    content: float,
    comprehensiveness: float,
    relevance: float,
    objectivity: float,
    quantity: float,
    consistency: float,
) -> EvidenceAssessment:
    return EvidenceAssessment(
        face=face,
        criterion=criterion,
        construct=construct,
        content=content,
        comprehensiveness=comprehensiveness,
        relevance=relevance,
        objectivity=objectivity,
        quantity=quantity,
        consistency=consistency,
    )
