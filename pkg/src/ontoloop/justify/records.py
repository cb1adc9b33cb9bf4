"""Structured decision records following the six-part argument layout.

A record carries the full argument for one decision: the claim itself,
grounds (references to evidence), the warrant linking grounds to claim,
backing for the warrant, rebuttals, and qualifiers that bound the
claim's scope. Records move through proposed -> approved / rejected /
recorded and are immutable snapshots; status changes produce a new
value.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from datetime import datetime
from enum import Enum

from ontoloop.errors import JustificationError, ValidationError
from ontoloop.knowledge.model import SourceRef


class JustificationStatus(str, Enum):
    PROPOSED = "proposed"
    APPROVED = "approved"
    REJECTED = "rejected"
    RECORDED = "recorded"


class RiskTier(str, Enum):
    LOW = "low"
    HIGH = "high"


TERMINAL_STATUSES = (
    JustificationStatus.APPROVED,
    JustificationStatus.REJECTED,
    JustificationStatus.RECORDED,
)

_REBUTTAL_TARGETS = ("grounds", "warrant", "claim")


@dataclass(frozen=True)
class EvidenceItem:
    id: str
    statement: str
    source: SourceRef
    confidence: float

    def __post_init__(self):
        if not self.id.strip():
            raise ValidationError("evidence id must be non-empty")
        if not self.statement.strip():
            raise ValidationError("evidence statement must be non-empty")
        if not 0.0 <= self.confidence <= 1.0:
            raise ValidationError(
                f"evidence confidence {self.confidence} is outside [0, 1]"
            )


@dataclass(frozen=True)
class Rebuttal:
    """An objection, tagged with the part of the argument it attacks."""

    text: str
    attacks: str  # "grounds" | "warrant" | "claim"

    def __post_init__(self):
        if not self.text.strip():
            raise ValidationError("rebuttal text must be non-empty")
        if self.attacks not in _REBUTTAL_TARGETS:
            raise ValidationError(
                f"rebuttal must attack one of {_REBUTTAL_TARGETS}, got {self.attacks!r}"
            )


@dataclass(frozen=True)
class Qualifier:
    """Scope adjustment; `answers` indexes the rebuttals it neutralises."""

    text: str
    answers: tuple[int, ...] = ()

    def __post_init__(self):
        if not self.text.strip():
            raise ValidationError("qualifier text must be non-empty")
        object.__setattr__(self, "answers", tuple(self.answers))


@dataclass(frozen=True)
class PromptExchange:
    """One generator call kept verbatim for audit."""

    part: str
    prompt: str
    response: str


@dataclass(frozen=True)
class JustificationRecord:
    id: str
    intent: str
    claim: str
    proposed_steps: tuple[str, ...]
    grounds: tuple[str, ...]  # evidence ids
    evidence: tuple[EvidenceItem, ...]
    warrant: str
    backing: tuple[str, ...]
    rebuttals: tuple[Rebuttal, ...]
    qualifiers: tuple[Qualifier, ...]
    risk: RiskTier
    created_by: str
    created_at: datetime
    status: JustificationStatus = JustificationStatus.PROPOSED
    transcript: tuple[PromptExchange, ...] = ()
    decided_by: str | None = None
    decision_rationale: str | None = None
    accepted_rebuttals: tuple[int, ...] = ()

    def __post_init__(self):
        for name in (
            "proposed_steps",
            "grounds",
            "evidence",
            "backing",
            "rebuttals",
            "qualifiers",
            "transcript",
            "accepted_rebuttals",
        ):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        object.__setattr__(self, "status", JustificationStatus(self.status))
        object.__setattr__(self, "risk", RiskTier(self.risk))
        if not self.id.strip():
            raise ValidationError("record id must be non-empty")
        if not self.intent.strip():
            raise ValidationError("record intent must be non-empty")
        if self.created_at.tzinfo is None:
            raise ValidationError("record timestamp must be timezone-aware")
        known = {item.id for item in self.evidence}
        for ref in self.grounds:
            if ref not in known:
                raise ValidationError(f"ground {ref!r} cites no attached evidence")
        for index, qualifier in enumerate(self.qualifiers):
            for answered in qualifier.answers:
                if not 0 <= answered < len(self.rebuttals):
                    raise ValidationError(
                        f"qualifier {index} answers rebuttal {answered}, "
                        f"which does not exist"
                    )
        if self.status in (JustificationStatus.APPROVED, JustificationStatus.RECORDED):
            problems = self.completeness_gaps()
            if problems:
                raise JustificationError(
                    f"status {self.status.value} requires a complete argument; "
                    f"missing: {', '.join(problems)}"
                )

    def completeness_gaps(self) -> tuple[str, ...]:
        """Names the parts still blocking approval."""
        gaps = []
        if not self.claim.strip():
            gaps.append("claim")
        if not self.grounds:
            gaps.append("grounds")
        if not self.warrant.strip():
            gaps.append("warrant")
        return tuple(gaps)

    def answered_rebuttals(self) -> frozenset[int]:
        answered = set()
        for qualifier in self.qualifiers:
            answered.update(qualifier.answers)
        return frozenset(answered)

    @property
    def terminal(self) -> bool:
        return self.status in TERMINAL_STATUSES

    def evidence_by_id(self, ref: str) -> EvidenceItem:
        for item in self.evidence:
            if item.id == ref:
                return item
        raise ValidationError(f"no evidence with id {ref!r}")

    def with_status(self, status: JustificationStatus, **extra) -> "JustificationRecord":
        return replace(self, status=status, **extra)
