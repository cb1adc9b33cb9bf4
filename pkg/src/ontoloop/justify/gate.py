"""Human gating of proposed decisions.

High-risk records block enactment until a person with the operator role
approves them; low-risk records may be enacted immediately and are kept
as an inspectable trail. Every verdict, and every post-hoc recording,
lands in the audit log. A record with unanswered rebuttals cannot be
approved unless the verdict explicitly accepts them.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from ontoloop.errors import GateError, UnansweredRebuttalError, ValidationError
from ontoloop.justify.records import (
    JustificationRecord,
    JustificationStatus,
    RiskTier,
)
from ontoloop.workflow.audit import AuditEvent, AuditLog
from ontoloop.workflow.principals import Principal, Role


class Decision(str, Enum):
    APPROVE = "approve"
    REJECT = "reject"


class GateOutcome(str, Enum):
    PENDING_HUMAN = "pending-human"
    APPROVED = "approved"
    REJECTED = "rejected"
    RECORDED = "recorded"


@dataclass(frozen=True)
class Verdict:
    principal: Principal
    decision: Decision
    rationale: str
    accepted_rebuttals: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "decision", Decision(self.decision))
        object.__setattr__(self, "accepted_rebuttals", tuple(self.accepted_rebuttals))
        if not self.rationale.strip():
            raise ValidationError("verdict rationale must be non-empty")


@dataclass(frozen=True)
class GateResult:
    record: JustificationRecord
    outcome: GateOutcome
    enactment_permitted: bool
    event: AuditEvent | None


def _unanswered(record: JustificationRecord, accepted: tuple[int, ...]) -> tuple[int, ...]:
    answered = record.answered_rebuttals() | set(accepted)
    return tuple(
        index for index in range(len(record.rebuttals)) if index not in answered
    )


def gate_decision(
    record: JustificationRecord,
    verdict: Verdict | None,
    log: AuditLog,
) -> GateResult:
    """Apply (or withhold) a verdict on a proposed record."""
    if record.status is not JustificationStatus.PROPOSED:
        raise GateError(
            f"record {record.id} is already {record.status.value}; "
            "verdicts apply to proposed records only"
        )

    if verdict is None:
        if record.risk is RiskTier.HIGH:
            return GateResult(
                record=record,
                outcome=GateOutcome.PENDING_HUMAN,
                enactment_permitted=False,
                event=None,
            )
        gaps = record.completeness_gaps()
        if gaps:
            raise GateError(
                f"cannot record {record.id}: missing {', '.join(gaps)}"
            )
        open_rebuttals = _unanswered(record, ())
        if open_rebuttals:
            raise UnansweredRebuttalError(
                f"cannot record {record.id}: rebuttals "
                f"{list(open_rebuttals)} are unanswered"
            )
        recorded = record.with_status(JustificationStatus.RECORDED)
        event = log.append(
            actor=record.created_by,
            action="gate:record",
            subject=record.id,
            rationale="low-risk decision recorded post-hoc without human verdict",
        )
        return GateResult(
            record=recorded,
            outcome=GateOutcome.RECORDED,
            enactment_permitted=True,
            event=event,
        )

    if not verdict.principal.has_role(Role.OPERATOR):
        raise GateError(
            f"verdicts require the {Role.OPERATOR.value} role; "
            f"{verdict.principal.id} lacks it"
        )

    if verdict.decision is Decision.REJECT:
        rejected = record.with_status(
            JustificationStatus.REJECTED,
            decided_by=verdict.principal.id,
            decision_rationale=verdict.rationale,
        )
        event = log.append(
            actor=verdict.principal.id,
            action="gate:reject",
            subject=record.id,
            rationale=verdict.rationale,
        )
        return GateResult(
            record=rejected,
            outcome=GateOutcome.REJECTED,
            enactment_permitted=False,
            event=event,
        )

    gaps = record.completeness_gaps()
    if gaps:
        raise GateError(
            f"cannot approve {record.id}: missing {', '.join(gaps)}"
        )
    for index in verdict.accepted_rebuttals:
        if not 0 <= index < len(record.rebuttals):
            raise GateError(
                f"verdict accepts rebuttal {index}, which does not exist"
            )
    open_rebuttals = _unanswered(record, verdict.accepted_rebuttals)
    if open_rebuttals:
        raise UnansweredRebuttalError(
            f"cannot approve {record.id}: rebuttals {list(open_rebuttals)} are "
            "neither answered by a qualifier nor accepted in the verdict"
        )
    approved = record.with_status(
        JustificationStatus.APPROVED,
        decided_by=verdict.principal.id,
        decision_rationale=verdict.rationale,
        accepted_rebuttals=verdict.accepted_rebuttals,
    )
    event = log.append(
        actor=verdict.principal.id,
        action="gate:approve",
        subject=record.id,
        rationale=verdict.rationale,
    )
    return GateResult(
        record=approved,
        outcome=GateOutcome.APPROVED,
        enactment_permitted=True,
        event=event,
    )
