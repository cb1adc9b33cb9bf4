"""JSON payload round-trip for justification records.

Used by the event store (persistence) and the HTTP layer (responses);
the payload carries every field, so replaying it reconstructs the exact
record, validators included.
"""
from __future__ import annotations

from datetime import datetime

from ontoloop.errors import StoreCorruptionError
from ontoloop.justify import (
    EvidenceItem,
    JustificationRecord,
    PromptExchange,
    Qualifier,
    Rebuttal,
)
from ontoloop.knowledge.model import SourceRef


def record_payload(record: JustificationRecord) -> dict:
    return {
        "id": record.id,
        "intent": record.intent,
        "claim": record.claim,
        "proposed_steps": list(record.proposed_steps),
        "grounds": list(record.grounds),
        "evidence": [
            {
                "id": item.id,
                "statement": item.statement,
                "source": {"kind": item.source.kind, "ref": item.source.ref},
                "confidence": item.confidence,
            }
            for item in record.evidence
        ],
        "warrant": record.warrant,
        "backing": list(record.backing),
        "rebuttals": [
            {"text": rebuttal.text, "attacks": rebuttal.attacks}
            for rebuttal in record.rebuttals
        ],
        "qualifiers": [
            {"text": qualifier.text, "answers": list(qualifier.answers)}
            for qualifier in record.qualifiers
        ],
        "risk": record.risk.value,
        "created_by": record.created_by,
        "created_at": record.created_at.isoformat(),
        "status": record.status.value,
        "transcript": [
            {"part": turn.part, "prompt": turn.prompt, "response": turn.response}
            for turn in record.transcript
        ],
        "decided_by": record.decided_by,
        "decision_rationale": record.decision_rationale,
        "accepted_rebuttals": list(record.accepted_rebuttals),
    }


def record_from_payload(data: dict) -> JustificationRecord:
    try:
        return JustificationRecord(
            id=data["id"],
            intent=data["intent"],
            claim=data["claim"],
            proposed_steps=tuple(data["proposed_steps"]),
            grounds=tuple(data["grounds"]),
            evidence=tuple(
                EvidenceItem(
                    id=item["id"],
                    statement=item["statement"],
                    source=SourceRef(item["source"]["kind"], item["source"]["ref"]),
                    confidence=item["confidence"],
                )
                for item in data["evidence"]
            ),
            warrant=data["warrant"],
            backing=tuple(data["backing"]),
            rebuttals=tuple(
                Rebuttal(item["text"], item["attacks"]) for item in data["rebuttals"]
            ),
            qualifiers=tuple(
                Qualifier(item["text"], tuple(item["answers"]))
                for item in data["qualifiers"]
            ),
            risk=data["risk"],
            created_by=data["created_by"],
            created_at=datetime.fromisoformat(data["created_at"]),
            status=data["status"],
            transcript=tuple(
                PromptExchange(item["part"], item["prompt"], item["response"])
                for item in data["transcript"]
            ),
            decided_by=data.get("decided_by"),
            decision_rationale=data.get("decision_rationale"),
            accepted_rebuttals=tuple(data.get("accepted_rebuttals", ())),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise StoreCorruptionError(f"unreadable justification record: {exc}") from exc
