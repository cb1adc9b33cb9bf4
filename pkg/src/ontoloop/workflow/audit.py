"""Append-only audit log with a gapless sequence.

Events cover workflow transitions and justification gate verdicts: who
did what to which subject, when, and why. The log is the serialization
point for governance review; it can be filtered by subject and time
window and is persisted one JSON object per line.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import Callable, Iterable, Iterator

from ontoloop.errors import AuditCorruptionError, ValidationError

Clock = Callable[[], datetime]


def utc_now() -> datetime:
    return datetime.now(timezone.utc)


@dataclass(frozen=True)
class AuditEvent:
    sequence: int
    at: datetime
    actor: str
    action: str
    subject: str
    rationale: str

    def __post_init__(self):
        if self.sequence < 1:
            raise ValidationError("audit sequence starts at 1")
        if not self.actor.strip():
            raise ValidationError("audit actor must be non-empty")
        if not self.rationale.strip():
            raise ValidationError("audit rationale must be non-empty")
        if self.at.tzinfo is None:
            raise ValidationError("audit timestamps must be timezone-aware")

    def to_json(self) -> str:
        return json.dumps(
            {
                "sequence": self.sequence,
                "at": self.at.isoformat(),
                "actor": self.actor,
                "action": self.action,
                "subject": self.subject,
                "rationale": self.rationale,
            },
            sort_keys=True,
            ensure_ascii=False,
        )

    @classmethod
    def from_json(cls, line: str) -> "AuditEvent":
        try:
            data = json.loads(line)
            return cls(
                sequence=data["sequence"],
                at=datetime.fromisoformat(data["at"]),
                actor=data["actor"],
                action=data["action"],
                subject=data["subject"],
                rationale=data["rationale"],
            )
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise AuditCorruptionError(f"unreadable audit event: {exc}") from None


class AuditLog:
    """In-memory gapless event sequence; persistence wraps around it."""

    def __init__(self, clock: Clock = utc_now):
        self._events: list[AuditEvent] = []
        self._clock = clock

    def append(self, *, actor: str, action: str, subject: str, rationale: str) -> AuditEvent:
        event = AuditEvent(
            sequence=len(self._events) + 1,
            at=self._clock(),
            actor=actor,
            action=action,
            subject=subject,
            rationale=rationale,
        )
        self._events.append(event)
        return event

    def restore(self, event: AuditEvent) -> AuditEvent:
        """Re-attach a persisted event; enforces the gapless sequence."""
        expected = len(self._events) + 1
        if event.sequence != expected:
            raise AuditCorruptionError(
                f"audit sequence gap: expected {expected}, got {event.sequence}"
            )
        self._events.append(event)
        return event

    def __len__(self) -> int:
        return len(self._events)

    def __iter__(self) -> Iterator[AuditEvent]:
        return iter(self._events)

    @property
    def events(self) -> tuple[AuditEvent, ...]:
        return tuple(self._events)

    def trail(
        self,
        *,
        subject: str | None = None,
        since: datetime | None = None,
        until: datetime | None = None,
    ) -> tuple[AuditEvent, ...]:
        """Events filtered by subject prefix and closed time window."""
        out = []
        for event in self._events:
            if subject is not None and not event.subject.startswith(subject):
                continue
            if since is not None and event.at < since:
                continue
            if until is not None and event.at > until:
                continue
            out.append(event)
        return tuple(out)


def load_audit_lines(lines: Iterable[str], clock: Clock = utc_now) -> AuditLog:
    """Rebuild a log from persisted lines, halting on gaps or bad rows."""
    log = AuditLog(clock=clock)
    for number, line in enumerate(lines, start=1):
        line = line.strip()
        if not line:
            raise AuditCorruptionError(f"blank line at audit row {number}")
        log.restore(AuditEvent.from_json(line))
    return log
