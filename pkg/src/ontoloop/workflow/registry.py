"""In-memory model registry: versioned storage, transitions, audit.

Every committed mutation produces a new version stamped back to draft,
recorded as a MutationEvent carrying the full content payload and its
hash. Workflow transitions flip the state of one stored version and
append exactly one audit event. A published version never changes;
editing it means forking a fresh draft version first.

Both event streams are replayable: `ModelRegistry.replay` rebuilds the
registry from serialized rows and refuses anything that does not verify
(sequence gaps, hash mismatches, transitions that contradict recorded
state).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, replace
from datetime import datetime
from typing import Iterable

from ontoloop.errors import (
    AuditCorruptionError,
    ConsistencyBlockedError,
    IllegalTransitionError,
    PublishedImmutableError,
    StoreCorruptionError,
    UnauthorizedRoleError,
    UnknownIdError,
    ValidationError,
)
from ontoloop.knowledge.canonical import (
    canonical_payload,
    content_hash,
    model_from_content_payload,
)
from ontoloop.knowledge.model import (
    EntityClass,
    KnowledgeModel,
    Relationship,
    SourceRef,
    WorkflowState,
    mint_id,
)
from ontoloop.knowledge import operations
from ontoloop.knowledge.merge import merge_models
from ontoloop.workflow.audit import AuditEvent, AuditLog, Clock, utc_now
from ontoloop.workflow.consistency import consistency_check
from ontoloop.workflow.principals import Principal
from ontoloop.workflow.states import authority_for, is_legal


@dataclass(frozen=True)
class MutationEvent:
    """One committed content change, self-contained enough to replay."""

    sequence: int
    at: datetime
    actor: str
    action: str
    model_id: str
    version: int
    content_hash: str
    payload: dict

    def __post_init__(self):
        if self.sequence < 1:
            raise ValidationError("mutation sequence starts at 1")
        if self.at.tzinfo is None:
            raise ValidationError("mutation timestamp must be timezone-aware")

    def to_json(self) -> str:
        return json.dumps(
            {
                "sequence": self.sequence,
                "at": self.at.isoformat(),
                "actor": self.actor,
                "action": self.action,
                "model_id": self.model_id,
                "version": self.version,
                "content_hash": self.content_hash,
                "payload": self.payload,
            },
            sort_keys=True,
            ensure_ascii=False,
        )

    @classmethod
    def from_json(cls, line: str) -> "MutationEvent":
        try:
            raw = json.loads(line)
            return cls(
                sequence=raw["sequence"],
                at=datetime.fromisoformat(raw["at"]),
                actor=raw["actor"],
                action=raw["action"],
                model_id=raw["model_id"],
                version=raw["version"],
                content_hash=raw["content_hash"],
                payload=raw["payload"],
            )
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise StoreCorruptionError(f"unreadable mutation event: {exc}") from exc


_FORWARD_GATED = {
    (WorkflowState.DRAFT, WorkflowState.IN_REVIEW),
    (WorkflowState.IN_REVIEW, WorkflowState.READY_TO_PUBLISH),
    (WorkflowState.READY_TO_PUBLISH, WorkflowState.PUBLISHED),
}


class ModelRegistry:
    """Holds every version of every model plus the two event streams."""

    def __init__(self, clock: Clock = utc_now):
        self._clock = clock
        self._versions: dict[str, dict[int, KnowledgeModel]] = {}
        self._audit = AuditLog(clock)
        self._mutations: list[MutationEvent] = []
        self._transition_count = 0

    # -- reads ------------------------------------------------------

    def model_ids(self) -> tuple[str, ...]:
        return tuple(sorted(self._versions))

    def latest_version(self, model_id: str) -> int:
        if model_id not in self._versions:
            raise UnknownIdError(f"no model with id {model_id!r}")
        return max(self._versions[model_id])

    def get(self, model_id: str, version: int | None = None) -> KnowledgeModel:
        if model_id not in self._versions:
            raise UnknownIdError(f"no model with id {model_id!r}")
        versions = self._versions[model_id]
        if version is None:
            version = max(versions)
        if version not in versions:
            raise UnknownIdError(f"model {model_id!r} has no version {version}")
        return versions[version]

    def versions(self, model_id: str) -> tuple[KnowledgeModel, ...]:
        if model_id not in self._versions:
            raise UnknownIdError(f"no model with id {model_id!r}")
        return tuple(m for _, m in sorted(self._versions[model_id].items()))

    @property
    def audit_log(self) -> AuditLog:
        return self._audit

    @property
    def mutation_events(self) -> tuple[MutationEvent, ...]:
        return tuple(self._mutations)

    @property
    def transition_count(self) -> int:
        return self._transition_count

    def audit_trail(self, subject: str | None = None, since=None, until=None):
        return self._audit.trail(subject=subject, since=since, until=until)

    # -- mutation commits -------------------------------------------

    def _commit(self, model: KnowledgeModel, actor: Principal, action: str) -> KnowledgeModel:
        stamped = replace(model, state=WorkflowState.DRAFT)
        event = MutationEvent(
            sequence=len(self._mutations) + 1,
            at=self._clock(),
            actor=actor.id,
            action=action,
            model_id=stamped.id,
            version=stamped.version,
            content_hash=content_hash(stamped),
            payload=canonical_payload(stamped),
        )
        self._mutations.append(event)
        self._versions.setdefault(stamped.id, {})[stamped.version] = stamped
        return stamped

    def _mutable_latest(self, model_id: str) -> KnowledgeModel:
        model = self.get(model_id)
        if model.state is WorkflowState.PUBLISHED:
            raise PublishedImmutableError(
                f"version {model.version} of {model_id!r} is published; fork it first"
            )
        return model

    def create(
        self,
        name: str,
        source: SourceRef,
        actor: Principal,
        model_id: str | None = None,
    ) -> KnowledgeModel:
        model = operations.create_model(name, source, model_id=model_id)
        if model.id in self._versions:
            raise ValidationError(f"model id {model.id!r} already registered")
        return self._commit(model, actor, "create")

    def register(self, model: KnowledgeModel, actor: Principal, action: str) -> KnowledgeModel:
        """Admit an externally built model (import, merge) as a fresh draft."""
        if model.id in self._versions:
            raise ValidationError(f"model id {model.id!r} already registered")
        return self._commit(replace(model, version=1), actor, action)

    def add_class(self, model_id: str, entity_class: EntityClass, actor: Principal) -> KnowledgeModel:
        model = self._mutable_latest(model_id)
        return self._commit(operations.add_entity_class(model, entity_class), actor, "add-class")

    def update_class(self, model_id: str, entity_class: EntityClass, actor: Principal) -> KnowledgeModel:
        model = self._mutable_latest(model_id)
        return self._commit(operations.update_entity_class(model, entity_class), actor, "update-class")

    def add_relationship(self, model_id: str, relationship: Relationship, actor: Principal) -> KnowledgeModel:
        model = self._mutable_latest(model_id)
        return self._commit(operations.add_relationship(model, relationship), actor, "add-relationship")

    def fork(self, model_id: str, actor: Principal) -> KnowledgeModel:
        """New draft version copying the latest content; the only way past
        a published version."""
        model = self.get(model_id)
        bumped = replace(model, version=model.version + 1)
        return self._commit(bumped, actor, "fork")

    def merge(
        self,
        a_id: str,
        b_id: str,
        actor: Principal,
        resolutions=(),
        merged_id: str | None = None,
    ) -> KnowledgeModel:
        """Merge the latest versions of two models into a fresh lineage."""
        merged = merge_models(
            self.get(a_id), self.get(b_id), tuple(resolutions), model_id=merged_id
        )
        if merged.id in self._versions:
            raise ValidationError(f"model id {merged.id!r} already registered")
        return self._commit(merged, actor, "merge")

    # -- transitions ------------------------------------------------

    def transition(
        self,
        model_id: str,
        target: WorkflowState,
        actor: Principal,
        rationale: str,
    ) -> AuditEvent:
        if not rationale or not rationale.strip():
            raise ValidationError("transition rationale must be non-empty")
        model = self.get(model_id)
        current = model.state
        if not is_legal(current, target):
            raise IllegalTransitionError(
                f"no transition {current.value} -> {target.value}"
            )
        required = authority_for(current, target)
        assert required is not None
        if not actor.has_role(required):
            raise UnauthorizedRoleError(
                f"{current.value} -> {target.value} requires role {required.value}"
            )
        if (current, target) in _FORWARD_GATED:
            report = consistency_check(model, target_state=target)
            if report.errors:
                raise ConsistencyBlockedError(
                    f"{len(report.errors)} consistency error(s) block "
                    f"{current.value} -> {target.value}",
                    report,
                )
        event = self._audit.append(
            actor=actor.id,
            action=f"transition:{current.value}->{target.value}",
            subject=f"{model_id}@{model.version}",
            rationale=rationale,
        )
        self._versions[model_id][model.version] = replace(model, state=target)
        self._transition_count += 1
        return event

    # -- replay ------------------------------------------------------

    @classmethod
    def replay(
        cls,
        mutation_lines: Iterable[str],
        audit_lines: Iterable[str],
        clock: Clock = utc_now,
    ) -> "ModelRegistry":
        registry = cls(clock)
        expected = 1
        for line in mutation_lines:
            if not line.strip():
                raise StoreCorruptionError(f"blank mutation row at sequence {expected}")
            event = MutationEvent.from_json(line)
            if event.sequence != expected:
                raise StoreCorruptionError(
                    f"mutation sequence gap: expected {expected}, found {event.sequence}"
                )
            expected += 1
            model = model_from_content_payload(
                event.payload, model_id=event.model_id, version=event.version
            )
            if content_hash(model) != event.content_hash:
                raise StoreCorruptionError(
                    f"mutation {event.sequence} content hash mismatch for "
                    f"{event.model_id}@{event.version}"
                )
            registry._mutations.append(event)
            registry._versions.setdefault(event.model_id, {})[event.version] = model
        for line in audit_lines:
            if not line.strip():
                raise AuditCorruptionError("blank audit row")
            event = AuditEvent.from_json(line)
            registry._audit.restore(event)
            registry._apply_audited(event)
        return registry

    def _apply_audited(self, event: AuditEvent) -> None:
        if not event.action.startswith("transition:"):
            return
        move = event.action.split(":", 1)[1]
        source_text, _, target_text = move.partition("->")
        try:
            source = WorkflowState(source_text)
            target = WorkflowState(target_text)
            model_id, _, version_text = event.subject.partition("@")
            version = int(version_text)
        except ValueError as exc:
            raise AuditCorruptionError(
                f"audit event {event.sequence} is not replayable: {exc}"
            ) from exc
        stored = self._versions.get(model_id, {}).get(version)
        if stored is None:
            raise AuditCorruptionError(
                f"audit event {event.sequence} names unknown subject {event.subject}"
            )
        if stored.state is not source or not is_legal(source, target):
            raise AuditCorruptionError(
                f"audit event {event.sequence} contradicts recorded state "
                f"{stored.state.value} of {event.subject}"
            )
        self._versions[model_id][version] = replace(stored, state=target)
        self._transition_count += 1
