"""Event-sourced persistence binding registry, gate, and justifications.

One data directory holds three append-only JSON-lines streams plus a
snapshot tree:

    audit.jsonl                     transitions and gate verdicts
    mutations.jsonl                 content changes with full payloads
    justifications.jsonl            justification lifecycle events
    snapshots/<id>/<version>.json   blueprint export of every stored version

Opening a store replays all three streams and verifies what it finds:
gapless sequences, content hashes on every mutation, and each snapshot
byte-equal to the export of its replayed version. Verification failures
refuse the open and name the offending spot. Every mutation funnels
through one lock and is on disk before the call returns.
"""
from __future__ import annotations

import hashlib
import json
import threading
from pathlib import Path
from typing import Iterable, Sequence
from urllib.parse import quote

from ontoloop.errors import (
    GateError,
    OntoloopError,
    StoreCorruptionError,
    UnknownIdError,
    ValidationError,
)
from ontoloop.exchange import (
    SkippedConstruct,
    export_blueprint,
    import_blueprint,
    import_rdfxml,
)
from ontoloop.justify import (
    EvidenceItem,
    GateOutcome,
    GateResult,
    JustificationRecord,
    JustificationStatus,
    MockGenerator,
    RiskTier,
    TextGenerator,
    Verdict,
    compose_justification,
    gate_decision,
)
from ontoloop.knowledge.canonical import content_hash
from ontoloop.knowledge.merge import Resolution
from ontoloop.knowledge.model import KnowledgeModel, SourceRef, WorkflowState
from ontoloop.service.serialize import record_from_payload, record_payload
from ontoloop.workflow.audit import AuditEvent, Clock, utc_now
from ontoloop.workflow.principals import Principal
from ontoloop.workflow.registry import ModelRegistry

AUDIT_FILE = "audit.jsonl"
MUTATIONS_FILE = "mutations.jsonl"
JUSTIFICATIONS_FILE = "justifications.jsonl"
SNAPSHOT_DIR = "snapshots"

IMPORT_FORMATS = ("rdfxml", "blueprint")


class EventStore:
    """Durable service state: a replayed registry plus justifications."""

    def __init__(self, root: str | Path, clock: Clock = utc_now):
        self.root = Path(root)
        self._clock = clock
        self._lock = threading.RLock()
        self.root.mkdir(parents=True, exist_ok=True)
        (self.root / SNAPSHOT_DIR).mkdir(parents=True, exist_ok=True)
        self._registry = ModelRegistry.replay(
            self._lines(MUTATIONS_FILE), self._lines(AUDIT_FILE), clock
        )
        self._flushed_mutations = len(self._registry.mutation_events)
        self._flushed_audit = len(self._registry.audit_log)
        self._justifications: dict[str, JustificationRecord] = {}
        self._justification_events = 0
        self._replay_justifications()
        self._verify_snapshots()

    # -- startup ------------------------------------------------------

    def _lines(self, name: str) -> list[str]:
        path = self.root / name
        if not path.exists():
            return []
        return path.read_text("utf-8").splitlines()

    def _replay_justifications(self) -> None:
        for line in self._lines(JUSTIFICATIONS_FILE):
            expected = self._justification_events + 1
            try:
                data = json.loads(line)
            except json.JSONDecodeError as exc:
                raise StoreCorruptionError(
                    f"justification event {expected} is unreadable: {exc}"
                ) from exc
            found = data.get("sequence")
            if found != expected:
                raise StoreCorruptionError(
                    f"justification sequence gap: expected {expected}, found {found}"
                )
            try:
                record = record_from_payload(data["record"])
            except (KeyError, OntoloopError) as exc:
                raise StoreCorruptionError(
                    f"justification event {expected} is unreadable: {exc}"
                ) from exc
            kind = data.get("kind")
            known = record.id in self._justifications
            if kind == "composed" and known:
                raise StoreCorruptionError(
                    f"justification event {expected} re-composes {record.id!r}"
                )
            if kind != "composed" and not known:
                raise StoreCorruptionError(
                    f"justification event {expected} updates unknown "
                    f"record {record.id!r}"
                )
            self._justifications[record.id] = record
            self._justification_events = expected

    def _snapshot_path(self, model_id: str, version: int) -> Path:
        return self.root / SNAPSHOT_DIR / quote(model_id, safe="") / f"{version}.json"

    def _verify_snapshots(self) -> None:
        for model_id in self._registry.model_ids():
            for model in self._registry.versions(model_id):
                expected = export_blueprint(model)
                path = self._snapshot_path(model_id, model.version)
                if not path.exists():
                    path.parent.mkdir(parents=True, exist_ok=True)
                    path.write_text(expected, "utf-8")
                elif path.read_text("utf-8") != expected:
                    raise StoreCorruptionError(
                        f"snapshot {model_id}@{model.version} does not match "
                        "the replayed content"
                    )

    # -- persistence --------------------------------------------------

    def _append_rows(self, name: str, rows: Iterable[str]) -> None:
        with (self.root / name).open("a", encoding="utf-8") as fh:
            for row in rows:
                fh.write(row + "\n")

    def _flush(self) -> None:
        mutations = self._registry.mutation_events
        if len(mutations) > self._flushed_mutations:
            fresh = mutations[self._flushed_mutations:]
            self._append_rows(MUTATIONS_FILE, (event.to_json() for event in fresh))
            for event in fresh:
                model = self._registry.get(event.model_id, event.version)
                path = self._snapshot_path(event.model_id, event.version)
                path.parent.mkdir(parents=True, exist_ok=True)
                path.write_text(export_blueprint(model), "utf-8")
            self._flushed_mutations = len(mutations)
        audit = self._registry.audit_log.events
        if len(audit) > self._flushed_audit:
            fresh_audit = audit[self._flushed_audit:]
            self._append_rows(AUDIT_FILE, (event.to_json() for event in fresh_audit))
            self._flushed_audit = len(audit)

    def _append_justification(self, kind: str, record: JustificationRecord) -> None:
        self._justification_events += 1
        row = json.dumps(
            {
                "sequence": self._justification_events,
                "at": self._clock().isoformat(),
                "kind": kind,
                "record": record_payload(record),
            },
            sort_keys=True,
            ensure_ascii=False,
        )
        self._append_rows(JUSTIFICATIONS_FILE, [row])

    # -- reads --------------------------------------------------------

    @property
    def registry(self) -> ModelRegistry:
        return self._registry

    def justification(self, record_id: str) -> JustificationRecord:
        record = self._justifications.get(record_id)
        if record is None:
            raise UnknownIdError(f"no justification with id {record_id!r}")
        return record

    def justifications(
        self, status: str | None = None
    ) -> tuple[JustificationRecord, ...]:
        records = tuple(self._justifications.values())
        if status is None:
            return records
        try:
            wanted = JustificationStatus(status)
        except ValueError:
            raise ValidationError(f"unknown justification status {status!r}") from None
        return tuple(r for r in records if r.status is wanted)

    def state_fingerprint(self) -> str:
        """Digest of everything replayable; equal before and after restart."""
        body = {
            "models": {
                model_id: [
                    {
                        "version": model.version,
                        "state": model.state.value,
                        "content_hash": content_hash(model),
                    }
                    for model in self._registry.versions(model_id)
                ]
                for model_id in self._registry.model_ids()
            },
            "mutations": len(self._registry.mutation_events),
            "audit": [event.to_json() for event in self._registry.audit_log.events],
            "justifications": {
                record_id: record_payload(record)
                for record_id, record in sorted(self._justifications.items())
            },
        }
        canonical = json.dumps(body, sort_keys=True, ensure_ascii=False)
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()

    # -- mutations ----------------------------------------------------

    def create_model(
        self,
        name: str,
        source: SourceRef,
        actor: Principal,
        model_id: str | None = None,
    ) -> KnowledgeModel:
        with self._lock:
            model = self._registry.create(name, source, actor, model_id=model_id)
            self._flush()
            return model

    def import_model(
        self,
        fmt: str,
        data: str | bytes,
        actor: Principal,
        model_id: str | None = None,
    ) -> tuple[KnowledgeModel, tuple[SkippedConstruct, ...]]:
        if fmt not in IMPORT_FORMATS:
            raise ValidationError(
                f"unknown import format {fmt!r}; expected one of {IMPORT_FORMATS}"
            )
        with self._lock:
            if fmt == "blueprint":
                parsed = import_blueprint(data, model_id=model_id)
                skipped: tuple[SkippedConstruct, ...] = ()
            else:
                result = import_rdfxml(data, model_id=model_id)
                parsed, skipped = result.model, result.skipped
            model = self._registry.register(parsed, actor, "import")
            self._flush()
            return model, skipped

    def merge(
        self,
        a_id: str,
        b_id: str,
        actor: Principal,
        resolutions: Sequence[Resolution] = (),
        merged_id: str | None = None,
    ) -> KnowledgeModel:
        with self._lock:
            model = self._registry.merge(
                a_id, b_id, actor, tuple(resolutions), merged_id
            )
            self._flush()
            return model

    def transition(
        self,
        model_id: str,
        target: WorkflowState,
        actor: Principal,
        rationale: str,
    ) -> tuple[AuditEvent, KnowledgeModel]:
        with self._lock:
            event = self._registry.transition(model_id, target, actor, rationale)
            self._flush()
            return event, self._registry.get(model_id)

    def compose(
        self,
        intent: str,
        proposed_steps: Sequence[str],
        evidence: Sequence[EvidenceItem],
        *,
        risk: str = "high",
        created_by: str,
        record_id: str | None = None,
        generator: TextGenerator | None = None,
    ) -> JustificationRecord:
        try:
            tier = RiskTier(risk)
        except ValueError:
            raise ValidationError(f"unknown risk tier {risk!r}") from None
        with self._lock:
            record = compose_justification(
                intent,
                tuple(proposed_steps),
                tuple(evidence),
                generator if generator is not None else MockGenerator(),
                risk=tier,
                created_by=created_by,
                record_id=record_id,
                clock=self._clock,
            )
            if record.id in self._justifications:
                raise ValidationError(
                    f"justification id {record.id!r} already exists"
                )
            self._justifications[record.id] = record
            self._append_justification("composed", record)
            return record

    def verdict(self, record_id: str, verdict: Verdict | None) -> GateResult:
        """Apply a gate verdict; None is the low-risk post-hoc recording."""
        with self._lock:
            record = self.justification(record_id)
            result = gate_decision(record, verdict, self._registry.audit_log)
            if result.outcome is GateOutcome.PENDING_HUMAN:
                raise GateError(
                    f"record {record_id} is high-risk and needs an explicit "
                    "approve or reject verdict"
                )
            self._justifications[record_id] = result.record
            self._append_justification(result.outcome.value, result.record)
            self._flush()
            return result
