"""The 12-step knowledge-enhancement procedure.

Steps 1-8 drive a pluggable text generator through constrained prompts;
steps 3 and 9 are mechanical (collision resolution, RDF export). Steps
10-12 are not generator calls at all: they are workflow transitions and
a final merge, applied through a model registry and recorded in the
step log after the fact.

Every step artifact is plain JSON data and all derived state is a pure
function of (base model, source, step log). Runs checkpoint after each
step and replay bit for bit.
"""
from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass, replace
from importlib import resources
from string import Template
from typing import Protocol, runtime_checkable

from ontoloop.errors import (
    GeneratorFailure,
    ParseFailure,
    PipelineError,
    TemplateError,
    ValidationError,
)
from ontoloop.exchange.blueprint import export_blueprint
from ontoloop.exchange.rdfxml import export_rdfxml
from ontoloop.knowledge.canonical import canonical_payload, content_hash
from ontoloop.knowledge.model import (
    EntityClass,
    Exemplar,
    ExemplarKind,
    KnowledgeModel,
    Relationship,
    RelationshipObject,
    SourceRef,
    WorkflowState,
)
from ontoloop.knowledge.operations import add_entity_class, add_relationship
from ontoloop.workflow.consistency import consistency_check
from ontoloop.workflow.principals import Principal
from ontoloop.workflow.registry import ModelRegistry


@runtime_checkable
class EnhancementGenerator(Protocol):
    """Text generator with a provenance identity (model name + version)."""

    identity: str

    def complete(self, prompt: str) -> str: ...


STEP_TITLES = {
    1: "inventory",
    2: "relationship-proposals",
    3: "collision-resolution",
    4: "implicit-classes",
    5: "archetypical-exemplars",
    6: "atypical-exemplars",
    7: "exotypical-exemplars",
    8: "definitions",
    9: "rdf-export",
    10: "validation",
    11: "publication",
    12: "universe-merge",
}
GENERATOR_STEPS = (1, 2, 4, 5, 6, 7, 8)

_SLUG_RE = re.compile(r"[^a-z0-9]+")
_ID_RE = re.compile(r"^[a-z0-9][a-z0-9-]*$")
_TEMPLATE_CACHE: dict[int, Template] = {}


def _slug(text: str) -> str:
    return _SLUG_RE.sub("-", text.strip().lower()).strip("-")


def _sha256(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class SourceDocument:
    """A new knowledge source feeding one enhancement run."""

    name: str
    text: str

    def __post_init__(self):
        if not self.name or not self.name.strip():
            raise ValidationError("source document name must be non-empty")

    @property
    def sha256(self) -> str:
        return _sha256(self.text)


@dataclass(frozen=True)
class StepRecord:
    """One executed step: its exchange (if any) and the parsed artifact."""

    step: int
    title: str
    prompt: str | None
    response: str | None
    artifact: dict

    def to_payload(self) -> dict:
        return {
            "step": self.step,
            "title": self.title,
            "prompt": self.prompt,
            "response": self.response,
            "artifact": self.artifact,
        }

    @classmethod
    def from_payload(cls, raw: dict) -> "StepRecord":
        return cls(
            step=raw["step"],
            title=raw["title"],
            prompt=raw["prompt"],
            response=raw["response"],
            artifact=raw["artifact"],
        )


@dataclass(frozen=True)
class RunCheckpoint:
    """Resumable state captured when a step fails part-way through a run."""

    run_id: str
    source_name: str
    source_sha256: str
    base_content_hash: str
    next_step: int
    step_log: tuple[StepRecord, ...]
    failure: dict | None = None


@dataclass(frozen=True)
class ImplicitProposal:
    """An entity class the generator inferred from context alone."""

    id: str
    label: str
    rationale: str
    implicit: bool = True


@dataclass(frozen=True)
class EnhancementRun:
    """A completed run: provenance, the full step log, and the candidate."""

    id: str
    source_name: str
    source_sha256: str
    base_model_id: str
    base_version: int
    base_content_hash: str
    generator_identity: str
    step_log: tuple[StepRecord, ...]
    candidate: KnowledgeModel

    @property
    def candidate_id(self) -> str:
        return self.candidate.id

    @property
    def candidate_version(self) -> int:
        return self.candidate.version

    def step(self, number: int) -> StepRecord:
        for record in self.step_log:
            if record.step == number:
                return record
        raise PipelineError(f"run has no step {number}")

    @property
    def rejected_proposals(self) -> tuple[dict, ...]:
        return tuple(self.step(3).artifact["rejected"])

    def to_payload(self) -> dict:
        return {
            "id": self.id,
            "source_name": self.source_name,
            "source_sha256": self.source_sha256,
            "base_model_id": self.base_model_id,
            "base_version": self.base_version,
            "base_content_hash": self.base_content_hash,
            "generator_identity": self.generator_identity,
            "steps": [record.to_payload() for record in self.step_log],
            "candidate": canonical_payload(self.candidate),
            "candidate_version": self.candidate.version,
            "candidate_state": self.candidate.state.value,
            "candidate_hash": content_hash(self.candidate),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_payload(), sort_keys=True, ensure_ascii=False)


# -- prompt rendering ---------------------------------------------------


def _step_template(step: int) -> Template:
    if step not in _TEMPLATE_CACHE:
        path = resources.files("ontoloop.pipeline").joinpath(f"templates/step{step}.txt")
        _TEMPLATE_CACHE[step] = Template(path.read_text(encoding="utf-8"))
    return _TEMPLATE_CACHE[step]


def _render(step: int, mapping: dict[str, str]) -> str:
    try:
        return _step_template(step).substitute(mapping)
    except KeyError as exc:
        raise TemplateError(f"step {step} template needs slot {exc.args[0]!r}") from None


def _render_pairs(pairs: list[tuple[str, str]]) -> str:
    if not pairs:
        return "(none)"
    return "\n".join(f"- {pid} :: {label}" for pid, label in pairs)


def _object_text(obj: RelationshipObject) -> str:
    return f"@{obj.ref}" if obj.kind == "class" else str(obj.value)


def _render_relationships(model: KnowledgeModel) -> str:
    rels = model.sorted_relationships()
    if not rels:
        return "(none)"
    return "\n".join(
        f"- {rel.subject} {rel.predicate} -> {_object_text(rel.object)}" for rel in rels
    )


# -- response grammar ----------------------------------------------------


def _grammar_lines(response: str, keyword: str) -> tuple[list[list[str]], bool]:
    """Collect `keyword: a :: b :: c` rows; also report a literal `none`."""
    rows: list[list[str]] = []
    saw_none = False
    prefix = keyword + ":"
    for raw in response.splitlines():
        line = raw.strip()
        if line == "none":
            saw_none = True
            continue
        if not line.startswith(prefix):
            continue
        rest = line[len(prefix):].strip()
        rows.append([part.strip() for part in rest.split("::")])
    return rows, saw_none


def parse_elements(response: str) -> tuple[list[dict], bool]:
    rows, saw_none = _grammar_lines(response, "element")
    items: list[dict] = []
    seen: set[str] = set()
    for row in rows:
        if len(row) != 1 or not row[0]:
            continue
        label = row[0]
        element_id = _slug(label)
        if not element_id or element_id in seen:
            continue
        seen.add(element_id)
        items.append({"id": element_id, "label": label})
    return items, saw_none or bool(rows)


def parse_relations(response: str) -> tuple[list[dict], bool]:
    rows, saw_none = _grammar_lines(response, "relation")
    items: list[dict] = []
    for row in rows:
        if len(row) != 3 or not all(row):
            continue
        subject, predicate, target = row
        if target.startswith("@"):
            obj = {"kind": "class", "ref": target[1:]}
            if not _ID_RE.match(target[1:] or "-"):
                continue
        else:
            obj = {"kind": "literal", "value": target}
        items.append({"subject": subject, "predicate": predicate, "object": obj})
    return items, saw_none or bool(rows)


def parse_implicit(response: str) -> tuple[list[dict], bool]:
    rows, saw_none = _grammar_lines(response, "implicit")
    items: list[dict] = []
    for row in rows:
        if len(row) != 3 or not all(row):
            continue
        proposal_id, label, rationale = row
        if not _ID_RE.match(proposal_id):
            continue
        items.append(
            {"id": proposal_id, "label": label, "rationale": rationale, "implicit": True}
        )
    return items, saw_none or bool(rows)


def parse_exemplars(response: str, kind: str) -> tuple[list[dict], bool]:
    rows, saw_none = _grammar_lines(response, "exemplar")
    items: list[dict] = []
    for row in rows:
        if len(row) != 5:
            continue
        row_kind, class_id, label, properties, rationale = row
        if row_kind != kind or not class_id or not label or not rationale:
            continue
        props = [p.strip() for p in properties.split(";") if p.strip()]
        items.append(
            {
                "kind": row_kind,
                "class_id": class_id,
                "label": label,
                "properties": props,
                "rationale": rationale,
            }
        )
    return items, saw_none or bool(rows)


def parse_definitions(response: str) -> tuple[list[dict], bool]:
    rows, saw_none = _grammar_lines(response, "definition")
    items: list[dict] = []
    for row in rows:
        if len(row) != 2 or not all(row):
            continue
        items.append({"class_id": row[0], "text": row[1]})
    return items, saw_none or bool(rows)


# -- derived state (pure functions of base + step log) -------------------


def _artifact(step_log: list[StepRecord] | tuple[StepRecord, ...], step: int) -> dict:
    for record in step_log:
        if record.step == step:
            return record.artifact
    raise PipelineError(f"step {step} has not run yet")


def _new_class_pairs(base: KnowledgeModel, step_log) -> list[tuple[str, str]]:
    known = base.class_ids()
    pairs = [
        (item["id"], item["label"])
        for item in _artifact(step_log, 1)["elements"]
        if item["id"] not in known
    ]
    pairs.extend(
        (item["id"], item["label"]) for item in _artifact(step_log, 4)["proposals"]
    )
    return pairs


def _resolve_collisions(base: KnowledgeModel, step_log) -> dict:
    """Step 3: recorded relationships win over colliding proposals."""
    known = set(base.class_ids())
    known.update(item["id"] for item in _artifact(step_log, 1)["elements"])
    existing: dict[tuple[str, str], set[str]] = {}
    for rel in base.relationships:
        existing.setdefault(rel.key, set()).add(_object_text(rel.object))

    retained: list[dict] = []
    rejected: list[dict] = []
    seen: set[tuple[str, str, str]] = set()

    def reject(proposal: dict, reason: str) -> None:
        rejected.append({"proposal": proposal, "reason": reason})

    for proposal in _artifact(step_log, 2)["proposals"]:
        obj = proposal["object"]
        obj_text = f"@{obj['ref']}" if obj["kind"] == "class" else str(obj["value"])
        triple = (proposal["subject"], proposal["predicate"], obj_text)
        key = triple[:2]
        if proposal["subject"] not in known:
            reject(proposal, "unknown subject class")
        elif obj["kind"] == "class" and obj["ref"] not in known:
            reject(proposal, "unknown object class")
        elif key in existing:
            if obj_text in existing[key]:
                reject(proposal, "already present in the model")
            else:
                reject(proposal, "existing relationship retained")
        elif triple in seen:
            reject(proposal, "duplicate proposal")
        else:
            seen.add(triple)
            retained.append(proposal)
    return {"retained": retained, "rejected": rejected}


def _dedup_implicit(base: KnowledgeModel, step_log, proposals: list[dict]) -> dict:
    known = base.class_ids()
    introduced = {item["id"] for item in _artifact(step_log, 1)["elements"]}
    kept: list[dict] = []
    dropped: list[dict] = []
    seen: set[str] = set()
    for proposal in proposals:
        pid = proposal["id"]
        if pid in known:
            dropped.append({"id": pid, "reason": "already in the model"})
        elif pid in introduced:
            dropped.append({"id": pid, "reason": "already introduced by the source"})
        elif pid in seen:
            dropped.append({"id": pid, "reason": "duplicate proposal"})
        else:
            seen.add(pid)
            kept.append(proposal)
    return {"proposals": kept, "dropped": dropped}


_EXEMPLAR_CAP = {"archetypical": 1, "atypical": 3, "exotypical": 1}


def _screen_exemplars(base, step_log, items: list[dict], kind: str) -> dict:
    allowed = {pid for pid, _ in _new_class_pairs(base, step_log)}
    counts: dict[str, int] = {}
    kept: list[dict] = []
    dropped: list[dict] = []
    cap = _EXEMPLAR_CAP[kind]
    for item in items:
        cid = item["class_id"]
        if cid not in allowed:
            dropped.append({"class_id": cid, "reason": "not a class under enhancement"})
            continue
        counts[cid] = counts.get(cid, 0) + 1
        if counts[cid] > cap:
            noun = "exemplar" if cap == 1 else "exemplars"
            dropped.append(
                {"class_id": cid, "reason": f"capped at {cap} {kind} {noun} per class"}
            )
            continue
        kept.append(item)
    return {"exemplars": kept, "dropped": dropped}


def _screen_definitions(base, step_log, items: list[dict]) -> dict:
    allowed = {pid for pid, _ in _new_class_pairs(base, step_log)}
    kept: list[dict] = []
    dropped: list[dict] = []
    seen: set[str] = set()
    for item in items:
        cid = item["class_id"]
        if cid not in allowed:
            dropped.append({"class_id": cid, "reason": "not a class under enhancement"})
        elif cid in seen:
            dropped.append({"class_id": cid, "reason": "duplicate definition"})
        else:
            seen.add(cid)
            kept.append(item)
    return {"definitions": kept, "dropped": dropped}


def _relationship_from_proposal(proposal: dict, source_name: str) -> Relationship:
    obj = proposal["object"]
    if obj["kind"] == "class":
        target = RelationshipObject.to_class(obj["ref"])
    else:
        target = RelationshipObject.to_literal(str(obj["value"]))
    return Relationship(
        subject=proposal["subject"],
        predicate=proposal["predicate"],
        object=target,
        source=SourceRef(kind="enhancement", ref=source_name),
    )


def build_candidate(
    base: KnowledgeModel, step_log, source_name: str
) -> KnowledgeModel:
    """Fold the step-log artifacts into the candidate model (Draft)."""
    exemplars_by_class: dict[str, list[Exemplar]] = {}
    for step in (5, 6, 7):
        for item in _artifact(step_log, step)["exemplars"]:
            exemplars_by_class.setdefault(item["class_id"], []).append(
                Exemplar(
                    kind=ExemplarKind(item["kind"]),
                    label=item["label"],
                    properties=tuple(item["properties"]),
                    rationale=item["rationale"],
                )
            )
    definitions = {
        item["class_id"]: item["text"]
        for item in _artifact(step_log, 8)["definitions"]
    }
    model = base
    for pid, label in _new_class_pairs(base, step_log):
        model = add_entity_class(
            model,
            EntityClass(
                id=pid,
                label=label,
                definition=definitions.get(pid),
                exemplars=tuple(exemplars_by_class.get(pid, ())),
            ),
        )
    for proposal in _artifact(step_log, 3)["retained"]:
        model = add_relationship(
            model, _relationship_from_proposal(proposal, source_name)
        )
    return replace(model, state=WorkflowState.DRAFT)


# -- the run -------------------------------------------------------------


def _derive_run_id(base_hash: str, source: SourceDocument, identity: str) -> str:
    digest = _sha256("\n".join((base_hash, source.name, source.sha256, identity)))
    return f"run-{digest[:12]}"


def _generator_identity(generator) -> str:
    identity = getattr(generator, "identity", None)
    if not isinstance(identity, str) or not identity.strip():
        raise ValidationError("generator must expose a non-empty identity")
    return identity


_PARSERS = {
    1: lambda response: parse_elements(response),
    2: lambda response: parse_relations(response),
    4: lambda response: parse_implicit(response),
    5: lambda response: parse_exemplars(response, "archetypical"),
    6: lambda response: parse_exemplars(response, "atypical"),
    7: lambda response: parse_exemplars(response, "exotypical"),
    8: lambda response: parse_definitions(response),
}


def _prompt_mapping(step: int, base, source, step_log) -> dict[str, str]:
    if step == 1:
        return {
            "model_blueprint": export_blueprint(base),
            "source_name": source.name,
            "source_text": source.text,
        }
    if step == 2:
        elements = [
            (item["id"], item["label"]) for item in _artifact(step_log, 1)["elements"]
        ]
        return {
            "elements": _render_pairs(elements),
            "existing_relationships": _render_relationships(base),
            "source_name": source.name,
            "source_text": source.text,
        }
    if step == 4:
        elements = [
            (item["id"], item["label"]) for item in _artifact(step_log, 1)["elements"]
        ]
        known = [(cls.id, cls.label) for cls in base.sorted_classes()]
        return {
            "elements": _render_pairs(known + elements),
            "source_name": source.name,
            "source_text": source.text,
        }
    return {"new_classes": _render_pairs(_new_class_pairs(base, step_log))}


def _screen(step: int, base, source, step_log, items: list[dict]) -> dict:
    if step == 1:
        return {"elements": items}
    if step == 2:
        return {"proposals": items}
    if step == 4:
        return _dedup_implicit(base, step_log, items)
    if step in (5, 6, 7):
        kind = {5: "archetypical", 6: "atypical", 7: "exotypical"}[step]
        return _screen_exemplars(base, step_log, items, kind)
    return _screen_definitions(base, step_log, items)


def run_enhancement(
    base: KnowledgeModel,
    source: SourceDocument,
    generator: EnhancementGenerator,
    *,
    run_id: str | None = None,
    resume: RunCheckpoint | None = None,
) -> EnhancementRun:
    """Execute steps 1-9, yielding a Draft candidate awaiting review.

    On a generator or parse failure the raised error carries a
    ``checkpoint``; passing it back via ``resume`` re-runs only the
    failed step onward, and the finished run is identical to one that
    never failed.
    """
    if not source.text or not source.text.strip():
        raise ValidationError("source document must be non-empty")
    report = consistency_check(base, target_state=WorkflowState.IN_REVIEW)
    if report.errors:
        raise PipelineError(
            f"base model fails consistency with {len(report.errors)} error(s)"
        )
    identity = _generator_identity(generator)
    base_hash = content_hash(base)

    if resume is not None:
        if resume.source_name != source.name or resume.source_sha256 != source.sha256:
            raise PipelineError("checkpoint was taken against a different source")
        if resume.base_content_hash != base_hash:
            raise PipelineError("checkpoint was taken against a different base model")
        if resume.next_step != len(resume.step_log) + 1:
            raise PipelineError("checkpoint step log does not match its next step")
        if run_id is not None and run_id != resume.run_id:
            raise PipelineError("run id contradicts the checkpoint")
        run_id = resume.run_id
        log = list(resume.step_log)
    else:
        log = []
        if run_id is None:
            run_id = _derive_run_id(base_hash, source, identity)

    def checkpoint(step: int, failure: dict | None) -> RunCheckpoint:
        return RunCheckpoint(
            run_id=run_id,
            source_name=source.name,
            source_sha256=source.sha256,
            base_content_hash=base_hash,
            next_step=step,
            step_log=tuple(log),
            failure=failure,
        )

    for step in range(len(log) + 1, 10):
        title = STEP_TITLES[step]
        if step == 3:
            log.append(
                StepRecord(step, title, None, None, _resolve_collisions(base, log))
            )
            continue
        if step == 9:
            candidate = build_candidate(base, log, source.name)
            data = export_rdfxml(candidate)
            artifact = {
                "format": "rdfxml",
                "bytes": len(data),
                "sha256": hashlib.sha256(data).hexdigest(),
                "candidate_id": candidate.id,
                "candidate_version": candidate.version,
                "candidate_hash": content_hash(candidate),
            }
            log.append(StepRecord(step, title, None, None, artifact))
            continue
        prompt = _render(step, _prompt_mapping(step, base, source, log))
        try:
            response = generator.complete(prompt)
        except GeneratorFailure as exc:
            exc.checkpoint = checkpoint(step, {"step": step, "reason": str(exc)})
            raise
        items, usable = _PARSERS[step](response)
        if not usable:
            raise ParseFailure(
                f"step {step} ({title}) response matched no grammar line",
                step=step,
                checkpoint=checkpoint(
                    step,
                    {
                        "step": step,
                        "reason": "free-text response",
                        "prompt": prompt,
                        "response": response,
                    },
                ),
            )
        log.append(
            StepRecord(step, title, prompt, response, _screen(step, base, source, log, items))
        )

    return EnhancementRun(
        id=run_id,
        source_name=source.name,
        source_sha256=source.sha256,
        base_model_id=base.id,
        base_version=base.version,
        base_content_hash=base_hash,
        generator_identity=identity,
        step_log=tuple(log),
        candidate=build_candidate(base, log, source.name),
    )


def identify_implicit_classes(step_log) -> tuple[ImplicitProposal, ...]:
    """Read the implicit-class proposals recorded by step 4."""
    present = {record.step for record in step_log}
    if not {1, 2, 3} <= present:
        raise PipelineError("steps 1-3 must complete before implicit classes are read")
    if 4 not in present:
        return ()
    return tuple(
        ImplicitProposal(id=item["id"], label=item["label"], rationale=item["rationale"])
        for item in _artifact(step_log, 4)["proposals"]
    )


def finalize_run(
    run: EnhancementRun,
    registry: ModelRegistry,
    *,
    contributor: Principal,
    reviewer: Principal,
    publisher: Principal,
    universe_id: str,
    resolutions=(),
    merged_id: str | None = None,
) -> tuple[EnhancementRun, KnowledgeModel]:
    """Steps 10-12: validate, publish, and merge into the universe model.

    The run's additions are re-applied through the registry so each one
    lands in the mutation stream, then the candidate walks the workflow
    and merges with the designated universe root as a fresh lineage.
    """
    steps = [record.step for record in run.step_log]
    if steps != list(range(1, 10)):
        if len(steps) > 9:
            raise PipelineError("run is already finalized")
        raise PipelineError("run is not complete through step 9")

    current = registry.get(run.base_model_id)
    if (
        current.version != run.base_version
        or content_hash(current) != run.base_content_hash
    ):
        raise PipelineError("base model changed since the run started")

    base_ids = current.class_ids()
    for cls in run.candidate.classes:
        if cls.id not in base_ids:
            registry.add_class(run.base_model_id, cls, contributor)
    for proposal in run.step(3).artifact["retained"]:
        registry.add_relationship(
            run.base_model_id,
            _relationship_from_proposal(proposal, run.source_name),
            contributor,
        )
    applied = registry.get(run.base_model_id)
    if content_hash(applied) != content_hash(run.candidate):
        raise PipelineError("applied candidate diverged from the run's candidate")

    note = f"enhancement run {run.id}"
    ev_review = registry.transition(
        run.base_model_id,
        WorkflowState.IN_REVIEW,
        contributor,
        f"{note}: candidate submitted for validation",
    )
    ev_ready = registry.transition(
        run.base_model_id,
        WorkflowState.READY_TO_PUBLISH,
        reviewer,
        f"{note}: candidate validated",
    )
    validation = StepRecord(
        10,
        STEP_TITLES[10],
        None,
        None,
        {
            "transitions": ["draft->in-review", "in-review->ready-to-publish"],
            "audit_sequences": [ev_review.sequence, ev_ready.sequence],
            "validated_by": reviewer.id,
        },
    )
    ev_publish = registry.transition(
        run.base_model_id,
        WorkflowState.PUBLISHED,
        publisher,
        f"{note}: candidate published",
    )
    publication = StepRecord(
        11,
        STEP_TITLES[11],
        None,
        None,
        {
            "transitions": ["ready-to-publish->published"],
            "audit_sequences": [ev_publish.sequence],
            "published_by": publisher.id,
        },
    )
    merged = registry.merge(
        universe_id,
        run.base_model_id,
        publisher,
        resolutions=resolutions,
        merged_id=merged_id,
    )
    universe_merge = StepRecord(
        12,
        STEP_TITLES[12],
        None,
        None,
        {
            "universe_id": universe_id,
            "merged_id": merged.id,
            "merged_version": merged.version,
            "merged_hash": content_hash(merged),
        },
    )
    extended = replace(
        run, step_log=run.step_log + (validation, publication, universe_merge)
    )
    return extended, merged
