"""Conflict detection and resolution-driven merging of knowledge models.

Merging never guesses: every detected conflict must be covered by an
explicit resolution, and the retain-and-clarify strategy keeps both
variants side by side, disambiguated by context tags, instead of
discarding either perspective.

Commutativity: ``merge(a, b, R)`` and ``merge(b, a, mirror(R))`` produce
content-hash-equal results. Where a single merged element must take
non-conflicting content from one side, the donor is chosen by comparing
canonical payloads, not by argument order.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum

from ontoloop.errors import (
    ResolutionError,
    UncoveredConflictError,
    ValidationError,
)
from ontoloop.knowledge.canonical import canonical_dumps, class_payload, relationship_payload
from ontoloop.knowledge.model import (
    EntityClass,
    KnowledgeModel,
    ModelRef,
    PropertySpec,
    Relationship,
    RelationshipObject,
    SourceRef,
    ValueType,
    mint_id,
)


class ConflictKind(str, Enum):
    TYPE_MISMATCH = "type-mismatch"
    DUPLICATE_ID = "duplicate-id"
    DEFINITION_CLASH = "definition-clash"
    PREDICATE_CLASH = "predicate-clash"


class Strategy(str, Enum):
    RETAIN_AND_CLARIFY = "retain-and-clarify"
    RESOLVE_LEFT = "resolve-left"
    RESOLVE_RIGHT = "resolve-right"
    RESOLVE_CUSTOM = "resolve-custom"


@dataclass(frozen=True)
class Conflict:
    """One conflicted key between two models.

    ``element`` is "class" or "relationship"; ``key`` is the class id or
    "subject -> predicate". ``detail`` narrows the spot (for example the
    clashing property names). ``left``/``right`` are human-readable
    descriptions of each side's variant.
    """

    index: int
    kind: ConflictKind
    element: str
    key: str
    detail: str
    left: str
    right: str


@dataclass(frozen=True)
class ConflictReport:
    left: ModelRef
    right: ModelRef
    conflicts: tuple[Conflict, ...] = ()

    @property
    def empty(self) -> bool:
        return not self.conflicts


@dataclass(frozen=True)
class Resolution:
    """How to settle one conflict, referenced by report index."""

    index: int
    strategy: Strategy
    rationale: str
    value: str | None = None
    left_tag: str | None = None
    right_tag: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "strategy", Strategy(self.strategy))
        if not self.rationale or not self.rationale.strip():
            raise ValidationError("resolution rationale must be non-empty")
        if self.strategy is Strategy.RETAIN_AND_CLARIFY:
            if not self.left_tag or not self.right_tag:
                raise ValidationError("retain-and-clarify needs left_tag and right_tag")
            if self.left_tag == self.right_tag:
                raise ValidationError("retain-and-clarify tags must differ")
        if self.strategy is Strategy.RESOLVE_CUSTOM and self.value is None:
            raise ValidationError("resolve-custom needs a value")

    def mirrored(self) -> "Resolution":
        """The same decision expressed for the merge with swapped operands."""
        strategy = self.strategy
        if strategy is Strategy.RESOLVE_LEFT:
            strategy = Strategy.RESOLVE_RIGHT
        elif strategy is Strategy.RESOLVE_RIGHT:
            strategy = Strategy.RESOLVE_LEFT
        return replace(
            self, strategy=strategy, left_tag=self.right_tag, right_tag=self.left_tag
        )


def _class_desc(cls: EntityClass) -> str:
    props = ", ".join(f"{p.name}:{p.value_type.value}" for p in cls.properties)
    definition = (cls.definition or "<no definition>")[:80]
    return f"label={cls.label!r} definition={definition!r} properties=[{props}]"


def _clashing_property_names(a: EntityClass, b: EntityClass) -> list[str]:
    b_types = {p.name: p.value_type for p in b.properties}
    return [
        p.name
        for p in a.properties
        if p.name in b_types and b_types[p.name] is not p.value_type
    ]


def _object_desc(obj: RelationshipObject) -> str:
    if obj.kind == "class":
        return f"-> class {obj.ref!r}"
    return f"-> {obj.value!r}:{obj.value_type.value}"


def _group_objects(rels: tuple[Relationship, ...]) -> dict[tuple[str, str], list[Relationship]]:
    groups: dict[tuple[str, str], list[Relationship]] = {}
    for rel in rels:
        groups.setdefault(rel.key, []).append(rel)
    return groups


def _object_set(rels: list[Relationship]) -> frozenset[str]:
    # Source refs are corroboration, not content, so they do not make two
    # assertions of the same object conflict with each other.
    out = set()
    for rel in rels:
        payload = relationship_payload(rel)
        out.add(canonical_dumps(payload["object"]))
    return frozenset(out)


def detect_conflicts(a: KnowledgeModel, b: KnowledgeModel) -> ConflictReport:
    """Compare two models; each conflicted key appears exactly once.

    Deterministic regardless of input element order: class conflicts come
    first sorted by class id, then relationship conflicts sorted by
    (subject, predicate).
    """
    conflicts: list[Conflict] = []

    b_classes = {cls.id: cls for cls in b.classes}
    for cls_a in sorted(a.classes, key=lambda c: c.id):
        cls_b = b_classes.get(cls_a.id)
        if cls_b is None or class_payload(cls_a) == class_payload(cls_b):
            continue
        clashing = _clashing_property_names(cls_a, cls_b)
        if clashing:
            kind = ConflictKind.TYPE_MISMATCH
            detail = "properties: " + ", ".join(sorted(clashing))
        elif (
            cls_a.definition is not None
            and cls_b.definition is not None
            and cls_a.definition != cls_b.definition
        ):
            kind = ConflictKind.DEFINITION_CLASH
            detail = "definitions differ"
        else:
            kind = ConflictKind.DUPLICATE_ID
            detail = "same id, different content"
        conflicts.append(
            Conflict(
                index=len(conflicts),
                kind=kind,
                element="class",
                key=cls_a.id,
                detail=detail,
                left=_class_desc(cls_a),
                right=_class_desc(cls_b),
            )
        )

    groups_a = _group_objects(a.relationships)
    groups_b = _group_objects(b.relationships)
    for key in sorted(set(groups_a) & set(groups_b)):
        rels_a, rels_b = groups_a[key], groups_b[key]
        if _object_set(rels_a) == _object_set(rels_b):
            continue
        types_a = {r.object.value_type for r in rels_a if r.object.kind == "literal"}
        types_b = {r.object.value_type for r in rels_b if r.object.kind == "literal"}
        all_literal = all(r.object.kind == "literal" for r in rels_a + rels_b)
        if all_literal and types_a != types_b:
            kind = ConflictKind.TYPE_MISMATCH
            detail = "literal value types differ"
        else:
            kind = ConflictKind.PREDICATE_CLASH
            detail = "objects differ"
        subject, predicate = key
        conflicts.append(
            Conflict(
                index=len(conflicts),
                kind=kind,
                element="relationship",
                key=f"{subject} -> {predicate}",
                detail=detail,
                left="; ".join(sorted(_object_desc(r.object) for r in rels_a)),
                right="; ".join(sorted(_object_desc(r.object) for r in rels_b)),
            )
        )

    return ConflictReport(left=a.ref, right=b.ref, conflicts=tuple(conflicts))


def _annotated(base: str, tag: str) -> str:
    return f"{base}[{tag}]"


def _donor_order(cls_a: EntityClass, cls_b: EntityClass) -> tuple[EntityClass, EntityClass]:
    """Order a conflicting pair by canonical payload, not by argument side."""
    pa = canonical_dumps(class_payload(cls_a))
    pb = canonical_dumps(class_payload(cls_b))
    return (cls_a, cls_b) if pa <= pb else (cls_b, cls_a)


def _merge_class_properties(
    cls_a: EntityClass,
    cls_b: EntityClass,
    resolution: Resolution,
) -> EntityClass:
    """Settle a property type mismatch inside one merged class."""
    clashing = set(_clashing_property_names(cls_a, cls_b))
    donor, _ = _donor_order(cls_a, cls_b)
    merged: dict[str, PropertySpec] = {}
    if resolution.strategy is Strategy.RETAIN_AND_CLARIFY:
        for prop in cls_a.properties:
            if prop.name in clashing:
                merged[_annotated(prop.name, resolution.left_tag)] = replace(
                    prop, name=_annotated(prop.name, resolution.left_tag)
                )
            else:
                merged.setdefault(prop.name, prop)
        for prop in cls_b.properties:
            if prop.name in clashing:
                merged[_annotated(prop.name, resolution.right_tag)] = replace(
                    prop, name=_annotated(prop.name, resolution.right_tag)
                )
            else:
                merged.setdefault(prop.name, prop)
    else:  # RESOLVE_CUSTOM with a value type
        try:
            forced = ValueType(resolution.value)
        except ValueError:
            raise ResolutionError(
                f"resolve-custom value {resolution.value!r} is not a value type"
            ) from None
        for prop in list(cls_a.properties) + list(cls_b.properties):
            if prop.name in clashing:
                merged.setdefault(prop.name, PropertySpec(name=prop.name, value_type=forced))
            else:
                merged.setdefault(prop.name, prop)
    ordered = tuple(merged[name] for name in sorted(merged))
    return replace(donor, properties=ordered)


def _resolve_class_conflict(
    conflict: Conflict,
    resolution: Resolution,
    cls_a: EntityClass,
    cls_b: EntityClass,
) -> tuple[list[EntityClass], dict[str, str], dict[str, str]]:
    """Returns (merged classes, left id rewrites, right id rewrites)."""
    if resolution.strategy is Strategy.RESOLVE_LEFT:
        return [cls_a], {}, {}
    if resolution.strategy is Strategy.RESOLVE_RIGHT:
        return [cls_b], {}, {}

    if conflict.kind is ConflictKind.TYPE_MISMATCH:
        return [_merge_class_properties(cls_a, cls_b, resolution)], {}, {}

    if resolution.strategy is Strategy.RESOLVE_CUSTOM:
        if conflict.kind is ConflictKind.DEFINITION_CLASH:
            donor, _ = _donor_order(cls_a, cls_b)
            return [replace(donor, definition=resolution.value)], {}, {}
        raise ResolutionError(
            f"resolve-custom is not supported for {conflict.kind.value} conflicts"
        )

    # retain-and-clarify on duplicate-id or definition-clash: keep both
    # variants, each under a context-tagged id. References from the owning
    # side follow the rename so the merged graph stays closed.
    left_id = _annotated(cls_a.id, resolution.left_tag)
    right_id = _annotated(cls_b.id, resolution.right_tag)
    kept = [replace(cls_a, id=left_id), replace(cls_b, id=right_id)]
    return kept, {cls_a.id: left_id}, {cls_b.id: right_id}


def _rewrite_relationship(rel: Relationship, id_map: dict[str, str]) -> Relationship:
    if not id_map:
        return rel
    subject = id_map.get(rel.subject, rel.subject)
    obj = rel.object
    if obj.kind == "class" and obj.ref in id_map:
        obj = RelationshipObject.to_class(id_map[obj.ref])
    if subject == rel.subject and obj is rel.object:
        return rel
    return replace(rel, subject=subject, object=obj)


def _resolve_relationship_conflict(
    resolution: Resolution,
    rels_a: list[Relationship],
    rels_b: list[Relationship],
) -> tuple[list[Relationship], list[Relationship]]:
    """Returns kept relationships still split by originating side."""
    if resolution.strategy is Strategy.RESOLVE_LEFT:
        return list(rels_a), []
    if resolution.strategy is Strategy.RESOLVE_RIGHT:
        return [], list(rels_b)
    if resolution.strategy is Strategy.RESOLVE_CUSTOM:
        raise ResolutionError("resolve-custom is not supported for relationship conflicts")
    kept_a = [
        replace(rel, predicate=_annotated(rel.predicate, resolution.left_tag))
        for rel in rels_a
    ]
    kept_b = [
        replace(rel, predicate=_annotated(rel.predicate, resolution.right_tag))
        for rel in rels_b
    ]
    return kept_a, kept_b


def merge_models(
    a: KnowledgeModel,
    b: KnowledgeModel,
    resolutions: tuple[Resolution, ...] = (),
    *,
    model_id: str | None = None,
) -> KnowledgeModel:
    """Merge two models under explicit conflict resolutions.

    The merged model starts a new version lineage: version 1, Draft, with
    both parents recorded. Raises UncoveredConflictError when any detected
    conflict lacks a resolution.
    """
    report = detect_conflicts(a, b)

    by_index: dict[int, Resolution] = {}
    for res in resolutions:
        if res.index < 0 or res.index >= len(report.conflicts):
            raise ResolutionError(
                f"resolution index {res.index} out of range "
                f"(report has {len(report.conflicts)} conflicts)"
            )
        if res.index in by_index:
            raise ResolutionError(f"conflict {res.index} resolved twice")
        by_index[res.index] = res

    uncovered = tuple(c.index for c in report.conflicts if c.index not in by_index)
    if uncovered:
        listing = "; ".join(
            f"[{i}] {report.conflicts[i].kind.value} {report.conflicts[i].key}"
            for i in uncovered
        )
        raise UncoveredConflictError(f"unresolved conflicts: {listing}", uncovered)

    class_conflicts = {c.key: c for c in report.conflicts if c.element == "class"}
    rel_conflicts = {c.key: c for c in report.conflicts if c.element == "relationship"}

    a_classes = {cls.id: cls for cls in a.classes}
    b_classes = {cls.id: cls for cls in b.classes}
    left_map: dict[str, str] = {}
    right_map: dict[str, str] = {}
    merged_classes: dict[str, EntityClass] = {}

    def _keep(cls: EntityClass) -> None:
        if cls.id in merged_classes:
            if class_payload(merged_classes[cls.id]) != class_payload(cls):
                raise ResolutionError(
                    f"resolution produced colliding class id {cls.id!r}"
                )
            return
        merged_classes[cls.id] = cls

    for cid in sorted(set(a_classes) | set(b_classes)):
        in_a, in_b = cid in a_classes, cid in b_classes
        if in_a and in_b:
            conflict = class_conflicts.get(cid)
            if conflict is None:
                _keep(a_classes[cid])
            else:
                kept, lmap, rmap = _resolve_class_conflict(
                    conflict, by_index[conflict.index], a_classes[cid], b_classes[cid]
                )
                for cls in kept:
                    _keep(cls)
                left_map.update(lmap)
                right_map.update(rmap)
        elif in_a:
            _keep(a_classes[cid])
        else:
            _keep(b_classes[cid])

    groups_a = _group_objects(a.relationships)
    groups_b = _group_objects(b.relationships)
    merged_rels: list[Relationship] = []
    seen_rels: set[tuple] = set()

    def _keep_rel(rel: Relationship, id_map: dict[str, str]) -> None:
        rel = _rewrite_relationship(rel, id_map)
        fingerprint = canonical_dumps(relationship_payload(rel))
        if fingerprint in seen_rels:
            return
        seen_rels.add(fingerprint)
        merged_rels.append(rel)

    for key in sorted(set(groups_a) | set(groups_b)):
        subject, predicate = key
        conflict = rel_conflicts.get(f"{subject} -> {predicate}")
        if conflict is not None:
            kept_a, kept_b = _resolve_relationship_conflict(
                by_index[conflict.index], groups_a.get(key, []), groups_b.get(key, [])
            )
            for rel in kept_a:
                _keep_rel(rel, left_map)
            for rel in kept_b:
                _keep_rel(rel, right_map)
            continue
        for rel in groups_a.get(key, []):
            _keep_rel(rel, left_map)
        for rel in groups_b.get(key, []):
            _keep_rel(rel, right_map)

    names = sorted({a.name, b.name})
    parents = tuple(sorted((a.ref, b.ref), key=lambda r: (r.model_id, r.version)))
    return KnowledgeModel(
        id=model_id or mint_id(),
        name="+".join(names),
        source=SourceRef(kind="merge", ref="+".join(str(p) for p in parents)),
        version=1,
        classes=tuple(merged_classes[cid] for cid in sorted(merged_classes)),
        relationships=tuple(merged_rels),
        parents=parents,
    )
