"""Core value types for knowledge models.

A knowledge model is an immutable graph snapshot: entity classes (each
carrying typed properties and membership exemplars) plus relationships
between classes or from a class to a typed literal. All text fields are
restricted to characters that survive both JSON and XML 1.0 exchange,
so every valid model can round-trip through either format.
"""
from __future__ import annotations

import uuid
from dataclasses import dataclass, field
from datetime import datetime
from enum import Enum

from ontoloop.errors import CardinalityError, DuplicateIdError, ValidationError

# XML 1.0 cannot represent most C0 controls; \r is normalized away by
# conforming parsers. Keeping these out of model text makes round trips total.
_FORBIDDEN_RANGES = (
    (0x00, 0x08),
    (0x0B, 0x1F),
    (0xD800, 0xDFFF),
    (0xFFFE, 0xFFFF),
)


def _check_text(value: str, label: str, *, allow_empty: bool = False) -> str:
    if not isinstance(value, str):
        raise ValidationError(f"{label} must be a string, got {type(value).__name__}")
    if not allow_empty and not value.strip():
        raise ValidationError(f"{label} must be non-empty")
    for ch in value:
        cp = ord(ch)
        for lo, hi in _FORBIDDEN_RANGES:
            if lo <= cp <= hi:
                raise ValidationError(
                    f"{label} contains unsupported control character U+{cp:04X}"
                )
    return value


class ValueType(str, Enum):
    """Literal value types allowed on properties and relationship objects."""

    STRING = "string"
    INTEGER = "integer"
    FLOAT = "floating-point"
    BOOLEAN = "boolean"
    DATETIME = "datetime"


def validate_literal(value: str, value_type: ValueType, label: str) -> None:
    """Check that a literal's text form is well formed for its declared type."""
    _check_text(value, label, allow_empty=True)
    try:
        if value_type is ValueType.INTEGER:
            int(value)
        elif value_type is ValueType.FLOAT:
            float(value)
        elif value_type is ValueType.BOOLEAN:
            if value not in ("true", "false"):
                raise ValueError(value)
        elif value_type is ValueType.DATETIME:
            datetime.fromisoformat(value)
    except ValueError:
        raise ValidationError(
            f"{label}: {value!r} is not a well-formed {value_type.value} literal"
        ) from None


class ExemplarKind(str, Enum):
    ARCHETYPICAL = "archetypical"
    ATYPICAL = "atypical"
    EXOTYPICAL = "exotypical"


class WorkflowState(str, Enum):
    """Review ladder for a model version.

    Board labels follow the working vocabulary: Draft is "ready to do",
    InReview "ready to review", ReadyToPublish "ready to publish".
    Published versions are frozen; edits fork a fresh Draft version.
    """

    DRAFT = "draft"
    IN_REVIEW = "in-review"
    READY_TO_PUBLISH = "ready-to-publish"
    PUBLISHED = "published"

    @property
    def display(self) -> str:
        return {
            WorkflowState.DRAFT: "ready to do",
            WorkflowState.IN_REVIEW: "ready to review",
            WorkflowState.READY_TO_PUBLISH: "ready to publish",
            WorkflowState.PUBLISHED: "published",
        }[self]


@dataclass(frozen=True)
class SourceRef:
    """Provenance pointer: where a piece of knowledge came from."""

    kind: str
    ref: str

    def __post_init__(self):
        _check_text(self.kind, "source kind")
        _check_text(self.ref, "source ref")

    @classmethod
    def parse(cls, text: str) -> "SourceRef":
        kind, sep, ref = text.partition(":")
        if not sep:
            raise ValidationError(f"source ref {text!r} must look like 'kind:ref'")
        return cls(kind=kind, ref=ref)

    def __str__(self) -> str:
        return f"{self.kind}:{self.ref}"


@dataclass(frozen=True)
class ModelRef:
    model_id: str
    version: int

    def __post_init__(self):
        _check_text(self.model_id, "model id")
        if not isinstance(self.version, int) or self.version < 1:
            raise ValidationError("model version must be a positive integer")

    def __str__(self) -> str:
        return f"{self.model_id}@{self.version}"


@dataclass(frozen=True)
class Exemplar:
    """A concrete instance used to triangulate a class boundary.

    Archetypical exemplars are central members, atypical ones are unusual
    but genuine members, and exotypical ones are explicitly NOT members:
    near misses that mark where the class stops. The rationale says why.
    """

    kind: ExemplarKind
    label: str
    properties: tuple[str, ...] = ()
    rationale: str = ""

    def __post_init__(self):
        object.__setattr__(self, "kind", ExemplarKind(self.kind))
        object.__setattr__(self, "properties", tuple(self.properties))
        _check_text(self.label, "exemplar label")
        _check_text(self.rationale, "exemplar rationale")
        for i, prop in enumerate(self.properties):
            _check_text(prop, f"exemplar property [{i}]")

    @property
    def is_member(self) -> bool:
        return self.kind is not ExemplarKind.EXOTYPICAL


@dataclass(frozen=True)
class PropertySpec:
    """A named, typed attribute slot on an entity class."""

    name: str
    value_type: ValueType = ValueType.STRING
    example: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "value_type", ValueType(self.value_type))
        _check_text(self.name, "property name")
        if self.example is not None:
            validate_literal(self.example, self.value_type, f"property {self.name!r} example")


_EXEMPLAR_LIMITS = {
    ExemplarKind.ARCHETYPICAL: 1,
    ExemplarKind.ATYPICAL: 3,
    ExemplarKind.EXOTYPICAL: 1,
}


@dataclass(frozen=True)
class EntityClass:
    """A named concept with typed properties and boundary exemplars."""

    id: str
    label: str
    definition: str | None = None
    properties: tuple[PropertySpec, ...] = ()
    exemplars: tuple[Exemplar, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "properties", tuple(self.properties))
        object.__setattr__(self, "exemplars", tuple(self.exemplars))
        _check_text(self.id, "class id")
        _check_text(self.label, "class label")
        if self.definition is not None:
            _check_text(self.definition, "class definition")
        seen = set()
        for prop in self.properties:
            if prop.name in seen:
                raise DuplicateIdError(
                    f"class {self.id!r} declares property {prop.name!r} twice"
                )
            seen.add(prop.name)
        counts: dict[ExemplarKind, int] = {}
        for ex in self.exemplars:
            counts[ex.kind] = counts.get(ex.kind, 0) + 1
        for kind, limit in _EXEMPLAR_LIMITS.items():
            if counts.get(kind, 0) > limit:
                raise CardinalityError(
                    f"class {self.id!r} has {counts[kind]} {kind.value} exemplars, "
                    f"limit is {limit}"
                )

    def exemplar_of_kind(self, kind: ExemplarKind) -> tuple[Exemplar, ...]:
        return tuple(e for e in self.exemplars if e.kind is kind)


@dataclass(frozen=True)
class RelationshipObject:
    """Either a reference to a class id or a typed literal value."""

    kind: str  # "class" | "literal"
    ref: str | None = None
    value: str | None = None
    value_type: ValueType | None = None

    def __post_init__(self):
        if self.kind == "class":
            if self.ref is None or self.value is not None or self.value_type is not None:
                raise ValidationError("class object needs ref and nothing else")
            _check_text(self.ref, "relationship object ref")
        elif self.kind == "literal":
            if self.value is None or self.value_type is None or self.ref is not None:
                raise ValidationError("literal object needs value and value_type")
            object.__setattr__(self, "value_type", ValueType(self.value_type))
            validate_literal(self.value, self.value_type, "relationship literal")
        else:
            raise ValidationError(f"unknown relationship object kind {self.kind!r}")

    @classmethod
    def to_class(cls, ref: str) -> "RelationshipObject":
        return cls(kind="class", ref=ref)

    @classmethod
    def to_literal(cls, value: str, value_type: ValueType = ValueType.STRING) -> "RelationshipObject":
        return cls(kind="literal", value=value, value_type=value_type)


@dataclass(frozen=True)
class Relationship:
    """A provenance-carrying edge: subject class, predicate, object."""

    subject: str
    predicate: str
    object: RelationshipObject
    source: SourceRef

    def __post_init__(self):
        _check_text(self.subject, "relationship subject")
        _check_text(self.predicate, "relationship predicate")

    @property
    def key(self) -> tuple[str, str]:
        return (self.subject, self.predicate)


def _sort_key_relationship(rel: Relationship) -> tuple:
    obj = rel.object
    return (
        rel.subject,
        rel.predicate,
        obj.kind,
        obj.ref or "",
        obj.value or "",
        obj.value_type.value if obj.value_type else "",
        rel.source.kind,
        rel.source.ref,
    )


@dataclass(frozen=True)
class KnowledgeModel:
    """An immutable snapshot of a versioned knowledge model.

    Identity (``id``), ``version`` and ``state`` name a particular commit
    on the review ladder; the content hash covers only the knowledge
    payload (name, source, parents, classes, relationships), so replicas
    of the same content compare equal regardless of where they live.
    """

    id: str
    name: str
    source: SourceRef
    version: int = 1
    state: WorkflowState = WorkflowState.DRAFT
    classes: tuple[EntityClass, ...] = ()
    relationships: tuple[Relationship, ...] = ()
    parents: tuple[ModelRef, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "state", WorkflowState(self.state))
        object.__setattr__(self, "classes", tuple(self.classes))
        object.__setattr__(self, "relationships", tuple(self.relationships))
        object.__setattr__(self, "parents", tuple(self.parents))
        _check_text(self.id, "model id")
        _check_text(self.name, "model name")
        if not isinstance(self.version, int) or self.version < 1:
            raise ValidationError("model version must be a positive integer")
        seen = set()
        for cls in self.classes:
            if cls.id in seen:
                raise DuplicateIdError(f"model declares class {cls.id!r} twice")
            seen.add(cls.id)

    def class_by_id(self, class_id: str) -> EntityClass | None:
        for cls in self.classes:
            if cls.id == class_id:
                return cls
        return None

    def class_ids(self) -> frozenset[str]:
        return frozenset(cls.id for cls in self.classes)

    @property
    def ref(self) -> ModelRef:
        return ModelRef(model_id=self.id, version=self.version)

    @property
    def content_hash(self) -> str:
        from ontoloop.knowledge.canonical import content_hash

        return content_hash(self)

    def sorted_classes(self) -> tuple[EntityClass, ...]:
        return tuple(sorted(self.classes, key=lambda c: c.id))

    def sorted_relationships(self) -> tuple[Relationship, ...]:
        return tuple(sorted(self.relationships, key=_sort_key_relationship))


def mint_id() -> str:
    return uuid.uuid4().hex
