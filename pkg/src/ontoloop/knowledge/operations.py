"""Pure mutation operations over knowledge models.

Each operation returns a new model value with the version incremented by
exactly one; the input is never touched. State handling (who may commit,
when a version is frozen) lives with the workflow registry, not here.
"""
from __future__ import annotations

from dataclasses import replace

from ontoloop.errors import DuplicateIdError, UnknownIdError, ValidationError
from ontoloop.knowledge.model import (
    EntityClass,
    KnowledgeModel,
    Relationship,
    SourceRef,
    mint_id,
)


def create_model(name: str, source: SourceRef, *, model_id: str | None = None) -> KnowledgeModel:
    """Create an empty model at version 1 in Draft state."""
    if not name or not name.strip():
        raise ValidationError("model name must be non-empty")
    return KnowledgeModel(id=model_id or mint_id(), name=name, source=source)


def add_entity_class(model: KnowledgeModel, cls: EntityClass) -> KnowledgeModel:
    if model.class_by_id(cls.id) is not None:
        raise DuplicateIdError(f"model already has a class with id {cls.id!r}")
    return replace(model, classes=model.classes + (cls,), version=model.version + 1)


def update_entity_class(model: KnowledgeModel, cls: EntityClass) -> KnowledgeModel:
    """Replace an existing class (matched by id) with a corrected one."""
    if model.class_by_id(cls.id) is None:
        raise UnknownIdError(f"model has no class with id {cls.id!r}")
    classes = tuple(cls if c.id == cls.id else c for c in model.classes)
    return replace(model, classes=classes, version=model.version + 1)


def add_relationship(model: KnowledgeModel, rel: Relationship) -> KnowledgeModel:
    for existing in model.relationships:
        if existing == rel:
            raise DuplicateIdError(
                f"relationship ({rel.subject!r}, {rel.predicate!r}) with this object "
                "already present"
            )
    return replace(
        model, relationships=model.relationships + (rel,), version=model.version + 1
    )
