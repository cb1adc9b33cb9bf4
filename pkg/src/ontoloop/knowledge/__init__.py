"""Versioned knowledge-model graph: classes, exemplars, relationships, merge."""
from ontoloop.knowledge.model import (
    EntityClass,
    Exemplar,
    ExemplarKind,
    KnowledgeModel,
    ModelRef,
    PropertySpec,
    Relationship,
    RelationshipObject,
    SourceRef,
    ValueType,
    WorkflowState,
)
from ontoloop.knowledge.canonical import canonical_bytes, canonical_payload, content_hash
from ontoloop.knowledge.operations import (
    add_entity_class,
    add_relationship,
    create_model,
    update_entity_class,
)
from ontoloop.knowledge.merge import (
    Conflict,
    ConflictKind,
    ConflictReport,
    Resolution,
    Strategy,
    detect_conflicts,
    merge_models,
)

__all__ = [
    "EntityClass",
    "Exemplar",
    "ExemplarKind",
    "KnowledgeModel",
    "ModelRef",
    "PropertySpec",
    "Relationship",
    "RelationshipObject",
    "SourceRef",
    "ValueType",
    "WorkflowState",
    "canonical_bytes",
    "canonical_payload",
    "content_hash",
    "create_model",
    "add_entity_class",
    "add_relationship",
    "update_entity_class",
    "Conflict",
    "ConflictKind",
    "ConflictReport",
    "Resolution",
    "Strategy",
    "detect_conflicts",
    "merge_models",
]
