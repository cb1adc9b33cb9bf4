"""Canonical serialization and content hashing.

The canonical form is a JSON document with lexicographically sorted keys,
compact separators, UTF-8 encoding, classes sorted by id and relationships
sorted by their full key. Two models with equal canonical bytes are the
same knowledge content; the content hash is the SHA-256 of those bytes.

Identity fields (model id, version, workflow state) are deliberately
excluded: replicas and re-imports of the same content must hash equal.
"""
from __future__ import annotations

import hashlib
import json
from typing import Any, Mapping

from ontoloop.knowledge.model import (
    EntityClass,
    Exemplar,
    KnowledgeModel,
    ModelRef,
    PropertySpec,
    Relationship,
    RelationshipObject,
    SourceRef,
    ValueType,
)


def exemplar_payload(ex: Exemplar) -> dict[str, Any]:
    return {
        "kind": ex.kind.value,
        "label": ex.label,
        "properties": list(ex.properties),
        "rationale": ex.rationale,
    }


def property_payload(prop: PropertySpec) -> dict[str, Any]:
    return {
        "name": prop.name,
        "value_type": prop.value_type.value,
        "example": prop.example,
    }


def class_payload(cls: EntityClass) -> dict[str, Any]:
    return {
        "id": cls.id,
        "label": cls.label,
        "definition": cls.definition,
        "properties": [property_payload(p) for p in cls.properties],
        "exemplars": [exemplar_payload(e) for e in cls.exemplars],
    }


def relationship_payload(rel: Relationship) -> dict[str, Any]:
    obj: dict[str, Any]
    if rel.object.kind == "class":
        obj = {"kind": "class", "ref": rel.object.ref}
    else:
        obj = {
            "kind": "literal",
            "value": rel.object.value,
            "value_type": rel.object.value_type.value,
        }
    return {
        "subject": rel.subject,
        "predicate": rel.predicate,
        "object": obj,
        "source": {"kind": rel.source.kind, "ref": rel.source.ref},
    }


def canonical_payload(model: KnowledgeModel) -> dict[str, Any]:
    """Content payload: everything the hash covers, nothing it does not."""
    return {
        "name": model.name,
        "source": {"kind": model.source.kind, "ref": model.source.ref},
        "parents": [
            {"model_id": p.model_id, "version": p.version}
            for p in sorted(model.parents, key=lambda p: (p.model_id, p.version))
        ],
        "classes": [class_payload(c) for c in model.sorted_classes()],
        "relationships": [relationship_payload(r) for r in model.sorted_relationships()],
    }


def canonical_dumps(payload: Any) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def canonical_bytes(model: KnowledgeModel) -> bytes:
    return canonical_dumps(canonical_payload(model)).encode("utf-8")


def content_hash(model: KnowledgeModel) -> str:
    return hashlib.sha256(canonical_bytes(model)).hexdigest()


def content_equal(a: KnowledgeModel, b: KnowledgeModel) -> bool:
    """Equality of knowledge content only (classes and relationships)."""
    pa, pb = canonical_payload(a), canonical_payload(b)
    return pa["classes"] == pb["classes"] and pa["relationships"] == pb["relationships"]


# Payload -> value reconstruction. Used by the exchange formats and by
# event replay; raises ValidationError subclasses on malformed input.

def _expect_mapping(value: Any, path: str) -> Mapping:
    from ontoloop.errors import SchemaError

    if not isinstance(value, Mapping):
        raise SchemaError("expected an object", path=path)
    return value


def _expect_list(value: Any, path: str) -> list:
    from ontoloop.errors import SchemaError

    if not isinstance(value, list):
        raise SchemaError("expected an array", path=path)
    return value


def _expect_str(value: Any, path: str) -> str:
    from ontoloop.errors import SchemaError

    if not isinstance(value, str):
        raise SchemaError("expected a string", path=path)
    return value


def _get(mapping: Mapping, key: str, path: str) -> Any:
    from ontoloop.errors import SchemaError

    if key not in mapping:
        raise SchemaError(f"missing required field {key!r}", path=path)
    return mapping[key]


def source_from_payload(data: Any, path: str = "source") -> SourceRef:
    data = _expect_mapping(data, path)
    return SourceRef(
        kind=_expect_str(_get(data, "kind", path), f"{path}.kind"),
        ref=_expect_str(_get(data, "ref", path), f"{path}.ref"),
    )


def exemplar_from_payload(data: Any, path: str) -> Exemplar:
    data = _expect_mapping(data, path)
    props = _expect_list(data.get("properties", []), f"{path}.properties")
    return Exemplar(
        kind=_expect_str(_get(data, "kind", path), f"{path}.kind"),
        label=_expect_str(_get(data, "label", path), f"{path}.label"),
        properties=tuple(_expect_str(p, f"{path}.properties[{i}]") for i, p in enumerate(props)),
        rationale=_expect_str(_get(data, "rationale", path), f"{path}.rationale"),
    )


def property_from_payload(data: Any, path: str) -> PropertySpec:
    data = _expect_mapping(data, path)
    example = data.get("example")
    if example is not None:
        example = _expect_str(example, f"{path}.example")
    return PropertySpec(
        name=_expect_str(_get(data, "name", path), f"{path}.name"),
        value_type=ValueType(_expect_str(_get(data, "value_type", path), f"{path}.value_type")),
        example=example,
    )


def class_from_payload(data: Any, path: str = "class") -> EntityClass:
    data = _expect_mapping(data, path)
    definition = data.get("definition")
    if definition is not None:
        definition = _expect_str(definition, f"{path}.definition")
    props = _expect_list(data.get("properties", []), f"{path}.properties")
    exemplars = _expect_list(data.get("exemplars", []), f"{path}.exemplars")
    return EntityClass(
        id=_expect_str(_get(data, "id", path), f"{path}.id"),
        label=_expect_str(_get(data, "label", path), f"{path}.label"),
        definition=definition,
        properties=tuple(
            property_from_payload(p, f"{path}.properties[{i}]") for i, p in enumerate(props)
        ),
        exemplars=tuple(
            exemplar_from_payload(e, f"{path}.exemplars[{i}]") for i, e in enumerate(exemplars)
        ),
    )


def relationship_from_payload(data: Any, path: str = "relationship") -> Relationship:
    from ontoloop.errors import SchemaError

    data = _expect_mapping(data, path)
    obj_data = _expect_mapping(_get(data, "object", path), f"{path}.object")
    obj_kind = _expect_str(_get(obj_data, "kind", f"{path}.object"), f"{path}.object.kind")
    if obj_kind == "class":
        obj = RelationshipObject.to_class(
            _expect_str(_get(obj_data, "ref", f"{path}.object"), f"{path}.object.ref")
        )
    elif obj_kind == "literal":
        obj = RelationshipObject.to_literal(
            _expect_str(_get(obj_data, "value", f"{path}.object"), f"{path}.object.value"),
            ValueType(
                _expect_str(
                    _get(obj_data, "value_type", f"{path}.object"), f"{path}.object.value_type"
                )
            ),
        )
    else:
        raise SchemaError(f"unknown object kind {obj_kind!r}", path=f"{path}.object.kind")
    return Relationship(
        subject=_expect_str(_get(data, "subject", path), f"{path}.subject"),
        predicate=_expect_str(_get(data, "predicate", path), f"{path}.predicate"),
        object=obj,
        source=source_from_payload(_get(data, "source", path), f"{path}.source"),
    )


def model_from_content_payload(
    data: Any,
    *,
    model_id: str,
    version: int = 1,
    path: str = "model",
) -> KnowledgeModel:
    """Rebuild a model value from its content payload, minting identity."""
    data = _expect_mapping(data, path)
    classes = _expect_list(data.get("classes", []), f"{path}.classes")
    relationships = _expect_list(data.get("relationships", []), f"{path}.relationships")
    parents = _expect_list(data.get("parents", []), f"{path}.parents")
    parent_refs = []
    for i, p in enumerate(parents):
        p = _expect_mapping(p, f"{path}.parents[{i}]")
        parent_refs.append(
            ModelRef(
                model_id=_expect_str(
                    _get(p, "model_id", f"{path}.parents[{i}]"), f"{path}.parents[{i}].model_id"
                ),
                version=_get(p, "version", f"{path}.parents[{i}]"),
            )
        )
    return KnowledgeModel(
        id=model_id,
        name=_expect_str(_get(data, "name", path), f"{path}.name"),
        source=source_from_payload(_get(data, "source", path), f"{path}.source"),
        version=version,
        classes=tuple(
            class_from_payload(c, f"{path}.classes[{i}]") for i, c in enumerate(classes)
        ),
        relationships=tuple(
            relationship_from_payload(r, f"{path}.relationships[{i}]")
            for i, r in enumerate(relationships)
        ),
        parents=tuple(parent_refs),
    )
