"""Blueprint documents: the JSON exchange form of a knowledge model.

A blueprint carries the full content payload (classes, relationships,
exemplars, definitions, provenance) under a mandatory format-version.
Exports are a pure function of the model's content, so two models with
equal content hashes export byte-identical documents; identity fields
(model id, version, workflow state) are never serialized. Importing
mints a fresh model at version 1 in Draft state.

The structural contract is also published as a JSON Schema document in
``docs/blueprint.schema.json``.
"""
from __future__ import annotations

import json
from typing import Any

from ontoloop.errors import SchemaError, SerializationError, UnsupportedVersionError
from ontoloop.knowledge.canonical import canonical_payload, model_from_content_payload
from ontoloop.knowledge.model import KnowledgeModel, mint_id

BLUEPRINT_FORMAT_VERSION = 1


def export_blueprint(model: KnowledgeModel) -> str:
    """Serialize to canonical JSON text: sorted keys, two-space indent,
    trailing newline."""
    document = {
        "format_version": BLUEPRINT_FORMAT_VERSION,
        "model": canonical_payload(model),
    }
    return json.dumps(document, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def import_blueprint(text: str | bytes, *, model_id: str | None = None) -> KnowledgeModel:
    """Parse a blueprint document into a fresh Draft model.

    Raises UnsupportedVersionError for unknown format versions and
    SchemaError (path-annotated) for structural violations.
    """
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise SerializationError(f"blueprint is not valid UTF-8: {exc}") from None
    try:
        document = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SerializationError(
            f"blueprint is not valid JSON: {exc.msg} (line {exc.lineno}, column {exc.colno})"
        ) from None
    if not isinstance(document, dict):
        raise SchemaError("expected a JSON object", path="$")
    if "format_version" not in document:
        raise SchemaError("missing required field 'format_version'", path="$")
    version = document["format_version"]
    if version != BLUEPRINT_FORMAT_VERSION:
        raise UnsupportedVersionError(
            f"blueprint format version {version!r} is not supported "
            f"(expected {BLUEPRINT_FORMAT_VERSION})"
        )
    if "model" not in document:
        raise SchemaError("missing required field 'model'", path="$")
    return model_from_content_payload(
        document["model"], model_id=model_id or mint_id(), path="model"
    )


def blueprint_payload(model: KnowledgeModel) -> dict[str, Any]:
    """The document as plain data, for embedding in API responses."""
    return {
        "format_version": BLUEPRINT_FORMAT_VERSION,
        "model": canonical_payload(model),
    }
