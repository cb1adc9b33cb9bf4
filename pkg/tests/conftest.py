"""Shared fixtures: reference models and principals used across suites."""
from __future__ import annotations

import pytest

from ontoloop.knowledge import (
    EntityClass,
    Exemplar,
    ExemplarKind,
    PropertySpec,
    Relationship,
    RelationshipObject,
    SourceRef,
    ValueType,
    add_entity_class,
    add_relationship,
    create_model,
)
from ontoloop.workflow.principals import Principal, Role

SPARROW_RATIONALE = "It flies, has feathers, builds nests in trees, and sings."
PENGUIN_RATIONALE = (
    "It has feathers and lays eggs, but it cannot fly, swims instead, and lives "
    "in aquatic environments."
)
BAT_RATIONALE = (
    "It flies, has wings, and is warm-blooded, sharing many functional properties "
    "with birds, but it lacks feathers and lays no eggs."
)


def bird_class() -> EntityClass:
    return EntityClass(
        id="bird",
        label="Bird",
        definition="A warm-blooded egg-laying animal with feathers and a beak.",
        properties=(
            PropertySpec(name="wingspan", value_type=ValueType.FLOAT, example="0.25"),
            PropertySpec(name="can_fly", value_type=ValueType.BOOLEAN, example="true"),
        ),
        exemplars=(
            Exemplar(
                kind=ExemplarKind.ARCHETYPICAL,
                label="sparrow",
                properties=("flies", "has feathers", "builds nests in trees", "sings"),
                rationale=SPARROW_RATIONALE,
            ),
            Exemplar(
                kind=ExemplarKind.ATYPICAL,
                label="penguin",
                properties=("has feathers", "lays eggs", "cannot fly", "swims"),
                rationale=PENGUIN_RATIONALE,
            ),
            Exemplar(
                kind=ExemplarKind.EXOTYPICAL,
                label="bat",
                properties=("flies", "has wings", "warm-blooded", "no feathers"),
                rationale=BAT_RATIONALE,
            ),
        ),
    )


def habitat_class() -> EntityClass:
    return EntityClass(
        id="habitat",
        label="Habitat",
        definition="A kind of environment where an animal population lives.",
    )


@pytest.fixture
def bird_model():
    model = create_model("field-guide", SourceRef(kind="doc", ref="guide-1"), model_id="m-birds")
    model = add_entity_class(model, bird_class())
    model = add_entity_class(model, habitat_class())
    model = add_relationship(
        model,
        Relationship(
            subject="bird",
            predicate="lives-in",
            object=RelationshipObject.to_class("habitat"),
            source=SourceRef(kind="doc", ref="guide-1"),
        ),
    )
    return model


@pytest.fixture
def contributor():
    return Principal(id="casey", roles=frozenset({Role.CONTRIBUTOR}))


@pytest.fixture
def reviewer():
    return Principal(id="rowan", roles=frozenset({Role.REVIEWER}))


@pytest.fixture
def publisher():
    return Principal(id="pat", roles=frozenset({Role.PUBLISHER}))


@pytest.fixture
def operator():
    return Principal(id="ona", roles=frozenset({Role.OPERATOR}))


@pytest.fixture
def superuser():
    return Principal(
        id="sam",
        roles=frozenset({Role.CONTRIBUTOR, Role.REVIEWER, Role.PUBLISHER, Role.OPERATOR}),
    )
