"""Seeded random model builders shared by property and acceptance suites.

The factory is deliberately independent of hypothesis so the large
round-trip sweeps can pin an exact case count with a fixed seed.
"""
from __future__ import annotations

import random
import string

from ontoloop.knowledge import (
    EntityClass,
    Exemplar,
    ExemplarKind,
    KnowledgeModel,
    PropertySpec,
    Relationship,
    RelationshipObject,
    SourceRef,
    ValueType,
)

# Mixed scripts on purpose: exchange formats must not assume ASCII.
_WORD_CHARS = string.ascii_letters + string.digits
_SPICE = "äöüßéèñçλπжш漢字かなハン한글επιθυμία°µ§"
_EMOJI = "\U0001F426\U0001F9A9\U0001F30D"


class ModelFactory:
    def __init__(self, seed: int = 0):
        self.rng = random.Random(seed)
        self._counter = 0

    def _word(self, spicy: bool = True) -> str:
        n = self.rng.randint(3, 10)
        chars = [self.rng.choice(_WORD_CHARS) for _ in range(n)]
        if spicy and self.rng.random() < 0.35:
            chars.append(self.rng.choice(_SPICE))
        if spicy and self.rng.random() < 0.08:
            chars.append(self.rng.choice(_EMOJI))
        return "".join(chars)

    def _sentence(self) -> str:
        words = [self._word() for _ in range(self.rng.randint(2, 8))]
        text = " ".join(words)
        if self.rng.random() < 0.2:
            text += "\nsecond line"
        return text

    def _unique_id(self, prefix: str) -> str:
        self._counter += 1
        return f"{prefix}-{self._counter}-{self._word()}"

    def source(self) -> SourceRef:
        return SourceRef(kind=self.rng.choice(["doc", "interview", "survey"]), ref=self._word())

    def literal(self) -> RelationshipObject:
        value_type = self.rng.choice(list(ValueType))
        if value_type is ValueType.INTEGER:
            value = str(self.rng.randint(-5000, 5000))
        elif value_type is ValueType.FLOAT:
            value = repr(round(self.rng.uniform(-100, 100), 4))
        elif value_type is ValueType.BOOLEAN:
            value = self.rng.choice(["true", "false"])
        elif value_type is ValueType.DATETIME:
            value = (
                f"20{self.rng.randint(10, 29)}-"
                f"{self.rng.randint(1, 12):02d}-{self.rng.randint(1, 28):02d}"
                f"T{self.rng.randint(0, 23):02d}:{self.rng.randint(0, 59):02d}:00"
            )
        else:
            value = self._sentence() if self.rng.random() > 0.1 else ""
        return RelationshipObject.to_literal(value, value_type)

    def property_spec(self) -> PropertySpec:
        value_type = self.rng.choice(list(ValueType))
        example = None
        if self.rng.random() < 0.5:
            example = self.literal().value if value_type is ValueType.STRING else None
        if example == "":
            example = None
        if example is None and self.rng.random() < 0.3 and value_type is ValueType.INTEGER:
            example = str(self.rng.randint(0, 99))
        return PropertySpec(name=self._unique_id("prop"), value_type=value_type, example=example)

    def exemplars(self) -> tuple[Exemplar, ...]:
        out = []
        if self.rng.random() < 0.7:
            out.append(
                Exemplar(
                    kind=ExemplarKind.ARCHETYPICAL,
                    label=self._word(),
                    properties=tuple(self._word() for _ in range(self.rng.randint(0, 3))),
                    rationale=self._sentence(),
                )
            )
        for _ in range(self.rng.randint(0, 3)):
            out.append(
                Exemplar(
                    kind=ExemplarKind.ATYPICAL,
                    label=self._word(),
                    properties=tuple(self._word() for _ in range(self.rng.randint(0, 2))),
                    rationale=self._sentence(),
                )
            )
        if self.rng.random() < 0.5:
            out.append(
                Exemplar(
                    kind=ExemplarKind.EXOTYPICAL,
                    label=self._word(),
                    rationale=self._sentence(),
                )
            )
        return tuple(out)

    def entity_class(self, *, with_definition: bool = True) -> EntityClass:
        definition = self._sentence() if with_definition else None
        return EntityClass(
            id=self._unique_id("class"),
            label=self._word(),
            definition=definition,
            properties=tuple(self.property_spec() for _ in range(self.rng.randint(0, 3))),
            exemplars=self.exemplars(),
        )

    def model(
        self,
        *,
        min_classes: int = 0,
        max_classes: int = 5,
        with_definitions: bool = True,
    ) -> KnowledgeModel:
        classes = tuple(
            self.entity_class(with_definition=with_definitions)
            for _ in range(self.rng.randint(min_classes, max_classes))
        )
        relationships = []
        if classes:
            for _ in range(self.rng.randint(0, 6)):
                subject = self.rng.choice(classes).id
                if self.rng.random() < 0.5:
                    obj = RelationshipObject.to_class(self.rng.choice(classes).id)
                else:
                    obj = self.literal()
                relationships.append(
                    Relationship(
                        subject=subject,
                        predicate=self._unique_id("rel"),
                        object=obj,
                        source=self.source(),
                    )
                )
        return KnowledgeModel(
            id=self._unique_id("model"),
            name=self._word(),
            source=self.source(),
            classes=classes,
            relationships=tuple(relationships),
        )
