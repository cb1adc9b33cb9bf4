"""Structural consistency checking for knowledge models.

Severity depends on where a model is headed: a missing class definition
is survivable while drafting and reviewing but blocks entry to
ReadyToPublish, where completeness becomes a hard requirement.
"""
from __future__ import annotations

from dataclasses import dataclass

from ontoloop.knowledge.model import ExemplarKind, KnowledgeModel, WorkflowState

_EXEMPLAR_LIMITS = {
    ExemplarKind.ARCHETYPICAL: 1,
    ExemplarKind.ATYPICAL: 3,
    ExemplarKind.EXOTYPICAL: 1,
}


@dataclass(frozen=True)
class CheckItem:
    kind: str
    severity: str  # "error" | "warning"
    locator: str
    detail: str


@dataclass(frozen=True)
class CheckReport:
    items: tuple[CheckItem, ...] = ()

    @property
    def errors(self) -> tuple[CheckItem, ...]:
        return tuple(i for i in self.items if i.severity == "error")

    @property
    def warnings(self) -> tuple[CheckItem, ...]:
        return tuple(i for i in self.items if i.severity == "warning")

    @property
    def ok(self) -> bool:
        return not self.errors


def consistency_check(
    model: KnowledgeModel,
    target_state: WorkflowState | None = None,
) -> CheckReport:
    """Report structural problems, ordered by locator.

    ``target_state`` sets the completeness bar: at ReadyToPublish or
    Published a missing definition is an error, earlier only a warning.
    """
    strict_completeness = target_state in (
        WorkflowState.READY_TO_PUBLISH,
        WorkflowState.PUBLISHED,
    )
    items: list[CheckItem] = []
    class_ids = model.class_ids()

    seen: set[str] = set()
    for cls in model.classes:
        if cls.id in seen:
            items.append(
                CheckItem(
                    kind="duplicate-id",
                    severity="error",
                    locator=f"class:{cls.id}",
                    detail="class id is declared more than once",
                )
            )
        seen.add(cls.id)

        if cls.definition is None or not cls.definition.strip():
            items.append(
                CheckItem(
                    kind="missing-definition",
                    severity="error" if strict_completeness else "warning",
                    locator=f"class:{cls.id}",
                    detail="class has no definition",
                )
            )

        counts: dict[ExemplarKind, int] = {}
        for ex in cls.exemplars:
            counts[ex.kind] = counts.get(ex.kind, 0) + 1
        for kind, limit in _EXEMPLAR_LIMITS.items():
            if counts.get(kind, 0) > limit:
                items.append(
                    CheckItem(
                        kind="exemplar-cardinality",
                        severity="error",
                        locator=f"class:{cls.id}",
                        detail=f"{counts[kind]} {kind.value} exemplars exceed limit {limit}",
                    )
                )

    for index, rel in enumerate(model.relationships):
        locator = f"relationship:{rel.subject}->{rel.predicate}[{index}]"
        if rel.subject not in class_ids:
            items.append(
                CheckItem(
                    kind="dangling-endpoint",
                    severity="error",
                    locator=locator,
                    detail=f"subject {rel.subject!r} is not a declared class",
                )
            )
        if rel.object.kind == "class" and rel.object.ref not in class_ids:
            items.append(
                CheckItem(
                    kind="dangling-endpoint",
                    severity="error",
                    locator=locator,
                    detail=f"object {rel.object.ref!r} is not a declared class",
                )
            )

    items.sort(key=lambda i: (i.locator, i.kind))
    return CheckReport(items=tuple(items))
