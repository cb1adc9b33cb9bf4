"""Prompt assembly: the context ladder and semantic injection.

Levels 1 through 6 form a ladder: each level's text extends the level
below, adding one tier of situational detail (role, hosted module,
affected facility, financial exposure, root cause). Levels 7 and 8 are
standalone step-change documents carrying a large volume of detail at
once. All eight are rendered from versioned template assets, so output
is a pure function of the template set and the supplied facts.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources
from string import Template

from ontoloop.errors import MissingSlotError, UnknownIdError, ValidationError
from ontoloop.knowledge.model import KnowledgeModel
from ontoloop.context.facts import ScenarioFacts

TEMPLATE_VERSION = "ladder-v1"
LEVELS = (1, 2, 3, 4, 5, 6, 7, 8)
LADDER_LEVELS = (1, 2, 3, 4, 5, 6)

_SLOT_RE = re.compile(r"\$\{([a-z_]+)\}")
_TEMPLATE_CACHE: dict[int, str] = {}


def _template_text(level: int) -> str:
    if level not in _TEMPLATE_CACHE:
        path = resources.files("ontoloop.context").joinpath(
            f"templates/level{level}.txt"
        )
        _TEMPLATE_CACHE[level] = path.read_text(encoding="utf-8").rstrip("\n")
    return _TEMPLATE_CACHE[level]


def slots_for_level(level: int) -> tuple[str, ...]:
    """Slot names the level's template consumes, sorted."""
    if level not in LEVELS:
        raise ValidationError(f"prompt level must be 1..8, got {level}")
    return tuple(sorted(set(_SLOT_RE.findall(_template_text(level)))))


@dataclass(frozen=True)
class PromptContext:
    level: int
    text: str
    slots: tuple[str, ...]  # scenario slots that fed the rendering
    elements: tuple[str, ...] = ()  # knowledge-model element ids injected


def assemble_context(
    level: int,
    facts: ScenarioFacts,
    model: KnowledgeModel | None = None,
) -> PromptContext:
    """Render one prompt level from the scenario facts.

    The optional model is accepted for signature symmetry with
    `inject_semantic_context`; ladder rendering itself uses only facts.
    """
    needed = slots_for_level(level)
    available = facts.as_mapping()
    for slot in needed:
        if slot not in available:
            raise MissingSlotError(f"level {level} needs slot {slot!r}")
    text = Template(_template_text(level)).substitute(available)
    context = PromptContext(level=level, text=text, slots=needed)
    if model is not None:
        return inject_semantic_context(context, model, model.class_ids())
    return context


def render_semantic_fragment(model: KnowledgeModel, class_id: str) -> str:
    """One class's contribution: definition plus outgoing relationships."""
    cls = model.class_by_id(class_id)
    if cls is None:
        raise UnknownIdError(f"model has no class {class_id!r}")
    definition = cls.definition if cls.definition else "(no definition)"
    lines = [f"\n\n[{cls.id}] {cls.label} :: {definition}"]
    for rel in model.sorted_relationships():
        if rel.subject != cls.id:
            continue
        if rel.object.kind == "class":
            target = rel.object.ref
        else:
            target = rel.object.value
        lines.append(f"\n- {rel.predicate} -> {target}")
    return "".join(lines)


def inject_semantic_context(
    base: PromptContext,
    model: KnowledgeModel,
    selector,
) -> PromptContext:
    """Append rendered fragments for the selected classes.

    `selector` is an iterable of class ids; ids that match nothing
    select nothing. An empty selection returns the context unchanged.
    """
    wanted = set(selector)
    chosen = [cls.id for cls in model.sorted_classes() if cls.id in wanted]
    if not chosen:
        return base
    fragments = [render_semantic_fragment(model, cid) for cid in chosen]
    return PromptContext(
        level=base.level,
        text=base.text + "".join(fragments),
        slots=base.slots,
        elements=base.elements + tuple(chosen),
    )
