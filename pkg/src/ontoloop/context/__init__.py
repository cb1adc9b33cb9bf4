"""Context ladder assembly and semantic injection."""
from ontoloop.context.assemble import (
    LADDER_LEVELS,
    LEVELS,
    TEMPLATE_VERSION,
    PromptContext,
    assemble_context,
    inject_semantic_context,
    render_semantic_fragment,
    slots_for_level,
)
from ontoloop.context.facts import ScenarioFacts, sap_scenario

__all__ = [
    "LADDER_LEVELS",
    "LEVELS",
    "TEMPLATE_VERSION",
    "PromptContext",
    "ScenarioFacts",
    "assemble_context",
    "inject_semantic_context",
    "render_semantic_fragment",
    "sap_scenario",
    "slots_for_level",
]
