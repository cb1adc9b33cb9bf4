"""Decision records: argument structure, scoring, gating, provenance."""
from ontoloop.justify.records import (
    EvidenceItem,
    JustificationRecord,
    JustificationStatus,
    PromptExchange,
    Qualifier,
    Rebuttal,
    RiskTier,
)
from ontoloop.justify.scoring import (
    EvidenceAssessment,
    ExplanationScore,
    RankedCandidate,
    SelectionReport,
    assess_evidence,
    score_explanation,
    select_best_claim,
)
from ontoloop.justify.generate import (
    MockGenerator,
    TextGenerator,
    compose_justification,
    detect_stage,
    render_stage,
)
from ontoloop.justify.gate import (
    Decision,
    GateOutcome,
    GateResult,
    Verdict,
    gate_decision,
)
from ontoloop.justify.prov import export_provenance, provenance_json

__all__ = [
    "EvidenceItem",
    "JustificationRecord",
    "JustificationStatus",
    "PromptExchange",
    "Qualifier",
    "Rebuttal",
    "RiskTier",
    "EvidenceAssessment",
    "ExplanationScore",
    "RankedCandidate",
    "SelectionReport",
    "assess_evidence",
    "score_explanation",
    "select_best_claim",
    "MockGenerator",
    "TextGenerator",
    "compose_justification",
    "detect_stage",
    "render_stage",
    "Decision",
    "GateOutcome",
    "GateResult",
    "Verdict",
    "gate_decision",
    "export_provenance",
    "provenance_json",
]
