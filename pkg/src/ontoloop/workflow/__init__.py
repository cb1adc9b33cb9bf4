"""Review workflow: state machine, audit trail, consistency and constraints."""
from ontoloop.knowledge.model import WorkflowState
from ontoloop.workflow.principals import Principal, Role
from ontoloop.workflow.states import (
    LEGAL_TRANSITIONS,
    authority_for,
    is_legal,
    legal_targets,
)
from ontoloop.workflow.audit import AuditEvent, AuditLog
from ontoloop.workflow.consistency import CheckItem, CheckReport, consistency_check
from ontoloop.workflow.constraints import (
    Constraint,
    ConstraintKind,
    Fact,
    FactSelector,
    FactSet,
    Severity,
    Violation,
    check_constraints,
)
from ontoloop.workflow.registry import ModelRegistry, MutationEvent

__all__ = [
    "WorkflowState",
    "Principal",
    "Role",
    "LEGAL_TRANSITIONS",
    "authority_for",
    "is_legal",
    "legal_targets",
    "AuditEvent",
    "AuditLog",
    "CheckItem",
    "CheckReport",
    "consistency_check",
    "Constraint",
    "ConstraintKind",
    "Fact",
    "FactSelector",
    "FactSet",
    "Severity",
    "Violation",
    "check_constraints",
    "ModelRegistry",
    "MutationEvent",
]
