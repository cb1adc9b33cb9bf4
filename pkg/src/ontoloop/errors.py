"""Exception hierarchy shared across the package.

Every error carries a stable machine-readable ``code`` slug so the HTTP
layer and the CLI can map failures to problem details without string
matching on messages.
"""
from __future__ import annotations


class OntoloopError(Exception):
    """Base class for all domain errors."""

    code = "error"

    def __init__(self, message: str, *, code: str | None = None):
        super().__init__(message)
        if code is not None:
            self.code = code

    @property
    def message(self) -> str:
        return str(self)


class ValidationError(OntoloopError):
    code = "validation"


class DuplicateIdError(ValidationError):
    code = "duplicate-id"


class CardinalityError(ValidationError):
    code = "cardinality"


class UnknownIdError(OntoloopError):
    code = "unknown-id"


class MergeError(OntoloopError):
    code = "merge"


class UncoveredConflictError(MergeError):
    """Merge attempted while conflicts lack a resolution."""

    code = "uncovered-conflict"

    def __init__(self, message: str, uncovered: tuple[int, ...]):
        super().__init__(message)
        self.uncovered = uncovered


class ResolutionError(MergeError):
    code = "bad-resolution"


class SerializationError(OntoloopError):
    code = "serialization"


class SchemaError(SerializationError):
    """Structurally invalid document; ``path`` points at the offender."""

    code = "schema"

    def __init__(self, message: str, *, path: str):
        super().__init__(f"{path}: {message}")
        self.path = path


class UnsupportedVersionError(SerializationError):
    code = "unsupported-version"


class MalformedXmlError(SerializationError):
    code = "malformed-xml"

    def __init__(self, message: str, *, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


class WorkflowError(OntoloopError):
    code = "workflow"


class IllegalTransitionError(WorkflowError):
    code = "illegal-transition"


class UnauthorizedRoleError(WorkflowError):
    code = "unauthorized-role"


class ConsistencyBlockedError(WorkflowError):
    """Transition refused because the consistency report has errors."""

    code = "consistency-blocked"

    def __init__(self, message: str, report):
        super().__init__(message)
        self.report = report


class PublishedImmutableError(WorkflowError):
    code = "published-immutable"


class AuditCorruptionError(OntoloopError):
    code = "audit-corruption"


class ConstraintError(OntoloopError):
    code = "constraint"


class MalformedConstraintError(ConstraintError):
    code = "malformed-constraint"


class JustificationError(OntoloopError):
    code = "justification"


class GeneratorFailure(JustificationError):
    """Transient text-generation failure; the caller may retry."""

    code = "generator-failure"


class IncompleteGenerationError(JustificationError):
    code = "incomplete-generation"


class GateError(JustificationError):
    code = "gate"


class UnansweredRebuttalError(GateError):
    code = "unanswered-rebuttal"


class NonTerminalRecordError(JustificationError):
    code = "non-terminal-record"


class TemplateError(OntoloopError):
    code = "template"


class MissingSlotError(TemplateError):
    code = "missing-slot"


class ParseFailure(OntoloopError):
    """A generator response did not match the constrained block format."""

    code = "parse-failure"

    def __init__(self, message: str, *, step: int | None = None, checkpoint=None):
        super().__init__(message)
        self.step = step
        self.checkpoint = checkpoint


class PipelineError(OntoloopError):
    code = "pipeline"


class RatingsError(OntoloopError):
    code = "ratings"


class StoreCorruptionError(OntoloopError):
    code = "store-corruption"


class PrincipalRequiredError(OntoloopError):
    """A mutating request arrived without an asserted principal."""

    code = "principal-required"
