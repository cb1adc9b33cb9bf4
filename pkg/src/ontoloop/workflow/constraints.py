"""Declarative constraints evaluated over ground facts.

A fact set is a bag of (subject, predicate, value) triples taken from a
running system: container counts, stock levels, assignments. Constraints
select a slice of those facts and apply one predicate each: max-count,
min-count, value-range, value-type, or required-field. Violations are
reported deterministically, ordered by constraint id, so audits and
retries always see the same listing.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime
from enum import Enum
from typing import Mapping

from ontoloop.errors import MalformedConstraintError, ValidationError

Scalar = str | int | float | bool


@dataclass(frozen=True)
class Fact:
    subject: str
    predicate: str
    value: Scalar

    def __post_init__(self):
        if not self.subject.strip() or not self.predicate.strip():
            raise ValidationError("fact subject and predicate must be non-empty")

    @property
    def value_text(self) -> str:
        if isinstance(self.value, bool):
            return "true" if self.value else "false"
        return str(self.value)


FactSet = tuple[Fact, ...]


@dataclass(frozen=True)
class FactSelector:
    """Matches facts whose components are in the given alternative sets;
    a None field matches anything."""

    subjects: tuple[str, ...] | None = None
    predicates: tuple[str, ...] | None = None
    values: tuple[str, ...] | None = None

    def __post_init__(self):
        for name in ("subjects", "predicates", "values"):
            current = getattr(self, name)
            if current is not None:
                object.__setattr__(self, name, tuple(current))

    def matches(self, fact: Fact) -> bool:
        if self.subjects is not None and fact.subject not in self.subjects:
            return False
        if self.predicates is not None and fact.predicate not in self.predicates:
            return False
        if self.values is not None and fact.value_text not in self.values:
            return False
        return True


class ConstraintKind(str, Enum):
    MAX_COUNT = "max-count"
    MIN_COUNT = "min-count"
    VALUE_RANGE = "value-range"
    VALUE_TYPE = "value-type"
    REQUIRED_FIELD = "required-field"


class Severity(str, Enum):
    ERROR = "error"
    WARNING = "warning"


_REQUIRED_PARAMS = {
    ConstraintKind.MAX_COUNT: ("limit",),
    ConstraintKind.MIN_COUNT: ("limit",),
    ConstraintKind.VALUE_RANGE: ("minimum", "maximum"),
    ConstraintKind.VALUE_TYPE: ("value_type",),
    ConstraintKind.REQUIRED_FIELD: ("field",),
}


@dataclass(frozen=True)
class Constraint:
    id: str
    kind: ConstraintKind
    target: FactSelector
    params: Mapping[str, object] = field(default_factory=dict)
    severity: Severity = Severity.ERROR

    def __post_init__(self):
        if not self.id.strip():
            raise ValidationError("constraint id must be non-empty")
        try:
            object.__setattr__(self, "kind", ConstraintKind(self.kind))
        except ValueError:
            raise MalformedConstraintError(
                f"unknown constraint predicate {self.kind!r}"
            ) from None
        object.__setattr__(self, "severity", Severity(self.severity))
        object.__setattr__(self, "params", dict(self.params))


@dataclass(frozen=True)
class Violation:
    constraint_id: str
    severity: Severity
    kind: ConstraintKind
    subject: str | None
    observed: str
    detail: str
    facts: FactSet = ()


def _require_params(constraint: Constraint) -> None:
    missing = [
        key for key in _REQUIRED_PARAMS[constraint.kind] if key not in constraint.params
    ]
    if missing:
        raise MalformedConstraintError(
            f"constraint {constraint.id!r} ({constraint.kind.value}) lacks "
            f"params: {', '.join(missing)}"
        )


def _as_number(value: object, constraint: Constraint, name: str) -> float:
    try:
        return float(value)  # type: ignore[arg-type]
    except (TypeError, ValueError):
        raise MalformedConstraintError(
            f"constraint {constraint.id!r} param {name!r} is not numeric"
        ) from None


def _well_typed(fact: Fact, expected: str) -> bool:
    text = fact.value_text
    try:
        if expected == "integer":
            if isinstance(fact.value, (bool, float)):
                return False
            int(text)
            return True
        if expected == "floating-point":
            float(text)
            return not isinstance(fact.value, bool)
        if expected == "boolean":
            return text in ("true", "false")
        if expected == "datetime":
            datetime.fromisoformat(text)
            return True
        if expected == "string":
            return isinstance(fact.value, str)
    except ValueError:
        return False
    raise ValueError(expected)


def _check_one(constraint: Constraint, facts: FactSet) -> list[Violation]:
    _require_params(constraint)
    matching = tuple(f for f in facts if constraint.target.matches(f))
    out: list[Violation] = []

    if constraint.kind is ConstraintKind.MAX_COUNT:
        limit = int(_as_number(constraint.params["limit"], constraint, "limit"))
        if len(matching) > limit:
            out.append(
                Violation(
                    constraint_id=constraint.id,
                    severity=constraint.severity,
                    kind=constraint.kind,
                    subject=None,
                    observed=str(len(matching)),
                    detail=f"count {len(matching)} exceeds limit {limit}",
                    facts=matching,
                )
            )
    elif constraint.kind is ConstraintKind.MIN_COUNT:
        limit = int(_as_number(constraint.params["limit"], constraint, "limit"))
        if len(matching) < limit:
            out.append(
                Violation(
                    constraint_id=constraint.id,
                    severity=constraint.severity,
                    kind=constraint.kind,
                    subject=None,
                    observed=str(len(matching)),
                    detail=f"count {len(matching)} is below minimum {limit}",
                    facts=matching,
                )
            )
    elif constraint.kind is ConstraintKind.VALUE_RANGE:
        minimum = _as_number(constraint.params["minimum"], constraint, "minimum")
        maximum = _as_number(constraint.params["maximum"], constraint, "maximum")
        offenders: dict[str, list[Fact]] = {}
        for fact in matching:
            try:
                number = float(fact.value_text)
                in_range = minimum <= number <= maximum
            except ValueError:
                in_range = False
            if not in_range:
                offenders.setdefault(fact.subject, []).append(fact)
        for subject in sorted(offenders):
            group = tuple(offenders[subject])
            values = ", ".join(f.value_text for f in group)
            out.append(
                Violation(
                    constraint_id=constraint.id,
                    severity=constraint.severity,
                    kind=constraint.kind,
                    subject=subject,
                    observed=values,
                    detail=f"values outside [{minimum}, {maximum}]: {values}",
                    facts=group,
                )
            )
    elif constraint.kind is ConstraintKind.VALUE_TYPE:
        expected = str(constraint.params["value_type"])
        if expected not in ("string", "integer", "floating-point", "boolean", "datetime"):
            raise MalformedConstraintError(
                f"constraint {constraint.id!r} names unknown value type {expected!r}"
            )
        offenders = {}
        for fact in matching:
            if not _well_typed(fact, expected):
                offenders.setdefault(fact.subject, []).append(fact)
        for subject in sorted(offenders):
            group = tuple(offenders[subject])
            values = ", ".join(repr(f.value_text) for f in group)
            out.append(
                Violation(
                    constraint_id=constraint.id,
                    severity=constraint.severity,
                    kind=constraint.kind,
                    subject=subject,
                    observed=values,
                    detail=f"values are not {expected}: {values}",
                    facts=group,
                )
            )
    elif constraint.kind is ConstraintKind.REQUIRED_FIELD:
        required = str(constraint.params["field"])
        subjects = sorted({f.subject for f in matching})
        present = {f.subject for f in facts if f.predicate == required}
        for subject in subjects:
            if subject not in present:
                out.append(
                    Violation(
                        constraint_id=constraint.id,
                        severity=constraint.severity,
                        kind=constraint.kind,
                        subject=subject,
                        observed="absent",
                        detail=f"subject lacks required field {required!r}",
                    )
                )
    return out


def check_constraints(constraints: tuple[Constraint, ...], facts: FactSet) -> tuple[Violation, ...]:
    """Evaluate all constraints; raises MalformedConstraintError eagerly."""
    seen_ids = set()
    for constraint in constraints:
        if constraint.id in seen_ids:
            raise MalformedConstraintError(f"duplicate constraint id {constraint.id!r}")
        seen_ids.add(constraint.id)
    violations: list[Violation] = []
    for constraint in sorted(constraints, key=lambda c: c.id):
        violations.extend(_check_one(constraint, facts))
    return tuple(violations)
