"""The review ladder's transition matrix and role authority.

Forward path: Draft -> InReview -> ReadyToPublish -> Published, with two
rework edges (InReview -> Draft, ReadyToPublish -> InReview). Published
is terminal for a version. Authority: contributors submit drafts,
reviewers decide everything leaving review (including sending work
back), and only publishers may publish.
"""
from __future__ import annotations

from ontoloop.knowledge.model import WorkflowState
from ontoloop.workflow.principals import Role

LEGAL_TRANSITIONS: dict[tuple[WorkflowState, WorkflowState], Role] = {
    (WorkflowState.DRAFT, WorkflowState.IN_REVIEW): Role.CONTRIBUTOR,
    (WorkflowState.IN_REVIEW, WorkflowState.DRAFT): Role.REVIEWER,
    (WorkflowState.IN_REVIEW, WorkflowState.READY_TO_PUBLISH): Role.REVIEWER,
    (WorkflowState.READY_TO_PUBLISH, WorkflowState.IN_REVIEW): Role.REVIEWER,
    (WorkflowState.READY_TO_PUBLISH, WorkflowState.PUBLISHED): Role.PUBLISHER,
}


def is_legal(current: WorkflowState, target: WorkflowState) -> bool:
    return (current, target) in LEGAL_TRANSITIONS


def authority_for(current: WorkflowState, target: WorkflowState) -> Role | None:
    return LEGAL_TRANSITIONS.get((current, target))


def legal_targets(current: WorkflowState) -> tuple[WorkflowState, ...]:
    return tuple(t for (s, t) in LEGAL_TRANSITIONS if s is current)
