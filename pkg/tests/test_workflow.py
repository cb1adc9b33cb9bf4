"""Review workflow: transitions, audit trail, consistency, constraints."""
from dataclasses import replace
from datetime import datetime, timedelta, timezone
import random

import pytest

from ontoloop.errors import (
    AuditCorruptionError,
    ConsistencyBlockedError,
    IllegalTransitionError,
    MalformedConstraintError,
    PublishedImmutableError,
    StoreCorruptionError,
    UnauthorizedRoleError,
    UnknownIdError,
    ValidationError,
)
from ontoloop.knowledge.canonical import content_hash
from ontoloop.knowledge.model import (
    EntityClass,
    Exemplar,
    ExemplarKind,
    Relationship,
    RelationshipObject,
    SourceRef,
    WorkflowState,
)
from ontoloop.workflow import (
    LEGAL_TRANSITIONS,
    AuditEvent,
    AuditLog,
    Constraint,
    ConstraintKind,
    Fact,
    FactSelector,
    ModelRegistry,
    MutationEvent,
    Principal,
    Role,
    check_constraints,
    consistency_check,
    legal_targets,
)
from ontoloop.workflow.audit import load_audit_lines

from helpers import ModelFactory

STATES = tuple(WorkflowState)
ROLES = tuple(Role)


def ticking_clock(start: datetime | None = None):
    moment = [start or datetime(2026, 1, 5, 9, 0, tzinfo=timezone.utc)]

    def clock() -> datetime:
        moment[0] += timedelta(seconds=1)
        return moment[0]

    return clock


def one_role(role: Role) -> Principal:
    return Principal(id=f"only-{role.value}", roles=frozenset({role}))


def registry_at(state: WorkflowState, superuser: Principal, model=None):
    """Fresh registry holding one model driven to the given state."""
    reg = ModelRegistry(ticking_clock())
    if model is None:
        mid = reg.create("drive", SourceRef("interview", "x"), superuser, model_id="m-drive").id
    else:
        mid = reg.register(model, superuser, "import").id
    path = {
        WorkflowState.DRAFT: (),
        WorkflowState.IN_REVIEW: (WorkflowState.IN_REVIEW,),
        WorkflowState.READY_TO_PUBLISH: (
            WorkflowState.IN_REVIEW,
            WorkflowState.READY_TO_PUBLISH,
        ),
        WorkflowState.PUBLISHED: (
            WorkflowState.IN_REVIEW,
            WorkflowState.READY_TO_PUBLISH,
            WorkflowState.PUBLISHED,
        ),
    }[state]
    for step in path:
        reg.transition(mid, step, superuser, "setup")
    assert reg.get(mid).state is state
    return reg, mid


# -- transition matrix -------------------------------------------------


def test_full_state_role_matrix(superuser):
    """Exactly the enumerated (state, target, role) rows succeed."""
    for current in STATES:
        for target in STATES:
            for role in ROLES:
                reg, mid = registry_at(current, superuser)
                actor = one_role(role)
                legal = (current, target) in LEGAL_TRANSITIONS
                if legal and LEGAL_TRANSITIONS[(current, target)] is role:
                    event = reg.transition(mid, target, actor, "by the book")
                    assert reg.get(mid).state is target
                    assert event.action == f"transition:{current.value}->{target.value}"
                elif legal:
                    with pytest.raises(UnauthorizedRoleError):
                        reg.transition(mid, target, actor, "wrong hat")
                    assert reg.get(mid).state is current
                else:
                    with pytest.raises(IllegalTransitionError):
                        reg.transition(mid, target, actor, "no such edge")
                    assert reg.get(mid).state is current


def test_matrix_has_exactly_five_edges():
    assert len(LEGAL_TRANSITIONS) == 5
    assert legal_targets(WorkflowState.PUBLISHED) == ()


def test_draft_to_in_review_appends_event(bird_model, contributor, superuser):
    reg = ModelRegistry(ticking_clock())
    reg.register(bird_model, superuser, "import")
    event = reg.transition(bird_model.id, WorkflowState.IN_REVIEW, contributor, "first pass done")
    assert reg.get(bird_model.id).state is WorkflowState.IN_REVIEW
    assert event.actor == "casey"
    assert event.subject == f"{bird_model.id}@1"
    assert event.rationale == "first pass done"
    assert len(reg.audit_log) == 1


def test_draft_to_published_is_illegal(bird_model, publisher, superuser):
    reg = ModelRegistry(ticking_clock())
    reg.register(bird_model, superuser, "import")
    with pytest.raises(IllegalTransitionError):
        reg.transition(bird_model.id, WorkflowState.PUBLISHED, publisher, "skip the queue")


def test_contributor_cannot_approve(bird_model, contributor, superuser):
    reg, mid = registry_at(WorkflowState.IN_REVIEW, superuser, bird_model)
    with pytest.raises(UnauthorizedRoleError):
        reg.transition(mid, WorkflowState.READY_TO_PUBLISH, contributor, "self-approval")


def test_rationale_must_be_non_empty(bird_model, contributor, superuser):
    reg = ModelRegistry(ticking_clock())
    reg.register(bird_model, superuser, "import")
    with pytest.raises(ValidationError):
        reg.transition(bird_model.id, WorkflowState.IN_REVIEW, contributor, "   ")
    assert len(reg.audit_log) == 0


# -- consistency gate --------------------------------------------------


def test_missing_definition_blocks_ready_not_review(contributor, reviewer):
    bare = EntityClass(id="c-bare", label="Bare")
    reg = ModelRegistry(ticking_clock())
    mid = reg.create("wip", SourceRef("interview", "a"), contributor, model_id="m-wip").id
    reg.add_class(mid, bare, contributor)  # commits version 2, still draft
    reg.transition(mid, WorkflowState.IN_REVIEW, contributor, "warning is fine here")
    with pytest.raises(ConsistencyBlockedError) as exc:
        reg.transition(mid, WorkflowState.READY_TO_PUBLISH, reviewer, "try to approve")
    kinds = {item.kind for item in exc.value.report.errors}
    assert kinds == {"missing-definition"}
    assert reg.get(mid).state is WorkflowState.IN_REVIEW


def test_dangling_endpoint_blocks_review_entry(bird_model, contributor, superuser):
    broken = replace(
        bird_model,
        relationships=bird_model.relationships
        + (
            Relationship(
                subject="bird",
                predicate="migrates-to",
                object=RelationshipObject.to_class("c-nowhere"),
                source=SourceRef("doc", "guide-1"),
            ),
        ),
    )
    reg = ModelRegistry(ticking_clock())
    reg.register(broken, superuser, "import")
    with pytest.raises(ConsistencyBlockedError) as exc:
        reg.transition(broken.id, WorkflowState.IN_REVIEW, contributor, "submit")
    assert any(i.kind == "dangling-endpoint" for i in exc.value.report.errors)


def test_rework_edges_do_not_gate(bird_model, reviewer, superuser):
    reg, mid = registry_at(WorkflowState.READY_TO_PUBLISH, superuser, bird_model)
    reg.transition(mid, WorkflowState.IN_REVIEW, reviewer, "needs another look")
    reg.transition(mid, WorkflowState.DRAFT, reviewer, "back to the author")
    assert reg.get(mid).state is WorkflowState.DRAFT


# -- consistency_check -------------------------------------------------


def test_dangling_object_reported(bird_model):
    broken = replace(
        bird_model,
        relationships=(
            Relationship(
                subject="bird",
                predicate="eats",
                object=RelationshipObject.to_class("c-ghost"),
                source=SourceRef("doc", "guide-1"),
            ),
        ),
    )
    report = consistency_check(broken)
    assert len(report.errors) == 1
    item = report.errors[0]
    assert item.kind == "dangling-endpoint"
    assert item.locator == "relationship:bird->eats[0]"


def test_clean_model_ready_for_publish(bird_model):
    report = consistency_check(bird_model, target_state=WorkflowState.READY_TO_PUBLISH)
    assert report.ok
    assert report.items == ()


@pytest.mark.parametrize(
    "target,severity",
    [
        (None, "warning"),
        (WorkflowState.IN_REVIEW, "warning"),
        (WorkflowState.READY_TO_PUBLISH, "error"),
        (WorkflowState.PUBLISHED, "error"),
    ],
)
def test_definition_severity_follows_target(bird_model, target, severity):
    undefined = replace(
        bird_model,
        classes=tuple(replace(c, definition=None) for c in bird_model.classes),
    )
    report = consistency_check(undefined, target_state=target)
    found = [i for i in report.items if i.kind == "missing-definition"]
    assert len(found) == len(bird_model.classes)
    assert {i.severity for i in found} == {severity}


def test_duplicate_class_id_reported(bird_model):
    forced = replace(bird_model, relationships=())
    object.__setattr__(forced, "classes", forced.classes + (forced.classes[0],))
    report = consistency_check(forced)
    assert any(i.kind == "duplicate-id" for i in report.errors)


def test_exemplar_overrun_reported(bird_model):
    bird = bird_model.class_by_id("bird")
    extra = Exemplar(
        kind=ExemplarKind.ARCHETYPICAL,
        label="second robin",
        rationale="forced duplicate for the check",
    )
    object.__setattr__(bird, "exemplars", bird.exemplars + (extra,))
    report = consistency_check(bird_model)
    assert any(i.kind == "exemplar-cardinality" for i in report.errors)


def full_referential_scan(model, strict: bool):
    """Brute-force re-derivation of every check, kept deliberately plain."""
    found = []
    ids = [c.id for c in model.classes]
    known = set(ids)
    for position, cls in enumerate(model.classes):
        if cls.id in ids[:position]:
            found.append(("duplicate-id", "error", f"class:{cls.id}"))
        if cls.definition is None or cls.definition.strip() == "":
            level = "error" if strict else "warning"
            found.append(("missing-definition", level, f"class:{cls.id}"))
        for kind, cap in ((ExemplarKind.ARCHETYPICAL, 1), (ExemplarKind.ATYPICAL, 3), (ExemplarKind.EXOTYPICAL, 1)):
            total = len([e for e in cls.exemplars if e.kind is kind])
            if total > cap:
                found.append(("exemplar-cardinality", "error", f"class:{cls.id}"))
    for index, rel in enumerate(model.relationships):
        where = f"relationship:{rel.subject}->{rel.predicate}[{index}]"
        if rel.subject not in known:
            found.append(("dangling-endpoint", "error", where))
        if rel.object.kind == "class" and rel.object.ref not in known:
            found.append(("dangling-endpoint", "error", where))
    return sorted(found)


def corrupt(model, rng):
    """Apply 1-3 random defects; may no-op on tiny models."""
    for _ in range(rng.randint(1, 3)):
        move = rng.randint(0, 3)
        if move == 0 and len(model.classes) > 1:
            keep = list(model.classes)
            keep.pop(rng.randrange(len(keep)))
            object.__setattr__(model, "classes", tuple(keep))
        elif move == 1 and model.classes:
            victim = rng.choice(model.classes)
            object.__setattr__(victim, "definition", None)
        elif move == 2 and model.classes:
            object.__setattr__(
                model, "classes", model.classes + (rng.choice(model.classes),)
            )
        elif move == 3 and model.classes:
            rel = Relationship(
                subject=rng.choice(model.classes).id,
                predicate="points-at",
                object=RelationshipObject.to_class("c-absent-" + str(rng.randint(0, 9))),
                source=SourceRef("doc", "scan"),
            )
            object.__setattr__(model, "relationships", model.relationships + (rel,))
    return model


@pytest.mark.parametrize("seed", range(40))
def test_corrupted_models_match_full_scan(seed):
    rng = random.Random(seed)
    model = corrupt(ModelFactory(seed).model(min_classes=1, max_classes=5), rng)
    strict = rng.random() < 0.5
    target = WorkflowState.READY_TO_PUBLISH if strict else None
    report = consistency_check(model, target_state=target)
    got = sorted((i.kind, i.severity, i.locator) for i in report.items)
    assert got == full_referential_scan(model, strict)


# -- constraints -------------------------------------------------------


def warehouse_facts(total: int):
    facts = []
    for n in range(total):
        where = "warehouse-0024" if n % 2 == 0 else "warehouse-0025"
        facts.append(Fact(f"container-{n:03d}", "stored-in", where))
    return tuple(facts)


def test_container_cap_exceeded():
    cap = Constraint(
        id="chem-cap",
        kind="max-count",
        target=FactSelector(
            predicates=("stored-in",),
            values=("warehouse-0024", "warehouse-0025"),
        ),
        params={"limit": 10},
    )
    violations = check_constraints((cap,), warehouse_facts(12))
    assert len(violations) == 1
    hit = violations[0]
    assert hit.constraint_id == "chem-cap"
    assert hit.observed == "12"
    assert "exceeds limit 10" in hit.detail
    assert len(hit.facts) == 12


def test_container_cap_respected():
    cap = Constraint(
        id="chem-cap",
        kind="max-count",
        target=FactSelector(predicates=("stored-in",)),
        params={"limit": 10},
    )
    assert check_constraints((cap,), warehouse_facts(10)) == ()


def test_min_count_zero_on_empty_facts():
    floor = Constraint(
        id="any",
        kind="min-count",
        target=FactSelector(),
        params={"limit": 0},
    )
    assert check_constraints((floor,), ()) == ()


def test_min_count_below_floor():
    floor = Constraint(
        id="staffing",
        kind="min-count",
        target=FactSelector(predicates=("assigned-to",)),
        params={"limit": 3},
    )
    facts = (Fact("crew-1", "assigned-to", "bay-17"),)
    (violation,) = check_constraints((floor,), facts)
    assert violation.observed == "1"
    assert "below minimum 3" in violation.detail


def test_value_range_groups_by_subject():
    bounds = Constraint(
        id="temp",
        kind="value-range",
        target=FactSelector(predicates=("reads",)),
        params={"minimum": 0, "maximum": 100},
    )
    facts = (
        Fact("sensor-b", "reads", 130),
        Fact("sensor-a", "reads", -5),
        Fact("sensor-b", "reads", 990),
        Fact("sensor-c", "reads", 42),
        Fact("sensor-d", "reads", "warm"),
    )
    violations = check_constraints((bounds,), facts)
    assert [v.subject for v in violations] == ["sensor-a", "sensor-b", "sensor-d"]
    assert violations[1].observed == "130, 990"


def test_value_type_flags_unparseable():
    typed = Constraint(
        id="count-int",
        kind="value-type",
        target=FactSelector(predicates=("count",)),
        params={"value_type": "integer"},
    )
    facts = (
        Fact("shelf-1", "count", 4),
        Fact("shelf-2", "count", "many"),
        Fact("shelf-3", "count", True),
    )
    violations = check_constraints((typed,), facts)
    assert [v.subject for v in violations] == ["shelf-2", "shelf-3"]


def test_required_field_checks_matched_subjects():
    need_owner = Constraint(
        id="owner",
        kind="required-field",
        target=FactSelector(predicates=("stored-in",)),
        params={"field": "owned-by"},
    )
    facts = (
        Fact("crate-1", "stored-in", "w-1"),
        Fact("crate-2", "stored-in", "w-1"),
        Fact("crate-1", "owned-by", "ops"),
    )
    (violation,) = check_constraints((need_owner,), facts)
    assert violation.subject == "crate-2"
    assert violation.observed == "absent"


def test_unknown_predicate_rejected():
    with pytest.raises(MalformedConstraintError):
        Constraint(id="odd", kind="exactly-count", target=FactSelector(), params={})


def test_missing_params_rejected():
    broken = Constraint(id="half", kind="value-range", target=FactSelector(), params={"minimum": 1})
    with pytest.raises(MalformedConstraintError):
        check_constraints((broken,), ())


def test_duplicate_constraint_ids_rejected():
    one = Constraint(id="same", kind="min-count", target=FactSelector(), params={"limit": 0})
    two = Constraint(id="same", kind="max-count", target=FactSelector(), params={"limit": 9})
    with pytest.raises(MalformedConstraintError):
        check_constraints((one, two), ())


def test_violations_ordered_by_constraint_id():
    later = Constraint(id="b-cap", kind="max-count", target=FactSelector(), params={"limit": 0})
    earlier = Constraint(id="a-cap", kind="max-count", target=FactSelector(), params={"limit": 0})
    facts = (Fact("s", "p", "v"),)
    violations = check_constraints((later, earlier), facts)
    assert [v.constraint_id for v in violations] == ["a-cap", "b-cap"]


def naive_interpreter(constraints, facts):
    """Straight-line re-evaluation used as the oracle."""

    def hits(con):
        rows = []
        for fact in facts:
            sel = con.target
            if sel.subjects is not None and fact.subject not in sel.subjects:
                continue
            if sel.predicates is not None and fact.predicate not in sel.predicates:
                continue
            if sel.values is not None and fact.value_text not in sel.values:
                continue
            rows.append(fact)
        return rows

    out = []
    for con in sorted(constraints, key=lambda c: c.id):
        rows = hits(con)
        if con.kind is ConstraintKind.MAX_COUNT:
            if len(rows) > int(con.params["limit"]):
                out.append((con.id, None, str(len(rows))))
        elif con.kind is ConstraintKind.MIN_COUNT:
            if len(rows) < int(con.params["limit"]):
                out.append((con.id, None, str(len(rows))))
        elif con.kind is ConstraintKind.VALUE_RANGE:
            lo = float(con.params["minimum"])
            hi = float(con.params["maximum"])
            bad: dict[str, list[str]] = {}
            for fact in rows:
                try:
                    inside = lo <= float(fact.value_text) <= hi
                except ValueError:
                    inside = False
                if not inside:
                    bad.setdefault(fact.subject, []).append(fact.value_text)
            for subject in sorted(bad):
                out.append((con.id, subject, ", ".join(bad[subject])))
        elif con.kind is ConstraintKind.VALUE_TYPE:
            wanted = con.params["value_type"]
            bad = {}
            for fact in rows:
                text = fact.value_text
                good = False
                try:
                    if wanted == "integer":
                        good = not isinstance(fact.value, (bool, float)) and int(text) is not None
                    elif wanted == "floating-point":
                        good = float(text) is not None and not isinstance(fact.value, bool)
                    elif wanted == "boolean":
                        good = text in ("true", "false")
                    elif wanted == "datetime":
                        good = datetime.fromisoformat(text) is not None
                    elif wanted == "string":
                        good = isinstance(fact.value, str)
                except ValueError:
                    good = False
                if not good:
                    bad.setdefault(fact.subject, []).append(repr(text))
            for subject in sorted(bad):
                out.append((con.id, subject, ", ".join(bad[subject])))
        elif con.kind is ConstraintKind.REQUIRED_FIELD:
            covered = {f.subject for f in facts if f.predicate == con.params["field"]}
            for subject in sorted({r.subject for r in rows}):
                if subject not in covered:
                    out.append((con.id, subject, "absent"))
    return out


def random_constraint(rng, tag):
    kind = rng.choice(list(ConstraintKind))
    params = {
        ConstraintKind.MAX_COUNT: lambda: {"limit": rng.randint(0, 5)},
        ConstraintKind.MIN_COUNT: lambda: {"limit": rng.randint(0, 5)},
        ConstraintKind.VALUE_RANGE: lambda: dict(
            zip(("minimum", "maximum"), sorted((rng.uniform(-5, 8), rng.uniform(-5, 8))))
        ),
        ConstraintKind.VALUE_TYPE: lambda: {
            "value_type": rng.choice(
                ["string", "integer", "floating-point", "boolean", "datetime"]
            )
        },
        ConstraintKind.REQUIRED_FIELD: lambda: {"field": rng.choice(["p0", "p1", "p2"])},
    }[kind]()

    def maybe(pool):
        if rng.random() < 0.45:
            return None
        return tuple(rng.sample(pool, rng.randint(1, min(3, len(pool)))))

    selector = FactSelector(
        subjects=maybe(["s0", "s1", "s2", "s3"]),
        predicates=maybe(["p0", "p1", "p2"]),
        values=maybe(["7", "7.5", "true", "box", "2026-01-02T03:04:05"]),
    )
    return Constraint(id=f"con-{tag:02d}", kind=kind, target=selector, params=params)


@pytest.mark.parametrize("seed", range(60))
def test_random_constraints_match_naive_interpreter(seed):
    rng = random.Random(1000 + seed)
    pool = ["box", "7", 7, 7.5, True, False, "2026-01-02T03:04:05", "xyz", -3, 0.0, "true"]
    facts = tuple(
        Fact(
            rng.choice(["s0", "s1", "s2", "s3"]),
            rng.choice(["p0", "p1", "p2"]),
            rng.choice(pool),
        )
        for _ in range(rng.randint(0, 14))
    )
    constraints = tuple(random_constraint(rng, n) for n in range(rng.randint(1, 5)))
    got = [
        (v.constraint_id, v.subject, v.observed)
        for v in check_constraints(constraints, facts)
    ]
    assert got == naive_interpreter(constraints, facts)


# -- audit trail -------------------------------------------------------


def test_sequences_are_gapless_and_times_monotone():
    log = AuditLog(ticking_clock())
    for n in range(5):
        log.append(actor="casey", action="transition:draft->in-review", subject=f"m{n}@1", rationale="go")
    seqs = [e.sequence for e in log.events]
    assert seqs == [1, 2, 3, 4, 5]
    stamps = [e.at for e in log.events]
    assert stamps == sorted(stamps)


def test_trail_filters_one_model(bird_model, superuser):
    reg, mid = registry_at(WorkflowState.READY_TO_PUBLISH, superuser, bird_model)
    reg.create("noise", SourceRef("interview", "n"), superuser, model_id="m-noise")
    reg.transition("m-noise", WorkflowState.IN_REVIEW, superuser, "noise")
    reg.transition(mid, WorkflowState.PUBLISHED, superuser, "ship it")
    mine = reg.audit_trail(subject=f"{mid}@")
    assert len(mine) == 3
    assert [e.action.split("->")[1] for e in mine] == [
        "in-review",
        "ready-to-publish",
        "published",
    ]


def test_empty_log_trail():
    assert AuditLog().trail() == ()


def test_interleaved_trails_match_filtered_replay(superuser):
    reg = ModelRegistry(ticking_clock())
    ids = []
    for n in range(5):
        mid = f"m-{n}"
        reg.create(f"lane {n}", SourceRef("interview", str(n)), superuser, model_id=mid)
        ids.append(mid)
    rng = random.Random(7)
    for _ in range(40):
        mid = rng.choice(ids)
        state = reg.get(mid).state
        targets = legal_targets(state)
        if not targets:
            continue
        reg.transition(mid, rng.choice(targets), superuser, "walk")
    for mid in ids:
        expected = tuple(
            e for e in reg.audit_log.events if e.subject.startswith(f"{mid}@")
        )
        assert reg.audit_trail(subject=f"{mid}@") == expected


def test_trail_time_window():
    clock = ticking_clock()
    log = AuditLog(clock)
    events = [
        log.append(actor="a", action="t", subject=f"m@{n}", rationale="r")
        for n in range(6)
    ]
    window = log.trail(since=events[2].at, until=events[4].at)
    assert window == tuple(events[2:5])


def test_audit_lines_round_trip():
    log = AuditLog(ticking_clock())
    log.append(actor="casey", action="transition:draft->in-review", subject="m@1", rationale="go")
    log.append(actor="rowan", action="transition:in-review->draft", subject="m@1", rationale="rework")
    lines = [e.to_json() for e in log.events]
    loaded = load_audit_lines(lines)
    assert loaded.events == log.events


def test_audit_gap_halts_load():
    log = AuditLog(ticking_clock())
    for _ in range(3):
        log.append(actor="a", action="t", subject="m@1", rationale="r")
    lines = [e.to_json() for e in log.events]
    del lines[1]
    with pytest.raises(AuditCorruptionError, match="sequence"):
        load_audit_lines(lines)


def test_audit_parse_failure_halts_load():
    log = AuditLog(ticking_clock())
    log.append(actor="a", action="t", subject="m@1", rationale="r")
    with pytest.raises(AuditCorruptionError):
        load_audit_lines([log.events[0].to_json(), "{not json"])


def test_events_are_immutable():
    log = AuditLog(ticking_clock())
    event = log.append(actor="a", action="t", subject="m@1", rationale="r")
    with pytest.raises(AttributeError):
        event.actor = "mallory"


# -- registry: versioning, immutability, replay ------------------------


def test_create_commits_draft_v1(contributor):
    reg = ModelRegistry(ticking_clock())
    model = reg.create("pilot", SourceRef("interview", "a"), contributor, model_id="m-p")
    assert (model.version, model.state) == (1, WorkflowState.DRAFT)
    event = reg.mutation_events[0]
    assert (event.action, event.version) == ("create", 1)
    assert event.content_hash == content_hash(model)


def test_mutation_bumps_version_and_restamps_draft(bird_model, contributor, superuser):
    reg, mid = registry_at(WorkflowState.IN_REVIEW, superuser, bird_model)
    extra = EntityClass(id="c-extra", label="Extra", definition="Another concept.")
    updated = reg.add_class(mid, extra, contributor)
    assert (updated.version, updated.state) == (2, WorkflowState.DRAFT)
    assert reg.get(mid, version=1).state is WorkflowState.IN_REVIEW
    assert reg.latest_version(mid) == 2


def test_published_version_is_immutable(bird_model, contributor, superuser):
    reg, mid = registry_at(WorkflowState.PUBLISHED, superuser, bird_model)
    extra = EntityClass(id="c-extra", label="Extra", definition="Another concept.")
    with pytest.raises(PublishedImmutableError):
        reg.add_class(mid, extra, contributor)
    fork = reg.fork(mid, contributor)
    assert (fork.version, fork.state) == (2, WorkflowState.DRAFT)
    assert content_hash(fork) == content_hash(reg.get(mid, version=1))
    reg.add_class(mid, extra, contributor)  # now allowed on the fork
    assert reg.latest_version(mid) == 3


def test_register_rejects_known_id(bird_model, superuser):
    reg = ModelRegistry(ticking_clock())
    reg.register(bird_model, superuser, "import")
    with pytest.raises(ValidationError):
        reg.register(bird_model, superuser, "import")


def test_get_unknown_raises(superuser):
    reg = ModelRegistry(ticking_clock())
    with pytest.raises(UnknownIdError):
        reg.get("m-missing")
    reg.create("x", SourceRef("interview", "a"), superuser, model_id="m-x")
    with pytest.raises(UnknownIdError):
        reg.get("m-x", version=9)


def test_mutation_event_round_trip(bird_model, superuser):
    reg = ModelRegistry(ticking_clock())
    reg.register(bird_model, superuser, "import")
    event = reg.mutation_events[0]
    again = MutationEvent.from_json(event.to_json())
    assert again == event


def test_unreadable_mutation_row():
    with pytest.raises(StoreCorruptionError):
        MutationEvent.from_json("{}")


def drive_sample_registry(superuser):
    reg = ModelRegistry(ticking_clock())
    rng = random.Random(11)
    factory = ModelFactory(11)
    for n in range(4):
        reg.register(
            factory.model(min_classes=1, max_classes=3), superuser, "import"
        )
    failed = 0
    succeeded = 0
    for _ in range(120):
        mid = rng.choice(reg.model_ids())
        roll = rng.random()
        if roll < 0.45:
            state = reg.get(mid).state
            choices = list(WorkflowState)
            target = rng.choice(choices)
            try:
                reg.transition(mid, target, superuser, "fuzz step")
                succeeded += 1
            except (IllegalTransitionError, ConsistencyBlockedError):
                failed += 1
        elif roll < 0.7:
            cls = factory.entity_class()
            try:
                reg.add_class(mid, cls, superuser)
            except PublishedImmutableError:
                reg.fork(mid, superuser)
        elif roll < 0.85 and reg.get(mid).classes:
            rel = Relationship(
                subject=rng.choice(reg.get(mid).classes).id,
                predicate=f"linked-{rng.randint(0, 99)}",
                object=RelationshipObject.to_class(rng.choice(reg.get(mid).classes).id),
                source=factory.source(),
            )
            try:
                reg.add_relationship(mid, rel, superuser)
            except PublishedImmutableError:
                reg.fork(mid, superuser)
        else:
            try:
                reg.fork(mid, superuser)
            except UnknownIdError:  # pragma: no cover
                raise
    return reg, succeeded, failed


def test_every_successful_transition_is_audited(superuser):
    reg, succeeded, failed = drive_sample_registry(superuser)
    transition_events = [
        e for e in reg.audit_log.events if e.action.startswith("transition:")
    ]
    assert len(transition_events) == succeeded
    assert reg.transition_count == succeeded
    assert failed > 0  # the walk actually exercised rejections


def test_replay_reproduces_registry(superuser):
    reg, _, _ = drive_sample_registry(superuser)
    mutation_lines = [e.to_json() for e in reg.mutation_events]
    audit_lines = [e.to_json() for e in reg.audit_log.events]
    twin = ModelRegistry.replay(mutation_lines, audit_lines)
    assert twin.model_ids() == reg.model_ids()
    assert twin.transition_count == reg.transition_count
    assert twin.audit_log.events == reg.audit_log.events
    for mid in reg.model_ids():
        for original in reg.versions(mid):
            copy = twin.get(mid, version=original.version)
            assert copy.state is original.state
            assert content_hash(copy) == content_hash(original)


def test_replay_rejects_mutation_gap(bird_model, contributor, superuser):
    reg, mid = registry_at(WorkflowState.IN_REVIEW, superuser, bird_model)
    reg.add_class(mid, EntityClass(id="c-x", label="X", definition="d."), contributor)
    lines = [e.to_json() for e in reg.mutation_events]
    with pytest.raises(StoreCorruptionError, match="gap"):
        ModelRegistry.replay(lines[1:], [])


def test_replay_rejects_tampered_payload(bird_model, superuser):
    reg = ModelRegistry(ticking_clock())
    reg.register(bird_model, superuser, "import")
    line = reg.mutation_events[0].to_json().replace("field-guide", "forged-guide")
    with pytest.raises(StoreCorruptionError, match="hash"):
        ModelRegistry.replay([line], [])


def test_replay_rejects_contradictory_transition(bird_model, contributor, superuser):
    reg = ModelRegistry(ticking_clock())
    reg.register(bird_model, superuser, "import")
    reg.transition(bird_model.id, WorkflowState.IN_REVIEW, contributor, "go")
    mutation_lines = [e.to_json() for e in reg.mutation_events]
    audit_lines = [e.to_json() for e in reg.audit_log.events] * 2  # replays the edge twice
    fixed = [
        line if n == 0 else line.replace('"sequence": 1', '"sequence": 2')
        for n, line in enumerate(audit_lines)
    ]
    with pytest.raises(AuditCorruptionError, match="contradicts"):
        ModelRegistry.replay(mutation_lines, fixed)


def test_replay_rejects_unknown_subject():
    log = AuditLog(ticking_clock())
    event = log.append(
        actor="casey",
        action="transition:draft->in-review",
        subject="m-phantom@1",
        rationale="go",
    )
    with pytest.raises(AuditCorruptionError, match="unknown subject"):
        ModelRegistry.replay([], [event.to_json()])
