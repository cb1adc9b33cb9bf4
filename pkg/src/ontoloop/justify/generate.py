"""Prompt-chain composition of decision records.

The chain runs six fixed stages (claim, grounds, warrant, backing,
rebuttals, qualifiers), each rendered from a versioned template asset
and sent to a pluggable text generator. Every prompt and raw response
is kept verbatim on the record so the whole derivation can be audited
or replayed.

`MockGenerator` is the deterministic reference generator: its output is
a pure function of (prompt, seed), which makes composed records
reproducible and the transcripts replayable bit for bit.
"""
from __future__ import annotations

import re
from importlib import resources
from string import Template
from typing import Protocol, Sequence

from ontoloop.errors import (
    GeneratorFailure,
    IncompleteGenerationError,
    TemplateError,
    ValidationError,
)
from ontoloop.knowledge.model import mint_id
from ontoloop.justify.records import (
    EvidenceItem,
    JustificationRecord,
    PromptExchange,
    Qualifier,
    Rebuttal,
    RiskTier,
)
from ontoloop.workflow.audit import Clock, utc_now

STAGES = ("claim", "grounds", "warrant", "backing", "rebuttals", "qualifiers")


class TextGenerator(Protocol):
    def complete(self, prompt: str) -> str: ...


_TEMPLATE_CACHE: dict[str, Template] = {}


def load_template(stage: str) -> Template:
    if stage not in STAGES:
        raise TemplateError(f"no template for stage {stage!r}")
    if stage not in _TEMPLATE_CACHE:
        path = resources.files("ontoloop.justify").joinpath(f"templates/{stage}.txt")
        _TEMPLATE_CACHE[stage] = Template(path.read_text(encoding="utf-8"))
    return _TEMPLATE_CACHE[stage]


def render_stage(stage: str, slots: dict[str, str]) -> str:
    try:
        return load_template(stage).substitute(slots)
    except KeyError as exc:
        raise TemplateError(f"stage {stage!r} template lacks slot {exc}") from exc


# -- block rendering helpers (shared with the mock) --------------------


def render_steps(steps: Sequence[str]) -> str:
    if not steps:
        return "(none given)"
    return "\n".join(f"{n}. {step}" for n, step in enumerate(steps, start=1))


def render_evidence(evidence: Sequence[EvidenceItem]) -> str:
    if not evidence:
        return "(no evidence supplied)"
    return "\n".join(
        f"- [{item.id}] {item.statement} (source {item.source}, "
        f"confidence {item.confidence:g})"
        for item in evidence
    )


def render_grounds(grounds: Sequence[str], evidence: Sequence[EvidenceItem]) -> str:
    if not grounds:
        return "(none)"
    by_id = {item.id: item for item in evidence}
    return "\n".join(f"- {ref}: {by_id[ref].statement}" for ref in grounds)


def render_rebuttals(rebuttals: Sequence[Rebuttal]) -> str:
    if not rebuttals:
        return "(none)"
    return "\n".join(
        f"{n}. [{reb.attacks}] {reb.text}" for n, reb in enumerate(rebuttals)
    )


# -- deterministic mock generator ---------------------------------------

_STAGE_MARKERS = (
    ('"claim: "', "claim"),
    ('"ground: ', "grounds"),
    ('"warrant: "', "warrant"),
    ('"backing: "', "backing"),
    ('"rebuttal[', "rebuttals"),
    ('"qualifier[', "qualifiers"),
)

_EVIDENCE_LINE = re.compile(r"^- \[(?P<id>[^\]]+)\] (?P<stmt>.+) \(source ")
_GROUND_LINE = re.compile(r"^- (?P<id>\S+): (?P<stmt>.+)$")
_OBJECTION_LINE = re.compile(r"^(?P<n>\d+)\. \[(?P<target>[a-z]+)\] (?P<text>.+)$")


def detect_stage(prompt: str) -> str:
    tail = [line for line in prompt.splitlines() if line.strip()]
    for line in reversed(tail[-3:]):
        for marker, stage in _STAGE_MARKERS:
            if marker in line:
                return stage
    raise ValidationError("prompt does not name a known response format")


def _prompt_value(prompt: str, label: str) -> str:
    for line in prompt.splitlines():
        if line.startswith(label):
            return line[len(label):].strip()
    return ""


class MockGenerator:
    """Offline generator. Same (prompt, seed) always yields the same text.

    `fail_first` injects transient failures for retry tests; `overrides`
    substitutes a canned response for a whole stage.
    """

    def __init__(
        self,
        seed: int = 0,
        *,
        fail_first: int = 0,
        overrides: dict[str, str] | None = None,
    ):
        self.seed = seed
        self.calls = 0
        self._fail_remaining = fail_first
        self.overrides = dict(overrides or {})

    def complete(self, prompt: str) -> str:
        self.calls += 1
        if self._fail_remaining > 0:
            self._fail_remaining -= 1
            raise GeneratorFailure("simulated transient outage")
        stage = detect_stage(prompt)
        if stage in self.overrides:
            return self.overrides[stage]
        return getattr(self, f"_{stage}")(prompt)

    def _claim(self, prompt: str) -> str:
        intent = _prompt_value(prompt, "Goal: ")
        steps = [
            line.split(". ", 1)[1]
            for line in prompt.splitlines()
            if re.match(r"^\d+\. ", line)
        ]
        verb = ("Carry out", "Execute")[self.seed % 2]
        if steps:
            plan = "; ".join(step.rstrip(".") for step in steps)
            return f"claim: {verb} the planned response: {plan}. Goal: {intent}."
        return f"claim: {verb} the standing procedure. Goal: {intent}."

    def _grounds(self, prompt: str) -> str:
        lines = []
        for line in prompt.splitlines():
            hit = _EVIDENCE_LINE.match(line)
            if hit:
                lines.append(f"ground: {hit['id']} :: {hit['stmt']}")
        return "\n".join(lines)

    def _warrant(self, prompt: str) -> str:
        cited = [l for l in prompt.splitlines() if _GROUND_LINE.match(l)]
        if not cited:
            return "warrant: The decision rests on standing operating policy alone."
        return (
            f"warrant: Together the {len(cited)} cited observations establish "
            "both the failure and its remedy, so the decision follows directly."
        )

    def _backing(self, prompt: str) -> str:
        first = "backing: Standard incident-response runbook."
        second = "backing: Vendor operations guidance for the affected system."
        pair = (first, second) if self.seed % 2 == 0 else (second, first)
        return "\n".join(pair)

    def _rebuttals(self, prompt: str) -> str:
        grounds = [
            _GROUND_LINE.match(l) for l in prompt.splitlines() if _GROUND_LINE.match(l)
        ]
        lines = []
        if grounds:
            fragment = " ".join(grounds[0]["stmt"].split()[:6])
            lines.append(
                f"rebuttal[grounds]: The observation that {fragment} may be "
                "stale by the time action is taken."
            )
        lines.append(
            "rebuttal[warrant]: The reasoning assumes the remedy has no side effects."
        )
        return "\n".join(lines)

    def _qualifiers(self, prompt: str) -> str:
        objections = [
            _OBJECTION_LINE.match(l)
            for l in prompt.splitlines()
            if _OBJECTION_LINE.match(l)
        ]
        grounds = [
            _GROUND_LINE.match(l) for l in prompt.splitlines() if _GROUND_LINE.match(l)
        ]
        scope = grounds[-1]["stmt"] if grounds else "the incident at hand"
        lines = []
        for hit in objections:
            if hit["target"] == "grounds":
                lines.append(
                    f"qualifier[answers={hit['n']}]: Valid only while the cited "
                    "observations remain current."
                )
            else:
                lines.append(
                    f"qualifier[answers={hit['n']}]: Scope limited to incidents "
                    f"of this kind: {scope}"
                )
        return "\n".join(lines)


# -- response parsing ---------------------------------------------------


def _parse_claim(response: str) -> str:
    for line in response.splitlines():
        if line.startswith("claim: "):
            return line[len("claim: "):].strip()
    return ""


def _parse_grounds(response: str, evidence: Sequence[EvidenceItem]) -> tuple[str, ...]:
    known = {item.id for item in evidence}
    refs: list[str] = []
    for line in response.splitlines():
        if not line.startswith("ground: ") or " :: " not in line:
            continue
        ref = line[len("ground: "):].split(" :: ", 1)[0].strip()
        if ref in known and ref not in refs:
            refs.append(ref)
    return tuple(refs)


def _parse_warrant(response: str) -> str:
    for line in response.splitlines():
        if line.startswith("warrant: "):
            return line[len("warrant: "):].strip()
    return ""


def _parse_backing(response: str) -> tuple[str, ...]:
    return tuple(
        line[len("backing: "):].strip()
        for line in response.splitlines()
        if line.startswith("backing: ") and line[len("backing: "):].strip()
    )


_REBUTTAL_RE = re.compile(r"^rebuttal\[(?P<target>grounds|warrant|claim)\]: (?P<text>.+)$")
_QUALIFIER_RE = re.compile(r"^qualifier\[answers=(?P<answers>[\d, ]*)\]: (?P<text>.+)$")


def _parse_rebuttals(response: str) -> tuple[Rebuttal, ...]:
    out = []
    for line in response.splitlines():
        hit = _REBUTTAL_RE.match(line)
        if hit:
            out.append(Rebuttal(text=hit["text"].strip(), attacks=hit["target"]))
    return tuple(out)


def _parse_qualifiers(response: str, rebuttal_count: int) -> tuple[Qualifier, ...]:
    out = []
    for line in response.splitlines():
        hit = _QUALIFIER_RE.match(line)
        if not hit:
            continue
        answers = tuple(
            int(n)
            for n in hit["answers"].replace(" ", "").split(",")
            if n.isdigit() and int(n) < rebuttal_count
        )
        out.append(Qualifier(text=hit["text"].strip(), answers=answers))
    return tuple(out)


# -- the chain ----------------------------------------------------------


def compose_justification(
    intent: str,
    proposed_steps: Sequence[str],
    evidence: Sequence[EvidenceItem],
    generator: TextGenerator,
    *,
    risk: RiskTier = RiskTier.HIGH,
    created_by: str = "composer",
    record_id: str | None = None,
    attempts: int = 3,
    clock: Clock = utc_now,
) -> JustificationRecord:
    """Run the six-stage chain and return a proposed record.

    Transient generator failures are retried up to `attempts` per stage;
    a stage whose required output stays empty raises after the same
    budget. Grounds are required only when evidence was supplied.
    """
    if not intent.strip():
        raise ValidationError("intent must be non-empty")
    if attempts < 1:
        raise ValidationError("attempts must be at least 1")
    evidence = tuple(evidence)
    seen = set()
    for item in evidence:
        if item.id in seen:
            raise ValidationError(f"evidence id {item.id!r} supplied twice")
        seen.add(item.id)

    transcript: list[PromptExchange] = []

    def run_stage(stage: str, slots: dict[str, str], parse, required: bool):
        prompt = render_stage(stage, slots)
        outage: GeneratorFailure | None = None
        parsed = None
        produced = False
        for _ in range(attempts):
            try:
                response = generator.complete(prompt)
            except GeneratorFailure as exc:
                outage = exc
                continue
            transcript.append(PromptExchange(part=stage, prompt=prompt, response=response))
            produced = True
            parsed = parse(response)
            if parsed or not required:
                return parsed
        if not produced:
            raise outage or GeneratorFailure(f"stage {stage!r} never answered")
        raise IncompleteGenerationError(
            f"stage {stage!r} produced no usable content after {attempts} attempts"
        )

    claim = run_stage(
        "claim",
        {"intent": intent, "steps": render_steps(proposed_steps)},
        _parse_claim,
        required=True,
    )
    grounds = run_stage(
        "grounds",
        {"intent": intent, "claim": claim, "evidence": render_evidence(evidence)},
        lambda r: _parse_grounds(r, evidence),
        required=bool(evidence),
    )
    grounds_block = render_grounds(grounds, evidence)
    warrant = run_stage(
        "warrant",
        {"claim": claim, "grounds": grounds_block},
        _parse_warrant,
        required=True,
    )
    backing = run_stage(
        "backing",
        {"warrant": warrant},
        _parse_backing,
        required=False,
    )
    rebuttals = run_stage(
        "rebuttals",
        {"claim": claim, "warrant": warrant, "grounds": grounds_block},
        _parse_rebuttals,
        required=False,
    )
    qualifiers = run_stage(
        "qualifiers",
        {
            "claim": claim,
            "grounds": grounds_block,
            "rebuttals": render_rebuttals(rebuttals),
        },
        lambda r: _parse_qualifiers(r, len(rebuttals)),
        required=False,
    )

    return JustificationRecord(
        id=record_id or mint_id(),
        intent=intent,
        claim=claim,
        proposed_steps=tuple(proposed_steps),
        grounds=grounds,
        evidence=evidence,
        warrant=warrant,
        backing=backing or (),
        rebuttals=rebuttals or (),
        qualifiers=qualifiers or (),
        risk=risk,
        created_by=created_by,
        created_at=clock(),
        transcript=tuple(transcript),
    )
