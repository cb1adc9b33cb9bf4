"""Deterministic generator doubles for exercising the pipeline.

The mock's reply is a pure function of (prompt, seed): it reads the
source block and class lists out of the prompt itself then answers from
a small canned catalogue, so any run that stores its prompts can be
replayed against a fresh instance.
"""
from __future__ import annotations

import re

from ontoloop.errors import GeneratorFailure

_SOURCE_RE = re.compile(r"<<<\n(.*?)\n>>>", re.DOTALL)
_CLASS_LINE_RE = re.compile(r"^- ([a-z0-9][a-z0-9-]*) :: (.+)$", re.MULTILINE)
_TERM_RE = re.compile(r"^Term:\s*(.+?)\.\s*$", re.MULTILINE)
_LINK_RE = re.compile(r"^Link:\s*(\S+)\s+(\S+)\s+(\S+)\.\s*$", re.MULTILINE)
_ATTR_RE = re.compile(r"^Attr:\s*(\S+)\s+(\S+)\s+(.+?)\.\s*$", re.MULTILINE)
_CONTAINER_RE = re.compile(r"\b(containers?|crates?)\b", re.IGNORECASE)

_SLUG_RE = re.compile(r"[^a-z0-9]+")


def _slug(text: str) -> str:
    return _SLUG_RE.sub("-", text.strip().lower()).strip("-")


# marker substring scanned near the end of the prompt -> step
_STEP_MARKERS = (
    ('"element:', 1),
    ('"relation:', 2),
    ('"implicit:', 4),
    ('"exemplar: archetypical', 5),
    ('"exemplar: atypical', 6),
    ('"exemplar: exotypical', 7),
    ('"definition:', 8),
)

_CANNED = {
    "bird": {
        "definition": "A warm-blooded egg-laying animal with feathers and a beak.",
        "archetypical": (
            (
                "sparrow",
                "flies; has feathers; builds nests in trees; sings",
                "It flies, has feathers, builds nests in trees, and sings.",
            ),
        ),
        "atypical": (
            (
                "penguin",
                "has feathers; lays eggs; cannot fly; swims",
                "It has feathers and lays eggs, but it cannot fly, swims instead, "
                "and lives in aquatic environments.",
            ),
        ),
        "exotypical": (
            (
                "bat",
                "flies; has wings; warm-blooded; no feathers",
                "It flies, has wings, and is warm-blooded, sharing many functional "
                "properties with birds, but it lacks feathers and lays no eggs.",
            ),
        ),
    },
    "loading-unit": {
        "definition": (
            "A unit by which goods are grouped and carried as one piece through "
            "transport and storage."
        ),
        "archetypical": (
            (
                "pallet",
                "flat wooden base; forkliftable; carries stacked goods",
                "A pallet is the standard unit goods are grouped on for transport.",
            ),
        ),
        "atypical": (
            (
                "roll cage",
                "wheeled; caged sides; pushed by hand",
                "A roll cage is a loading unit even though it rolls on its own "
                "wheels instead of being lifted.",
            ),
            (
                "big bag",
                "flexible woven fabric; lifted by loops; holds bulk goods",
                "A big bag groups bulk goods into one liftable unit despite having "
                "no rigid structure.",
            ),
        ),
        "exotypical": (
            (
                "warehouse shelf",
                "fixed in place; holds goods; steel frame",
                "A shelf holds grouped goods but never travels with them, so it is "
                "not a loading unit.",
            ),
        ),
    },
}


class MockEnhancer:
    """Canned pipeline generator; replies depend only on (prompt, seed)."""

    def __init__(
        self,
        seed: int = 0,
        *,
        propose_implicit: bool = True,
        duplicate_implicit: tuple[str, ...] = (),
        fail_first: int = 0,
    ):
        self.seed = seed
        self.propose_implicit = propose_implicit
        self.duplicate_implicit = tuple(duplicate_implicit)
        self.fail_first = fail_first
        self.calls = 0

    @property
    def identity(self) -> str:
        return f"mock-enhancer/1 seed={self.seed}"

    def complete(self, prompt: str) -> str:
        self.calls += 1
        if self.calls <= self.fail_first:
            raise GeneratorFailure(f"canned outage on call {self.calls}")
        step = self._detect_step(prompt)
        lines = [f"# survey pass {'a' if self.seed % 2 == 0 else 'b'}"]
        lines.extend(self._answer(step, prompt))
        if len(lines) == 1:
            lines.append("none")
        return "\n".join(lines)

    def _detect_step(self, prompt: str) -> int:
        tail = [line for line in prompt.splitlines() if line.strip()][-3:]
        for line in tail:
            for marker, step in _STEP_MARKERS:
                if marker in line:
                    return step
        raise GeneratorFailure("prompt names no known response format")

    def _source(self, prompt: str) -> str:
        match = _SOURCE_RE.search(prompt)
        return match.group(1) if match else ""

    def _class_list(self, prompt: str) -> list[tuple[str, str]]:
        return _CLASS_LINE_RE.findall(prompt)

    def _answer(self, step: int, prompt: str) -> list[str]:
        if step == 1:
            return [
                f"element: {label.strip()}"
                for label in _TERM_RE.findall(self._source(prompt))
            ]
        if step == 2:
            source = self._source(prompt)
            lines = [
                f"relation: {_slug(a)} :: {pred} :: @{_slug(b)}"
                for a, pred, b in _LINK_RE.findall(source)
            ]
            lines.extend(
                f"relation: {_slug(a)} :: {pred} :: {value.strip()}"
                for a, pred, value in _ATTR_RE.findall(source)
            )
            return lines
        if step == 4:
            lines = []
            if self.propose_implicit and _CONTAINER_RE.search(self._source(prompt)):
                lines.append(
                    "implicit: loading-unit :: Loading Unit :: Goods staged in "
                    "containers imply a unit of loading absent from both inputs."
                )
            for cid in self.duplicate_implicit:
                label = cid.replace("-", " ").title()
                lines.append(
                    f"implicit: {cid} :: {label} :: Restating {label} from the inputs."
                )
            return lines
        if step in (5, 6, 7):
            kind = {5: "archetypical", 6: "atypical", 7: "exotypical"}[step]
            lines = []
            for cid, _label in self._class_list(prompt):
                for label, props, rationale in _CANNED.get(cid, {}).get(kind, ()):
                    lines.append(
                        f"exemplar: {kind} :: {cid} :: {label} :: {props} :: {rationale}"
                    )
            return lines
        if step == 8:
            return [
                f"definition: {cid} :: {_CANNED[cid]['definition']}"
                for cid, _label in self._class_list(prompt)
                if cid in _CANNED
            ]
        raise GeneratorFailure(f"no canned behaviour for step {step}")


class CountingGenerator:
    """Wrapper proving no hidden calls: records every (prompt, response)."""

    def __init__(self, inner):
        self.inner = inner
        self.exchanges: list[tuple[str, str]] = []

    @property
    def identity(self) -> str:
        return self.inner.identity

    @property
    def call_count(self) -> int:
        return len(self.exchanges)

    def complete(self, prompt: str) -> str:
        response = self.inner.complete(prompt)
        self.exchanges.append((prompt, response))
        return response
