"""HTTP face of the event store.

``create_app`` wires one :class:`EventStore` into a FastAPI application.
Read routes are pure functions of store state. Mutating routes demand an
asserted principal (``X-Principal: id;role,role``) and persist exactly
one event before the response leaves. Failures surface as problem-detail
JSON: ``{code, message, path}``.
"""
from __future__ import annotations

import json

from fastapi import Depends, FastAPI, Header, Query, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel, ConfigDict, Field

from ontoloop.errors import OntoloopError, PrincipalRequiredError, ValidationError
from ontoloop.evalstats import analyze, embedded_ratings, emit_report, load_ratings
from ontoloop.exchange import export_blueprint, export_rdfxml
from ontoloop.justify import EvidenceItem, Verdict, export_provenance
from ontoloop.knowledge.canonical import canonical_payload, content_hash
from ontoloop.knowledge.merge import Resolution
from ontoloop.knowledge.model import KnowledgeModel, SourceRef, WorkflowState
from ontoloop.service.serialize import record_payload
from ontoloop.service.store import IMPORT_FORMATS, EventStore
from ontoloop.workflow.consistency import consistency_check
from ontoloop.workflow.principals import Principal

# Per-code HTTP status; anything unlisted is a caller error (400).
_STATUS = {
    "unknown-id": 404,
    "principal-required": 401,
    "unauthorized-role": 403,
    "illegal-transition": 409,
    "consistency-blocked": 409,
    "published-immutable": 409,
    "uncovered-conflict": 409,
    "duplicate-id": 409,
    "gate": 409,
    "unanswered-rebuttal": 409,
    "non-terminal-record": 409,
    "generator-failure": 500,
    "audit-corruption": 500,
    "store-corruption": 500,
}


class SourceBody(BaseModel):
    model_config = ConfigDict(extra="forbid")
    kind: str
    ref: str


class CreateModelBody(BaseModel):
    model_config = ConfigDict(extra="forbid")
    name: str
    source: SourceBody
    id: str | None = None


class ResolutionBody(BaseModel):
    model_config = ConfigDict(extra="forbid")
    index: int
    strategy: str
    rationale: str
    value: str | None = None
    left_tag: str | None = None
    right_tag: str | None = None


class MergeBody(BaseModel):
    model_config = ConfigDict(extra="forbid")
    other: str
    resolutions: list[ResolutionBody] = Field(default_factory=list)
    id: str | None = None


class TransitionBody(BaseModel):
    model_config = ConfigDict(extra="forbid")
    target: str
    rationale: str


class ImportBody(BaseModel):
    model_config = ConfigDict(extra="forbid")
    format: str
    data: str
    id: str | None = None


class EvidenceBody(BaseModel):
    model_config = ConfigDict(extra="forbid")
    id: str
    statement: str
    source: str
    confidence: float


class ComposeBody(BaseModel):
    model_config = ConfigDict(extra="forbid")
    intent: str
    proposed_steps: list[str]
    evidence: list[EvidenceBody] = Field(default_factory=list)
    risk: str = "high"
    id: str | None = None


class VerdictBody(BaseModel):
    model_config = ConfigDict(extra="forbid")
    decision: str
    rationale: str = ""
    accepted_rebuttals: list[int] = Field(default_factory=list)


class EvaluateBody(BaseModel):
    model_config = ConfigDict(extra="forbid")
    csv: str | None = None


def _principal(
    x_principal: str | None = Header(default=None, alias="X-Principal"),
) -> Principal:
    if x_principal is None or not x_principal.strip():
        raise PrincipalRequiredError(
            "mutating requests must assert X-Principal (id;role,role)"
        )
    return Principal.parse(x_principal)


def _event_dict(event) -> dict:
    return json.loads(event.to_json())


def _summary(store: EventStore, model: KnowledgeModel) -> dict:
    trail = store.registry.audit_trail(subject=f"{model.id}@")
    created_by = next(
        (e.actor for e in store.registry.mutation_events if e.model_id == model.id),
        "",
    )
    return {
        "id": model.id,
        "name": model.name,
        "version": model.version,
        "state": model.state.value,
        "content_hash": content_hash(model),
        "classes": len(model.classes),
        "relationships": len(model.relationships),
        "created_by": created_by,
        "last_rationale": trail[-1].rationale if trail else "",
    }


def _detail(model: KnowledgeModel) -> dict:
    return {
        "id": model.id,
        "version": model.version,
        "state": model.state.value,
        "content_hash": content_hash(model),
        "content": canonical_payload(model),
    }


def _resolution(body: ResolutionBody) -> Resolution:
    try:
        return Resolution(
            index=body.index,
            strategy=body.strategy,
            rationale=body.rationale,
            value=body.value,
            left_tag=body.left_tag,
            right_tag=body.right_tag,
        )
    except ValueError as exc:
        if isinstance(exc, OntoloopError):
            raise
        raise ValidationError(f"unknown merge strategy {body.strategy!r}") from None


def create_app(store: EventStore) -> FastAPI:
    app = FastAPI(title="ontoloop", docs_url=None, redoc_url=None)
    # The browser client is served as static files from a different
    # origin; the principal header must survive the preflight.
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["GET", "POST"],
        allow_headers=["content-type", "x-principal"],
    )

    @app.exception_handler(OntoloopError)
    async def _domain_error(request: Request, exc: OntoloopError):
        return JSONResponse(
            status_code=_STATUS.get(exc.code, 400),
            content={
                "code": exc.code,
                "message": str(exc),
                "path": request.url.path,
            },
        )

    @app.exception_handler(RequestValidationError)
    async def _invalid_request(request: Request, exc: RequestValidationError):
        errors = exc.errors()
        if errors:
            loc = ".".join(str(part) for part in errors[0].get("loc", ()))
            message = f"{loc}: {errors[0].get('msg', 'invalid')}"
        else:
            message = "invalid request"
        return JSONResponse(
            status_code=400,
            content={
                "code": "invalid-request",
                "message": message,
                "path": request.url.path,
            },
        )

    # -- models ------------------------------------------------------

    @app.get("/models")
    def list_models():
        models = [
            _summary(store, store.registry.get(model_id))
            for model_id in store.registry.model_ids()
        ]
        return {"models": models}

    @app.post("/models", status_code=201)
    def create_model(body: CreateModelBody, actor: Principal = Depends(_principal)):
        model = store.create_model(
            body.name,
            SourceRef(kind=body.source.kind, ref=body.source.ref),
            actor,
            model_id=body.id,
        )
        return _detail(model)

    @app.get("/models/{model_id}")
    def get_model(model_id: str, version: int | None = Query(default=None)):
        return _detail(store.registry.get(model_id, version))

    @app.post("/models/{model_id}/merge", status_code=201)
    def merge_model(
        model_id: str, body: MergeBody, actor: Principal = Depends(_principal)
    ):
        resolutions = tuple(_resolution(r) for r in body.resolutions)
        model = store.merge(
            model_id, body.other, actor, resolutions, merged_id=body.id
        )
        return _detail(model)

    @app.post("/models/{model_id}/transition")
    def transition_model(
        model_id: str, body: TransitionBody, actor: Principal = Depends(_principal)
    ):
        try:
            target = WorkflowState(body.target)
        except ValueError:
            raise ValidationError(
                f"unknown workflow state {body.target!r}"
            ) from None
        event, model = store.transition(model_id, target, actor, body.rationale)
        return {"event": _event_dict(event), "model": _detail(model)}

    @app.get("/models/{model_id}/audit")
    def model_audit(model_id: str):
        store.registry.get(model_id)
        events = store.registry.audit_trail(subject=f"{model_id}@")
        return {"events": [_event_dict(e) for e in events]}

    @app.get("/models/{model_id}/check")
    def check_model(
        model_id: str,
        target: str | None = Query(default=None),
        version: int | None = Query(default=None),
    ):
        model = store.registry.get(model_id, version)
        try:
            target_state = WorkflowState(target) if target else None
        except ValueError:
            raise ValidationError(f"unknown workflow state {target!r}") from None
        report = consistency_check(model, target_state)
        return {
            "ok": report.ok,
            "items": [
                {
                    "kind": i.kind,
                    "severity": i.severity,
                    "locator": i.locator,
                    "detail": i.detail,
                }
                for i in report.items
            ],
        }

    @app.get("/audit")
    def full_audit():
        return {"events": [_event_dict(e) for e in store.registry.audit_log.events]}

    @app.get("/models/{model_id}/export")
    def export_model(
        model_id: str,
        format: str = Query(),
        version: int | None = Query(default=None),
    ):
        model = store.registry.get(model_id, version)
        if format == "blueprint":
            return Response(export_blueprint(model), media_type="application/json")
        if format == "rdfxml":
            return Response(export_rdfxml(model), media_type="application/rdf+xml")
        raise ValidationError(
            f"unknown export format {format!r}; expected one of {IMPORT_FORMATS}"
        )

    @app.post("/import", status_code=201)
    def import_model(body: ImportBody, actor: Principal = Depends(_principal)):
        model, skipped = store.import_model(
            body.format, body.data, actor, model_id=body.id
        )
        return {
            "model": _detail(model),
            "skipped": [
                {"tag": s.tag, "where": s.where, "reason": s.reason} for s in skipped
            ],
        }

    # -- justifications ------------------------------------------------

    @app.post("/justifications", status_code=201)
    def compose(body: ComposeBody, actor: Principal = Depends(_principal)):
        evidence = tuple(
            EvidenceItem(
                id=e.id,
                statement=e.statement,
                source=SourceRef.parse(e.source),
                confidence=e.confidence,
            )
            for e in body.evidence
        )
        record = store.compose(
            body.intent,
            tuple(body.proposed_steps),
            evidence,
            risk=body.risk,
            created_by=actor.id,
            record_id=body.id,
        )
        return record_payload(record)

    @app.get("/justifications")
    def list_justifications(status: str | None = Query(default=None)):
        records = store.justifications(status)
        return {"justifications": [record_payload(r) for r in records]}

    @app.get("/justifications/{record_id}")
    def get_justification(record_id: str):
        return record_payload(store.justification(record_id))

    @app.post("/justifications/{record_id}/verdict")
    def judge(
        record_id: str, body: VerdictBody, actor: Principal = Depends(_principal)
    ):
        if body.decision == "record":
            verdict = None
        elif body.decision in ("approve", "reject"):
            verdict = Verdict(
                principal=actor,
                decision=body.decision,
                rationale=body.rationale,
                accepted_rebuttals=tuple(body.accepted_rebuttals),
            )
        else:
            raise ValidationError(
                f"unknown decision {body.decision!r}; "
                "expected approve, reject, or record"
            )
        result = store.verdict(record_id, verdict)
        return {
            "outcome": result.outcome.value,
            "enactment_permitted": result.enactment_permitted,
            "record": record_payload(result.record),
        }

    @app.get("/justifications/{record_id}/prov")
    def provenance(record_id: str):
        return export_provenance(store.justification(record_id))

    # -- evaluation ----------------------------------------------------

    @app.post("/evaluate")
    def evaluate(body: EvaluateBody):
        records = embedded_ratings() if body.csv is None else load_ratings(body.csv)
        report = emit_report(analyze(records))
        return {"text": report.text, "report": report.data}

    return app
