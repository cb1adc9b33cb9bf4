"""Command line for the store: import, export, merge, check, transition,
justify, evaluate, serve.

Every non-serve command is non-interactive: plain lines on stdout,
single-line diagnostics on stderr, nonzero exit on failure. Unresolved
merge conflicts exit 2 with one line per conflict so scripts can tell
"needs a human" from "broken input".
"""
from __future__ import annotations

import json
import sys
from contextlib import contextmanager
from pathlib import Path

import click

from ontoloop.errors import OntoloopError, UncoveredConflictError
from ontoloop.evalstats import analyze, embedded_ratings, emit_report, load_ratings
from ontoloop.exchange import export_blueprint, export_rdfxml
from ontoloop.justify import EvidenceItem
from ontoloop.knowledge.merge import Resolution, detect_conflicts
from ontoloop.knowledge.model import SourceRef, WorkflowState
from ontoloop.service.serialize import record_payload
from ontoloop.service.store import EventStore
from ontoloop.workflow.consistency import consistency_check
from ontoloop.workflow.principals import Principal

_data_dir_option = click.option(
    "--data-dir",
    default="ontoloop-data",
    show_default=True,
    help="Event store directory; created on first use.",
)
_as_option = click.option(
    "--as",
    "as_principal",
    default="cli",
    show_default=True,
    help="Acting principal, wire form id;role,role.",
)


@contextmanager
def _reporting_errors(store: EventStore | None = None):
    """Map domain failures to exit codes: conflicts 2, anything else 1."""
    try:
        yield
    except UncoveredConflictError as exc:
        click.echo(f"error: {exc}", err=True)
        raise SystemExit(2) from None
    except OntoloopError as exc:
        click.echo(f"error: {exc}", err=True)
        raise SystemExit(1) from None


@click.group()
def main():
    """Knowledge model store: curation, justification, evaluation."""


@main.command("import")
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("--format", "fmt", type=click.Choice(["rdfxml", "blueprint"]), required=True)
@click.option("--id", "model_id", default=None, help="Model id to assign.")
@_as_option
@_data_dir_option
def import_(path, fmt, model_id, as_principal, data_dir):
    """Import an exchange document as a new model."""
    with _reporting_errors():
        store = EventStore(data_dir)
        actor = Principal.parse(as_principal)
        data = Path(path).read_bytes()
        model, skipped = store.import_model(fmt, data, actor, model_id=model_id)
        for item in skipped:
            click.echo(f"skipped {item.tag} at {item.where}: {item.reason}", err=True)
        click.echo(
            f"imported {model.id} version {model.version} "
            f"({len(model.classes)} classes, {len(model.relationships)} relationships)"
        )


@main.command()
@click.argument("model_id")
@click.option("--format", "fmt", type=click.Choice(["rdfxml", "blueprint"]), required=True)
@click.option("--version", type=int, default=None, help="Version to export; latest if omitted.")
@click.option("--output", "-o", type=click.Path(dir_okay=False), default=None)
@_data_dir_option
def export(model_id, fmt, version, output, data_dir):
    """Write one model version as rdfxml or blueprint."""
    with _reporting_errors():
        store = EventStore(data_dir)
        model = store.registry.get(model_id, version)
        if fmt == "blueprint":
            payload = export_blueprint(model).encode("utf-8")
        else:
            payload = export_rdfxml(model)
        if output is None:
            sys.stdout.buffer.write(payload)
            sys.stdout.buffer.flush()
        else:
            Path(output).write_bytes(payload)


@main.command()
@click.argument("a_id")
@click.argument("b_id")
@click.option("--resolutions", "resolutions_path", type=click.Path(exists=True, dir_okay=False), default=None, help="JSON array of conflict resolutions.")
@click.option("--id", "merged_id", default=None, help="Id for the merged model.")
@_as_option
@_data_dir_option
def merge(a_id, b_id, resolutions_path, merged_id, as_principal, data_dir):
    """Merge two models; exit 2 listing any unresolved conflicts."""
    with _reporting_errors():
        store = EventStore(data_dir)
        actor = Principal.parse(as_principal)
        resolutions = ()
        if resolutions_path is not None:
            raw = json.loads(Path(resolutions_path).read_text("utf-8"))
            resolutions = tuple(Resolution(**entry) for entry in raw)
        try:
            model = store.merge(a_id, b_id, actor, resolutions, merged_id=merged_id)
        except UncoveredConflictError as exc:
            click.echo(f"error: {exc}", err=True)
            report = detect_conflicts(
                store.registry.get(a_id), store.registry.get(b_id)
            )
            for conflict in report.conflicts:
                if conflict.index in exc.uncovered:
                    click.echo(
                        f"  [{conflict.index}] {conflict.element} {conflict.key}: "
                        f"{conflict.kind.value} - {conflict.detail}",
                        err=True,
                    )
            raise SystemExit(2) from None
        click.echo(f"merged into {model.id} version {model.version}")


@main.command()
@click.argument("model_id")
@click.option("--version", type=int, default=None)
@click.option("--target", default=None, help="Workflow state setting the completeness bar.")
@_data_dir_option
def check(model_id, version, target, data_dir):
    """Run the consistency report; exit 1 if it has errors."""
    with _reporting_errors():
        store = EventStore(data_dir)
        model = store.registry.get(model_id, version)
        target_state = WorkflowState(target) if target else None
        report = consistency_check(model, target_state)
        for item in report.items:
            click.echo(f"{item.severity} {item.locator} {item.kind}: {item.detail}")
        if report.ok:
            click.echo(
                f"ok: {len(report.items)} warning(s), 0 errors"
                if report.items
                else "ok"
            )
        else:
            click.echo(f"error: {len(report.errors)} consistency error(s)", err=True)
            raise SystemExit(1)


@main.command()
@click.argument("model_id")
@click.argument("target")
@click.option("--rationale", required=True)
@_as_option
@_data_dir_option
def transition(model_id, target, rationale, as_principal, data_dir):
    """Move a model to a new workflow state."""
    with _reporting_errors():
        store = EventStore(data_dir)
        actor = Principal.parse(as_principal)
        try:
            state = WorkflowState(target)
        except ValueError:
            click.echo(f"error: unknown workflow state {target!r}", err=True)
            raise SystemExit(1) from None
        event, model = store.transition(model_id, state, actor, rationale)
        click.echo(f"{model.id} version {model.version} is now {model.state.value}")


@main.command()
@click.option("--intent", required=True)
@click.option("--step", "steps", multiple=True, required=True, help="Proposed step; repeatable.")
@click.option("--evidence-file", type=click.Path(exists=True, dir_okay=False), default=None, help="JSON array: id, statement, source, confidence.")
@click.option("--risk", type=click.Choice(["low", "high"]), default="high", show_default=True)
@click.option("--id", "record_id", default=None)
@click.option("--decide", type=click.Choice(["approve", "reject", "record"]), default=None, help="Apply a verdict immediately after composing.")
@click.option("--rationale", default="", help="Verdict rationale when deciding.")
@_as_option
@_data_dir_option
def justify(intent, steps, evidence_file, risk, record_id, decide, rationale, as_principal, data_dir):
    """Compose a structured decision record, optionally deciding it."""
    with _reporting_errors():
        store = EventStore(data_dir)
        actor = Principal.parse(as_principal)
        evidence = ()
        if evidence_file is not None:
            raw = json.loads(Path(evidence_file).read_text("utf-8"))
            evidence = tuple(
                EvidenceItem(
                    id=entry["id"],
                    statement=entry["statement"],
                    source=SourceRef.parse(entry["source"]),
                    confidence=entry["confidence"],
                )
                for entry in raw
            )
        record = store.compose(
            intent, tuple(steps), evidence,
            risk=risk, created_by=actor.id, record_id=record_id,
        )
        if decide is not None:
            from ontoloop.justify import Verdict

            verdict = None
            if decide != "record":
                verdict = Verdict(
                    principal=actor, decision=decide, rationale=rationale
                )
            result = store.verdict(record.id, verdict)
            record = result.record
        click.echo(json.dumps(record_payload(record), indent=2, sort_keys=True))


@main.command()
@click.option("--ratings", required=True, help="'embedded' or a path to a ratings CSV.")
@click.option("--json", "as_json", is_flag=True, help="Emit the JSON report instead of text.")
def evaluate(ratings, as_json):
    """Reproduce the full ratings analysis from a CSV."""
    with _reporting_errors():
        if ratings == "embedded":
            records = embedded_ratings()
        else:
            source = Path(ratings)
            if not source.exists():
                click.echo(f"error: no ratings file at {ratings}", err=True)
                raise SystemExit(1)
            records = load_ratings(source.read_text("utf-8"))
        report = emit_report(analyze(records))
        click.echo(report.to_json() if as_json else report.text)


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8321, show_default=True)
@_data_dir_option
def serve(host, port, data_dir):
    """Serve the HTTP API over the given event store."""
    import uvicorn

    from ontoloop.service.api import create_app

    with _reporting_errors():
        store = EventStore(data_dir)
    uvicorn.run(create_app(store), host=host, port=port, log_level="info")


if __name__ == "__main__":
    main()
