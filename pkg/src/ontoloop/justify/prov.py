"""Provenance export for terminal decision records.

The document is a plain JSON tree of entities, activities and agents
with used / wasGeneratedBy / wasAssociatedWith links, so it maps term
for term onto standard provenance vocabularies. Exports are pure
functions of the record: same record, same bytes.
"""
from __future__ import annotations

import json

from ontoloop.errors import NonTerminalRecordError
from ontoloop.justify.records import JustificationRecord, JustificationStatus

PROV_FORMAT = "prov-tree-v1"

_GATE_ACTIVITY = {
    JustificationStatus.APPROVED: "approval",
    JustificationStatus.REJECTED: "rejection",
    JustificationStatus.RECORDED: "recording",
}


def export_provenance(record: JustificationRecord) -> dict:
    """Build the provenance tree for an approved/rejected/recorded record."""
    if not record.terminal:
        raise NonTerminalRecordError(
            f"record {record.id} is {record.status.value}; provenance is "
            "exported for terminal records only"
        )

    rid = record.id
    composition = f"activity:composition:{rid}"
    gate_kind = _GATE_ACTIVITY[record.status]
    gate = f"activity:{gate_kind}:{rid}"
    claim_entity = f"entity:claim:{rid}"
    software_agent = f"agent:{record.created_by}"

    entities = [
        {
            "id": claim_entity,
            "kind": "claim",
            "text": record.claim,
        }
    ]
    for ref in sorted(record.grounds):
        item = record.evidence_by_id(ref)
        entities.append(
            {
                "id": f"entity:evidence:{ref}",
                "kind": "evidence",
                "statement": item.statement,
                "source": str(item.source),
                "confidence": item.confidence,
            }
        )

    activities = [
        {"id": composition, "kind": "composition"},
        {"id": gate, "kind": gate_kind},
    ]
    enacts = record.status in (
        JustificationStatus.APPROVED,
        JustificationStatus.RECORDED,
    )
    if enacts:
        activities.append({"id": f"activity:enactment:{rid}", "kind": "enactment"})

    agents = [{"id": software_agent, "kind": "software"}]
    if record.decided_by is not None:
        agents.append({"id": f"agent:{record.decided_by}", "kind": "human"})

    used = [[composition, f"entity:evidence:{ref}"] for ref in sorted(record.grounds)]
    generated = [[claim_entity, composition]]
    associated = [[composition, software_agent]]
    if record.decided_by is not None:
        associated.append([gate, f"agent:{record.decided_by}"])
    else:
        associated.append([gate, software_agent])
    if enacts:
        associated.append([f"activity:enactment:{rid}", software_agent])

    return {
        "format": PROV_FORMAT,
        "record": rid,
        "status": record.status.value,
        "risk": record.risk.value,
        "entities": entities,
        "activities": activities,
        "agents": agents,
        "used": used,
        "wasGeneratedBy": generated,
        "wasAssociatedWith": associated,
    }


def provenance_json(record: JustificationRecord) -> str:
    return json.dumps(
        export_provenance(record), sort_keys=True, indent=2, ensure_ascii=False
    ) + "\n"
