"""RDF/XML exchange: OWL-flavoured export and annotation-preserving import.

Mapping: entity classes become ``owl:Class`` nodes (definitions as
``rdfs:comment``), class properties become ``owl:DatatypeProperty``
declarations with an XSD range, exemplars become named individuals
(typed members for archetypical and atypical, explicit non-members for
exotypical), and each relationship is asserted as an ``owl:Axiom`` with
the provenance attached as custom annotations. Everything the plain OWL
vocabulary cannot say (exemplar kind, rationale, raw identifiers) lives
in a dedicated annotation namespace.

Resource IRIs are derived from content (model name plus element id,
percent-encoded), never from runtime identities, so equal content always
exports byte-identical documents. The serializer is hand-rolled for
exactly that reason; parsing uses the standard library.
"""
from __future__ import annotations

import xml.etree.ElementTree as ET
from dataclasses import dataclass
from urllib.parse import quote
from xml.sax.saxutils import escape

from ontoloop.errors import (
    DuplicateIdError,
    MalformedXmlError,
    SerializationError,
)
from ontoloop.knowledge.model import (
    EntityClass,
    Exemplar,
    ExemplarKind,
    KnowledgeModel,
    ModelRef,
    PropertySpec,
    Relationship,
    RelationshipObject,
    SourceRef,
    ValueType,
    mint_id,
)

RDF_NS = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RDFS_NS = "http://www.w3.org/2000/01/rdf-schema#"
OWL_NS = "http://www.w3.org/2002/07/owl#"
KX_NS = "urn:x-knowledge-exchange:vocab#"

_XSD = "http://www.w3.org/2001/XMLSchema#"
_TYPE_TO_XSD = {
    ValueType.STRING: _XSD + "string",
    ValueType.INTEGER: _XSD + "integer",
    ValueType.FLOAT: _XSD + "double",
    ValueType.BOOLEAN: _XSD + "boolean",
    ValueType.DATETIME: _XSD + "dateTime",
}
_XSD_TO_TYPE = {v: k for k, v in _TYPE_TO_XSD.items()}


def _enc(text: str) -> str:
    return quote(text, safe="")


def _model_iri(name: str) -> str:
    return f"urn:kx:m:{_enc(name)}"


def _class_iri(name: str, class_id: str) -> str:
    return f"urn:kx:c:{_enc(name)}:{_enc(class_id)}"


def _property_iri(name: str, class_id: str, prop: str) -> str:
    return f"urn:kx:p:{_enc(name)}:{_enc(class_id)}:{_enc(prop)}"


def _exemplar_iri(name: str, class_id: str, index: int) -> str:
    return f"urn:kx:i:{_enc(name)}:{_enc(class_id)}:{index}"


def _predicate_iri(name: str, predicate: str, kind: str) -> str:
    marker = "r" if kind == "class" else "d"
    return f"urn:kx:{marker}:{_enc(name)}:{_enc(predicate)}"


def export_rdfxml(model: KnowledgeModel) -> bytes:
    """Serialize a model to deterministic RDF/XML bytes.

    Requires a referentially closed graph: every relationship endpoint
    must resolve to a declared class.
    """
    class_ids = model.class_ids()
    for rel in model.relationships:
        if rel.subject not in class_ids:
            raise SerializationError(
                f"relationship subject {rel.subject!r} is not a declared class"
            )
        if rel.object.kind == "class" and rel.object.ref not in class_ids:
            raise SerializationError(
                f"relationship object {rel.object.ref!r} is not a declared class"
            )

    name = model.name
    out: list[str] = []
    out.append('<?xml version="1.0" encoding="UTF-8"?>')
    out.append(
        "<rdf:RDF"
        f'\n    xmlns:rdf="{RDF_NS}"'
        f'\n    xmlns:rdfs="{RDFS_NS}"'
        f'\n    xmlns:owl="{OWL_NS}"'
        f'\n    xmlns:kx="{KX_NS}">'
    )

    out.append(f'  <owl:Ontology rdf:about="{_model_iri(name)}">')
    out.append(f"    <rdfs:label>{escape(name)}</rdfs:label>")
    out.append(f"    <kx:sourceKind>{escape(model.source.kind)}</kx:sourceKind>")
    out.append(f"    <kx:sourceRef>{escape(model.source.ref)}</kx:sourceRef>")
    for parent in sorted(model.parents, key=lambda p: (p.model_id, p.version)):
        out.append(f"    <kx:parent>{escape(str(parent))}</kx:parent>")
    out.append("  </owl:Ontology>")

    for cls in model.sorted_classes():
        ciri = _class_iri(name, cls.id)
        out.append(f'  <owl:Class rdf:about="{ciri}">')
        out.append(f"    <kx:classId>{escape(cls.id)}</kx:classId>")
        out.append(f"    <rdfs:label>{escape(cls.label)}</rdfs:label>")
        if cls.definition is not None:
            out.append(f"    <rdfs:comment>{escape(cls.definition)}</rdfs:comment>")
        out.append("  </owl:Class>")
        for prop in cls.properties:
            out.append(
                f'  <owl:DatatypeProperty rdf:about="{_property_iri(name, cls.id, prop.name)}">'
            )
            out.append(f"    <kx:propertyName>{escape(prop.name)}</kx:propertyName>")
            out.append(f'    <rdfs:domain rdf:resource="{ciri}"/>')
            out.append(
                f'    <rdfs:range rdf:resource="{_TYPE_TO_XSD[prop.value_type]}"/>'
            )
            if prop.example is not None:
                out.append(
                    f"    <kx:exampleValue>{escape(prop.example)}</kx:exampleValue>"
                )
            out.append("  </owl:DatatypeProperty>")
        for index, ex in enumerate(cls.exemplars):
            out.append(
                f'  <owl:NamedIndividual rdf:about="{_exemplar_iri(name, cls.id, index)}">'
            )
            if ex.is_member:
                out.append(f'    <rdf:type rdf:resource="{ciri}"/>')
            out.append(f'    <kx:exemplarOf rdf:resource="{ciri}"/>')
            out.append(f"    <kx:exemplarKind>{ex.kind.value}</kx:exemplarKind>")
            if not ex.is_member:
                out.append(
                    f'    <kx:nonMember rdf:datatype="{_XSD}boolean">true</kx:nonMember>'
                )
            out.append(f"    <rdfs:label>{escape(ex.label)}</rdfs:label>")
            for attr in ex.properties:
                out.append(f"    <kx:attribute>{escape(attr)}</kx:attribute>")
            out.append(f"    <kx:rationale>{escape(ex.rationale)}</kx:rationale>")
            out.append("  </owl:NamedIndividual>")

    relationships = model.sorted_relationships()
    declared: list[tuple[str, str]] = []
    for rel in relationships:
        entry = (rel.object.kind, rel.predicate)
        if entry not in declared:
            declared.append(entry)
    for obj_kind, predicate in sorted(declared):
        piri = _predicate_iri(name, predicate, obj_kind)
        element = "owl:ObjectProperty" if obj_kind == "class" else "owl:DatatypeProperty"
        out.append(f'  <{element} rdf:about="{piri}">')
        out.append(f"    <kx:predicateName>{escape(predicate)}</kx:predicateName>")
        out.append(f"  </{element}>")

    for rel in relationships:
        out.append("  <owl:Axiom>")
        out.append(f'    <owl:annotatedSource rdf:resource="{_class_iri(name, rel.subject)}"/>')
        out.append(
            '    <owl:annotatedProperty '
            f'rdf:resource="{_predicate_iri(name, rel.predicate, rel.object.kind)}"/>'
        )
        if rel.object.kind == "class":
            out.append(
                f'    <owl:annotatedTarget rdf:resource="{_class_iri(name, rel.object.ref)}"/>'
            )
        else:
            datatype = _TYPE_TO_XSD[rel.object.value_type]
            out.append(
                f'    <owl:annotatedTarget rdf:datatype="{datatype}">'
                f"{escape(rel.object.value)}</owl:annotatedTarget>"
            )
        out.append(f"    <kx:sourceKind>{escape(rel.source.kind)}</kx:sourceKind>")
        out.append(f"    <kx:sourceRef>{escape(rel.source.ref)}</kx:sourceRef>")
        out.append("  </owl:Axiom>")

    out.append("</rdf:RDF>")
    return ("\n".join(out) + "\n").encode("utf-8")


@dataclass(frozen=True)
class SkippedConstruct:
    tag: str
    where: str
    reason: str


@dataclass(frozen=True)
class RdfImportResult:
    model: KnowledgeModel
    skipped: tuple[SkippedConstruct, ...]


def _tag(qname: str) -> tuple[str, str]:
    if qname.startswith("{"):
        ns, _, local = qname[1:].partition("}")
        return ns, local
    return "", qname


def _byte_offset(data: bytes, line: int, column: int) -> int:
    lines = data.split(b"\n")
    return sum(len(l) + 1 for l in lines[: line - 1]) + column


def _text(elem: ET.Element) -> str:
    return elem.text or ""


class _Importer:
    def __init__(self, data: bytes):
        self.data = data
        self.skipped: list[SkippedConstruct] = []
        self.name: str | None = None
        self.source: SourceRef | None = None
        self.parents: list[ModelRef] = []
        self.class_order: list[str] = []
        self.class_shells: dict[str, dict] = {}
        self.class_iris: dict[str, str] = {}
        self.predicates: dict[str, str] = {}
        self.relationships: list[Relationship] = []

    def skip(self, tag: str, where: str, reason: str) -> None:
        self.skipped.append(SkippedConstruct(tag=tag, where=where, reason=reason))

    def _child_map(self, elem: ET.Element, known: set[tuple[str, str]], where: str) -> dict:
        found: dict[tuple[str, str], list[ET.Element]] = {}
        for child in elem:
            key = _tag(child.tag)
            if key in known:
                found.setdefault(key, []).append(child)
            else:
                self.skip(child.tag, where, "unrecognized annotation")
        return found

    def handle_ontology(self, elem: ET.Element) -> None:
        known = {
            (RDFS_NS, "label"),
            (KX_NS, "sourceKind"),
            (KX_NS, "sourceRef"),
            (KX_NS, "parent"),
        }
        children = self._child_map(elem, known, "owl:Ontology")
        labels = children.get((RDFS_NS, "label"), [])
        kinds = children.get((KX_NS, "sourceKind"), [])
        refs = children.get((KX_NS, "sourceRef"), [])
        if not labels or not kinds or not refs:
            raise SerializationError("ontology header lacks label or source annotations")
        self.name = _text(labels[0])
        self.source = SourceRef(kind=_text(kinds[0]), ref=_text(refs[0]))
        for parent in children.get((KX_NS, "parent"), []):
            raw = _text(parent)
            model_id, _, version = raw.rpartition("@")
            try:
                self.parents.append(ModelRef(model_id=model_id, version=int(version)))
            except (ValueError, TypeError):
                raise SerializationError(f"malformed parent reference {raw!r}") from None

    def handle_class(self, elem: ET.Element) -> None:
        iri = elem.get(f"{{{RDF_NS}}}about")
        known = {(KX_NS, "classId"), (RDFS_NS, "label"), (RDFS_NS, "comment")}
        children = self._child_map(elem, known, f"owl:Class {iri}")
        ids = children.get((KX_NS, "classId"), [])
        labels = children.get((RDFS_NS, "label"), [])
        if not ids or not labels or iri is None:
            self.skip("owl:Class", iri or "<no iri>", "missing classId or label")
            return
        class_id = _text(ids[0])
        if class_id in self.class_shells:
            raise DuplicateIdError(f"document declares class {class_id!r} twice")
        comments = children.get((RDFS_NS, "comment"), [])
        self.class_order.append(class_id)
        self.class_shells[class_id] = {
            "label": _text(labels[0]),
            "definition": _text(comments[0]) if comments else None,
            "properties": [],
            "exemplars": [],
        }
        self.class_iris[iri] = class_id

    def handle_datatype_property(self, elem: ET.Element) -> None:
        iri = elem.get(f"{{{RDF_NS}}}about")
        by_key: dict[tuple[str, str], list[ET.Element]] = {}
        for child in elem:
            by_key.setdefault(_tag(child.tag), []).append(child)
        if (KX_NS, "predicateName") in by_key:
            if iri is not None:
                self.predicates[iri] = _text(by_key[(KX_NS, "predicateName")][0])
            return
        prop_names = by_key.get((KX_NS, "propertyName"))
        domains = by_key.get((RDFS_NS, "domain"))
        ranges = by_key.get((RDFS_NS, "range"))
        if not prop_names or not domains or not ranges:
            self.skip("owl:DatatypeProperty", iri or "<no iri>", "not a class property")
            return
        domain_iri = domains[0].get(f"{{{RDF_NS}}}resource")
        class_id = self.class_iris.get(domain_iri or "")
        if class_id is None:
            self.skip("owl:DatatypeProperty", iri or "<no iri>", "unknown domain class")
            return
        range_iri = ranges[0].get(f"{{{RDF_NS}}}resource") or ""
        value_type = _XSD_TO_TYPE.get(range_iri)
        if value_type is None:
            self.skip("owl:DatatypeProperty", iri or "<no iri>", f"unknown range {range_iri!r}")
            return
        examples = by_key.get((KX_NS, "exampleValue"))
        self.class_shells[class_id]["properties"].append(
            PropertySpec(
                name=_text(prop_names[0]),
                value_type=value_type,
                example=_text(examples[0]) if examples else None,
            )
        )

    def handle_object_property(self, elem: ET.Element) -> None:
        iri = elem.get(f"{{{RDF_NS}}}about")
        for child in elem:
            if _tag(child.tag) == (KX_NS, "predicateName") and iri is not None:
                self.predicates[iri] = _text(child)
                return
        self.skip("owl:ObjectProperty", iri or "<no iri>", "no predicate name annotation")

    def handle_individual(self, elem: ET.Element) -> None:
        iri = elem.get(f"{{{RDF_NS}}}about")
        known = {
            (RDF_NS, "type"),
            (KX_NS, "exemplarOf"),
            (KX_NS, "exemplarKind"),
            (KX_NS, "nonMember"),
            (RDFS_NS, "label"),
            (KX_NS, "attribute"),
            (KX_NS, "rationale"),
        }
        children = self._child_map(elem, known, f"owl:NamedIndividual {iri}")
        of = children.get((KX_NS, "exemplarOf"), [])
        kinds = children.get((KX_NS, "exemplarKind"), [])
        labels = children.get((RDFS_NS, "label"), [])
        rationales = children.get((KX_NS, "rationale"), [])
        if not of or not kinds or not labels or not rationales:
            self.skip("owl:NamedIndividual", iri or "<no iri>", "not an exemplar")
            return
        class_id = self.class_iris.get(of[0].get(f"{{{RDF_NS}}}resource") or "")
        if class_id is None:
            self.skip("owl:NamedIndividual", iri or "<no iri>", "unknown exemplar class")
            return
        try:
            kind = ExemplarKind(_text(kinds[0]))
        except ValueError:
            self.skip("owl:NamedIndividual", iri or "<no iri>", "unknown exemplar kind")
            return
        self.class_shells[class_id]["exemplars"].append(
            Exemplar(
                kind=kind,
                label=_text(labels[0]),
                properties=tuple(_text(a) for a in children.get((KX_NS, "attribute"), [])),
                rationale=_text(rationales[0]),
            )
        )

    def handle_axiom(self, elem: ET.Element) -> None:
        by_key: dict[tuple[str, str], list[ET.Element]] = {}
        for child in elem:
            by_key.setdefault(_tag(child.tag), []).append(child)
        sources = by_key.get((OWL_NS, "annotatedSource"))
        props = by_key.get((OWL_NS, "annotatedProperty"))
        targets = by_key.get((OWL_NS, "annotatedTarget"))
        src_kinds = by_key.get((KX_NS, "sourceKind"))
        src_refs = by_key.get((KX_NS, "sourceRef"))
        if not sources or not props or not targets or not src_kinds or not src_refs:
            self.skip("owl:Axiom", "<axiom>", "incomplete relationship annotation")
            return
        subject = self.class_iris.get(sources[0].get(f"{{{RDF_NS}}}resource") or "")
        if subject is None:
            raise SerializationError("axiom references an undeclared subject class")
        predicate = self.predicates.get(props[0].get(f"{{{RDF_NS}}}resource") or "")
        if predicate is None:
            self.skip("owl:Axiom", "<axiom>", "undeclared predicate")
            return
        target = targets[0]
        resource = target.get(f"{{{RDF_NS}}}resource")
        if resource is not None:
            object_id = self.class_iris.get(resource)
            if object_id is None:
                raise SerializationError("axiom references an undeclared object class")
            obj = RelationshipObject.to_class(object_id)
        else:
            datatype = target.get(f"{{{RDF_NS}}}datatype") or ""
            value_type = _XSD_TO_TYPE.get(datatype)
            if value_type is None:
                self.skip("owl:Axiom", "<axiom>", f"unknown literal datatype {datatype!r}")
                return
            obj = RelationshipObject.to_literal(_text(target), value_type)
        self.relationships.append(
            Relationship(
                subject=subject,
                predicate=predicate,
                object=obj,
                source=SourceRef(kind=_text(src_kinds[0]), ref=_text(src_refs[0])),
            )
        )

    def run(self, model_id: str) -> RdfImportResult:
        try:
            root = ET.fromstring(self.data)
        except ET.ParseError as exc:
            line, column = exc.position
            raise MalformedXmlError(
                f"not well-formed XML: {exc.msg.split(':')[0]}",
                offset=_byte_offset(self.data, line, column),
            ) from None
        if _tag(root.tag) != (RDF_NS, "RDF"):
            raise SerializationError(f"root element is {root.tag!r}, expected rdf:RDF")

        handlers = {
            (OWL_NS, "Ontology"): self.handle_ontology,
            (OWL_NS, "Class"): self.handle_class,
            (OWL_NS, "DatatypeProperty"): self.handle_datatype_property,
            (OWL_NS, "ObjectProperty"): self.handle_object_property,
            (OWL_NS, "NamedIndividual"): self.handle_individual,
            (OWL_NS, "Axiom"): self.handle_axiom,
        }
        for position, elem in enumerate(root):
            handler = handlers.get(_tag(elem.tag))
            if handler is None:
                self.skip(elem.tag, f"rdf:RDF child {position}", "unknown construct")
                continue
            handler(elem)

        if self.name is None or self.source is None:
            raise SerializationError("document lacks an ontology header")

        classes = tuple(
            EntityClass(
                id=class_id,
                label=shell["label"],
                definition=shell["definition"],
                properties=tuple(shell["properties"]),
                exemplars=tuple(shell["exemplars"]),
            )
            for class_id, shell in ((cid, self.class_shells[cid]) for cid in self.class_order)
        )
        model = KnowledgeModel(
            id=model_id,
            name=self.name,
            source=self.source,
            classes=classes,
            relationships=tuple(self.relationships),
            parents=tuple(self.parents),
        )
        return RdfImportResult(model=model, skipped=tuple(self.skipped))


def import_rdfxml(data: bytes | str, *, model_id: str | None = None) -> RdfImportResult:
    """Parse RDF/XML into a fresh Draft model plus a skipped-constructs report.

    Raises MalformedXmlError (with byte offset) when the XML itself is
    broken; unknown but well-formed constructs are skipped, not fatal.
    """
    if isinstance(data, str):
        data = data.encode("utf-8")
    return _Importer(data).run(model_id or mint_id())
