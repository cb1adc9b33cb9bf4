"""Lossless exchange formats: blueprint JSON and RDF/XML."""
from ontoloop.exchange.blueprint import (
    BLUEPRINT_FORMAT_VERSION,
    export_blueprint,
    import_blueprint,
)
from ontoloop.exchange.rdfxml import (
    RdfImportResult,
    SkippedConstruct,
    export_rdfxml,
    import_rdfxml,
)

__all__ = [
    "BLUEPRINT_FORMAT_VERSION",
    "export_blueprint",
    "import_blueprint",
    "RdfImportResult",
    "SkippedConstruct",
    "export_rdfxml",
    "import_rdfxml",
]
