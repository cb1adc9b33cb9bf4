"""Inspectable knowledge-orchestration loop.

Subpackages:
    knowledge  versioned knowledge models and their content identity
    workflow   review states, role checks, audit log, replay
    exchange   blueprint and RDF/XML import and export, provenance
    justify    argued decisions, the approval gate, claim scoring
    context    the prompt-context ladder and super prompts
    pipeline   the twelve-step enhancement run
    evalstats  exact paired statistics and the embedded ratings study
    service    event-sourced store, HTTP API, command line
"""
from __future__ import annotations

__version__ = "0.1.0"
