"""The 12-step enhancement pipeline and its generator doubles."""
from ontoloop.pipeline.engine import (
    GENERATOR_STEPS,
    STEP_TITLES,
    EnhancementGenerator,
    EnhancementRun,
    ImplicitProposal,
    RunCheckpoint,
    SourceDocument,
    StepRecord,
    build_candidate,
    finalize_run,
    identify_implicit_classes,
    run_enhancement,
)
from ontoloop.pipeline.mock import CountingGenerator, MockEnhancer

__all__ = [
    "GENERATOR_STEPS",
    "STEP_TITLES",
    "CountingGenerator",
    "EnhancementGenerator",
    "EnhancementRun",
    "ImplicitProposal",
    "MockEnhancer",
    "RunCheckpoint",
    "SourceDocument",
    "StepRecord",
    "build_candidate",
    "finalize_run",
    "identify_implicit_classes",
    "run_enhancement",
]
