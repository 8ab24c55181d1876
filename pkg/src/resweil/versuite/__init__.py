from .dsl import Case, parse_case, parse_poly, render_case
from .verify import (
    CheckOutcome,
    ComponentData,
    Report,
    ambient_degree,
    compute_components,
    verify_case,
    verify_lemma_local,
    verify_theorem,
)
from .suite import SuiteResult, run_suite
from .cli import main

__all__ = [
    "Case",
    "CheckOutcome",
    "ComponentData",
    "Report",
    "SuiteResult",
    "ambient_degree",
    "compute_components",
    "main",
    "parse_case",
    "parse_poly",
    "render_case",
    "run_suite",
    "verify_case",
    "verify_lemma_local",
    "verify_theorem",
]
