"""Alignment-based conformance checking."""

from .alignment import (
    DEFAULT_MAX_STATES,
    Alignment,
    AlignmentBudgetExceeded,
    AlignmentError,
    ModelCannotTerminate,
    Move,
    MoveCosts,
    align_trace,
)
from .projection import COLORS, NetMismatchError, ProjectedStep, ProjectedVariant, format_log_projection, project_on_log, project_on_model
from .result import (
    AlignmentChecker,
    ConformanceResult,
    VariantAlignment,
    align_log,
    assemble_result,
    export_log_moves,
    export_transition_counters,
    export_variant_costs,
    transition_rows,
)

__all__ = [
    "DEFAULT_MAX_STATES", "Alignment", "AlignmentBudgetExceeded", "AlignmentError", "ModelCannotTerminate",
    "Move", "MoveCosts", "align_trace",
    "COLORS", "NetMismatchError", "ProjectedStep", "ProjectedVariant", "format_log_projection",
    "project_on_log", "project_on_model",
    "AlignmentChecker", "ConformanceResult", "VariantAlignment", "align_log", "assemble_result",
    "export_log_moves", "export_transition_counters", "export_variant_costs", "transition_rows",
]
