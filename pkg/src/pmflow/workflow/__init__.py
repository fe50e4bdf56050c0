"""Declarative analytic workflows over the toolkit's operators."""

from importlib import resources

from .artifacts import DEFAULT_FORMAT, FORMATS, conformance_summary, log_summary, performance_summary
from .engine import REPORT_NAME, Context, WorkflowFailed, artifact_suffix, execute, expansions, node_key, strip_timings
from .registry import KINDS, REGISTRY, REQUIRED, OperatorDescriptor, Param, Port, get_operator, register
from .spec import Diagnostic, Edge, NodeSpec, OutputSpec, WorkflowError, WorkflowSpec, parse_workflow, validate


def fixture_workflow(name):
    """Path of a shipped workflow document, e.g. ``fixture_workflow("case_study_1")``."""
    return resources.files("pmflow") / "data" / "workflows" / f"{name}.json"


__all__ = [
    "DEFAULT_FORMAT", "FORMATS", "conformance_summary", "log_summary", "performance_summary",
    "REPORT_NAME", "Context", "WorkflowFailed", "artifact_suffix", "execute", "expansions", "node_key", "strip_timings",
    "KINDS", "REGISTRY", "REQUIRED", "OperatorDescriptor", "Param", "Port", "get_operator", "register",
    "Diagnostic", "Edge", "NodeSpec", "OutputSpec", "WorkflowError", "WorkflowSpec", "parse_workflow", "validate",
    "fixture_workflow",
]
