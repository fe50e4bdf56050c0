"""Operators available to workflows, with typed ports and parameters."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

REQUIRED = object()

KINDS = (
    "event_log", "petri_net", "process_tree", "heuristics_net", "social_network", "dfg",
    "conformance_result", "performance_annotation",
)


@dataclass(frozen=True)
class Param:
    kind: str  # str, path, float, int, bool
    default: object = None
    minimum: float | None = None
    maximum: float | None = None
    choices: tuple | None = None
    nullable: bool = False

    @property
    def required(self):
        return self.default is REQUIRED

    def check(self, value):
        """Return an error message for ``value``, or None when it is acceptable."""
        if value is None:
            return None if (self.nullable or self.default is None) and not self.required else "value required"
        if self.kind in ("str", "path"):
            ok = isinstance(value, str)
        elif self.kind == "float":
            ok = isinstance(value, (int, float)) and not isinstance(value, bool)
        elif self.kind == "int":
            ok = isinstance(value, int) and not isinstance(value, bool)
        elif self.kind == "bool":
            ok = isinstance(value, bool)
        else:
            ok = False
        if not ok:
            return f"expected {self.kind}, got {type(value).__name__}"
        if self.kind in ("float", "int"):
            if isinstance(value, float) and math.isnan(value):
                return "NaN not allowed"
            if self.minimum is not None and value < self.minimum:
                return f"must be >= {self.minimum}"
            if self.maximum is not None and value > self.maximum:
                return f"must be <= {self.maximum}"
        if self.choices is not None and value not in self.choices:
            return f"must be one of {list(self.choices)}"
        return None


@dataclass(frozen=True)
class Port:
    name: str
    kind: str
    optional: bool = False


@dataclass(frozen=True)
class OperatorDescriptor:
    name: str
    inputs: tuple
    outputs: tuple
    params: dict
    run: object = field(compare=False, repr=False)
    doc: str = ""

    def __post_init__(self):
        names = [p.name for p in self.inputs]
        if len(set(names)) != len(names) or len({p.name for p in self.outputs}) != len(self.outputs):
            raise ValueError(f"operator {self.name}: duplicate port names")
        for p in self.inputs + self.outputs:
            if p.kind not in KINDS:
                raise ValueError(f"operator {self.name}: unknown port kind {p.kind!r}")

    def input(self, name):
        return next((p for p in self.inputs if p.name == name), None)

    def output(self, name):
        return next((p for p in self.outputs if p.name == name), None)


REGISTRY: dict = {}


def register(name, inputs=(), outputs=(), params=None, doc=""):
    def wrap(fn):
        if name in REGISTRY:
            raise ValueError(f"operator {name!r} registered twice")
        REGISTRY[name] = OperatorDescriptor(
            name,
            tuple(Port(*p) if not isinstance(p, Port) else p for p in inputs),
            tuple(Port(*p) if not isinstance(p, Port) else p for p in outputs),
            dict(params or {}),
            fn,
            doc or (fn.__doc__ or "").strip(),
        )
        return fn

    return wrap


def get_operator(name) -> OperatorDescriptor:
    try:
        return REGISTRY[name]
    except KeyError:
        raise KeyError(f"unknown operator {name!r}") from None


# operators ------------------------------------------------------------

FRACTION = dict(minimum=0.0, maximum=1.0)


@register("import_xes", outputs=[("log", "event_log")],
          params={"path": Param("path", REQUIRED), "classifier": Param("str", None, nullable=True)})
def _import_xes(inputs, params, ctx):
    """Read an XES (optionally gzipped) event log."""
    from ..log import import_xes

    log = import_xes(params["path"], classifier=ctx.classifier or params["classifier"])
    for key, n in sorted(log.report.counters.items()):
        ctx.warn(f"{key}: {n}")
    return {"log": log}


@register("import_csv", outputs=[("log", "event_log")], params={
    "path": Param("path", REQUIRED),
    "case_column": Param("str", "case:concept:name"),
    "activity_column": Param("str", "concept:name"),
    "timestamp_column": Param("str", "time:timestamp", nullable=True),
    "timestamp_format": Param("str", None, nullable=True),
})
def _import_csv(inputs, params, ctx):
    """Read a flat CSV table with one event per row."""
    from ..log import TableMapping, read_csv

    mapping = TableMapping(params["case_column"], params["activity_column"], params["timestamp_column"], params["timestamp_format"])
    log = read_csv(params["path"], mapping)
    if log.report.rejected_rows:
        ctx.warn(f"rejected rows: {len(log.report.rejected_rows)}")
    return {"log": log}


@register("import_pnml", outputs=[("net", "petri_net")], params={"path": Param("path", REQUIRED)})
def _import_pnml(inputs, params, ctx):
    """Read a Petri net from PNML."""
    from ..petri import import_pnml

    return {"net": import_pnml(params["path"])}


@register("normative_model", outputs=[("net", "petri_net")])
def _normative(inputs, params, ctx):
    """The shipped normative road-fine management net."""
    from ..petri import normative_rtfm_model

    return {"net": normative_rtfm_model()}


@register("add_artificial_endpoints", inputs=[("log", "event_log")], outputs=[("log", "event_log")],
          params={"start_label": Param("str", "▶"), "end_label": Param("str", "■")})
def _endpoints(inputs, params, ctx):
    """Wrap every trace in artificial start and end events."""
    from ..log import add_artificial_endpoints

    return {"log": add_artificial_endpoints(inputs["log"], params["start_label"], params["end_label"])}


@register("filter_by_throughput", inputs=[("log", "event_log")], outputs=[("log", "event_log")], params={
    "min_duration": Param("float", 0.0, minimum=0.0),
    "max_duration": Param("float", None, minimum=0.0, nullable=True),
    "unit": Param("str", "d", choices=("ms", "s", "min", "h", "d", "month")),
})
def _filter(inputs, params, ctx):
    """Keep cases whose throughput time lies within the bounds."""
    from ..log import filter_by_throughput

    hi = params["max_duration"]
    return {"log": filter_by_throughput(inputs["log"], params["min_duration"], math.inf if hi is None else hi, params["unit"])}


@register("dfg", inputs=[("log", "event_log")], outputs=[("dfg", "dfg")],
          params={"noise_threshold": Param("float", 0.0, **FRACTION)})
def _dfg(inputs, params, ctx):
    """Directly-follows graph."""
    from ..discovery import build_dfg

    return {"dfg": build_dfg(inputs["log"], params["noise_threshold"])}


@register("alpha_miner", inputs=[("log", "event_log")], outputs=[("net", "petri_net")])
def _alpha(inputs, params, ctx):
    """Alpha miner."""
    from ..discovery import alpha_miner

    return {"net": alpha_miner(inputs["log"])}


@register("heuristics_miner", inputs=[("log", "event_log")], outputs=[("heuristics_net", "heuristics_net")], params={
    "dependency_threshold": Param("float", 0.9, minimum=-1.0, maximum=1.0),
    "min_frequency": Param("int", 1, minimum=1),
})
def _heuristics(inputs, params, ctx):
    """Heuristics miner dependency graph."""
    from ..discovery import heuristics_miner

    return {"heuristics_net": heuristics_miner(inputs["log"], params["dependency_threshold"], params["min_frequency"])}


@register("inductive_miner", inputs=[("log", "event_log")], outputs=[("tree", "process_tree"), ("net", "petri_net")],
          params={"noise_threshold": Param("float", 0.2, **FRACTION)})
def _inductive(inputs, params, ctx):
    """Inductive miner with directly-follows noise filtering."""
    from ..discovery import inductive_miner
    from ..petri import tree_to_petri_net

    tree = inductive_miner(inputs["log"], params["noise_threshold"])
    return {"tree": tree, "net": tree_to_petri_net(tree, name="inductive")}


@register("tree_to_net", inputs=[("tree", "process_tree")], outputs=[("net", "petri_net")])
def _tree_to_net(inputs, params, ctx):
    """Convert a process tree into a workflow net."""
    from ..petri import tree_to_petri_net

    return {"net": tree_to_petri_net(inputs["tree"])}


@register("social_network", inputs=[("log", "event_log")], outputs=[("network", "social_network")], params={
    "resource_key": Param("str", "org:resource"),
    "similarity_threshold": Param("float", 0.75, **FRACTION),
})
def _social(inputs, params, ctx):
    """Similar-task social network."""
    from ..discovery import social_network_similar_task

    net = social_network_similar_task(inputs["log"], params["resource_key"], params["similarity_threshold"])
    if net.skipped_events:
        ctx.warn(f"events without {params['resource_key']}: {net.skipped_events}")
    return {"network": net}


_COSTS = {
    "log_move_cost": Param("float", 1.0, minimum=0.0),
    "model_move_cost": Param("float", 1.0, minimum=0.0),
    "max_states": Param("int", 2_000_000, minimum=1),
}


@register("conformance", inputs=[("log", "event_log"), ("net", "petri_net")], outputs=[("result", "conformance_result")], params=_COSTS)
def _conformance(inputs, params, ctx):
    """Alignment-based conformance checking."""
    from ..conformance import MoveCosts, align_log

    costs = MoveCosts(params["log_move_cost"], params["model_move_cost"])
    return {"result": align_log(inputs["net"], inputs["log"], costs, ctx.threads, params["max_states"])}


@register("performance", inputs=[("log", "event_log"), ("net", "petri_net"), Port("result", "conformance_result", optional=True)],
          outputs=[("annotation", "performance_annotation")], params=_COSTS)
def _performance(inputs, params, ctx):
    """Waiting and sojourn times from timestamp replay over alignments."""
    from ..conformance import MoveCosts, align_log
    from ..performance import annotate_performance

    result = inputs.get("result")
    if result is None:
        costs = MoveCosts(params["log_move_cost"], params["model_move_cost"])
        result = align_log(inputs["net"], inputs["log"], costs, ctx.threads, params["max_states"])
    return {"annotation": annotate_performance(inputs["net"], inputs["log"], result)}


@register("select_by_fitness", inputs=[
    ("log", "event_log"), ("net_1", "petri_net"), Port("net_2", "petri_net", optional=True), Port("net_3", "petri_net", optional=True),
], outputs=[("net", "petri_net")])
def _select(inputs, params, ctx):
    """Keep the candidate net with the highest alignment fitness (first wins ties)."""
    from ..conformance import align_log

    best, best_fit = None, -1.0
    for port in ("net_1", "net_2", "net_3"):
        net = inputs.get(port)
        if net is None:
            continue
        fit = align_log(net, inputs["log"], n_jobs=ctx.threads).fitness
        ctx.note(f"{port}: fitness {fit:.6f}")
        if fit > best_fit:
            best, best_fit = net, fit
    return {"net": best}
