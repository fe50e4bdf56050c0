"""Workflow documents: parsing, parameter resolution and validation.

A document is a JSON object::

    {
      "version": 1,
      "name": "discovery",
      "parameters": {"log_path": null},
      "nodes": {
        "log": {"operator": "import_xes", "params": {"path": "${log_path}"}},
        "inductive": {"operator": "inductive_miner", "params": {"noise_threshold": 0.2}}
      },
      "edges": [{"from": "log.log", "to": "inductive.log"}],
      "sweeps": {"inductive.noise_threshold": [0.0, 0.2, 0.4]},
      "repeat": 1,
      "include": [{"path": "sub.json", "prefix": "sub", "parameters": {}}],
      "outputs": {"model": "inductive.net", "picture": {"from": "inductive.net", "format": "dot"}}
    }

``${name}`` in a string parameter is replaced by a workflow parameter.
Relative ``path`` parameters are resolved against the document's directory;
``pkg:<file>`` names a file shipped in ``pmflow/data``. Included workflows
are inlined with their node ids prefixed ``<prefix>/``.
"""

from __future__ import annotations

import json
import os
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .registry import REGISTRY, get_operator

VERSION = 1
_VAR = re.compile(r"\$\{([A-Za-z_][A-Za-z0-9_]*)\}")
_TOP_KEYS = {"version", "name", "description", "parameters", "nodes", "edges", "sweeps", "repeat", "include", "outputs"}


class WorkflowError(ValueError):
    def __init__(self, message, node=None, port=None, diagnostics=None):
        where = ""
        if node is not None:
            where = f"node {node!r}" + (f", port {port!r}" if port else "") + ": "
        super().__init__(where + message)
        self.node, self.port = node, port
        self.diagnostics = diagnostics or []


@dataclass(frozen=True)
class Diagnostic:
    message: str
    node: str | None = None
    port: str | None = None

    def __str__(self):
        where = f"{self.node}" + (f".{self.port}" if self.port else "") if self.node else "workflow"
        return f"{where}: {self.message}"


@dataclass(frozen=True)
class NodeSpec:
    id: str
    operator: str
    params: dict


@dataclass(frozen=True)
class Edge:
    source: str
    source_port: str
    target: str
    target_port: str


@dataclass(frozen=True)
class OutputSpec:
    name: str
    node: str
    port: str
    format: str | None = None
    unit: str | None = None


@dataclass
class WorkflowSpec:
    nodes: dict
    edges: list
    sweeps: dict = field(default_factory=dict)
    outputs: dict = field(default_factory=dict)
    repeat: int = 1
    name: str = "workflow"
    source: str | None = None

    def incoming(self, node_id):
        return [e for e in self.edges if e.target == node_id]

    def topological_order(self):
        """Node ids in dependency order, ties broken by id; ``None`` when cyclic."""
        indeg = {n: 0 for n in self.nodes}
        succ = {n: [] for n in self.nodes}
        for e in self.edges:
            if e.source in indeg and e.target in indeg:
                indeg[e.target] += 1
                succ[e.source].append(e.target)
        ready = sorted(n for n, d in indeg.items() if d == 0)
        order = []
        while ready:
            n = ready.pop(0)
            order.append(n)
            for m in sorted(succ[n]):
                indeg[m] -= 1
                if indeg[m] == 0:
                    ready.append(m)
            ready.sort()
        return order if len(order) == len(self.nodes) else None


def _split_ref(ref, what):
    if not isinstance(ref, str) or "." not in ref:
        raise WorkflowError(f"{what} must look like 'node.port', got {ref!r}")
    node, port = ref.rsplit(".", 1)
    return node, port


def resolve_path(value, base_dir):
    if value.startswith("pkg:"):
        return str(resources.files("pmflow") / "data" / value[4:])
    path = Path(os.path.expanduser(value))
    if not path.is_absolute() and base_dir is not None:
        path = Path(base_dir) / path
    return str(path)


def _substitute(value, variables, node):
    if not isinstance(value, str):
        return value
    whole = _VAR.fullmatch(value)
    if whole:
        name = whole.group(1)
        if name not in variables:
            raise WorkflowError(f"undefined workflow parameter ${{{name}}}", node)
        return variables[name]

    def repl(m):
        if m.group(1) not in variables:
            raise WorkflowError(f"undefined workflow parameter ${{{m.group(1)}}}", node)
        return str(variables[m.group(1)])

    return _VAR.sub(repl, value)


def _load(document):
    if isinstance(document, dict):
        return document, None
    if isinstance(document, (str, os.PathLike)) and not str(document).lstrip().startswith("{"):
        path = Path(document)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise WorkflowError(f"cannot read workflow {path}: {exc}") from None
        base = str(path.resolve().parent)
    else:
        text, base = str(document), None
    try:
        return json.loads(text), base
    except json.JSONDecodeError as exc:
        raise WorkflowError(f"malformed workflow document: {exc}") from None


def _parse_raw(doc, base_dir, overrides, prefix="", depth=0):
    if depth > 8:
        raise WorkflowError("workflow inclusion nested too deeply")
    if not isinstance(doc, dict):
        raise WorkflowError("workflow document must be a JSON object")
    unknown = set(doc) - _TOP_KEYS
    if unknown:
        raise WorkflowError(f"unknown top-level keys {sorted(unknown)}")
    if doc.get("version", VERSION) != VERSION:
        raise WorkflowError(f"unsupported workflow version {doc.get('version')!r}")

    variables = dict(doc.get("parameters") or {})
    node_overrides = {}
    for key, value in (overrides or {}).items():
        if "." in key:
            node_overrides[key] = value
        else:
            variables[key] = value
    missing = sorted(k for k, v in variables.items() if v is None and k not in (overrides or {}))

    nodes, edges, outputs = {}, [], {}
    raw_nodes = doc.get("nodes") or {}
    if not isinstance(raw_nodes, dict):
        raise WorkflowError("'nodes' must be an object")
    for nid, raw in raw_nodes.items():
        if not isinstance(raw, dict) or "operator" not in raw:
            raise WorkflowError("node needs an 'operator'", prefix + nid)
        if raw["operator"] not in REGISTRY:
            raise WorkflowError(f"unknown operator {raw['operator']!r}", prefix + nid)
        op = get_operator(raw["operator"])
        given = dict(raw.get("params") or {})
        for key, value in node_overrides.items():
            n, p = key.rsplit(".", 1)
            if n == nid:
                given[p] = value
        params = {}
        for pname, value in given.items():
            if pname not in op.params:
                raise WorkflowError(f"unknown parameter {pname!r} for operator {op.name}", prefix + nid)
            value = _substitute(value, variables, prefix + nid)
            if value is None and isinstance(given[pname], str) and _VAR.fullmatch(given[pname]):
                name = _VAR.fullmatch(given[pname]).group(1)
                if name in missing:
                    raise WorkflowError(f"workflow parameter ${{{name}}} has no value; pass it as an override", prefix + nid)
            spec = op.params[pname]
            if spec.kind == "float" and isinstance(value, int) and not isinstance(value, bool):
                value = float(value)
            error = spec.check(value)
            if error:
                raise WorkflowError(f"parameter {pname!r}: {error}", prefix + nid)
            if spec.kind == "path" and isinstance(value, str):
                value = resolve_path(value, base_dir)
            params[pname] = value
        for pname, spec in op.params.items():
            if pname not in params:
                if spec.required:
                    raise WorkflowError(f"missing required parameter {pname!r}", prefix + nid)
                params[pname] = spec.default
        nodes[prefix + nid] = NodeSpec(prefix + nid, op.name, params)

    for inc in doc.get("include") or []:
        if not isinstance(inc, dict) or "path" not in inc or "prefix" not in inc:
            raise WorkflowError("include entries need 'path' and 'prefix'")
        sub_doc, sub_base = _load(resolve_path(inc["path"], base_dir))
        sub_params = {k: _substitute(v, variables, None) for k, v in (inc.get("parameters") or {}).items()}
        sub = _parse_raw(sub_doc, sub_base, sub_params, prefix + inc["prefix"] + "/", depth + 1)
        clash = set(sub.nodes) & set(nodes)
        if clash:
            raise WorkflowError(f"included node ids clash: {sorted(clash)}")
        nodes.update(sub.nodes)
        edges.extend(sub.edges)

    for raw in doc.get("edges") or []:
        if isinstance(raw, dict):
            src, dst = raw.get("from"), raw.get("to")
        elif isinstance(raw, (list, tuple)) and len(raw) == 2:
            src, dst = raw
        else:
            raise WorkflowError(f"malformed edge {raw!r}")
        s, sp = _split_ref(src, "edge source")
        t, tp = _split_ref(dst, "edge target")
        edges.append(Edge(prefix + s, sp, prefix + t, tp))

    for name, raw in (doc.get("outputs") or {}).items():
        if isinstance(raw, str):
            raw = {"from": raw}
        n, p = _split_ref(raw.get("from"), f"output {name!r}")
        outputs[name] = OutputSpec(name, prefix + n, p, raw.get("format"), raw.get("unit"))

    sweeps = {}
    for key, values in (doc.get("sweeps") or {}).items():
        n, p = _split_ref(key, "sweep key")
        if prefix + n not in nodes:
            raise WorkflowError(f"sweep over unknown node {n!r}")
        spec = get_operator(nodes[prefix + n].operator).params.get(p)
        if spec is None:
            raise WorkflowError(f"unknown parameter {p!r} in sweep", prefix + n)
        if not isinstance(values, list) or not values:
            raise WorkflowError(f"sweep {key!r} needs a non-empty list of values")
        checked = []
        for v in values:
            if spec.kind == "float" and isinstance(v, int) and not isinstance(v, bool):
                v = float(v)
            error = spec.check(v)
            if error:
                raise WorkflowError(f"sweep value {v!r} for {p!r}: {error}", prefix + n)
            checked.append(resolve_path(v, base_dir) if spec.kind == "path" else v)
        sweeps[prefix + key] = checked

    repeat = doc.get("repeat", 1)
    if not isinstance(repeat, int) or isinstance(repeat, bool) or repeat < 1:
        raise WorkflowError("'repeat' must be a positive integer")
    return WorkflowSpec(nodes, edges, sweeps, outputs, repeat, doc.get("name", "workflow"), base_dir)


def parse_workflow(document, overrides=None) -> WorkflowSpec:
    """Parse and fully resolve a workflow document (path, JSON text or dict).

    ``overrides`` maps workflow parameter names, or ``node.param`` keys, to
    values that replace those in the document.

    Raises
    ------
    WorkflowError
        On unknown operators or parameters, bad values, or any validation diagnostic.
    """
    doc, base = _load(document)
    spec = _parse_raw(doc, base, overrides)
    diagnostics = validate(spec)
    if diagnostics:
        raise WorkflowError("; ".join(map(str, diagnostics)), diagnostics=diagnostics)
    return spec


def validate(spec: WorkflowSpec) -> list:
    """Structural diagnostics for ``spec``; an empty list means it can run."""
    out = []
    for nid, node in spec.nodes.items():
        if node.operator not in REGISTRY:
            out.append(Diagnostic(f"unknown operator {node.operator!r}", nid))
            continue
        op = get_operator(node.operator)
        for pname, value in node.params.items():
            if pname not in op.params:
                out.append(Diagnostic(f"unknown parameter {pname!r}", nid))
                continue
            error = op.params[pname].check(value)
            if error:
                out.append(Diagnostic(f"parameter {pname!r}: {error}", nid))

    seen_targets = {}
    for e in spec.edges:
        src, dst = spec.nodes.get(e.source), spec.nodes.get(e.target)
        if src is None:
            out.append(Diagnostic("edge from unknown node", e.source))
            continue
        if dst is None:
            out.append(Diagnostic("edge into unknown node", e.target))
            continue
        if src.operator not in REGISTRY or dst.operator not in REGISTRY:
            continue
        sport = get_operator(src.operator).output(e.source_port)
        tport = get_operator(dst.operator).input(e.target_port)
        if sport is None:
            out.append(Diagnostic(f"operator {src.operator} has no output port", e.source, e.source_port))
            continue
        if tport is None:
            out.append(Diagnostic(f"operator {dst.operator} has no input port", e.target, e.target_port))
            continue
        if sport.kind != tport.kind:
            out.append(Diagnostic(f"kind mismatch: {e.source}.{e.source_port} is {sport.kind}, port expects {tport.kind}", e.target, e.target_port))
        key = (e.target, e.target_port)
        if key in seen_targets:
            out.append(Diagnostic("port receives more than one edge", e.target, e.target_port))
        seen_targets[key] = e

    for nid, node in spec.nodes.items():
        if node.operator not in REGISTRY:
            continue
        for port in get_operator(node.operator).inputs:
            if not port.optional and (nid, port.name) not in seen_targets:
                out.append(Diagnostic("input port has no incoming edge", nid, port.name))

    if spec.topological_order() is None:
        out.append(Diagnostic("edges form a cycle"))

    for name, o in spec.outputs.items():
        node = spec.nodes.get(o.node)
        if node is None:
            out.append(Diagnostic(f"output {name!r} refers to unknown node", o.node))
            continue
        if node.operator in REGISTRY and get_operator(node.operator).output(o.port) is None:
            out.append(Diagnostic(f"output {name!r} refers to unknown port", o.node, o.port))
            continue
        from .artifacts import FORMATS

        kind = get_operator(node.operator).output(o.port).kind if node.operator in REGISTRY else None
        if o.format is not None and kind is not None and o.format not in FORMATS[kind]:
            out.append(Diagnostic(f"output {name!r}: format {o.format!r} not available for {kind}", o.node, o.port))
    for key in spec.sweeps:
        n, p = key.rsplit(".", 1)
        if n not in spec.nodes:
            out.append(Diagnostic("sweep over unknown node", n))
    if spec.repeat < 1:
        out.append(Diagnostic("repeat must be at least 1"))
    return out
