"""Workflow execution: sweep expansion, topological scheduling, caching and reporting."""

from __future__ import annotations

import hashlib
import itertools
import json
import logging
import os
import re
import time
from dataclasses import dataclass, field
from pathlib import Path

from .._io import atomic_write_text
from .artifacts import dumps, extension, materialize
from .registry import get_operator
from .spec import WorkflowSpec, validate

logger = logging.getLogger(__name__)

REPORT_NAME = "run_report.json"


@dataclass
class Context:
    threads: int = 1
    classifier: str | None = None
    warnings: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def warn(self, message):
        self.warnings.append(message)
        logger.warning(message)

    def note(self, message):
        self.notes.append(message)
        logger.info(message)


class WorkflowFailed(RuntimeError):
    def __init__(self, report):
        super().__init__(f"workflow {report['workflow']!r} failed")
        self.report = report


def expansions(spec: WorkflowSpec):
    """Every combination of sweep values (in declaration order), repeated ``spec.repeat`` times."""
    keys = list(spec.sweeps)
    combos = list(itertools.product(*(spec.sweeps[k] for k in keys))) if keys else [()]
    out = []
    for combo in combos:
        for rep in range(spec.repeat):
            out.append((dict(zip(keys, combo)), rep))
    return out


def _slug(value):
    text = json.dumps(value) if not isinstance(value, str) else os.path.basename(value)
    return re.sub(r"[^A-Za-z0-9._+-]+", "_", text).strip("_") or "_"


def artifact_suffix(bindings, rep, repeat):
    parts = [f"{k}-{_slug(v)}" for k, v in bindings.items()]
    if repeat > 1:
        parts.append(f"repeat-{rep + 1}")
    return "".join("__" + p for p in parts)


_FILE_HASHES: dict = {}


def _file_digest(path):
    try:
        st = os.stat(path)
    except OSError:
        return "missing"
    key = (path, st.st_size, st.st_mtime_ns)
    if key not in _FILE_HASHES:
        h = hashlib.sha256()
        with open(path, "rb") as fh:
            for chunk in iter(lambda: fh.read(1 << 20), b""):
                h.update(chunk)
        _FILE_HASHES[key] = h.hexdigest()
    return _FILE_HASHES[key]


def node_key(operator, params, input_keys, classifier=None):
    """Content hash of an operator invocation; file parameters contribute their bytes."""
    op = get_operator(operator)
    material = {"operator": operator, "params": {}, "inputs": input_keys, "classifier": classifier}
    for name, value in sorted(params.items()):
        if op.params[name].kind == "path" and isinstance(value, str):
            material["params"][name] = {"path": value, "sha256": _file_digest(value)}
        else:
            material["params"][name] = value
    return hashlib.sha256(json.dumps(material, sort_keys=True, default=str).encode()).hexdigest()


def execute(spec: WorkflowSpec, workdir, threads: int = 1, classifier=None, unit=None, cache=None) -> dict:
    """Run every expansion of ``spec`` and write declared outputs into ``workdir``.

    Outputs are named ``<output><suffix>.<ext>`` where the suffix lists the
    sweep bindings (``__node.param-value``) and the repeat index when more
    than one repeat is requested. ``cache`` (a dict) can be shared between
    calls; node results are keyed by the hash of operator, parameters and
    input keys. The run report is written to ``run_report.json`` and
    returned; its ``status`` is ``"failed"`` when any node failed.
    """
    diagnostics = validate(spec)
    workdir = Path(workdir)
    workdir.mkdir(parents=True, exist_ok=True)
    report = {"workflow": spec.name, "version": 1, "status": "ok", "expansions": [], "diagnostics": [str(d) for d in diagnostics]}
    if diagnostics:
        report["status"] = "invalid"
        atomic_write_text(workdir / REPORT_NAME, dumps(report))
        return report
    cache = {} if cache is None else cache
    order = spec.topological_order()
    for bindings, rep in expansions(spec):
        entry = {"bindings": bindings, "repeat": rep + 1, "nodes": [], "outputs": {}}
        values, keys, failed = {}, {}, set()
        for nid in order:
            node = spec.nodes[nid]
            op = get_operator(node.operator)
            params = dict(node.params)
            for key, value in bindings.items():
                n, p = key.rsplit(".", 1)
                if n == nid:
                    params[p] = value
            record = {"id": nid, "operator": node.operator, "status": "ok", "cache_hit": False, "warnings": [], "notes": [], "seconds": 0.0}
            incoming = spec.incoming(nid)
            if any(e.source in failed for e in incoming):
                record["status"] = "skipped"
                failed.add(nid)
                entry["nodes"].append(record)
                continue
            inputs = {e.target_port: values[(e.source, e.source_port)] for e in incoming}
            input_keys = {e.target_port: keys[(e.source, e.source_port)] for e in sorted(incoming, key=lambda e: e.target_port)}
            key = node_key(node.operator, params, input_keys, classifier)
            started = time.perf_counter()
            if key in cache:
                produced, warnings, notes = cache[key]
                record["cache_hit"] = True
            else:
                ctx = Context(threads=threads, classifier=classifier)
                try:
                    produced = op.run(inputs, params, ctx)
                except Exception as exc:  # a failing node must not abort the run
                    logger.error("node %s failed: %s", nid, exc)
                    record.update(status="failed", error=f"{type(exc).__name__}: {exc}")
                    failed.add(nid)
                    entry["nodes"].append(record)
                    report["status"] = "failed"
                    continue
                warnings, notes = ctx.warnings, ctx.notes
                cache[key] = (produced, warnings, notes)
            record["seconds"] = round(time.perf_counter() - started, 6)
            record["warnings"], record["notes"] = list(warnings), list(notes)
            for port in op.outputs:
                values[(nid, port.name)] = produced[port.name]
                keys[(nid, port.name)] = f"{key}:{port.name}"
            entry["nodes"].append(record)

        suffix = artifact_suffix(bindings, rep, spec.repeat)
        for name, out in sorted(spec.outputs.items()):
            if out.node in failed:
                entry["outputs"][name] = None
                continue
            kind = get_operator(spec.nodes[out.node].operator).output(out.port).kind
            filename = f"{name}{suffix}.{extension(kind, out.format)}"
            try:
                materialize(kind, out.format, values[(out.node, out.port)], workdir / filename, unit or out.unit or "ms")
            except Exception as exc:
                logger.error("writing %s failed: %s", filename, exc)
                entry["outputs"][name] = None
                entry.setdefault("errors", []).append(f"{name}: {type(exc).__name__}: {exc}")
                report["status"] = "failed"
                continue
            entry["outputs"][name] = filename
        report["expansions"].append(entry)
    atomic_write_text(workdir / REPORT_NAME, dumps(report))
    return report


def strip_timings(report):
    """Copy of a run report without timing fields, for comparisons."""
    clone = json.loads(json.dumps(report))
    for entry in clone.get("expansions", []):
        for node in entry["nodes"]:
            node.pop("seconds", None)
            node.pop("cache_hit", None)
    return clone
