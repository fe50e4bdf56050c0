"""Writers that materialize workflow outputs, one file per declared output."""

from __future__ import annotations

import json

from .._io import atomic_write_text, csv_text

DEFAULT_FORMAT = {
    "event_log": "xes",
    "petri_net": "pnml",
    "process_tree": "txt",
    "heuristics_net": "dot",
    "social_network": "dot",
    "dfg": "dot",
    "conformance_result": "transitions",
    "performance_annotation": "csv",
}

EXTENSIONS = {"xes": "xes", "csv": "csv", "summary": "json", "pnml": "pnml", "dot": "dot", "txt": "txt",
              "transitions": "csv", "variants": "csv", "log_moves": "csv", "log_projection": "txt"}


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False, allow_nan=False) + "\n"


def _round(x, digits=6):
    return None if x is None else round(x, digits)


def _stats_dict(stats, unit):
    return {k: (_round(v) if isinstance(v, float) else v) for k, v in stats.in_unit(unit).items()}


def log_summary(log, unit="month", top=10) -> dict:
    from ..log import variants
    from ..performance import global_stats

    vs = variants(log, max_exemplars=1)
    out = {
        "traces": len(log.traces),
        "events": log.n_events,
        "activities": sorted(map(str, log.activities())),
        "variants": len(vs),
        "top_variants": [{"frequency": v.frequency, "sequence": list(map(str, v.activity_sequence))} for v in vs[:top]],
        "import_counters": dict(sorted(log.report.counters.items())) if log.report else {},
        "unit": unit,
    }
    try:
        out["throughput"] = _stats_dict(global_stats(log), unit)
    except ValueError:
        out["throughput"] = None
    return out


def _write_log(fmt):
    def write(log, path, unit):
        from ..log import export_csv, export_xes

        if fmt == "xes":
            export_xes(log, path)
        elif fmt == "csv":
            export_csv(log, path)
        else:
            atomic_write_text(path, dumps(log_summary(log, unit)))

    return write


def _write_net(fmt):
    def write(net, path, unit):
        from ..petri import to_dot, to_pnml_string

        atomic_write_text(path, to_pnml_string(net) if fmt == "pnml" else to_dot(net))

    return write


def _write_tree(tree, path, unit):
    from ..petri import format_tree

    atomic_write_text(path, format_tree(tree) + "\n")


def _write_dot(obj, path, unit):
    atomic_write_text(path, obj.to_dot())


def _write_social_csv(net, path, unit):
    rows = [(a, b, f"{net.weight[(a, b)]:.6f}", frozenset((a, b)) in net.edges) for a in net.nodes for b in net.nodes if a < b]
    atomic_write_text(path, csv_text(("resource_1", "resource_2", "similarity", "edge"), rows))


def _write_dfg_csv(dfg, path, unit):
    rows = sorted(((str(a), str(b), n) for (a, b), n in dfg.df_count.items()))
    atomic_write_text(path, csv_text(("source", "target", "count"), rows))


def conformance_summary(result, top=10) -> dict:
    from ..conformance import project_on_log

    report = project_on_log(result)
    return {
        "fitness": _round(result.fitness, 9),
        "traces": result.n_traces,
        "variants": len(result.variants),
        "empty_completion_cost": result.empty_completion_cost,
        "transitions": {
            t: {"label": result.net.label(t), "sync": result.sync_count[t], "model_moves": result.model_move_count[t]}
            for t in sorted(result.net.transitions)
        },
        "log_moves": {str(k): v for k, v in sorted(result.log_move_count.items(), key=lambda kv: str(kv[0]))},
        "top_variants": [
            {"frequency": v.frequency, "cost": v.cost, "moves": [[s.kind, s.label, s.transition] for s in v.steps]}
            for v in report[:top]
        ],
    }


def _write_conformance(fmt):
    def write(result, path, unit):
        from ..conformance import (
            export_log_moves, export_transition_counters, export_variant_costs, format_log_projection,
            project_on_log, project_on_model,
        )
        from ..petri import to_dot

        if fmt == "transitions":
            export_transition_counters(result, path)
        elif fmt == "variants":
            export_variant_costs(result, path)
        elif fmt == "log_moves":
            export_log_moves(result, path)
        elif fmt == "dot":
            atomic_write_text(path, to_dot(result.net, project_on_model(result)))
        elif fmt == "log_projection":
            atomic_write_text(path, format_log_projection(project_on_log(result)) + "\n")
        else:
            atomic_write_text(path, dumps(conformance_summary(result)))

    return write


def performance_summary(annotation, unit="month") -> dict:
    from ..performance import rank_bottlenecks

    def table(stats):
        return {t: dict(label=annotation.net.label(t), **_stats_dict(s, unit)) for t, s in sorted(stats.items())}

    return {
        "unit": unit,
        "global": _stats_dict(annotation.global_, unit),
        "waiting": table(annotation.waiting),
        "sojourn": table(annotation.sojourn),
        "waiting_ranking": [t for t, _ in rank_bottlenecks(annotation, "waiting")],
    }


def _write_performance(fmt):
    def write(annotation, path, unit):
        from ..performance import color_bottlenecks, export_performance
        from ..petri import to_dot

        if fmt == "csv":
            export_performance(annotation, path, unit)
        elif fmt == "dot":
            atomic_write_text(path, to_dot(annotation.net, color_bottlenecks(annotation, "waiting", unit)))
        else:
            atomic_write_text(path, dumps(performance_summary(annotation, unit)))

    return write


FORMATS = {
    "event_log": {f: _write_log(f) for f in ("xes", "csv", "summary")},
    "petri_net": {f: _write_net(f) for f in ("pnml", "dot")},
    "process_tree": {"txt": _write_tree},
    "heuristics_net": {"dot": _write_dot},
    "social_network": {"dot": _write_dot, "csv": _write_social_csv},
    "dfg": {"dot": _write_dot, "csv": _write_dfg_csv},
    "conformance_result": {f: _write_conformance(f) for f in ("transitions", "variants", "log_moves", "dot", "log_projection", "summary")},
    "performance_annotation": {f: _write_performance(f) for f in ("csv", "dot", "summary")},
}


def materialize(kind, fmt, obj, path, unit="ms"):
    FORMATS[kind][fmt or DEFAULT_FORMAT[kind]](obj, path, unit)


def extension(kind, fmt):
    return EXTENSIONS[fmt or DEFAULT_FORMAT[kind]]
