"""Command-line interface.

Subcommands: ``discover``, ``conform``, ``perform``, ``run``, ``convert`` and
``stats``. Results summaries go to standard output, diagnostics to standard
error; the exit status is 0 only when no error occurred.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import __version__
from ._io import atomic_write_text
from .units import UNITS, describe_unit, from_ms

logger = logging.getLogger("pmflow")

ALGORITHMS = ("alpha", "heuristics", "inductive", "social")


class CliError(Exception):
    pass


def _common(parser):
    parser.add_argument("--unit", choices=sorted(UNITS), default=None, help="time unit for reported durations (default: d)")
    parser.add_argument("--classifier", default=None, help="classifier name or attribute key used as activity label")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="more log output (repeatable)")
    parser.add_argument("-o", "--output-dir", default=".", help="directory for written artifacts (default: current directory)")
    parser.add_argument("--threads", type=int, default=1, help="worker processes for alignments (default: 1)")
    parser.add_argument("--json", action="store_true", help="print a machine-readable summary")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pmflow", description="Process mining on event logs: discovery, conformance, performance and workflows.")
    parser.add_argument("--version", action="version", version=f"pmflow {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("discover", help="discover a model from a log")
    p.add_argument("log", help="event log (.xes, .xes.gz or .csv)")
    p.add_argument("algorithm", choices=ALGORITHMS)
    p.add_argument("--noise", type=float, default=0.2, help="inductive miner noise threshold in [0, 1] (default: 0.2)")
    p.add_argument("--dependency-threshold", type=float, default=0.9, help="heuristics miner dependency threshold (default: 0.9)")
    p.add_argument("--min-frequency", type=int, default=1, help="heuristics miner minimum edge frequency (default: 1)")
    p.add_argument("--resource-key", default="org:resource", help="resource attribute for the social network (default: org:resource)")
    p.add_argument("--similarity-threshold", type=float, default=0.75, help="social network edge threshold (default: 0.75)")
    _common(p)

    for name, text in (("conform", "align a log against a Petri net"), ("perform", "performance replay on a Petri net")):
        p = sub.add_parser(name, help=text)
        p.add_argument("log", help="event log (.xes, .xes.gz or .csv)")
        p.add_argument("model", help="Petri net in PNML")
        p.add_argument("--log-move-cost", type=float, default=1.0)
        p.add_argument("--model-move-cost", type=float, default=1.0)
        p.add_argument("--max-states", type=int, default=2_000_000, help="alignment search budget per variant")
        if name == "conform":
            p.add_argument("--top-variants", type=int, default=10, help="variants shown in the log projection (default: 10)")
        else:
            p.add_argument("--metric", choices=("waiting", "sojourn"), default="waiting", help="metric used for coloring")
        _common(p)

    p = sub.add_parser("run", help="execute a workflow document")
    p.add_argument("workflow", help="workflow JSON document")
    p.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
                   help="override a workflow parameter or a node parameter (node.param); repeatable")
    _common(p)

    p = sub.add_parser("convert", help="convert logs between XES and CSV, or a process tree to PNML")
    p.add_argument("source", help="input (.xes, .xes.gz, .csv, or a process tree text file .tree/.txt)")
    p.add_argument("target", help="output (.xes, .xes.gz, .csv or .pnml)")
    _common(p)

    p = sub.add_parser("stats", help="print log statistics")
    p.add_argument("log")
    p.add_argument("--top", type=int, default=10, help="number of variants shown (default: 10)")
    _common(p)
    return parser


def _out(args, name) -> Path:
    directory = Path(args.output_dir)
    directory.mkdir(parents=True, exist_ok=True)
    return directory / name


def _load_log(args):
    from .log import import_log

    log = import_log(args.log, classifier=args.classifier)
    for key, n in sorted(log.report.counters.items()):
        logger.warning("%s: %s", key, n)
    return log


def _fmt_stats(stats, unit):
    d = stats.in_unit(unit)
    return {k: d[k] for k in ("count", "mean", "std_dev", "min", "max")}


def cmd_discover(args):
    from .discovery import alpha_miner, heuristics_miner, inductive_miner, social_network_similar_task
    from .log import log_stem
    from .petri import export_pnml, format_tree, to_dot, tree_to_petri_net

    log = _load_log(args)
    stem = log_stem(args.log)
    files = []
    params = {}
    if args.algorithm == "alpha":
        net = alpha_miner(log)
    elif args.algorithm == "inductive":
        params["noise_threshold"] = args.noise
        tree = inductive_miner(log, args.noise)
        net = tree_to_petri_net(tree, name="inductive")
        path = _out(args, f"{stem}.inductive.tree")
        atomic_write_text(path, format_tree(tree) + "\n")
        files.append(str(path))
    elif args.algorithm == "heuristics":
        params.update(dependency_threshold=args.dependency_threshold, min_frequency=args.min_frequency)
        hnet = heuristics_miner(log, args.dependency_threshold, args.min_frequency)
        path = _out(args, f"{stem}.heuristics.dot")
        atomic_write_text(path, hnet.to_dot())
        files.append(str(path))
        net = None
    else:
        params.update(resource_key=args.resource_key, similarity_threshold=args.similarity_threshold)
        sn = social_network_similar_task(log, args.resource_key, args.similarity_threshold)
        path = _out(args, f"{stem}.social.dot")
        atomic_write_text(path, sn.to_dot())
        files.append(str(path))
        if sn.skipped_events:
            logger.warning("events without %s: %d", args.resource_key, sn.skipped_events)
        net = None
    if net is not None:
        pnml = _out(args, f"{stem}.{args.algorithm}.pnml")
        export_pnml(net, pnml)
        dot = _out(args, f"{stem}.{args.algorithm}.dot")
        atomic_write_text(dot, to_dot(net))
        files[:0] = [str(pnml), str(dot)]
    summary = {
        "command": "discover", "algorithm": args.algorithm, "traces": len(log.traces),
        "activities": len(log.activities()), "parameters": params, "files": files,
    }
    if args.json:
        print(json.dumps(summary, indent=2, sort_keys=True))
    else:
        print(f"{args.algorithm}: {summary['traces']} traces, {summary['activities']} activities")
        for k, v in params.items():
            print(f"  {k} = {v}")
        for f in files:
            print(f"  wrote {f}")
    return 0


def _costs(args):
    from .conformance import MoveCosts

    return MoveCosts(args.log_move_cost, args.model_move_cost)


def cmd_conform(args):
    from .conformance import (
        align_log, export_log_moves, export_transition_counters, export_variant_costs,
        format_log_projection, project_on_log, project_on_model,
    )
    from .log import log_stem
    from .petri import import_pnml, to_dot

    log = _load_log(args)
    net = import_pnml(args.model)
    result = align_log(net, log, _costs(args), args.threads, args.max_states)
    stem = log_stem(args.log)
    files = {
        "transitions": _out(args, f"{stem}.conformance.transitions.csv"),
        "variants": _out(args, f"{stem}.conformance.variants.csv"),
        "log_moves": _out(args, f"{stem}.conformance.log_moves.csv"),
        "model": _out(args, f"{stem}.conformance.dot"),
    }
    export_transition_counters(result, files["transitions"])
    export_variant_costs(result, files["variants"])
    export_log_moves(result, files["log_moves"])
    atomic_write_text(files["model"], to_dot(net, project_on_model(result)))
    report = project_on_log(result)[: args.top_variants]
    if args.json:
        summary = {
            "command": "conform", "fitness": result.fitness, "traces": result.n_traces, "variants": len(result.variants),
            "files": {k: str(v) for k, v in files.items()},
            "top_variants": [{"frequency": v.frequency, "cost": v.cost, "moves": [[s.kind, s.label] for s in v.steps]} for v in report],
        }
        print(json.dumps(summary, indent=2, sort_keys=True))
    else:
        print(f"fitness: {result.fitness:.3f}")
        print(f"traces: {result.n_traces}, variants: {len(result.variants)}")
        if report:
            print(format_log_projection(report))
        for f in files.values():
            print(f"wrote {f}")
    return 0


def cmd_perform(args):
    from .conformance import align_log
    from .log import log_stem
    from .performance import annotate_performance, color_bottlenecks, export_performance, rank_bottlenecks
    from .petri import import_pnml, to_dot

    unit = args.unit or "d"
    log = _load_log(args)
    net = import_pnml(args.model)
    result = align_log(net, log, _costs(args), args.threads, args.max_states)
    annotation = annotate_performance(net, log, result)
    stem = log_stem(args.log)
    csv_path = _out(args, f"{stem}.performance.csv")
    dot_path = _out(args, f"{stem}.performance.dot")
    export_performance(annotation, csv_path, unit)
    atomic_write_text(dot_path, to_dot(net, color_bottlenecks(annotation, args.metric, unit)))
    ranking = rank_bottlenecks(annotation, args.metric)
    if args.json:
        summary = {
            "command": "perform", "unit": unit, "throughput": _fmt_stats(annotation.global_, unit),
            "ranking": [{"transition": t, "label": net.label(t), **_fmt_stats(s, unit)} for t, s in ranking],
            "files": [str(csv_path), str(dot_path)],
        }
        print(json.dumps(summary, indent=2, sort_keys=True))
    else:
        g = _fmt_stats(annotation.global_, unit)
        print(f"throughput ({describe_unit(unit)}): cases={g['count']} mean={g['mean']:.2f} std={g['std_dev']:.2f} min={g['min']:.2f} max={g['max']:.2f}")
        print(f"{args.metric} time by transition (mean, {unit}):")
        for t, s in ranking:
            print(f"  {net.label(t):<40} {from_ms(s.mean, unit):10.2f}  n={s.count}")
        print(f"wrote {csv_path}")
        print(f"wrote {dot_path}")
    return 0


def _parse_override(text):
    if "=" not in text:
        raise CliError(f"override {text!r} must look like KEY=VALUE")
    key, raw = text.split("=", 1)
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    if isinstance(value, str) and not value.startswith("pkg:") and os.path.exists(value):
        value = os.path.abspath(value)
    return key.strip(), value


def cmd_run(args):
    from .workflow import execute, parse_workflow

    overrides = dict(_parse_override(o) for o in args.overrides)
    spec = parse_workflow(args.workflow, overrides)
    report = execute(spec, args.output_dir, threads=args.threads, classifier=args.classifier, unit=args.unit)
    if args.json:
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        for entry in report["expansions"]:
            tag = ", ".join(f"{k}={v}" for k, v in entry["bindings"].items()) or "default"
            print(f"[{tag}] repeat {entry['repeat']}")
            for node in entry["nodes"]:
                line = f"  {node['id']:<20} {node['operator']:<22} {node['status']}"
                if node.get("error"):
                    line += f"  ({node['error']})"
                print(line)
            for name, path in entry["outputs"].items():
                print(f"  -> {name}: {path if path else 'not written'}")
        print(f"status: {report['status']}")
    if report["status"] != "ok":
        for entry in report["expansions"]:
            for node in entry["nodes"]:
                if node["status"] == "failed":
                    print(f"error: node {node['id']} failed: {node['error']}", file=sys.stderr)
        return 1
    return 0


def cmd_convert(args):
    from .log import export_log, import_log
    from .petri import export_pnml, parse_tree, tree_to_petri_net

    src, dst = args.source, args.target
    if dst.lower().endswith(".pnml"):
        if not src.lower().endswith((".tree", ".txt")):
            raise CliError("only process trees (.tree or .txt) convert to PNML")
        tree = parse_tree(Path(src).read_text(encoding="utf-8"))
        export_pnml(tree_to_petri_net(tree), dst)
        what = "process tree"
    else:
        log = import_log(src, classifier=args.classifier)
        export_log(log, dst)
        what = f"log with {len(log.traces)} traces"
    if args.json:
        print(json.dumps({"command": "convert", "source": src, "target": dst}))
    else:
        print(f"wrote {what} to {dst}")
    return 0


def cmd_stats(args):
    from .workflow import log_summary

    log = _load_log(args)
    unit = args.unit or "d"
    summary = log_summary(log, unit, args.top)
    if args.json:
        print(json.dumps(summary, indent=2, sort_keys=True))
        return 0
    print(f"traces: {summary['traces']}")
    print(f"events: {summary['events']}")
    print(f"activities: {len(summary['activities'])}")
    print(f"variants: {summary['variants']}")
    t = summary["throughput"]
    if t and t["count"]:
        print(f"throughput ({describe_unit(unit)}): mean={t['mean']:.2f} std={t['std_dev']:.2f} min={t['min']:.2f} max={t['max']:.2f}")
    for v in summary["top_variants"]:
        print(f"{v['frequency']:>8}  " + " -> ".join(v["sequence"]))
    return 0


COMMANDS = {"discover": cmd_discover, "conform": cmd_conform, "perform": cmd_perform, "run": cmd_run, "convert": cmd_convert, "stats": cmd_stats}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, format="%(levelname)s: %(message)s", stream=sys.stderr)
    if args.threads < 1:
        parser.error("--threads must be at least 1")
    try:
        return COMMANDS[args.command](args)
    except KeyboardInterrupt:
        print("interrupted", file=sys.stderr)
        return 130
    except Exception as exc:
        from .workflow import WorkflowError

        if isinstance(exc, WorkflowError) and exc.diagnostics:
            for d in exc.diagnostics:
                print(f"error: {d}", file=sys.stderr)
        else:
            print(f"error: {exc}", file=sys.stderr)
        if args.verbose >= 2:
            raise
        return 1


if __name__ == "__main__":
    sys.exit(main())
