"""Timestamp replay of aligned cases.

Every place keeps its tokens in production order together with the time they
were produced; the initial tokens carry the case start. A transition is
enabled at the latest production time among the oldest tokens it consumes.
Synchronous moves fire at their event's timestamp and record the waiting
time (event time minus enablement) and the sojourn time (event time minus the
previous event of the case). Model moves fire at their enablement time and
record nothing.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from sklearn.base import BaseEstimator

from .._io import write_csv_rows
from .._validation import check_event_log, check_petri_net
from ..conformance.alignment import LOG, SYNC
from ..conformance.projection import NetMismatchError
from ..conformance.result import align_log
from ..petri.net import same_structure
from ..units import describe_unit, from_ms
from .stats import DurationStats

METRICS = ("waiting", "sojourn")
GRAY = "#BDBDBD"


class MissingTimestampError(ValueError):
    pass


def _ms(delta):
    return delta.total_seconds() * 1000.0


def global_stats(log) -> DurationStats:
    """Throughput time (last minus first timestamp) over all cases."""
    log = check_event_log(log)
    stats = DurationStats()
    for trace in log.traces:
        try:
            stats.add(trace.duration_ms())
        except ValueError as exc:
            raise MissingTimestampError(str(exc)) from None
    return stats


@dataclass
class PerformanceAnnotation:
    net: object
    waiting: dict = field(default_factory=dict)
    sojourn: dict = field(default_factory=dict)
    global_: DurationStats = field(default_factory=DurationStats)
    unreplayed_cases: int = 0

    def metric(self, name):
        if name not in METRICS:
            raise ValueError(f"unknown metric {name!r}; expected one of {METRICS}")
        return self.waiting if name == "waiting" else self.sojourn

    def merge(self, other: PerformanceAnnotation) -> PerformanceAnnotation:
        def join(a, b):
            return {t: a.get(t, DurationStats()).merge(b.get(t, DurationStats())) for t in set(a) | set(b)}

        return PerformanceAnnotation(
            self.net,
            join(self.waiting, other.waiting),
            join(self.sojourn, other.sojourn),
            self.global_.merge(other.global_),
            self.unreplayed_cases + other.unreplayed_cases,
        )


def replay_case(net, trace, alignment, waiting, sojourn):
    """Replay one timestamped case along ``alignment``; statistics are added in place."""
    events = trace.events
    for i, e in enumerate(events):
        if e.timestamp is None:
            raise MissingTimestampError(f"case {trace.case_id!r}, event {i}: no timestamp")
    start = events[0].timestamp
    tokens = {p: deque() for p in net.places}
    for p, n in net.initial_marking.items():
        tokens[p].extend([start] * n)
    position = 0
    previous = None
    for move in alignment.moves:
        if move.kind == LOG:
            previous = events[position].timestamp
            position += 1
            continue
        t = move.transition
        consumed = [tokens[p].popleft() for p in net.preset(t)]
        enabled = max(consumed) if consumed else start
        if move.kind == SYNC:
            now = events[position].timestamp
            waiting.setdefault(t, DurationStats()).add(_ms(now - enabled))
            sojourn.setdefault(t, DurationStats()).add(0.0 if previous is None else _ms(now - previous))
            previous = now
            position += 1
        else:
            now = enabled
        for p in net.postset(t):
            tokens[p].append(now)


def annotate_performance(net, log, result=None) -> PerformanceAnnotation:
    """Waiting and sojourn statistics per visible transition plus global throughput.

    ``result`` must come from :func:`~pmflow.conformance.align_log` on the same
    net; it is computed when omitted.
    """
    net = check_petri_net(net)
    log = check_event_log(log)
    if result is None:
        result = align_log(net, log)
    elif not same_structure(net, result.net):
        raise NetMismatchError("the conformance result was computed on a different net")
    waiting, sojourn = {}, {}
    labels = log.activity_sequences()
    for trace, seq in zip(log.traces, labels):
        try:
            alignment = result.alignment_for(seq)
        except KeyError:
            raise ValueError(f"case {trace.case_id!r}: variant not covered by the conformance result") from None
        replay_case(net, trace, alignment, waiting, sojourn)
    return PerformanceAnnotation(net, waiting, sojourn, global_stats(log))


def _yellow_to_red(fraction):
    return f"#FF{round(255 * (1 - fraction)):02X}00"


def color_bottlenecks(annotation: PerformanceAnnotation, metric="waiting", unit=None) -> dict:
    """Node annotations coloring observed transitions from yellow (lowest mean) to red (highest).

    Invisible and unobserved transitions are gray. With ``unit`` set, the mean
    is added as a sublabel.
    """
    stats = annotation.metric(metric)
    net = annotation.net
    observed = {t: s for t, s in stats.items() if s.count > 0 and not net.is_invisible(t)}
    lo = min((s.mean for s in observed.values()), default=0.0)
    hi = max((s.mean for s in observed.values()), default=0.0)
    out = {}
    for t in sorted(net.transitions):
        if t not in observed:
            out[t] = {"style": "filled", "fillcolor": GRAY}
            continue
        s = observed[t]
        fraction = 0.0 if hi == lo else (s.mean - lo) / (hi - lo)
        note = {"style": "filled", "fillcolor": _yellow_to_red(fraction), "tooltip": f"{metric} mean {s.mean:.0f} ms over {s.count}"}
        if unit:
            note["sublabel"] = f"{from_ms(s.mean, unit):.2f} {unit}"
        out[t] = note
    return out


def rank_bottlenecks(annotation: PerformanceAnnotation, metric="waiting"):
    """Observed visible transitions by descending mean."""
    stats = annotation.metric(metric)
    net = annotation.net
    items = [(t, s) for t, s in stats.items() if s.count and not net.is_invisible(t)]
    return sorted(items, key=lambda kv: (-kv[1].mean, kv[0]))


def performance_rows(annotation: PerformanceAnnotation, unit="ms"):
    rows = []
    for metric in METRICS:
        stats = annotation.metric(metric)
        for t in sorted(stats):
            d = stats[t].in_unit(unit)
            rows.append((t, annotation.net.label(t), metric, d["count"], d["mean"], d["std_dev"], d["min"], d["max"]))
    d = annotation.global_.in_unit(unit)
    rows.append(("", "", "throughput", d["count"], d["mean"], d["std_dev"], d["min"], d["max"]))
    return rows


def export_performance(annotation: PerformanceAnnotation, path, unit="ms") -> None:
    header = ("transition", "label", "metric", "count", f"mean_{unit}", f"std_{unit}", f"min_{unit}", f"max_{unit}")
    write_csv_rows(path, header, performance_rows(annotation, unit))


def format_stats(stats: DurationStats, unit="d") -> str:
    d = stats.in_unit(unit)
    if not d["count"]:
        return "no observations"
    return (
        f"n={d['count']} mean={d['mean']:.2f} std={d['std_dev']:.2f} "
        f"min={d['min']:.2f} max={d['max']:.2f} [{describe_unit(unit)}]"
    )


class PerformanceAnalyzer(BaseEstimator):
    def __init__(self, net=None, metric="waiting", classifier=None):
        self.net = net
        self.metric = metric
        self.classifier = classifier

    def fit(self, X, y=None, result=None):
        log = check_event_log(X, self.classifier)
        self.annotation_ = annotate_performance(check_petri_net(self.net), log, result)
        self.colors_ = color_bottlenecks(self.annotation_, self.metric)
        return self
