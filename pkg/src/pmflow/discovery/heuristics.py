from __future__ import annotations

from dataclasses import dataclass

from sklearn.base import BaseEstimator

from .._validation import check_event_log
from ..petri.dot import attr_list, quote
from .alpha import EmptyLogError
from .dfg import DirectlyFollowsGraph, dfg_from_sequences


def dependency_measure(dfg: DirectlyFollowsGraph, a, b) -> float:
    """Heuristics-miner dependency of ``b`` on ``a``.

    ``(|a>b| - |b>a|) / (|a>b| + |b>a| + 1)`` for distinct activities and
    ``|a>a| / (|a>a| + 1)`` for a self-loop.
    """
    for x in (a, b):
        if x not in dfg.activities:
            raise KeyError(f"unknown activity {x!r}")
    ab = dfg.count(a, b)
    if a == b:
        return ab / (ab + 1)
    ba = dfg.count(b, a)
    return (ab - ba) / (ab + ba + 1)


@dataclass(frozen=True)
class HeuristicsNet:
    activities: frozenset
    frequency: dict
    dependency: dict
    accepted_edges: frozenset
    edge_frequency: dict
    start_activities: frozenset
    end_activities: frozenset

    def to_dot(self) -> str:
        """Nodes and edges shaded by their relative frequency."""
        lines = ['digraph "heuristics net" {', "  rankdir=TB;", '  node [shape=box style="rounded,filled" fontname="Helvetica" fontsize=10];']
        top = max(self.frequency.values(), default=1) or 1
        for a in sorted(self.activities):
            shade = _shade(self.frequency[a] / top)
            attrs = {"label": f"{a}\n{self.frequency[a]}", "fillcolor": shade}
            lines.append(f"  {quote(a)} {attr_list(attrs)};")
        edge_top = max((self.edge_frequency[e] for e in self.accepted_edges), default=1) or 1
        for a, b in sorted(self.accepted_edges):
            n = self.edge_frequency[(a, b)]
            width = 1.0 + 5.0 * n / edge_top
            attrs = {"label": f"{self.dependency[(a, b)]:.3f}\n{n}", "penwidth": f"{width:.2f}", "color": _shade(n / edge_top, dark=True)}
            lines.append(f"  {quote(a)} -> {quote(b)} {attr_list(attrs)};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def _shade(fraction, dark=False):
    # white-to-blue for nodes, grey-to-black for edges
    fraction = min(max(fraction, 0.0), 1.0)
    if dark:
        level = int(round(180 * (1 - fraction)))
        return f"#{level:02X}{level:02X}{level:02X}"
    level = int(round(255 - 155 * fraction))
    return f"#{level:02X}{level:02X}FF"


def heuristics_miner(log, dependency_threshold=0.9, min_frequency=1) -> HeuristicsNet:
    """Dependency graph of a log.

    An edge is accepted when its dependency reaches ``dependency_threshold``
    and it was observed at least ``min_frequency`` times. Every non-start
    activity additionally keeps its strongest incoming edge and every non-end
    activity its strongest outgoing edge, so no activity is left unconnected.
    """
    log = check_event_log(log)
    sequences = log.activity_sequences()
    if not sequences:
        raise EmptyLogError("empty log")
    dfg = dfg_from_sequences(sequences)
    acts = sorted(dfg.activities)
    dependency = {}
    for (a, b) in dfg.df_count:
        dependency[(a, b)] = dependency_measure(dfg, a, b)
        if a != b:
            dependency[(b, a)] = -dependency[(a, b)]
    accepted = {
        (a, b)
        for (a, b), n in dfg.df_count.items()
        if n >= min_frequency and dependency[(a, b)] >= dependency_threshold
    }
    starts, ends = dfg.start_activities, dfg.end_activities
    for a in acts:
        if a not in starts:
            incoming = [(dependency[(x, a)], x) for x in acts if x != a and (x, a) in dfg.df_count]
            if incoming:
                best = max(incoming, key=lambda p: (p[0], dfg.count(p[1], a), p[1]))
                accepted.add((best[1], a))
        if a not in ends:
            outgoing = [(dependency[(a, y)], y) for y in acts if y != a and (a, y) in dfg.df_count]
            if outgoing:
                best = max(outgoing, key=lambda p: (p[0], dfg.count(a, p[1]), p[1]))
                accepted.add((a, best[1]))
    return HeuristicsNet(
        activities=frozenset(acts),
        frequency=dict(dfg.activity_count),
        dependency=dependency,
        accepted_edges=frozenset(accepted),
        edge_frequency=dict(dfg.df_count),
        start_activities=frozenset(starts),
        end_activities=frozenset(ends),
    )


class HeuristicsMiner(BaseEstimator):
    def __init__(self, dependency_threshold=0.9, min_frequency=1, classifier=None):
        self.dependency_threshold = dependency_threshold
        self.min_frequency = min_frequency
        self.classifier = classifier

    def fit(self, X, y=None):
        log = check_event_log(X, self.classifier)
        self.heuristics_net_ = heuristics_miner(log, self.dependency_threshold, self.min_frequency)
        return self
