from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from sklearn.base import BaseEstimator

from .._validation import check_event_log, check_fraction
from ..petri.dot import attr_list, quote


@dataclass(frozen=True)
class DirectlyFollowsGraph:
    activities: frozenset
    df_count: dict
    start_count: dict
    end_count: dict
    activity_count: dict
    removed_mass: int = 0
    removed_edges: dict = field(default_factory=dict)

    def successors(self, a):
        return {b for (x, b) in self.df_count if x == a}

    def predecessors(self, b):
        return {a for (a, y) in self.df_count if y == b}

    @property
    def start_activities(self):
        return {a for a, n in self.start_count.items() if n > 0}

    @property
    def end_activities(self):
        return {a for a, n in self.end_count.items() if n > 0}

    def count(self, a, b):
        return self.df_count.get((a, b), 0)

    def to_dot(self) -> str:
        """Activities as boxes plus start and end markers; edge width follows the count."""
        lines = ['digraph "directly follows" {', "  rankdir=LR;", '  node [shape=box style=rounded fontname="Helvetica" fontsize=10];']
        lines.append('  "__start__" [shape=circle label="" style=filled fillcolor="#2CA02C" width=0.25];')
        lines.append('  "__end__" [shape=doublecircle label="" style=filled fillcolor="#D62728" width=0.2];')
        for a in sorted(self.activities, key=str):
            label = f"{a}\n{self.activity_count.get(a, 0)}"
            lines.append(f"  {quote(a)} {attr_list({'label': label})};")
        edges = [("__start__", a, n) for a, n in self.start_count.items()]
        edges += [(a, b, n) for (a, b), n in self.df_count.items()]
        edges += [(a, "__end__", n) for a, n in self.end_count.items()]
        top = max((n for _, _, n in edges), default=1) or 1
        for a, b, n in sorted(edges, key=lambda e: (str(e[0]), str(e[1]))):
            lines.append(f"  {quote(a)} -> {quote(b)} {attr_list({'label': n, 'penwidth': f'{1 + 4 * n / top:.2f}'})};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def dfg_from_sequences(sequences, weights=None) -> DirectlyFollowsGraph:
    """Count directly-follows pairs over activity sequences (optionally weighted)."""
    df, starts, ends, acts = Counter(), Counter(), Counter(), Counter()
    if weights is None:
        weights = [1] * len(sequences)
    for seq, w in zip(sequences, weights):
        if not seq:
            continue
        starts[seq[0]] += w
        ends[seq[-1]] += w
        for a in seq:
            acts[a] += w
        for a, b in zip(seq, seq[1:]):
            df[(a, b)] += w
    return DirectlyFollowsGraph(frozenset(acts), dict(df), dict(starts), dict(ends), dict(acts))


def filter_dfg(dfg: DirectlyFollowsGraph, noise_threshold: float) -> DirectlyFollowsGraph:
    """Drop edges weaker than ``noise_threshold`` times the strongest edge leaving their source.

    Ending the trace counts as an outgoing edge, so an activity that mostly
    ends traces can lose its rare successors.
    """
    check_fraction("noise_threshold", noise_threshold)
    if noise_threshold == 0:
        return dfg
    strongest: dict = dict(dfg.end_count)
    for (a, _), n in dfg.df_count.items():
        strongest[a] = max(strongest.get(a, 0), n)
    kept, removed = {}, dict(dfg.removed_edges)
    for (a, b), n in dfg.df_count.items():
        if n < noise_threshold * strongest[a]:
            removed[(a, b)] = n
        else:
            kept[(a, b)] = n
    return DirectlyFollowsGraph(
        dfg.activities,
        kept,
        dfg.start_count,
        dfg.end_count,
        dfg.activity_count,
        removed_mass=sum(removed.values()),
        removed_edges=removed,
    )


def build_dfg(log, noise_threshold: float = 0.0) -> DirectlyFollowsGraph:
    """Directly-follows graph of ``log``, with per-source relative noise filtering."""
    log = check_event_log(log)
    return filter_dfg(dfg_from_sequences(log.activity_sequences()), noise_threshold)


class DFGMiner(BaseEstimator):
    def __init__(self, noise_threshold=0.0):
        self.noise_threshold = noise_threshold

    def fit(self, X, y=None):
        self.dfg_ = build_dfg(X, self.noise_threshold)
        return self
