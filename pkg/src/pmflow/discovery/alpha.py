"""Alpha miner over the footprint of a log.

Length-one loops (``a`` directly followed by ``a``) have no place in the
classic construction; they are projected out before mining and attached
afterwards as self-loops on the places between their neighbours.
"""

from __future__ import annotations

import logging

from sklearn.base import BaseEstimator

from .._validation import check_event_log
from ..petri.net import PetriNet
from .dfg import dfg_from_sequences

logger = logging.getLogger(__name__)

START, END = object(), object()


class EmptyLogError(ValueError):
    pass


def footprint(dfg):
    """Classify every ordered pair of activities as '->', '<-', '||' or '#'."""
    acts = sorted(dfg.activities)
    rel = {}
    for a in acts:
        for b in acts:
            ab, ba = (a, b) in dfg.df_count, (b, a) in dfg.df_count
            rel[(a, b)] = "||" if ab and ba else "->" if ab else "<-" if ba else "#"
    return rel


def _maximal_pairs(activities, rel):
    def unrelated(group):
        return all(rel[(x, y)] == "#" for x in group for y in group)

    def valid(A, B):
        return unrelated(A) and unrelated(B) and all(rel[(a, b)] == "->" for a in A for b in B)

    seen = set()
    frontier = [(frozenset([a]), frozenset([b])) for a in activities for b in activities if rel[(a, b)] == "->"]
    frontier = [p for p in frontier if valid(*p)]
    seen.update(frontier)
    while frontier:
        grown = []
        for A, B in frontier:
            for x in activities:
                for cand in ((A | {x}, B), (A, B | {x})):
                    if cand not in seen and cand != (A, B) and valid(*cand):
                        seen.add(cand)
                        grown.append(cand)
        frontier = grown
    return sorted(
        (p for p in seen if not any(p != q and p[0] <= q[0] and p[1] <= q[1] for q in seen)),
        key=lambda p: (sorted(p[0]), sorted(p[1])),
    )


def alpha_miner(log) -> PetriNet:
    """Discover a Petri net with the alpha algorithm.

    Raises
    ------
    EmptyLogError
        If the log has no traces.
    """
    log = check_event_log(log)
    sequences = log.activity_sequences()
    if not sequences:
        raise EmptyLogError("empty log")
    full = dfg_from_sequences(sequences)
    self_loops = sorted(a for a in full.activities if (a, a) in full.df_count)
    reduced_seqs = [tuple(a for a in seq if a not in self_loops) for seq in sequences]
    reduced = dfg_from_sequences([s for s in reduced_seqs if s])
    activities = sorted(reduced.activities)
    rel = footprint(reduced)
    pairs = _maximal_pairs(activities, rel)

    tid = {a: f"t:{a}" for a in sorted(full.activities)}
    places = ["source"]
    arcs = []
    named_places = [("source", frozenset([START]), frozenset(reduced.start_activities))]
    for a in sorted(reduced.start_activities):
        arcs.append(("source", tid[a]))
    for i, (A, B) in enumerate(pairs):
        pid = f"p{i}"
        places.append(pid)
        named_places.append((pid, A, B))
        arcs.extend((tid[a], pid) for a in sorted(A))
        arcs.extend((pid, tid[b]) for b in sorted(B))
    places.append("sink")
    named_places.append(("sink", frozenset(reduced.end_activities), frozenset([END])))
    for a in sorted(reduced.end_activities):
        arcs.append((tid[a], "sink"))

    for t in self_loops:
        before = {x for (x, y) in full.df_count if y == t and x != t and x not in self_loops}
        after = {y for (x, y) in full.df_count if x == t and y != t and y not in self_loops}
        if t in full.start_activities:
            before.add(START)
        if t in full.end_activities:
            after.add(END)
        hosts = [pid for pid, A, B in named_places if (A & before) and (B & after)]
        if not hosts:
            hosts = [pid for pid, A, B in named_places if (A & before) or (B & after)][:1]
        if not hosts:
            logger.warning("alpha miner: no host place for self-loop activity %r", t)
        for pid in hosts:
            arcs.append((pid, tid[t]))
            arcs.append((tid[t], pid))

    return PetriNet(
        places,
        {tid[a]: a for a in sorted(full.activities)},
        arcs,
        {"source": 1},
        {"sink": 1},
        name="alpha",
    )


class AlphaMiner(BaseEstimator):
    def __init__(self, classifier=None):
        self.classifier = classifier

    def fit(self, X, y=None):
        self.net_ = alpha_miner(check_event_log(X, self.classifier))
        return self
