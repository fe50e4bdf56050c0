"""Inductive miner with directly-follows noise filtering.

The log is handled as a multiset of activity sequences. At every step the
directly-follows graph is searched for an exclusive-choice, sequence,
parallel or loop cut, tried in that order. Only when the full graph admits
no cut are the infrequent edges filtered out and the search repeated. The
log is split along the first cut found and each part is mined recursively;
a part without any cut becomes a flower model.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from sklearn.base import BaseEstimator

from .._validation import check_event_log, check_fraction
from ..petri.tree import Operator, ProcessTree, activity, loop, silent, tree_to_petri_net, xor
from .alpha import EmptyLogError
from .dfg import dfg_from_sequences, filter_dfg


@dataclass(frozen=True)
class Cut:
    kind: Operator
    partition: tuple

    def __post_init__(self):
        blocks = [frozenset(b) for b in self.partition]
        if any(not b for b in blocks):
            raise ValueError("cut blocks must be non-empty")
        if sum(len(b) for b in blocks) != len(frozenset().union(*blocks)):
            raise ValueError("cut blocks must be disjoint")
        object.__setattr__(self, "partition", tuple(blocks))
        object.__setattr__(self, "kind", Operator(self.kind))


def _order(blocks):
    return sorted((frozenset(b) for b in blocks), key=lambda b: sorted(b))


def _components(nodes, edges):
    """Connected components of an undirected graph given as neighbour sets."""
    seen, result = set(), []
    for start in sorted(nodes):
        if start in seen:
            continue
        comp, stack = {start}, [start]
        seen.add(start)
        while stack:
            for nxt in edges.get(stack.pop(), ()):
                if nxt not in seen:
                    seen.add(nxt)
                    comp.add(nxt)
                    stack.append(nxt)
        result.append(frozenset(comp))
    return result


def _reachability(acts, succ):
    reach = {}
    for a in acts:
        seen, stack = set(), list(succ.get(a, ()))
        while stack:
            x = stack.pop()
            if x not in seen:
                seen.add(x)
                stack.extend(succ.get(x, ()))
        reach[a] = seen
    return reach


def find_xor_cut(acts, dfg):
    edges = {a: set() for a in acts}
    for (a, b) in dfg.df_count:
        if a != b:
            edges[a].add(b)
            edges[b].add(a)
    comps = _components(acts, edges)
    return Cut(Operator.XOR, _order(comps)) if len(comps) > 1 else None


def find_sequence_cut(acts, dfg):
    succ = {a: set() for a in acts}
    for (a, b) in dfg.df_count:
        succ[a].add(b)
    reach = _reachability(acts, succ)

    # activities that reach each other both ways, or neither way, share a block
    edges = {a: set() for a in acts}
    for a in acts:
        for b in acts:
            if a < b and ((b in reach[a]) == (a in reach[b])):
                edges[a].add(b)
                edges[b].add(a)
    groups = [set(c) for c in _components(acts, edges)]

    def reaches(X, Y):
        return any(y in reach[x] for x in X for y in Y)

    if len(groups) < 2:
        return None
    # order by how many groups each group can reach
    snapshot = list(groups)  # list.sort empties the list while keys are computed
    groups.sort(key=lambda g: (-sum(reaches(g, h) for h in snapshot if h is not g), sorted(g)))
    for i, g in enumerate(groups):
        for h in groups[i + 1:]:
            if reaches(h, g) or not all(y in reach[x] for x in g for y in h):
                return None
    return Cut(Operator.SEQUENCE, tuple(frozenset(g) for g in groups))


def find_parallel_cut(acts, dfg):
    starts, ends = dfg.start_activities, dfg.end_activities
    edges = {a: set() for a in acts}
    for a in acts:
        for b in acts:
            if a < b and not ((a, b) in dfg.df_count and (b, a) in dfg.df_count):
                edges[a].add(b)
                edges[b].add(a)
    comps = _order(_components(acts, edges))
    good = [set(c) for c in comps if c & starts and c & ends]
    bad = [c for c in comps if not (c & starts and c & ends)]
    if not good:
        return None
    for c in bad:
        good[0] |= c
    if len(good) < 2:
        return None
    return Cut(Operator.PARALLEL, _order(good))


def find_loop_cut(acts, dfg):
    starts, ends = dfg.start_activities, dfg.end_activities
    body = set(starts) | set(ends)
    rest = set(acts) - body
    if not rest or not body:
        return None
    edges = {a: set() for a in rest}
    for (a, b) in dfg.df_count:
        if a in rest and b in rest and a != b:
            edges[a].add(b)
            edges[b].add(a)
    redo = []
    for comp in _components(rest, edges):
        into = [(x, c) for (x, c) in dfg.df_count if x in body and c in comp]
        out = [(c, y) for (c, y) in dfg.df_count if c in comp and y in body]
        comp_starts = {c for _, c in into}
        comp_ends = {c for c, _ in out}
        ok = (
            into
            and out
            and all(x in ends for x, _ in into)
            and all(y in starts for _, y in out)
            and all((e, c) in dfg.df_count for e in ends for c in comp_starts)
            and all((c, s) in dfg.df_count for c in comp_ends for s in starts)
        )
        if ok:
            redo.append(comp)
        else:
            body |= comp
    # a redo part that is reachable from the body only through another redo part is not a loop
    redo = [c for c in redo if not (c & body)]
    if not redo:
        return None
    return Cut(Operator.LOOP, (frozenset(body),) + tuple(_order(redo)))


def _project(seq, block):
    return tuple(a for a in seq if a in block)


def split_log(vlog, cut):
    """Distribute a variant multiset over the blocks of ``cut``."""
    blocks = cut.partition
    parts = [Counter() for _ in blocks]
    if cut.kind is Operator.XOR:
        for seq, n in vlog.items():
            scores = [sum(1 for a in seq if a in b) for b in blocks]
            best = max(range(len(blocks)), key=lambda i: (scores[i], -i))
            parts[best][_project(seq, blocks[best])] += n
    elif cut.kind in (Operator.SEQUENCE, Operator.PARALLEL):
        for seq, n in vlog.items():
            for part, block in zip(parts, blocks):
                part[_project(seq, block)] += n
    else:
        where = {a: i for i, b in enumerate(blocks) for a in b}
        for seq, n in vlog.items():
            segments = []
            for a in seq:
                i = where[a]
                if segments and segments[-1][0] == i:
                    segments[-1][1].append(a)
                else:
                    segments.append((i, [a]))
            previous = None
            for i, events in segments:
                if i != 0 and previous != 0:
                    parts[0][()] += n
                parts[i][tuple(events)] += n
                previous = i
            if previous != 0:
                parts[0][()] += n
    return parts


def _flower(acts):
    return loop(xor(*(activity(a) for a in sorted(acts))), silent()) if len(acts) > 1 else loop(activity(next(iter(acts))), silent())


def _mine(vlog, threshold):
    total = sum(vlog.values())
    nonempty = Counter({s: n for s, n in vlog.items() if s})
    if not nonempty:
        return silent()
    empty = vlog.get((), 0)
    if empty and (threshold == 0 or empty >= threshold * total):
        return xor(silent(), _mine(nonempty, threshold))
    acts = {a for s in nonempty for a in s}
    if len(acts) == 1:
        (a,) = acts
        if all(len(s) == 1 for s in nonempty):
            return activity(a)
        return loop(activity(a), silent())
    cut = find_cut(acts, dfg_from_sequences(list(nonempty), list(nonempty.values())), threshold)
    if cut is None:
        return _flower(acts)
    children = [_mine(part, threshold) for part in split_log(nonempty, cut)]
    return ProcessTree(cut.kind, children)


FINDERS = (find_xor_cut, find_sequence_cut, find_parallel_cut, find_loop_cut)


def find_cut(acts, dfg, noise_threshold=0.0):
    """First cut in the fixed order, on the full graph and then, if none, on the filtered one."""
    graphs = [dfg]
    if noise_threshold > 0:
        graphs.append(filter_dfg(dfg, noise_threshold))
    for graph in graphs:
        for finder in FINDERS:
            cut = finder(acts, graph)
            if cut is not None:
                return cut
    return None


def inductive_miner(log, noise_threshold=0.2) -> ProcessTree:
    """Discover a process tree.

    Raises
    ------
    EmptyLogError
        If the log has no traces.
    """
    check_fraction("noise_threshold", noise_threshold)
    log = check_event_log(log)
    sequences = log.activity_sequences()
    if not sequences:
        raise EmptyLogError("empty log")
    return _mine(Counter(sequences), noise_threshold)


def inductive_miner_from_variants(variants, noise_threshold=0.2) -> ProcessTree:
    """Same as :func:`inductive_miner` on a ``{sequence: count}`` mapping; empty sequences allowed."""
    check_fraction("noise_threshold", noise_threshold)
    vlog = Counter({tuple(s): n for s, n in dict(variants).items() if n > 0})
    if not vlog:
        raise EmptyLogError("empty log")
    return _mine(vlog, noise_threshold)


class InductiveMiner(BaseEstimator):
    def __init__(self, noise_threshold=0.2, classifier=None):
        self.noise_threshold = noise_threshold
        self.classifier = classifier

    def fit(self, X, y=None):
        self.tree_ = inductive_miner(check_event_log(X, self.classifier), self.noise_threshold)
        self.net_ = tree_to_petri_net(self.tree_, name="inductive")
        return self
