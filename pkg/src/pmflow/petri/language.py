"""Bounded state-space exploration: reachability and trace languages."""

from __future__ import annotations

from collections import deque

from .net import PetriNet


class StateSpaceLimit(RuntimeError):
    pass


def _successors(compiled, vec):
    for tid, label, pre, post in compiled:
        if all(vec[i] for i in pre):
            nxt = list(vec)
            for i in pre:
                nxt[i] -= 1
            for i in post:
                nxt[i] += 1
            yield tid, label, tuple(nxt)


def reachable_markings(net: PetriNet, max_states=100_000):
    """Breadth-first reachability graph as ``{vector: [(tid, label, vector)]}``."""
    compiled = net.compiled()
    start = net.to_vector(net.initial_marking)
    graph = {start: None}
    queue = deque([start])
    while queue:
        vec = queue.popleft()
        edges = list(_successors(compiled, vec))
        graph[vec] = edges
        for _, _, nxt in edges:
            if nxt not in graph:
                if len(graph) >= max_states:
                    raise StateSpaceLimit(f"more than {max_states} reachable markings")
                graph[nxt] = None
                queue.append(nxt)
    return graph


def net_language(net: PetriNet, max_length: int, max_states=500_000, max_tokens=None) -> frozenset:
    """Visible traces of length <= ``max_length`` from the initial to the final marking.

    ``max_tokens`` prunes markings with more tokens than given, which keeps
    the search finite on unbounded nets.
    """
    compiled = net.compiled()
    start = net.to_vector(net.initial_marking)
    final = net.to_vector(net.final_marking)
    seen = {(start, ())}
    queue = deque(seen)
    language = set()
    while queue:
        vec, prefix = queue.popleft()
        if vec == final:
            language.add(prefix)
        for _, label, nxt in _successors(compiled, vec):
            if max_tokens is not None and sum(nxt) > max_tokens:
                continue
            word = prefix if label is None else prefix + (label,)
            if len(word) > max_length:
                continue
            state = (nxt, word)
            if state not in seen:
                if len(seen) >= max_states:
                    raise StateSpaceLimit(f"more than {max_states} states explored")
                seen.add(state)
                queue.append(state)
    return frozenset(language)


def has_parallel_labeled_steps(net: PetriNet, max_states=100_000) -> bool:
    """True if some reachable marking enables two labelled transitions with disjoint presets."""
    graph = reachable_markings(net, max_states)
    for vec, edges in graph.items():
        labeled = [t for t, label, _ in edges if label is not None]
        for i, a in enumerate(labeled):
            for b in labeled[i + 1:]:
                if not set(net.preset(a)) & set(net.preset(b)):
                    return True
    return False
