"""Reference implementations used only to check results in tests.

They trade speed for obviousness and share no code with the package beyond
reading net structure.
"""

import math

import networkx as nx


def _fire(net, marking, t):
    m = dict(marking)
    for p in net.preset(t):
        if m.get(p, 0) < 1:
            return None
        m[p] -= 1
    for p in net.postset(t):
        m[p] = m.get(p, 0) + 1
    return frozenset((p, n) for p, n in m.items() if n)


def alignment_cost(net, trace, log_cost=1, model_cost=1, max_tokens=6):
    """Cheapest alignment cost by Dijkstra over the explicitly built synchronous product."""
    trace = tuple(trace)
    start = (frozenset((p, n) for p, n in net.initial_marking.items() if n), 0)
    final = frozenset((p, n) for p, n in net.final_marking.items() if n)
    graph = nx.DiGraph()
    graph.add_node(start)
    todo, seen = [start], {start}
    while todo:
        state = todo.pop()
        marking, pos = state
        succ = []
        for t in net.transitions:
            nxt = _fire(net, dict(marking), t)
            if nxt is None or sum(n for _, n in nxt) > max_tokens:
                continue
            label = net.label(t)
            succ.append(((nxt, pos), 0 if label is None else model_cost))
            if label is not None and pos < len(trace) and trace[pos] == label:
                succ.append(((nxt, pos + 1), 0))
        if pos < len(trace):
            succ.append(((marking, pos + 1), log_cost))
        for nxt, w in succ:
            if graph.has_edge(state, nxt):
                graph[state][nxt]["weight"] = min(graph[state][nxt]["weight"], w)
            else:
                graph.add_edge(state, nxt, weight=w)
            if nxt not in seen:
                seen.add(nxt)
                todo.append(nxt)
    dist = nx.single_source_dijkstra_path_length(graph, start)
    goal = (final, len(trace))
    return dist.get(goal, math.inf)


def cosine(u, v):
    dot = sum(a * b for a, b in zip(u, v))
    nu = math.sqrt(sum(a * a for a in u))
    nv = math.sqrt(sum(b * b for b in v))
    return dot / (nu * nv) if nu and nv else 0.0


def replays(net, transitions):
    """True if the transition sequence fires from the initial to the final marking."""
    marking = dict(net.initial_marking)
    for t in transitions:
        nxt = _fire(net, marking, t)
        if nxt is None:
            return False
        marking = dict(nxt)
    return frozenset((p, n) for p, n in marking.items() if n) == frozenset(
        (p, n) for p, n in net.final_marking.items() if n
    )
