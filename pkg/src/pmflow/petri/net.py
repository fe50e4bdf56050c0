"""Labelled place/transition nets with initial and final markings."""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass

INVISIBLE = None  # label of a silent routing transition


class Marking(Mapping):
    """Immutable multiset of tokens over place ids; zero counts are dropped."""

    __slots__ = ("_counts", "_hash")

    def __init__(self, counts=None):
        if isinstance(counts, Marking):
            self._counts = counts._counts
        else:
            items = {}
            if counts:
                if not isinstance(counts, Mapping):
                    # iterable of place ids, one token each
                    for place in counts:
                        items[place] = items.get(place, 0) + 1
                else:
                    for place, n in counts.items():
                        if not isinstance(n, int) or n < 0:
                            raise ValueError(f"token count for {place!r} must be a non-negative int, got {n!r}")
                        if n:
                            items[place] = n
            self._counts = items
        self._hash = None

    def __getitem__(self, place):
        return self._counts.get(place, 0)

    def __contains__(self, place):
        return place in self._counts

    def __iter__(self):
        return iter(self._counts)

    def __len__(self):
        return len(self._counts)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._counts.items()))
        return self._hash

    def __eq__(self, other):
        if isinstance(other, Marking):
            return self._counts == other._counts
        if isinstance(other, Mapping):
            return self._counts == {k: v for k, v in other.items() if v}
        return NotImplemented

    def __repr__(self):
        inner = ", ".join(f"{p}:{n}" if n != 1 else str(p) for p, n in sorted(self._counts.items()))
        return f"Marking({{{inner}}})"

    def __reduce__(self):
        return (Marking, (dict(self._counts),))

    def total(self):
        return sum(self._counts.values())


@dataclass(frozen=True)
class Transition:
    id: str
    label: str | None = INVISIBLE

    @property
    def invisible(self):
        return self.label is INVISIBLE


class NetStructureError(ValueError):
    pass


class NotEnabledError(ValueError):
    def __init__(self, transition, missing):
        self.transition = transition
        self.missing = tuple(missing)
        super().__init__(f"transition {transition!r} is not enabled; empty input places: {list(self.missing)}")


class PetriNet:
    """A labelled Petri net with arc multiplicity 1.

    Parameters
    ----------
    places : iterable of str
    transitions : mapping of id to label, or iterable of :class:`Transition`
        A label of ``None`` (:data:`INVISIBLE`) marks a silent transition.
    arcs : iterable of (source, target) pairs
        Each arc joins a place and a transition.
    initial_marking, final_marking : Marking or mapping
    """

    def __init__(self, places=(), transitions=(), arcs=(), initial_marking=None, final_marking=None, name="net"):
        self.name = name
        self.places = tuple(dict.fromkeys(places))
        self._place_index = {p: i for i, p in enumerate(self.places)}
        if isinstance(transitions, Mapping):
            trans = [Transition(tid, label) for tid, label in transitions.items()]
        else:
            trans = [t if isinstance(t, Transition) else Transition(*t) for t in transitions]
        self.transitions = {t.id: t for t in trans}
        if len(self.transitions) != len(trans):
            raise NetStructureError("duplicate transition ids")
        overlap = set(self.places) & set(self.transitions)
        if overlap:
            raise NetStructureError(f"ids used for both places and transitions: {sorted(overlap)}")
        place_set = set(self.places)
        self.arcs = frozenset((s, t) for s, t in arcs)
        pre = {tid: [] for tid in self.transitions}
        post = {tid: [] for tid in self.transitions}
        for src, dst in sorted(self.arcs):
            if src in place_set and dst in self.transitions:
                pre[dst].append(src)
            elif src in self.transitions and dst in place_set:
                post[src].append(dst)
            else:
                raise NetStructureError(f"arc {src!r} -> {dst!r} must join an existing place and transition")
        self._pre = {t: tuple(ps) for t, ps in pre.items()}
        self._post = {t: tuple(ps) for t, ps in post.items()}
        self.initial_marking = self._check_marking(initial_marking, "initial")
        self.final_marking = self._check_marking(final_marking, "final")

    def _check_marking(self, marking, which):
        marking = Marking(marking or {})
        foreign = [p for p in marking if p not in self._place_index]
        if foreign:
            raise NetStructureError(f"{which} marking marks unknown places {sorted(foreign)}")
        return marking

    def __repr__(self):
        return (
            f"PetriNet({self.name!r}, places={len(self.places)}, transitions={len(self.transitions)}, "
            f"arcs={len(self.arcs)})"
        )

    def __reduce__(self):
        return (
            PetriNet,
            (
                self.places,
                list(self.transitions.values()),
                sorted(self.arcs),
                dict(self.initial_marking),
                dict(self.final_marking),
                self.name,
            ),
        )

    # structure ----------------------------------------------------------
    def preset(self, tid):
        return self._pre[tid]

    def postset(self, tid):
        return self._post[tid]

    def label(self, tid):
        return self.transitions[tid].label

    def is_invisible(self, tid):
        return self.transitions[tid].label is INVISIBLE

    def labeled_transitions(self):
        return [t for t in self.transitions.values() if t.label is not INVISIBLE]

    def labels(self):
        return {t.label for t in self.labeled_transitions()}

    def place_preset(self, place):
        return tuple(t for t in self.transitions if place in self._post[t])

    def place_postset(self, place):
        return tuple(t for t in self.transitions if place in self._pre[t])

    def is_empty(self):
        return not self.places and not self.transitions

    def is_connected(self):
        """Weak connectivity over places and transitions."""
        nodes = list(self.places) + list(self.transitions)
        if not nodes:
            return True
        adjacency = {n: set() for n in nodes}
        for s, t in self.arcs:
            adjacency[s].add(t)
            adjacency[t].add(s)
        seen = {nodes[0]}
        stack = [nodes[0]]
        while stack:
            for nxt in adjacency[stack.pop()]:
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        return len(seen) == len(nodes)

    def source_places(self):
        return [p for p in self.places if not self.place_preset(p)]

    def sink_places(self):
        return [p for p in self.places if not self.place_postset(p)]

    def is_workflow_net(self):
        """One source place, one sink place, every node on a path between them."""
        sources, sinks = self.source_places(), self.sink_places()
        if len(sources) != 1 or len(sinks) != 1:
            return False
        forward = {n: [] for n in list(self.places) + list(self.transitions)}
        backward = {n: [] for n in forward}
        for s, t in self.arcs:
            forward[s].append(t)
            backward[t].append(s)

        def reach(start, edges):
            seen = {start}
            stack = [start]
            while stack:
                for nxt in edges[stack.pop()]:
                    if nxt not in seen:
                        seen.add(nxt)
                        stack.append(nxt)
            return seen

        everything = set(forward)
        return reach(sources[0], forward) == everything and reach(sinks[0], backward) == everything

    # vector form used by the search algorithms ---------------------------
    def place_index(self):
        return self._place_index

    def to_vector(self, marking):
        vec = [0] * len(self.places)
        for place, n in marking.items():
            vec[self._place_index[place]] = n
        return tuple(vec)

    def from_vector(self, vec):
        return Marking({self.places[i]: n for i, n in enumerate(vec) if n})

    def compiled(self):
        """Per-transition (id, label, preset indices, postset indices), sorted by id."""
        cached = getattr(self, "_compiled", None)
        if cached is None:
            idx = self._place_index
            cached = tuple(
                (tid, self.transitions[tid].label, tuple(idx[p] for p in self._pre[tid]), tuple(idx[p] for p in self._post[tid]))
                for tid in sorted(self.transitions)
            )
            self._compiled = cached
        return cached


def _check_foreign(net, marking):
    index = net.place_index()
    foreign = [p for p in marking if p not in index]
    if foreign:
        raise ValueError(f"marking refers to places not in the net: {sorted(foreign)}")


def enabled_transitions(net: PetriNet, marking) -> frozenset:
    """Transitions whose every input place holds at least one token."""
    marking = Marking(marking)
    _check_foreign(net, marking)
    return frozenset(t for t in net.transitions if all(marking[p] >= 1 for p in net.preset(t)))


def fire(net: PetriNet, marking, tid) -> Marking:
    """Fire ``tid`` and return the successor marking; the input is left untouched."""
    marking = Marking(marking)
    _check_foreign(net, marking)
    if tid not in net.transitions:
        raise KeyError(f"unknown transition {tid!r}")
    missing = [p for p in net.preset(tid) if marking[p] < 1]
    if missing:
        raise NotEnabledError(tid, missing)
    counts = dict(marking.items())
    for p in net.preset(tid):
        counts[p] -= 1
    for p in net.postset(tid):
        counts[p] = counts.get(p, 0) + 1
    return Marking(counts)


def same_structure(a: PetriNet, b: PetriNet) -> bool:
    """True when both nets have the same places, labelled transitions and arcs."""
    return a is b or (
        set(a.places) == set(b.places)
        and {t: a.label(t) for t in a.transitions} == {t: b.label(t) for t in b.transitions}
        and a.arcs == b.arcs
    )
