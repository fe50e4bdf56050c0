"""Hypothesis strategies for nets, trees and traces."""

from hypothesis import strategies as st

from pmflow.petri import PetriNet, activity, loop, parallel, sequence, silent, xor

LABELS = ("a", "b", "c", "d", "e")


@st.composite
def rediscoverable_trees(draw, labels=("a", "b", "c", "d")):
    """Trees with distinct labels and at most four leaves.

    Silent leaves appear only as the skip branch of an exclusive choice and
    never inside loops; every loop body is a two-activity sequence, so its
    start and end activities differ.
    """
    n = draw(st.integers(1, len(labels)))
    return draw(_subtree(tuple(labels[:n]), allow_tau=True))


def _subtree(labels, allow_tau):
    if len(labels) == 1:
        leaf = activity(labels[0])
        if allow_tau:
            return st.sampled_from([leaf, leaf, leaf, xor(leaf, silent())])
        return st.just(leaf)

    @st.composite
    def build(draw):
        op = draw(st.sampled_from(["->", "X", "+", "*"]))
        if op == "*" and len(labels) >= 3:
            body = sequence(activity(labels[0]), activity(labels[1]))
            return loop(body, draw(_subtree(labels[2:], False)))
        if op == "*":
            op = "->"
        k = draw(st.integers(2, min(3, len(labels))))
        cuts = sorted(draw(st.lists(st.integers(1, len(labels) - 1), min_size=k - 1, max_size=k - 1, unique=True)))
        parts = [labels[i:j] for i, j in zip([0] + cuts, cuts + [len(labels)])]
        kids = [draw(_subtree(p, allow_tau)) for p in parts]
        return {"->": sequence, "X": xor, "+": parallel}[op](*kids)

    return build()


@st.composite
def small_trees(draw, max_leaves=4):
    """Arbitrary trees, including silent leaves and duplicate labels."""
    n = draw(st.integers(1, max_leaves))
    return draw(_any_tree(n))


def _any_tree(n):
    if n == 1:
        return st.one_of(st.sampled_from(LABELS[:4]).map(activity), st.just(silent()))

    @st.composite
    def build(draw):
        op = draw(st.sampled_from(["->", "X", "+", "*"]))
        split = draw(st.integers(1, n - 1))
        left, right = draw(_any_tree(split)), draw(_any_tree(n - split))
        if op == "*":
            return loop(left, right)
        return {"->": sequence, "X": xor, "+": parallel}[op](left, right)

    return build()


@st.composite
def state_machine_nets(draw, max_transitions=8):
    """One-token nets: every transition has one input and one output place."""
    n_places = draw(st.integers(2, 5))
    places = [f"p{i}" for i in range(n_places)]
    n_trans = draw(st.integers(1, max_transitions))
    transitions, arcs = {}, []
    for i in range(n_trans):
        label = draw(st.one_of(st.none(), st.sampled_from(LABELS[:4])))
        src = draw(st.sampled_from(places))
        dst = draw(st.sampled_from(places))
        tid = f"t{i}"
        transitions[tid] = label
        arcs += [(src, tid), (tid, dst)]
    final = draw(st.sampled_from(places))
    return PetriNet(places, transitions, arcs, {"p0": 1}, {final: 1})


traces = st.lists(st.sampled_from(LABELS[:4] + ("x",)), max_size=6)
