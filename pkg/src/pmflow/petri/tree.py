"""Block-structured process trees.

A tree is built from activity leaves, silent leaves and the operators
sequence (``->``), exclusive choice (``X``), parallel (``+``) and loop
(``*``). A loop's first child is the do-part; the remaining children are
alternative redo-parts.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from enum import Enum

from .net import INVISIBLE, PetriNet


class Operator(str, Enum):
    SEQUENCE = "->"
    XOR = "X"
    PARALLEL = "+"
    LOOP = "*"


@dataclass(frozen=True)
class ProcessTree:
    operator: Operator | None = None
    children: tuple = ()
    label: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))
        if self.operator is None:
            if self.children:
                raise ValueError("leaves cannot have children")
        else:
            object.__setattr__(self, "operator", Operator(self.operator))
            if not self.children:
                raise ValueError(f"operator {self.operator.value} needs at least one child")
            if self.operator is Operator.LOOP and len(self.children) < 2:
                raise ValueError("a loop needs a do-part and at least one redo-part")

    @property
    def is_leaf(self):
        return self.operator is None

    @property
    def is_silent(self):
        return self.operator is None and self.label is None

    def leaves(self):
        if self.is_leaf:
            return [self]
        return [leaf for child in self.children for leaf in child.leaves()]

    def activities(self):
        return sorted({leaf.label for leaf in self.leaves() if leaf.label is not None})

    def __str__(self):
        return format_tree(self)


def activity(label):
    return ProcessTree(label=label)


def silent():
    return ProcessTree()


def sequence(*children):
    return ProcessTree(Operator.SEQUENCE, children)


def xor(*children):
    return ProcessTree(Operator.XOR, children)


def parallel(*children):
    return ProcessTree(Operator.PARALLEL, children)


def loop(do, *redo):
    return ProcessTree(Operator.LOOP, (do,) + redo)


# ---------------------------------------------------------------------------
# text notation


def _quote(label):
    return "'" + label.replace("\\", "\\\\").replace("'", "\\'") + "'"


def format_tree(tree: ProcessTree) -> str:
    if tree.is_leaf:
        return "tau" if tree.label is None else _quote(tree.label)
    return f"{tree.operator.value}( " + ", ".join(format_tree(c) for c in tree.children) + " )"


_TOKEN = re.compile(r"\s*(?:(->|[X+*()\,])|'((?:\\.|[^'\\])*)'|([A-Za-z_][\w]*))")


def parse_tree(text: str) -> ProcessTree:
    """Parse the notation produced by :func:`format_tree`.

    Unquoted identifiers other than ``tau`` are accepted as activity labels.
    """
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"unexpected input at offset {pos}: {text[pos:pos + 20]!r}")
        sym, quoted, ident = m.groups()
        if sym is not None:
            tokens.append(("sym", sym))
        elif quoted is not None:
            tokens.append(("label", re.sub(r"\\(.)", r"\1", quoted)))
        else:
            tokens.append(("ident", ident))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1

    def node(i):
        kind, value = tokens[i]
        if kind == "sym" and value in ("->", "X", "+", "*"):
            if i + 1 >= len(tokens) or tokens[i + 1] != ("sym", "("):
                raise ValueError(f"expected '(' after operator {value}")
            children = []
            i += 2
            while True:
                child, i = node(i)
                children.append(child)
                if i >= len(tokens):
                    raise ValueError("unterminated operator")
                if tokens[i] == ("sym", ","):
                    i += 1
                elif tokens[i] == ("sym", ")"):
                    return ProcessTree(Operator(value), children), i + 1
                else:
                    raise ValueError(f"unexpected token {tokens[i][1]!r}")
        if kind == "ident" and value == "tau":
            return silent(), i + 1
        if kind in ("label", "ident"):
            return activity(value), i + 1
        raise ValueError(f"unexpected token {value!r}")

    if not tokens:
        raise ValueError("empty tree")
    tree, end = node(0)
    if end != len(tokens):
        raise ValueError("trailing input after tree")
    return tree


# ---------------------------------------------------------------------------
# semantics


def _shuffle(u, v):
    if not u:
        return {v}
    if not v:
        return {u}
    return {(u[0],) + w for w in _shuffle(u[1:], v)} | {(v[0],) + w for w in _shuffle(u, v[1:])}


def tree_language(tree: ProcessTree, max_length: int) -> frozenset:
    """All traces of ``tree`` with at most ``max_length`` activities."""
    if tree.is_leaf:
        return frozenset({()} if tree.label is None else ({(tree.label,)} if max_length >= 1 else set()))
    langs = [tree_language(c, max_length) for c in tree.children]
    op = tree.operator
    if op is Operator.XOR:
        return frozenset().union(*langs)
    if op is Operator.SEQUENCE:
        result = {()}
        for lang in langs:
            result = {u + v for u in result for v in lang if len(u) + len(v) <= max_length}
        return frozenset(result)
    if op is Operator.PARALLEL:
        result = {()}
        for lang in langs:
            result = {
                w for u in result for v in lang if len(u) + len(v) <= max_length for w in _shuffle(u, v)
            }
        return frozenset(result)
    do, redo = langs[0], frozenset().union(*langs[1:])
    result = set(do)
    frontier = set(do)
    while frontier:
        grown = {
            w + r + d
            for w in frontier
            for r in redo
            for d in do
            if len(w) + len(r) + len(d) <= max_length
        }
        frontier = grown - result
        result |= frontier
    return frozenset(result)


# ---------------------------------------------------------------------------
# conversion


def tree_to_petri_net(tree: ProcessTree, name="process tree") -> PetriNet:
    """Translate a tree into a sound workflow net with the same language.

    Activity leaves become labelled transitions; silent leaves and the
    split/join/loop routing become invisible transitions.
    """
    places = []
    transitions = {}
    arcs = []
    counter = itertools.count()

    def new_place():
        pid = f"p{len(places)}"
        places.append(pid)
        return pid

    def new_transition(label, src, dst):
        tid = f"t{next(counter)}"
        transitions[tid] = label
        for p in src:
            arcs.append((p, tid))
        for p in dst:
            arcs.append((tid, p))
        return tid

    def build(node, entry, exit_):
        if node.is_leaf:
            new_transition(node.label if node.label is not None else INVISIBLE, [entry], [exit_])
            return
        op = node.operator
        if op is Operator.SEQUENCE:
            current = entry
            for i, child in enumerate(node.children):
                nxt = exit_ if i == len(node.children) - 1 else new_place()
                build(child, current, nxt)
                current = nxt
        elif op is Operator.XOR:
            for child in node.children:
                build(child, entry, exit_)
        elif op is Operator.PARALLEL:
            starts = [new_place() for _ in node.children]
            ends = [new_place() for _ in node.children]
            new_transition(INVISIBLE, [entry], starts)
            for child, s, e in zip(node.children, starts, ends):
                build(child, s, e)
            new_transition(INVISIBLE, ends, [exit_])
        else:
            loop_in, loop_out = new_place(), new_place()
            new_transition(INVISIBLE, [entry], [loop_in])
            build(node.children[0], loop_in, loop_out)
            for redo in node.children[1:]:
                build(redo, loop_out, loop_in)
            new_transition(INVISIBLE, [loop_out], [exit_])

    source = new_place()
    sink = new_place()
    build(tree, source, sink)
    return PetriNet(places, transitions, arcs, {source: 1}, {sink: 1}, name=name)
