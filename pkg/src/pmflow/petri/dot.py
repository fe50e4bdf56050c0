"""Graphviz DOT text for Petri nets.

No layout is computed here; pipe the text into ``dot -Tsvg`` to render it.
"""

from __future__ import annotations

from .net import PetriNet

_PASS_THROUGH = ("fillcolor", "color", "penwidth", "fontcolor", "style", "tooltip")


def quote(text) -> str:
    return '"' + str(text).replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n") + '"'


def attr_list(attrs) -> str:
    return "[" + " ".join(f"{k}={quote(v)}" for k, v in attrs.items()) + "]"


def to_dot(net: PetriNet, annotations=None, rankdir="LR") -> str:
    """Render ``net`` as a DOT digraph.

    ``annotations`` maps node ids to attribute dicts. ``fillcolor``,
    ``color``, ``penwidth``, ``fontcolor``, ``style`` and ``tooltip`` are
    copied verbatim; ``sublabel`` is appended under the node label.
    """
    annotations = annotations or {}
    lines = [f"digraph {quote(net.name)} {{"]
    if net.is_empty():
        lines.append("}")
        return "\n".join(lines) + "\n"
    lines.append(f"  rankdir={rankdir};")
    lines.append('  node [fontname="Helvetica" fontsize=10];')
    for pid in sorted(net.places):
        tokens = net.initial_marking[pid]
        attrs = {"shape": "circle", "label": "●" * tokens if tokens <= 3 else str(tokens), "width": "0.35"}
        if net.final_marking[pid]:
            attrs["peripheries"] = "2"
        attrs.update(_node_attrs(annotations.get(pid), attrs["label"]))
        lines.append(f"  {quote(pid)} {attr_list(attrs)};")
    for tid in sorted(net.transitions):
        label = net.label(tid)
        if label is None:
            attrs = {"shape": "box", "label": "", "style": "filled", "fillcolor": "black", "width": "0.15", "height": "0.4"}
        else:
            attrs = {"shape": "box", "label": label}
        attrs.update(_node_attrs(annotations.get(tid), attrs["label"]))
        lines.append(f"  {quote(tid)} {attr_list(attrs)};")
    for src, dst in sorted(net.arcs):
        lines.append(f"  {quote(src)} -> {quote(dst)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _node_attrs(annotation, base_label):
    if not annotation:
        return {}
    out = {k: annotation[k] for k in _PASS_THROUGH if k in annotation}
    if "fillcolor" in out and "style" not in out:
        out["style"] = "filled"
    if annotation.get("sublabel"):
        out["label"] = f"{base_label}\n{annotation['sublabel']}" if base_label else annotation["sublabel"]
    return out
