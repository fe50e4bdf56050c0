"""PNML (place/transition subset) reading and writing.

Invisible transitions are written without a ``<name>`` and flagged with the
ProM tool-specific ``activity="$invisible$"`` attribute. Final markings use
the ProM ``<finalmarkings>`` extension element.
"""

from __future__ import annotations

import os
import xml.etree.ElementTree as ET

from .net import INVISIBLE, PetriNet

PTNET_TYPE = "http://www.pnml.org/version-2009/grammar/ptnet"
INVISIBLE_FLAG = "$invisible$"


class PNMLParseError(ValueError):
    pass


def _local(tag):
    return tag.rsplit("}", 1)[-1]


def _children(elem, name):
    return [c for c in elem if _local(c.tag) == name]


def _text_of(elem, name):
    for child in _children(elem, name):
        for text in _children(child, "text"):
            return (text.text or "").strip()
    return None


def to_pnml_string(net: PetriNet) -> str:
    """Canonical PNML text: nodes and arcs sorted by id."""
    root = ET.Element("pnml")
    net_el = ET.SubElement(root, "net", id="net1", type=PTNET_TYPE)
    ET.SubElement(ET.SubElement(net_el, "name"), "text").text = net.name
    page = ET.SubElement(net_el, "page", id="n0")
    for pid in sorted(net.places):
        place = ET.SubElement(page, "place", id=pid)
        ET.SubElement(ET.SubElement(place, "name"), "text").text = pid
        if net.initial_marking[pid]:
            ET.SubElement(ET.SubElement(place, "initialMarking"), "text").text = str(net.initial_marking[pid])
    for tid in sorted(net.transitions):
        label = net.label(tid)
        trans = ET.SubElement(page, "transition", id=tid)
        if label is INVISIBLE:
            ET.SubElement(
                trans, "toolspecific", tool="ProM", version="6.4", activity=INVISIBLE_FLAG, localNodeID=tid
            )
        else:
            ET.SubElement(ET.SubElement(trans, "name"), "text").text = label
    for i, (src, dst) in enumerate(sorted(net.arcs)):
        ET.SubElement(page, "arc", id=f"a{i}", source=src, target=dst)
    finals = ET.SubElement(ET.SubElement(net_el, "finalmarkings"), "marking")
    for pid in sorted(net.places):
        place = ET.SubElement(finals, "place", idref=pid)
        ET.SubElement(place, "text").text = str(net.final_marking[pid])
    ET.indent(root, space="  ")
    return '<?xml version="1.0" encoding="UTF-8"?>\n' + ET.tostring(root, encoding="unicode") + "\n"


def export_pnml(net: PetriNet, path) -> None:
    path = os.fspath(path)
    tmp = path + ".tmp"
    try:
        with open(tmp, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(to_pnml_string(net))
        os.replace(tmp, path)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc


def from_pnml_string(text: str, source="<string>") -> PetriNet:
    try:
        root = ET.fromstring(text)
    except ET.ParseError as exc:
        line, col = exc.position
        raise PNMLParseError(f"{source}:{line}:{col}: malformed PNML: {exc}") from None
    nets = [e for e in root.iter() if _local(e.tag) == "net"]
    if _local(root.tag) != "pnml" or not nets:
        raise PNMLParseError(f"{source}: no <net> element")
    net_el = nets[0]
    name = _text_of(net_el, "name") or "net"

    places, transitions, arcs = [], {}, []
    initial = {}
    for elem in net_el.iter():
        tag = _local(elem.tag)
        if tag == "place" and elem.get("id") is not None and elem.get("idref") is None:
            pid = elem.get("id")
            places.append(pid)
            tokens = _text_of(elem, "initialMarking")
            if tokens:
                initial[pid] = _int(tokens, source, pid)
        elif tag == "transition":
            tid = elem.get("id")
            if tid is None:
                raise PNMLParseError(f"{source}: transition without id")
            invisible = any(
                c.get("activity") == INVISIBLE_FLAG for c in _children(elem, "toolspecific")
            )
            label = _text_of(elem, "name")
            transitions[tid] = INVISIBLE if (invisible or label is None) else label
        elif tag == "arc":
            src, dst = elem.get("source"), elem.get("target")
            if src is None or dst is None:
                raise PNMLParseError(f"{source}: arc {elem.get('id')!r} lacks source or target")
            weight = _text_of(elem, "inscription")
            if weight is not None and weight not in ("", "1"):
                raise PNMLParseError(f"{source}: arc {elem.get('id')!r} has multiplicity {weight}; only 1 is supported")
            arcs.append((src, dst))

    final = None
    for finals in net_el.iter():
        if _local(finals.tag) != "finalmarkings":
            continue
        for marking in _children(finals, "marking"):
            final = {}
            for place in _children(marking, "place"):
                texts = _children(place, "text")
                count = _int((texts[0].text or "0").strip() if texts else "0", source, place.get("idref"))
                if count:
                    final[place.get("idref")] = count
            break

    try:
        net = PetriNet(places, transitions, arcs, initial, final or {}, name=name)
    except ValueError as exc:
        raise PNMLParseError(f"{source}: {exc}") from None
    if final is None:
        if not net.is_workflow_net():
            raise PNMLParseError(f"{source}: no final marking and the net is not a workflow net")
        net = PetriNet(places, transitions, arcs, initial, {net.sink_places()[0]: 1}, name=name)
    return net


def _int(text, source, where):
    try:
        value = int(text)
    except ValueError:
        raise PNMLParseError(f"{source}: invalid token count {text!r} at {where!r}") from None
    if value < 0:
        raise PNMLParseError(f"{source}: negative token count at {where!r}")
    return value


def import_pnml(path) -> PetriNet:
    path = os.fspath(path)
    with open(path, encoding="utf-8") as fh:
        return from_pnml_string(fh.read(), source=path)
