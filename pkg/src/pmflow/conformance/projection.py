"""Conformance results projected onto the model and onto the log."""

from __future__ import annotations

from dataclasses import dataclass

from ..petri.net import same_structure
from .alignment import LOG, MODEL, SYNC

COLORS = {"synchronous": "#2CA02C", "log": "#F2C80F", "invisible": "#9E9E9E", "model": "#8E44AD"}
_LIGHT_BLUE, _DARK_BLUE = (0xDC, 0xE6, 0xF7), (0x1F, 0x4E, 0x9A)
_CONFORM, _DEVIATE = "#2CA02C", "#D62728"


class NetMismatchError(ValueError):
    pass


def _blend(lo, hi, fraction):
    return "#" + "".join(f"{round(x + (y - x) * fraction):02X}" for x, y in zip(lo, hi))


def project_on_model(result, net=None) -> dict:
    """Node annotations for :func:`pmflow.petri.to_dot`.

    Visible transitions that never needed a model move are filled blue, darker
    for more synchronous moves. The others get a green/red bar split by the
    share of synchronous moves. Both carry the sublabel ``(sync/model)``.
    """
    net = result.net if net is None else net
    if not same_structure(net, result.net):
        raise NetMismatchError("the conformance result was computed on a different net")
    observed = [t for t in sorted(net.transitions) if not net.is_invisible(t) and result.sync_count[t] + result.model_move_count[t] > 0]
    if not observed:
        return {}
    top = max(result.sync_count[t] for t in observed) or 1
    out = {}
    for t in observed:
        s, m = result.sync_count[t], result.model_move_count[t]
        note = {"sublabel": f"({s}/{m})", "tooltip": f"synchronous {s}, model moves {m}"}
        if m == 0:
            fraction = s / top
            note.update(style="filled", fillcolor=_blend(_LIGHT_BLUE, _DARK_BLUE, fraction), fontcolor="white" if fraction > 0.5 else "black")
        else:
            share = s / (s + m)
            if share == 0:
                note.update(style="filled", fillcolor=_DEVIATE)
            else:
                note.update(style="striped", fillcolor=f"{_CONFORM};{share:.3f}:{_DEVIATE}")
        out[t] = note
    return out


@dataclass(frozen=True)
class ProjectedStep:
    kind: str  # synchronous, log, invisible or model
    label: object
    transition: str | None
    color: str


@dataclass(frozen=True)
class ProjectedVariant:
    sequence: tuple
    frequency: int
    cost: float
    steps: tuple


def _step(move):
    if move.kind == SYNC:
        kind = "synchronous"
    elif move.kind == LOG:
        kind = "log"
    elif move.kind == MODEL and move.label is None:
        kind = "invisible"
    else:
        kind = "model"
    return ProjectedStep(kind, move.label, move.transition, COLORS[kind])


def project_on_log(result) -> list:
    """Variants by descending frequency, each move tagged with its color."""
    variants = sorted(result.variants, key=lambda v: (-v.frequency, v.sequence))
    return [
        ProjectedVariant(v.sequence, v.frequency, v.alignment.cost, tuple(_step(m) for m in v.alignment.moves))
        for v in variants
    ]


def format_log_projection(report, limit=None) -> str:
    lines = []
    for v in report[:limit]:
        parts = []
        for s in v.steps:
            if s.kind == "invisible":
                parts.append("[tau]")
            elif s.kind == "synchronous":
                parts.append(str(s.label))
            elif s.kind == "log":
                parts.append(f"{s.label}(log)")
            else:
                parts.append(f"{s.label}(model)")
        lines.append(f"{v.frequency:>8}  cost={v.cost:g}  " + " ".join(parts))
    return "\n".join(lines)
