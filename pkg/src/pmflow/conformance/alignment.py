"""Optimal alignments of traces against a Petri net.

The search runs over the synchronous product of the net and the trace: a
state is a marking together with a position in the trace. Synchronous moves
and invisible model moves are free; log moves and visible model moves are
charged per :class:`MoveCosts`. The heuristic counts the remaining events
whose label no transition carries, since each of them can only be a log
move; it is consistent, so the first final state popped is optimal.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

SYNC, LOG, MODEL = "synchronous", "log", "model"
DEFAULT_MAX_STATES = 2_000_000


class AlignmentError(RuntimeError):
    """Alignment failed; ``variant`` holds the offending activity sequence when known."""

    def __init__(self, message, variant=None):
        super().__init__(message)
        self.variant = variant

    def __str__(self):
        base = super().__str__()
        if self.variant is None:
            return base
        return f"{base} (variant: {' -> '.join(map(str, self.variant)) or '<empty>'})"


class ModelCannotTerminate(AlignmentError):
    pass


class AlignmentBudgetExceeded(AlignmentError):
    pass


@dataclass(frozen=True)
class MoveCosts:
    log_move: float = 1
    model_move_visible: float = 1

    def __post_init__(self):
        if self.log_move < 0 or self.model_move_visible < 0:
            raise ValueError("move costs must be non-negative")

    @property
    def sync(self):
        return 0

    @property
    def model_move_invisible(self):
        return 0

    def scaled(self, factor):
        return MoveCosts(self.log_move * factor, self.model_move_visible * factor)


@dataclass(frozen=True)
class Move:
    kind: str
    label: object = None
    transition: str | None = None

    def __post_init__(self):
        if self.kind not in (SYNC, LOG, MODEL):
            raise ValueError(f"unknown move kind {self.kind!r}")
        if self.kind == SYNC and (self.label is None or self.transition is None):
            raise ValueError("a synchronous move needs a label and a transition")
        if self.kind == LOG and self.transition is not None:
            raise ValueError("a log move has no transition")
        if self.kind == MODEL and self.transition is None:
            raise ValueError("a model move needs a transition")

    @property
    def is_invisible(self):
        return self.kind == MODEL and self.label is None

    def cost(self, costs: MoveCosts):
        if self.kind == LOG:
            return costs.log_move
        if self.kind == MODEL and self.label is not None:
            return costs.model_move_visible
        return 0


@dataclass(frozen=True)
class Alignment:
    moves: tuple
    cost: float
    expanded_states: int = 0

    def log_projection(self):
        return tuple(m.label for m in self.moves if m.kind != MODEL)

    def model_projection(self):
        return tuple(m.transition for m in self.moves if m.kind != LOG)

    @property
    def is_perfect(self):
        return self.cost == 0 and not any(m.kind == LOG or (m.kind == MODEL and m.label is not None) for m in self.moves)

    def __len__(self):
        return len(self.moves)


def _fire(vec, pre, post):
    nxt = list(vec)
    for i in pre:
        nxt[i] -= 1
    for i in post:
        nxt[i] += 1
    return tuple(nxt)


def align_trace(net, trace, costs: MoveCosts | None = None, max_states: int = DEFAULT_MAX_STATES) -> Alignment:
    """Minimum-cost alignment of ``trace`` (a sequence of labels) on ``net``.

    Ties between equally cheap alignments are broken deterministically:
    successors are generated as synchronous, invisible model, visible model
    and log moves, transitions in id order, and equal-priority states are
    expanded first-in first-out.

    Raises
    ------
    ModelCannotTerminate
        If no final marking is reachable.
    AlignmentBudgetExceeded
        If more than ``max_states`` states are expanded.
    """
    costs = costs or MoveCosts()
    trace = tuple(trace)
    n = len(trace)
    compiled = net.compiled()
    by_label: dict = {}
    invisible, visible = [], []
    for tid, label, pre, post in compiled:
        if label is None:
            invisible.append((tid, pre, post))
        else:
            visible.append((tid, label, pre, post))
            by_label.setdefault(label, []).append((tid, pre, post))
    unmatched = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        unmatched[i] = unmatched[i + 1] + (trace[i] not in by_label)
    log_cost, model_cost = costs.log_move, costs.model_move_visible

    start = (net.to_vector(net.initial_marking), 0)
    final = net.to_vector(net.final_marking)
    best = {start: 0}
    parent = {start: None}
    heap = [(log_cost * unmatched[0], 0, start)]
    counter = 1
    closed = set()
    while heap:
        _, _, state = heapq.heappop(heap)
        if state in closed:
            continue
        closed.add(state)
        if len(closed) > max_states:
            raise AlignmentBudgetExceeded(f"alignment budget exceeded ({max_states} states)", trace)
        vec, pos = state
        g = best[state]
        if pos == n and vec == final:
            moves = []
            while parent[state] is not None:
                state, move = parent[state]
                moves.append(move)
            return Alignment(tuple(reversed(moves)), g, len(closed))

        successors = []
        if pos < n:
            for tid, pre, post in by_label.get(trace[pos], ()):
                if all(vec[i] for i in pre):
                    successors.append(((_fire(vec, pre, post), pos + 1), 0, Move(SYNC, trace[pos], tid)))
        for tid, pre, post in invisible:
            if all(vec[i] for i in pre):
                successors.append(((_fire(vec, pre, post), pos), 0, Move(MODEL, None, tid)))
        for tid, label, pre, post in visible:
            if all(vec[i] for i in pre):
                successors.append(((_fire(vec, pre, post), pos), model_cost, Move(MODEL, label, tid)))
        if pos < n:
            successors.append(((vec, pos + 1), log_cost, Move(LOG, trace[pos], None)))

        for nxt, step, move in successors:
            if nxt in closed:
                continue
            cand = g + step
            if nxt not in best or cand < best[nxt]:
                best[nxt] = cand
                parent[nxt] = (state, move)
                heapq.heappush(heap, (cand + log_cost * unmatched[nxt[1]], counter, nxt))
                counter += 1
    raise ModelCannotTerminate("model cannot terminate", trace)
