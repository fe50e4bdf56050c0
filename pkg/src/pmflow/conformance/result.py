from __future__ import annotations

import logging
import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from sklearn.base import BaseEstimator

from .._io import write_csv_rows
from .._validation import check_event_log, check_petri_net
from .alignment import DEFAULT_MAX_STATES, LOG, MODEL, SYNC, AlignmentError, MoveCosts, align_trace

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class VariantAlignment:
    sequence: tuple
    frequency: int
    alignment: object


@dataclass(frozen=True)
class ConformanceResult:
    net: object
    costs: MoveCosts
    variants: tuple
    sync_count: dict
    model_move_count: dict
    log_move_count: dict
    fitness: float
    empty_completion_cost: float

    def alignment_for(self, sequence):
        sequence = tuple(sequence)
        index = getattr(self, "_index", None)
        if index is None:
            index = {v.sequence: v.alignment for v in self.variants}
            object.__setattr__(self, "_index", index)
        return index[sequence]

    @property
    def n_traces(self):
        return sum(v.frequency for v in self.variants)

    @property
    def total_cost(self):
        return sum(v.frequency * v.alignment.cost for v in self.variants)


def _align_one(args):
    net, seq, costs, max_states = args
    try:
        return align_trace(net, seq, costs, max_states)
    except AlignmentError as exc:
        exc.variant = seq
        raise


def align_log(net, log, costs: MoveCosts | None = None, n_jobs: int = 1, max_states: int = DEFAULT_MAX_STATES) -> ConformanceResult:
    """Align every distinct variant of ``log`` once and aggregate by frequency.

    Fitness is one minus the weighted alignment cost over the weighted
    worst case, where the worst case of a trace is deleting all of its events
    plus the cheapest model completion of the empty trace.
    """
    net = check_petri_net(net)
    log = check_event_log(log)
    costs = costs or MoveCosts()
    counts = Counter(log.activity_sequences())
    ordered = sorted(counts, key=lambda s: (-counts[s], s))
    jobs = [(net, seq, costs, max_states) for seq in ordered]
    if n_jobs and n_jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=n_jobs) as pool:
            alignments = list(pool.map(_align_one, jobs, chunksize=max(1, len(jobs) // (4 * n_jobs))))
    else:
        alignments = [_align_one(j) for j in jobs]
    empty = align_trace(net, (), costs, max_states).cost
    return assemble_result(net, costs, [(seq, counts[seq], al) for seq, al in zip(ordered, alignments)], empty)


def assemble_result(net, costs, triples, empty_completion_cost) -> ConformanceResult:
    sync = {tid: 0 for tid in sorted(net.transitions)}
    model = dict(sync)
    log_moves: dict = {}
    cost_sum = worst_sum = 0.0
    variants = []
    for seq, freq, al in sorted(triples, key=lambda x: (-x[1], x[0])):
        variants.append(VariantAlignment(tuple(seq), freq, al))
        for m in al.moves:
            if m.kind == SYNC:
                sync[m.transition] += freq
            elif m.kind == MODEL:
                model[m.transition] += freq
            elif m.kind == LOG:
                log_moves[m.label] = log_moves.get(m.label, 0) + freq
        cost_sum += freq * al.cost
        worst_sum += freq * (len(seq) * costs.log_move + empty_completion_cost)
    fitness = 1.0 if worst_sum == 0 else min(1.0, max(0.0, 1.0 - cost_sum / worst_sum))
    if cost_sum > 0 and fitness == 1.0:
        fitness = math.nextafter(1.0, 0.0)
    return ConformanceResult(net, costs, tuple(variants), sync, model, log_moves, fitness, empty_completion_cost)


# exports --------------------------------------------------------------


def transition_rows(result: ConformanceResult):
    rows = []
    for tid in sorted(result.net.transitions):
        label = result.net.label(tid)
        rows.append((tid, "" if label is None else label, result.sync_count[tid], result.model_move_count[tid]))
    return rows


def export_transition_counters(result: ConformanceResult, path) -> None:
    write_csv_rows(path, ("transition", "label", "sync_count", "model_move_count"), transition_rows(result))


def export_log_moves(result: ConformanceResult, path) -> None:
    rows = sorted(result.log_move_count.items(), key=lambda kv: (-kv[1], str(kv[0])))
    write_csv_rows(path, ("label", "log_move_count"), rows)


def export_variant_costs(result: ConformanceResult, path) -> None:
    rows = [
        (rank, v.frequency, v.alignment.cost, len(v.sequence), ";".join(map(str, v.sequence)))
        for rank, v in enumerate(result.variants, 1)
    ]
    write_csv_rows(path, ("rank", "frequency", "cost", "length", "variant"), rows)


class AlignmentChecker(BaseEstimator):
    """Estimator wrapper: ``fit`` stores the net, ``score`` returns fitness."""

    def __init__(self, net=None, log_move_cost=1, model_move_cost=1, n_jobs=1, classifier=None):
        self.net = net
        self.log_move_cost = log_move_cost
        self.model_move_cost = model_move_cost
        self.n_jobs = n_jobs
        self.classifier = classifier

    def fit(self, X=None, y=None):
        self.net_ = check_petri_net(self.net)
        self.costs_ = MoveCosts(self.log_move_cost, self.model_move_cost)
        if X is not None:
            self.result_ = align_log(self.net_, check_event_log(X, self.classifier), self.costs_, self.n_jobs)
        return self

    def transform(self, X):
        return align_log(self.net_, check_event_log(X, self.classifier), self.costs_, self.n_jobs)

    def score(self, X, y=None):
        return self.transform(X).fitness
