from __future__ import annotations

import math
from dataclasses import dataclass

from sklearn.base import BaseEstimator, TransformerMixin

from .._validation import check_event_log
from ..units import to_ms
from .model import CONCEPT_NAME, TIMESTAMP, Event, EventLog, Trace

MAX_EXEMPLARS = 5


@dataclass(frozen=True)
class Variant:
    activity_sequence: tuple
    frequency: int
    exemplar_case_ids: tuple = ()

    def __len__(self):
        return len(self.activity_sequence)


def variant_counts(log: EventLog) -> dict:
    """Map each activity sequence to the indices of the traces following it."""
    groups: dict = {}
    for index, seq in enumerate(log.activity_sequences()):
        groups.setdefault(seq, []).append(index)
    return groups


def variants(log: EventLog, max_exemplars: int = MAX_EXEMPLARS) -> list[Variant]:
    """Trace variants sorted by frequency (descending), then sequence."""
    groups = variant_counts(log)
    result = [
        Variant(seq, len(idx), tuple(log.traces[i].case_id for i in idx[:max_exemplars]))
        for seq, idx in groups.items()
    ]
    result.sort(key=lambda v: (-v.frequency, v.activity_sequence))
    return result


def add_artificial_endpoints(log: EventLog, start_label="▶", end_label="■") -> EventLog:
    """Prefix every trace with ``start_label`` and suffix it with ``end_label``.

    The artificial events copy the timestamp of the neighbouring real event
    and are labelled on every key of the active classifier.
    """
    existing = set(log.activities())
    colliding = [lab for lab in (start_label, end_label) if lab in existing]
    if start_label == end_label:
        colliding.append(start_label)
    if colliding:
        raise ValueError(f"artificial label(s) collide with existing activities: {sorted(set(colliding))}")
    keys = log.classifier_keys

    def artificial(label, neighbour):
        attrs = {key: label for key in keys}
        attrs.setdefault(CONCEPT_NAME, label)
        if neighbour.timestamp is not None:
            attrs[TIMESTAMP] = neighbour.timestamp
        return Event(attrs)

    traces = [
        Trace(
            t.case_id,
            (artificial(start_label, t.events[0]),) + tuple(t.events) + (artificial(end_label, t.events[-1]),),
            t.attributes,
        )
        for t in log.traces
    ]
    return log.with_traces(traces)


def filter_by_throughput(log: EventLog, min_duration=0.0, max_duration=math.inf, unit="ms") -> EventLog:
    """Keep the traces whose throughput time lies in ``[min_duration, max_duration]``."""
    if min_duration > max_duration:
        raise ValueError(f"min_duration {min_duration} exceeds max_duration {max_duration}")
    lo, hi = to_ms(min_duration, unit), to_ms(max_duration, unit)
    return log.with_traces(t for t in log.traces if lo <= t.duration_ms() <= hi)


class ArtificialEndpoints(TransformerMixin, BaseEstimator):
    """Transformer wrapper around :func:`add_artificial_endpoints`."""

    def __init__(self, start_label="▶", end_label="■"):
        self.start_label = start_label
        self.end_label = end_label

    def fit(self, X, y=None):
        check_event_log(X)
        return self

    def transform(self, X):
        return add_artificial_endpoints(check_event_log(X), self.start_label, self.end_label)


class ThroughputFilter(TransformerMixin, BaseEstimator):
    def __init__(self, min_duration=0.0, max_duration=math.inf, unit="ms"):
        self.min_duration = min_duration
        self.max_duration = max_duration
        self.unit = unit

    def fit(self, X, y=None):
        check_event_log(X)
        return self

    def transform(self, X):
        return filter_by_throughput(check_event_log(X), self.min_duration, self.max_duration, self.unit)
