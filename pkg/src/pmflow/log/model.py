"""In-memory event log model.

Logs, traces and events are immutable once built. Every transform in
:mod:`pmflow.log` returns a new object.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from datetime import datetime
from functools import cached_property
from types import MappingProxyType
from typing import Any, Iterable, Mapping, Sequence

CONCEPT_NAME = "concept:name"
TIMESTAMP = "time:timestamp"
RESOURCE = "org:resource"
DEFAULT_CLASSIFIER = "Activity"

_EMPTY = MappingProxyType({})


class MissingClassifierKey(KeyError):
    """An event lacks an attribute required by the active classifier."""

    def __init__(self, case_id, event_index, key):
        self.case_id = case_id
        self.event_index = event_index
        self.key = key
        super().__init__(f"case {case_id!r}, event {event_index}: missing classifier key {key!r}")

    def __str__(self):
        return self.args[0]


def _freeze(mapping):
    if isinstance(mapping, MappingProxyType):
        return mapping
    return MappingProxyType(dict(mapping or {}))


@dataclass(frozen=True)
class Event:
    attributes: Mapping[str, Any] = _EMPTY

    def __post_init__(self):
        object.__setattr__(self, "attributes", _freeze(self.attributes))

    def __getitem__(self, key):
        return self.attributes[key]

    def __contains__(self, key):
        return key in self.attributes

    def get(self, key, default=None):
        return self.attributes.get(key, default)

    @property
    def activity(self):
        return self.attributes.get(CONCEPT_NAME)

    @property
    def timestamp(self) -> datetime | None:
        return self.attributes.get(TIMESTAMP)

    def evolve(self, **attributes):
        merged = dict(self.attributes)
        merged.update(attributes)
        return Event(merged)

    def __eq__(self, other):
        if not isinstance(other, Event):
            return NotImplemented
        return dict(self.attributes) == dict(other.attributes)

    def __hash__(self):
        return hash(tuple(sorted(self.attributes)))

    def __reduce__(self):
        return (Event, (dict(self.attributes),))


def _sort_events(events):
    # stable sort; only applied when every event carries a timestamp
    if events and all(isinstance(e.attributes.get(TIMESTAMP), datetime) for e in events):
        stamps = [e.attributes[TIMESTAMP] for e in events]
        if any(b < a for a, b in zip(stamps, stamps[1:])):
            return tuple(sorted(events, key=lambda e: e.attributes[TIMESTAMP]))
    return events


@dataclass(frozen=True)
class Trace:
    case_id: str
    events: Sequence[Event]
    attributes: Mapping[str, Any] = _EMPTY

    def __post_init__(self):
        events = tuple(self.events)
        if not events:
            raise ValueError(f"trace {self.case_id!r} has no events")
        object.__setattr__(self, "case_id", str(self.case_id))
        object.__setattr__(self, "events", _sort_events(events))
        object.__setattr__(self, "attributes", _freeze(self.attributes))

    def __len__(self):
        return len(self.events)

    def __iter__(self):
        return iter(self.events)

    def __getitem__(self, index):
        return self.events[index]

    def __eq__(self, other):
        if not isinstance(other, Trace):
            return NotImplemented
        return (
            self.case_id == other.case_id
            and self.events == other.events
            and dict(self.attributes) == dict(other.attributes)
        )

    def __hash__(self):
        return hash(self.case_id)

    def __reduce__(self):
        return (Trace, (self.case_id, self.events, dict(self.attributes)))

    @property
    def start_time(self):
        return self.events[0].timestamp

    @property
    def end_time(self):
        return self.events[-1].timestamp

    def duration_ms(self):
        """Throughput time of the case in milliseconds."""
        first, last = self.events[0].timestamp, self.events[-1].timestamp
        if first is None or last is None or not all(e.timestamp is not None for e in self.events):
            missing = next(i for i, e in enumerate(self.events) if e.timestamp is None)
            raise ValueError(f"case {self.case_id!r}, event {missing}: no timestamp")
        return (last - first).total_seconds() * 1000.0


@dataclass
class ImportReport:
    """Counters and rejected rows collected while building a log from a source."""

    counters: dict = field(default_factory=dict)
    rejected_rows: list = field(default_factory=list)

    def count(self, key, n=1):
        self.counters[key] = self.counters.get(key, 0) + n

    def __bool__(self):
        return bool(self.counters or self.rejected_rows)


@dataclass(frozen=True)
class EventLog:
    """An ordered collection of traces.

    Parameters
    ----------
    traces : sequence of Trace
        Case identifiers must be unique.
    attributes : mapping
        Log-level attributes.
    global_attributes : mapping
        ``{"trace": {...}, "event": {...}}`` default attribute declarations.
    classifiers : mapping of str to tuple of str
        Named lists of attribute keys. The concatenated values of the active
        classifier's keys form an event's activity label.
    active_classifier : str
        Name of an entry in ``classifiers``.
    """

    traces: Sequence[Trace] = ()
    attributes: Mapping[str, Any] = _EMPTY
    global_attributes: Mapping[str, Mapping[str, Any]] = _EMPTY
    classifiers: Mapping[str, tuple] = MappingProxyType({DEFAULT_CLASSIFIER: (CONCEPT_NAME,)})
    active_classifier: str = DEFAULT_CLASSIFIER
    report: ImportReport = field(default_factory=ImportReport, compare=False, repr=False)

    def __post_init__(self):
        traces = tuple(self.traces)
        seen = set()
        for trace in traces:
            if trace.case_id in seen:
                raise ValueError(f"duplicate case id {trace.case_id!r}")
            seen.add(trace.case_id)
        classifiers = {name: tuple(keys) for name, keys in dict(self.classifiers).items()}
        if self.active_classifier not in classifiers:
            raise ValueError(f"active classifier {self.active_classifier!r} is not declared")
        object.__setattr__(self, "traces", traces)
        object.__setattr__(self, "attributes", _freeze(self.attributes))
        object.__setattr__(
            self,
            "global_attributes",
            MappingProxyType({scope: _freeze(v) for scope, v in dict(self.global_attributes).items()}),
        )
        object.__setattr__(self, "classifiers", MappingProxyType(classifiers))

    def __len__(self):
        return len(self.traces)

    def __iter__(self):
        return iter(self.traces)

    def __getitem__(self, index):
        return self.traces[index]

    def __getstate__(self):
        state = dict(self.__dict__)
        state.pop("_sequences", None)
        state["attributes"] = dict(self.attributes)
        state["global_attributes"] = {k: dict(v) for k, v in self.global_attributes.items()}
        state["classifiers"] = dict(self.classifiers)
        return state

    def __setstate__(self, state):
        for key, value in state.items():
            object.__setattr__(self, key, value)
        self.__post_init__()

    @property
    def classifier_keys(self) -> tuple:
        return self.classifiers[self.active_classifier]

    @property
    def n_events(self):
        return sum(len(t.events) for t in self.traces)

    def label_of(self, event, case_id="?", index=-1):
        keys = self.classifier_keys
        attrs = event.attributes
        if len(keys) == 1:
            try:
                return str(attrs[keys[0]])
            except KeyError:
                raise MissingClassifierKey(case_id, index, keys[0]) from None
        parts = []
        for key in keys:
            if key not in attrs:
                raise MissingClassifierKey(case_id, index, key)
            parts.append(str(attrs[key]))
        return "+".join(parts)

    @cached_property
    def _sequences(self):
        return tuple(
            tuple(self.label_of(e, t.case_id, i) for i, e in enumerate(t.events)) for t in self.traces
        )

    def activity_sequences(self) -> tuple:
        """Activity label sequence of every trace under the active classifier."""
        return self._sequences

    def activities(self):
        return sorted({a for seq in self._sequences for a in seq})

    def with_traces(self, traces: Iterable[Trace]) -> "EventLog":
        return replace(self, traces=tuple(traces), report=ImportReport())

    def with_classifier(self, name, keys=None) -> "EventLog":
        """Return a copy using classifier ``name``, declaring it with ``keys`` if given."""
        classifiers = dict(self.classifiers)
        if keys is not None:
            classifiers[name] = tuple(keys)
        elif name not in classifiers:
            # a bare attribute key is accepted as a single-key classifier
            classifiers[name] = (name,)
        return replace(self, classifiers=classifiers, active_classifier=name, report=self.report)


def make_log(sequences, *, case_prefix="case", timestamps=None, **kwargs) -> EventLog:
    """Build a log from plain activity sequences (handy in tests and notebooks).

    Empty sequences are skipped since a trace needs at least one event.
    """
    traces = []
    for i, seq in enumerate(sequences):
        if not seq:
            continue
        events = []
        for j, activity in enumerate(seq):
            attrs = {CONCEPT_NAME: activity}
            if timestamps is not None:
                attrs[TIMESTAMP] = timestamps[i][j]
            events.append(Event(attrs))
        traces.append(Trace(f"{case_prefix}{i}", events))
    return EventLog(traces, **kwargs)
