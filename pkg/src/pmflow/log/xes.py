"""XES import and export.

Supports string, id, int, float, date and boolean attributes at log, trace
and event scope, classifiers and global attribute declarations. Extension
declarations are read over; list, container and nested attributes are
dropped with a warning counter. ``.xes.gz`` input is detected by its magic
bytes.
"""

from __future__ import annotations

import gzip
import io
import logging
import os
import re
import shlex
import tempfile
import xml.etree.ElementTree as ET
from datetime import datetime, timezone
from xml.sax.saxutils import quoteattr

from .model import (
    CONCEPT_NAME,
    DEFAULT_CLASSIFIER,
    Event,
    EventLog,
    ImportReport,
    Trace,
)

logger = logging.getLogger(__name__)

_SIMPLE_TYPES = {"string", "id", "int", "float", "date", "boolean"}
_COMPOUND_TYPES = {"list", "container", "values"}
_ISO_RE = re.compile(
    r"^(\d{4}-\d{2}-\d{2})[T ](\d{2}:\d{2}(?::\d{2})?)(?:[.,](\d+))?\s*(Z|[+-]\d{2}(?::?\d{2})?)?$"
)


class XESParseError(ValueError):
    def __init__(self, message, path=None, line=None, column=None):
        self.path, self.line, self.column = path, line, column
        where = ""
        if path is not None:
            where = f"{path}"
            if line is not None:
                where += f":{line}:{column}"
            where += ": "
        super().__init__(where + message)


def parse_timestamp(text: str) -> datetime:
    """Parse an ISO-8601 timestamp, truncated to millisecond precision.

    Values without an offset are taken as UTC; the offset of the literal is
    kept so that serialisation reproduces it.
    """
    text = text.strip()
    try:
        dt = datetime.fromisoformat(text)
    except ValueError:
        m = _ISO_RE.match(text)
        if not m:
            raise ValueError(f"unparseable timestamp {text!r}") from None
        date, clock, frac, offset = m.groups()
        if clock.count(":") == 1:
            clock += ":00"
        frac = ((frac or "") + "000000")[:6]
        if offset is None or offset == "Z":
            offset = "+00:00"
        elif len(offset) == 3:
            offset += ":00"
        elif ":" not in offset:
            offset = offset[:3] + ":" + offset[3:]
        dt = datetime.fromisoformat(f"{date}T{clock}.{frac}{offset}")
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    if dt.microsecond % 1000:
        dt = dt.replace(microsecond=dt.microsecond - dt.microsecond % 1000)
    return dt


def format_timestamp(dt: datetime) -> str:
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt.isoformat(timespec="milliseconds")


def _convert(kind, value):
    if kind == "string" or kind == "id":
        return value
    if kind == "int":
        return int(value)
    if kind == "float":
        return float(value)
    if kind == "date":
        return parse_timestamp(value)
    if kind == "boolean":
        lowered = value.strip().lower()
        if lowered not in ("true", "false"):
            raise ValueError(f"invalid boolean {value!r}")
        return lowered == "true"
    raise AssertionError(kind)


def _local(tag):
    return tag.rsplit("}", 1)[-1] if "}" in tag else tag


def _open_maybe_gzip(path):
    with open(path, "rb") as fh:
        magic = fh.read(2)
    if magic == b"\x1f\x8b":
        return gzip.open(path, "rb")
    return open(path, "rb")


def _split_keys(keys):
    try:
        return tuple(shlex.split(keys))
    except ValueError:
        return tuple(keys.split())


def import_xes(path, classifier=None) -> EventLog:
    """Read an XES (optionally gzip-compressed) file.

    Parameters
    ----------
    path : str or path-like
    classifier : str, optional
        Name of the classifier to activate. Defaults to a declared classifier
        over ``concept:name`` alone, or the built-in ``Activity`` classifier.

    Raises
    ------
    XESParseError
        Malformed XML (with line and column) or an invalid attribute value.
    """
    path = os.fspath(path)
    report = ImportReport()
    log_attrs = {}
    globals_ = {}
    classifiers = {}
    traces = []

    # stack entries: (kind, payload); kind in log/global/trace/event/attr/skip
    stack = []
    trace_attrs = None
    trace_events = None
    event_attrs = None
    global_scope = None

    with _open_maybe_gzip(path) as fh:
        try:
            for action, elem in ET.iterparse(fh, events=("start", "end")):
                tag = _local(elem.tag)
                if action == "start":
                    parent = stack[-1][0] if stack else None
                    if parent is None:
                        if tag != "log":
                            raise XESParseError(f"root element is <{tag}>, expected <log>", path)
                        stack.append(("log", None))
                    elif parent in ("attr", "skip"):
                        stack.append(("skip", None))
                        if parent == "attr":
                            report.count("nested_attributes_ignored")
                    elif tag == "trace" and parent == "log":
                        stack.append(("trace", None))
                        trace_attrs, trace_events = {}, []
                    elif tag == "event" and parent == "trace":
                        stack.append(("event", None))
                        event_attrs = {}
                    elif tag == "global" and parent == "log":
                        global_scope = elem.get("scope", "event")
                        globals_.setdefault(global_scope, {})
                        stack.append(("global", None))
                    elif tag in ("extension", "classifier") and parent == "log":
                        stack.append(("skip", None))
                    elif tag in _SIMPLE_TYPES:
                        stack.append(("attr", parent))
                    elif tag in _COMPOUND_TYPES:
                        report.count("compound_attributes_ignored")
                        stack.append(("skip", None))
                    else:
                        report.count("unknown_attribute_types")
                        stack.append(("attr_text", parent))
                    continue

                kind, owner = stack.pop()
                if kind == "attr" or kind == "attr_text":
                    key = elem.get("key")
                    value = elem.get("value")
                    if key is None or value is None:
                        report.count("attributes_without_key_or_value")
                    else:
                        if kind == "attr":
                            try:
                                value = _convert(tag, value)
                            except ValueError as exc:
                                line = getattr(elem, "sourceline", None)
                                raise XESParseError(f"attribute {key!r}: {exc}", path, line) from None
                        target = None
                        if owner == "event":
                            target = event_attrs
                        elif owner == "trace":
                            target = trace_attrs
                        elif owner == "log":
                            target = log_attrs
                        elif owner == "global":
                            target = globals_[global_scope]
                        if target is not None:
                            target[key] = value
                    if owner in ("log", "global"):
                        elem.clear()
                elif kind == "event":
                    trace_events.append(event_attrs)
                    event_attrs = None
                    elem.clear()
                elif kind == "trace":
                    _finish_trace(traces, trace_attrs, trace_events, report)
                    trace_attrs = trace_events = None
                    elem.clear()
                elif kind == "skip" and tag == "classifier" and stack and stack[-1][0] == "log":
                    name = elem.get("name")
                    keys = elem.get("keys")
                    if name and keys:
                        classifiers[name] = _split_keys(keys)
        except ET.ParseError as exc:
            line, column = exc.position
            raise XESParseError(str(exc).split(":")[0], path, line, column) from None

    return _assemble(traces, log_attrs, globals_, classifiers, classifier, report)


def _finish_trace(traces, trace_attrs, raw_events, report):
    case_id = trace_attrs.pop(CONCEPT_NAME, None)
    if case_id is None:
        case_id = f"trace-{len(traces)}"
        report.count("traces_without_case_id")
    raw_events = [e for e in raw_events]
    if not raw_events:
        report.count("empty_traces_skipped")
        return
    traces.append((str(case_id), trace_attrs, raw_events))


def _assemble(raw_traces, log_attrs, globals_, classifiers, classifier, report):
    if classifier is None:
        classifier = next((n for n, k in classifiers.items() if k == (CONCEPT_NAME,)), None)
        if classifier is None:
            classifier = DEFAULT_CLASSIFIER
            classifiers.setdefault(DEFAULT_CLASSIFIER, (CONCEPT_NAME,))
    elif classifier not in classifiers:
        classifiers[classifier] = (classifier,)
    keys = classifiers[classifier]

    traces = []
    for case_id, attrs, raw_events in raw_traces:
        events = []
        for raw in raw_events:
            if not all(k in raw for k in keys):
                report.count("events_missing_classifier_rejected")
                continue
            events.append(Event(raw))
        if not events:
            report.count("empty_traces_skipped")
            continue
        traces.append(Trace(case_id, events, attrs))
    for key, n in report.counters.items():
        logger.warning("XES import: %s = %d", key, n)
    return EventLog(
        traces,
        attributes=log_attrs,
        global_attributes=globals_,
        classifiers=classifiers,
        active_classifier=classifier,
        report=report,
    )


def _xes_type(value):
    if isinstance(value, bool):
        return "boolean", "true" if value else "false"
    if isinstance(value, int):
        return "int", str(value)
    if isinstance(value, float):
        return "float", repr(value)
    if isinstance(value, datetime):
        return "date", format_timestamp(value)
    return "string", str(value)


def _write_attrs(out, attrs, indent):
    for key, value in attrs.items():
        kind, text = _xes_type(value)
        out.write(f"{indent}<{kind} key={quoteattr(key)} value={quoteattr(text)}/>\n")


def _format_keys(keys):
    return " ".join(f"'{k}'" if (" " in k or not k) else k for k in keys)


def write_xes(log: EventLog, fh):
    """Serialise ``log`` as XES text into the text stream ``fh``."""
    fh.write('<?xml version="1.0" encoding="UTF-8"?>\n')
    fh.write('<log xes.version="1.0" xes.features="nested-attributes" xmlns="http://www.xes-standard.org/">\n')
    for name, prefix, uri in (
        ("Concept", "concept", "http://www.xes-standard.org/concept.xesext"),
        ("Time", "time", "http://www.xes-standard.org/time.xesext"),
        ("Organizational", "org", "http://www.xes-standard.org/org.xesext"),
        ("Lifecycle", "lifecycle", "http://www.xes-standard.org/lifecycle.xesext"),
    ):
        fh.write(f'\t<extension name="{name}" prefix="{prefix}" uri="{uri}"/>\n')
    for scope, attrs in log.global_attributes.items():
        fh.write(f"\t<global scope={quoteattr(scope)}>\n")
        _write_attrs(fh, attrs, "\t\t")
        fh.write("\t</global>\n")
    for name, keys in log.classifiers.items():
        fh.write(f"\t<classifier name={quoteattr(name)} keys={quoteattr(_format_keys(keys))}/>\n")
    _write_attrs(fh, log.attributes, "\t")
    for trace in log.traces:
        fh.write("\t<trace>\n")
        fh.write(f"\t\t<string key=\"concept:name\" value={quoteattr(trace.case_id)}/>\n")
        _write_attrs(fh, trace.attributes, "\t\t")
        for event in trace.events:
            fh.write("\t\t<event>\n")
            _write_attrs(fh, event.attributes, "\t\t\t")
            fh.write("\t\t</event>\n")
        fh.write("\t</trace>\n")
    fh.write("</log>\n")


def export_xes(log: EventLog, path) -> None:
    """Write ``log`` to ``path`` atomically; ``.gz`` suffix selects gzip."""
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    try:
        fd, tmp = tempfile.mkstemp(dir=directory, prefix=".xes-", suffix=".tmp")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc
    try:
        with os.fdopen(fd, "wb") as raw:
            if path.endswith(".gz"):
                # mtime=0 keeps the compressed bytes reproducible
                stream = gzip.GzipFile(fileobj=raw, mode="wb", mtime=0)
            else:
                stream = raw
            text = io.TextIOWrapper(stream, encoding="utf-8", newline="\n")
            write_xes(log, text)
            text.flush()
            text.detach()
            if stream is not raw:
                stream.close()
        os.replace(tmp, path)
    except BaseException as exc:
        if os.path.exists(tmp):
            os.unlink(tmp)
        if isinstance(exc, OSError):
            raise OSError(f"cannot write {path}: {exc}") from exc
        raise
