"""Conversion between event logs and flat tables (one row per event)."""

from __future__ import annotations

import csv
import math
import os
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import Sequence

import numpy as np
import pandas as pd

from .model import CONCEPT_NAME, TIMESTAMP, Event, EventLog, ImportReport, Trace
from .xes import format_timestamp, parse_timestamp

CASE_COLUMN = "case:concept:name"


@dataclass(frozen=True)
class TableMapping:
    """Which columns hold the case id, activity and timestamp.

    ``extra_columns=None`` keeps every remaining column as an event attribute.
    ``timestamp_format`` is a :func:`datetime.strptime` format; ``None``
    means ISO-8601.
    """

    case_column: str = CASE_COLUMN
    activity_column: str = CONCEPT_NAME
    timestamp_column: str | None = TIMESTAMP
    timestamp_format: str | None = None
    extra_columns: Sequence[str] | None = None


def _is_missing(value):
    if value is None:
        return True
    if isinstance(value, float) and math.isnan(value):
        return True
    return value is pd.NaT


def _native(value):
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, pd.Timestamp):
        value = value.to_pydatetime()
    if isinstance(value, datetime) and value.tzinfo is None:
        value = value.replace(tzinfo=timezone.utc)
    return value


def _parse_time(value, fmt):
    value = _native(value)
    if isinstance(value, datetime):
        return value
    text = str(value)
    if fmt is None:
        return parse_timestamp(text)
    dt = datetime.strptime(text, fmt)
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt


def _iter_rows(rows):
    if isinstance(rows, pd.DataFrame):
        columns = list(rows.columns)
        for values in rows.itertuples(index=False, name=None):
            yield dict(zip(columns, values))
    else:
        yield from rows


def import_table(rows, mapping: TableMapping | None = None) -> EventLog:
    """Group rows by case into traces sorted by timestamp.

    ``rows`` is a :class:`pandas.DataFrame` or an iterable of dicts. Rows with
    a missing case id or an unparseable timestamp are rejected and listed in
    ``log.report.rejected_rows`` as ``(row_index, reason)``.
    """
    mapping = mapping or TableMapping()
    report = ImportReport()
    groups: dict[str, list] = {}
    reserved = {mapping.case_column, mapping.activity_column, mapping.timestamp_column}
    for index, row in enumerate(_iter_rows(rows)):
        if index == 0:
            missing = [c for c in reserved if c is not None and c not in row]
            if missing:
                raise KeyError(f"mapped columns not present: {missing}")
        case = row.get(mapping.case_column)
        if _is_missing(case) or str(case) == "":
            report.rejected_rows.append((index, "missing case id"))
            continue
        activity = row.get(mapping.activity_column)
        if _is_missing(activity):
            report.rejected_rows.append((index, "missing activity"))
            continue
        attrs = {CONCEPT_NAME: str(_native(activity))}
        if mapping.timestamp_column is not None:
            raw = row.get(mapping.timestamp_column)
            try:
                if _is_missing(raw):
                    raise ValueError("missing")
                attrs[TIMESTAMP] = _parse_time(raw, mapping.timestamp_format)
            except (ValueError, TypeError) as exc:
                report.rejected_rows.append((index, f"unparseable timestamp {raw!r}: {exc}"))
                continue
        extra = mapping.extra_columns
        if extra is None:
            extra = [c for c in row if c not in reserved]
        for column in extra:
            value = row.get(column)
            if not _is_missing(value):
                attrs[column] = _native(value)
        groups.setdefault(str(_native(case)), []).append(Event(attrs))
    if report.rejected_rows:
        report.count("rows_rejected", len(report.rejected_rows))
    traces = [Trace(case, events) for case, events in groups.items()]
    return EventLog(traces, report=report)


def to_table(log: EventLog, case_column: str = CASE_COLUMN) -> pd.DataFrame:
    """One row per event; columns are the case id plus every event attribute key."""
    keys = []
    seen = set()
    for trace in log.traces:
        for event in trace.events:
            for key in event.attributes:
                if key not in seen:
                    seen.add(key)
                    keys.append(key)
    records = []
    for trace in log.traces:
        for event in trace.events:
            record = {case_column: trace.case_id}
            record.update(event.attributes)
            records.append(record)
    return pd.DataFrame.from_records(records, columns=[case_column] + keys)


def _cell(value):
    if _is_missing(value):
        return ""
    if isinstance(value, datetime):
        return format_timestamp(value)
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_csv(table: pd.DataFrame, path) -> None:
    """UTF-8 CSV with a header row and RFC-4180 quoting."""
    path = os.fspath(path)
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, quoting=csv.QUOTE_MINIMAL, lineterminator="\r\n")
        writer.writerow(list(table.columns))
        for values in table.itertuples(index=False, name=None):
            writer.writerow([_cell(v) for v in values])
    os.replace(tmp, path)


def export_csv(log: EventLog, path) -> None:
    write_csv(to_table(log), path)


def read_csv(path, mapping: TableMapping | None = None) -> EventLog:
    """Read a CSV file (all cells as text) and convert it with :func:`import_table`."""
    frame = pd.read_csv(path, dtype=str, keep_default_na=False, na_values=[""])
    return import_table(frame, mapping)
