"""Suffix-based choice between the XES and CSV readers and writers."""

import os

from .table import export_csv, read_csv
from .xes import export_xes, import_xes


def _suffix(path):
    name = os.fspath(path).lower()
    if name.endswith(".xes.gz"):
        return ".xes.gz"
    return os.path.splitext(name)[1]


def import_log(path, classifier=None):
    """Read ``.xes``, ``.xes.gz`` or ``.csv`` (flat table in the default column layout)."""
    suffix = _suffix(path)
    if suffix in (".xes", ".xes.gz", ".gz"):
        return import_xes(path, classifier=classifier)
    if suffix == ".csv":
        log = read_csv(path)
        return log.with_classifier(classifier) if classifier else log
    raise ValueError(f"unsupported log format {suffix!r} for {os.fspath(path)}; expected .xes, .xes.gz or .csv")


def export_log(log, path):
    suffix = _suffix(path)
    if suffix in (".xes", ".xes.gz"):
        export_xes(log, path)
    elif suffix == ".csv":
        export_csv(log, path)
    else:
        raise ValueError(f"unsupported log format {suffix!r} for {os.fspath(path)}")


def log_stem(path):
    name = os.path.basename(os.fspath(path))
    for suffix in (".xes.gz", ".xes", ".csv", ".gz"):
        if name.lower().endswith(suffix):
            return name[: -len(suffix)]
    return os.path.splitext(name)[0]
