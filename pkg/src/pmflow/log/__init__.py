from .model import (
    CONCEPT_NAME,
    RESOURCE,
    TIMESTAMP,
    Event,
    EventLog,
    ImportReport,
    MissingClassifierKey,
    Trace,
    make_log,
)
from .dispatch import export_log, import_log, log_stem
from .table import TableMapping, export_csv, import_table, read_csv, to_table, write_csv
from .transforms import (
    ArtificialEndpoints,
    ThroughputFilter,
    Variant,
    add_artificial_endpoints,
    filter_by_throughput,
    variants,
)
from .xes import XESParseError, export_xes, format_timestamp, import_xes, parse_timestamp

__all__ = [
    "CONCEPT_NAME", "RESOURCE", "TIMESTAMP", "Event", "EventLog", "ImportReport",
    "MissingClassifierKey", "Trace", "make_log", "TableMapping", "export_csv", "import_table",
    "read_csv", "to_table", "write_csv", "ArtificialEndpoints", "ThroughputFilter", "Variant",
    "add_artificial_endpoints", "filter_by_throughput", "variants", "XESParseError",
    "export_xes", "format_timestamp", "import_xes", "parse_timestamp", "export_log", "import_log", "log_stem",
]
