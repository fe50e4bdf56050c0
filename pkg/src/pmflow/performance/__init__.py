"""Performance analysis by timestamp replay over alignments."""

from .replay import (
    METRICS,
    MissingTimestampError,
    PerformanceAnalyzer,
    PerformanceAnnotation,
    annotate_performance,
    color_bottlenecks,
    export_performance,
    format_stats,
    global_stats,
    performance_rows,
    rank_bottlenecks,
    replay_case,
)
from .stats import DurationStats

__all__ = [
    "METRICS", "MissingTimestampError", "PerformanceAnalyzer", "PerformanceAnnotation", "annotate_performance",
    "color_bottlenecks", "export_performance", "format_stats", "global_stats", "performance_rows",
    "rank_bottlenecks", "replay_case", "DurationStats",
]
