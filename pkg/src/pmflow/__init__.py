"""Process mining toolkit: event logs, discovery, alignments, performance replay and workflows."""

__version__ = "0.1.0"
