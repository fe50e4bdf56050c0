"""Input coercion shared by the estimators."""

import pandas as pd


def check_event_log(X, classifier=None):
    """Coerce ``X`` into an :class:`~pmflow.log.EventLog`.

    Accepts an ``EventLog``, a :class:`pandas.DataFrame` in the flat layout
    produced by :func:`~pmflow.log.to_table`, or a sequence of activity
    sequences.
    """
    from .log.model import TIMESTAMP, EventLog, make_log
    from .log.table import TableMapping, import_table

    if isinstance(X, EventLog):
        log = X
    elif isinstance(X, pd.DataFrame):
        mapping = TableMapping(timestamp_column=TIMESTAMP if TIMESTAMP in X.columns else None)
        log = import_table(X, mapping)
    elif isinstance(X, (list, tuple)) and all(isinstance(s, (list, tuple)) for s in X):
        log = make_log(X)
    else:
        raise TypeError(f"expected an EventLog, DataFrame or list of sequences, got {type(X).__name__}")
    if classifier is not None and classifier != log.active_classifier:
        log = log.with_classifier(classifier)
    return log


def check_petri_net(net):
    from .petri.net import PetriNet

    if not isinstance(net, PetriNet):
        raise TypeError(f"expected a PetriNet, got {type(net).__name__}")
    return net


def check_fraction(name, value):
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {value}")
    return value
