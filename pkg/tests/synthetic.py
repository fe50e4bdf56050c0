"""Seeded generator of road-fine-like event logs.

The public log is not bundled; tests that need realistic shape and timing use
this generator instead. Paths follow the normative process with a few
deviating variants (a second payment, payment before the penalty, a send that
is never notified) so that alignments contain log and model moves.
"""

from datetime import datetime, timedelta, timezone

import numpy as np

from pmflow.log import CONCEPT_NAME, RESOURCE, TIMESTAMP, Event, EventLog, Trace

CF, SF, IFN, AP, P, SFCC = (
    "Create Fine", "Send Fine", "Insert Fine Notification", "Add penalty", "Payment", "Send for Credit Collection",
)
SAP, IDAP, RRAP, NRAP, AJ = (
    "Send Appeal to Prefecture", "Insert Date Appeal to Prefecture", "Receive Result Appeal from Prefecture",
    "Notify Result Appeal to Offender", "Appeal to Judge",
)

# (weight, path); gaps are drawn per step below
PATHS = (
    (0.375, (CF, SF, IFN, AP, SFCC)),
    (0.308, (CF, P)),
    (0.136, (CF, SF)),
    (0.063, (CF, SF, IFN, AP, P)),
    (0.025, (CF, SF, IFN, AP, P, P)),
    (0.022, (CF, SF, IFN, P, AP, P)),
    (0.02, (CF, SF, P)),
    (0.015, (CF, SF, IFN, P)),
    (0.012, (CF, SF, IFN, SAP, IDAP, RRAP, NRAP, P)),
    (0.01, (CF, SF, IFN, SAP, IDAP, RRAP, NRAP, AJ, SFCC)),
    (0.008, (CF, P, P)),
    (0.006, (CF, SF, IFN, SAP, IDAP, RRAP, NRAP)),
)

# mean gap in days before each activity, given the previous one
_GAP_DAYS = {SF: 90.0, IFN: 15.0, SAP: 20.0, IDAP: 10.0, RRAP: 150.0, NRAP: 40.0, AJ: 30.0, P: 45.0, SFCC: 520.0}
OFFICERS = tuple(str(n) for n in (537, 550, 561, 25, 559, 541, 31, 55))


def generate(n_traces=2000, seed=7, resources=True) -> EventLog:
    rng = np.random.default_rng(seed)
    weights = np.array([w for w, _ in PATHS])
    weights = weights / weights.sum()
    picks = rng.choice(len(PATHS), size=n_traces, p=weights)
    traces = []
    base = datetime(2000, 1, 1, tzinfo=timezone.utc)
    for i, k in enumerate(picks):
        path = PATHS[k][1]
        t = base + timedelta(days=int(rng.integers(0, 4000)))
        events = []
        prev = None
        for a in path:
            if prev is not None:
                if a == AP:
                    gap = 60.0
                else:
                    gap = float(rng.gamma(2.0, _GAP_DAYS.get(a, 30.0) / 2.0)) + 1.0
                t = t + timedelta(days=round(gap))
            attrs = {CONCEPT_NAME: a, TIMESTAMP: t}
            if resources and a in (CF, SF):
                attrs[RESOURCE] = OFFICERS[int(rng.integers(0, len(OFFICERS)))] if a == CF else "admin"
            if a == P:
                attrs["paymentAmount"] = float(rng.choice([36.0, 35.0, 68.77]))
            events.append(Event(attrs))
            prev = a
        traces.append(Trace(f"S{i:06d}", tuple(events), {"amount": 36.0}))
    return EventLog(tuple(traces), attributes={CONCEPT_NAME: "synthetic road fines"})
