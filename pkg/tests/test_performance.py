import csv
import statistics
from datetime import timedelta

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pmflow.conformance import align_log
from pmflow.log import CONCEPT_NAME, TIMESTAMP, Event, EventLog, Trace, make_log
from pmflow.performance import (

    DurationStats,
    MissingTimestampError,
    PerformanceAnalyzer,
    annotate_performance,
    color_bottlenecks,
    export_performance,
    format_stats,
    global_stats,
    rank_bottlenecks,
)
from pmflow.petri import activity, normative_rtfm_model, parallel, sequence, tree_to_petri_net
from pmflow.performance.replay import GRAY
from pmflow.units import MS_PER_DAY, MS_PER_MONTH

from test_log import T0

HOUR = 3_600_000


def timed(rows):
    """``rows``: list of traces, each a list of (activity, offset in ms from T0)."""
    traces = []
    for i, row in enumerate(rows):
        events = [Event({CONCEPT_NAME: a, TIMESTAMP: T0 + timedelta(milliseconds=ms)}) for a, ms in row]
        traces.append(Trace(f"c{i}", events))
    return EventLog(traces)


def tid_of(net, label):
    return next(t for t in net.transitions if net.label(t) == label)


class TestDurationStats:
    @settings(max_examples=100)
    @given(st.lists(st.floats(0, 1e12), min_size=1, max_size=40))
    def test_against_statistics(self, values):
        s = DurationStats.from_values(values)
        assert s.count == len(values)
        assert s.mean == pytest.approx(statistics.fmean(values), rel=1e-9, abs=1e-6)
        assert s.min <= s.mean <= s.max or s.min == pytest.approx(s.max)
        if len(values) > 1:
            assert s.std_dev == pytest.approx(statistics.stdev(values), rel=1e-6, abs=1e-3)
        assert s.std_dev >= 0

    @settings(max_examples=100)
    @given(st.lists(st.floats(0, 1e9), max_size=20), st.lists(st.floats(0, 1e9), max_size=20), st.lists(st.floats(0, 1e9), max_size=20))
    def test_merge_associative_commutative(self, a, b, c):
        A, B, C = (DurationStats.from_values(x) for x in (a, b, c))
        whole = DurationStats.from_values(a + b + c)
        for merged in (A.merge(B).merge(C), A.merge(B.merge(C)), C.merge(A).merge(B)):
            assert merged.count == whole.count
            assert merged.mean == pytest.approx(whole.mean, rel=1e-9, abs=1e-6)
            assert merged.variance == pytest.approx(whole.variance, rel=1e-6, abs=1e-3)

    def test_stable_on_large_offsets(self):
        base = 1e13
        s = DurationStats.from_values([base + d for d in (4, 7, 13, 16)])
        assert s.variance == pytest.approx(30.0, rel=1e-6)

    def test_units(self):
        s = DurationStats.from_values([MS_PER_MONTH, 3 * MS_PER_MONTH])
        d = s.in_unit("month")
        assert d["mean"] == pytest.approx(2.0) and d["max"] == pytest.approx(3.0)
        assert s.in_unit("d")["mean"] == pytest.approx(2 * 30.4375)

    def test_empty(self):
        d = DurationStats().in_unit("d")
        assert d["count"] == 0 and d["mean"] is None


class TestGlobal:
    def test_throughput(self):
        log = timed([[("a", 0), ("b", 2 * HOUR)], [("a", 0), ("b", 4 * HOUR)]])
        s = global_stats(log)
        assert s.mean == 3 * HOUR and s.max == 4 * HOUR and s.min == 2 * HOUR

    def test_single_events(self):
        s = global_stats(timed([[("a", 5)], [("b", 9)]]))
        assert s.mean == 0 and s.max == 0 and s.std_dev == 0

    def test_missing_timestamp_names_case(self):
        with pytest.raises(MissingTimestampError, match="case0"):
            global_stats(make_log([["a", "b"]]))


class TestReplay:
    def test_sequential_matches_gaps(self):
        net = tree_to_petri_net(sequence(activity("a"), activity("b"), activity("c")))
        rows = [[("a", 0), ("b", g1), ("c", g1 + g2)] for g1, g2 in [(HOUR, 5 * HOUR), (3 * HOUR, HOUR), (8 * HOUR, 2 * HOUR)]]
        ann = annotate_performance(net, timed(rows))
        gaps_b = [r[1][1] - r[0][1] for r in rows]
        gaps_c = [r[2][1] - r[1][1] for r in rows]
        assert ann.waiting[tid_of(net, "b")].mean == pytest.approx(statistics.fmean(gaps_b))
        assert ann.waiting[tid_of(net, "c")].mean == pytest.approx(statistics.fmean(gaps_c))
        assert ann.sojourn[tid_of(net, "c")].mean == pytest.approx(statistics.fmean(gaps_c))
        assert ann.sojourn[tid_of(net, "a")].mean == 0
        # first activity is enabled at case start
        assert ann.waiting[tid_of(net, "a")].mean == 0

    def test_parallel_enablement(self):
        net = tree_to_petri_net(sequence(activity("a"), parallel(activity("b"), activity("c")), activity("d")))
        ann = annotate_performance(net, timed([[("a", 0), ("b", HOUR), ("c", 3 * HOUR), ("d", 4 * HOUR)]]))
        # c was enabled when a completed, d when the later of b and c completed
        assert ann.waiting[tid_of(net, "c")].mean == 3 * HOUR
        assert ann.sojourn[tid_of(net, "c")].mean == 2 * HOUR
        assert ann.waiting[tid_of(net, "d")].mean == HOUR

    def test_same_timestamp_zero(self):
        net = tree_to_petri_net(sequence(activity("a"), activity("b")))
        ann = annotate_performance(net, timed([[("a", 7), ("b", 7)]]))
        assert all(s.mean == 0 for s in ann.waiting.values() if s.count)

    def test_log_moves_record_nothing(self):
        net = tree_to_petri_net(sequence(activity("a"), activity("b")))
        ann = annotate_performance(net, timed([[("a", 0), ("x", HOUR), ("b", 3 * HOUR)]]))
        assert ann.waiting[tid_of(net, "b")].mean == 3 * HOUR
        assert ann.sojourn[tid_of(net, "b")].mean == 2 * HOUR

    def test_invisible_no_stats(self):
        net = tree_to_petri_net(parallel(activity("a"), activity("b")))
        ann = annotate_performance(net, timed([[("a", 0), ("b", HOUR)]]))
        for t in net.transitions:
            if net.is_invisible(t):
                assert t not in ann.waiting or ann.waiting[t].count == 0

    def test_uses_given_result(self, synthetic_log):
        net = normative_rtfm_model()
        res = align_log(net, synthetic_log)
        a = annotate_performance(net, synthetic_log, res)
        b = annotate_performance(net, synthetic_log)
        assert a.waiting == b.waiting

    def test_synthetic_bottlenecks(self, synthetic_log):
        net = normative_rtfm_model()
        ann = annotate_performance(net, synthetic_log)
        ranking = rank_bottlenecks(ann)
        labels = [net.label(t) for t, _ in ranking]
        assert labels[0] == "Send for Credit Collection"
        assert ann.waiting["add_penalty"].min == 60 * MS_PER_DAY
        # on traces that follow the penalty path exactly the wait is the fixed 60 days
        main = ("Create Fine", "Send Fine", "Insert Fine Notification", "Add penalty", "Send for Credit Collection")
        clean = synthetic_log.with_traces(t for t, s in zip(synthetic_log, synthetic_log.activity_sequences()) if s == main)
        penalty = annotate_performance(net, clean).waiting["add_penalty"]
        assert penalty.mean == pytest.approx(60 * MS_PER_DAY) and penalty.std_dev < MS_PER_DAY


@settings(max_examples=40, deadline=None)
@given(
    st.lists(st.lists(st.integers(0, 10**10), min_size=3, max_size=3), min_size=1, max_size=6),
    st.integers(-(10**12), 10**12),
)
def test_time_shift_invariance(gaps, shift):
    net = tree_to_petri_net(sequence(activity("a"), activity("b"), activity("c"), activity("d")))
    rows, shifted = [], []
    for g in gaps:
        t = [0, g[0], g[0] + g[1], g[0] + g[1] + g[2]]
        rows.append(list(zip("abcd", t)))
        shifted.append([(a, x + shift) for a, x in zip("abcd", t)])
    a = annotate_performance(net, timed(rows))
    b = annotate_performance(net, timed(shifted))
    assert a.waiting == b.waiting and a.sojourn == b.sojourn and a.global_ == b.global_


class TestColoring:
    def test_scale(self):
        net = tree_to_petri_net(sequence(activity("a"), activity("b"), activity("c")))
        ann = annotate_performance(net, timed([[("a", 0), ("b", HOUR), ("c", 5 * HOUR)]]))
        notes = color_bottlenecks(ann, "waiting", unit="h")
        assert notes[tid_of(net, "c")]["fillcolor"] == "#FF0000"
        assert notes[tid_of(net, "a")]["fillcolor"] == "#FFFF00"
        assert notes[tid_of(net, "c")]["sublabel"] == "4.00 h"
        silent = [t for t in net.transitions if net.is_invisible(t)]
        assert all(notes[t]["fillcolor"] == GRAY for t in silent)

    def test_single_observed_yellow(self):
        net = tree_to_petri_net(activity("a"))
        notes = color_bottlenecks(annotate_performance(net, timed([[("a", 0)]])))
        assert notes[tid_of(net, "a")]["fillcolor"] == "#FFFF00"


def test_export_and_format(tmp_path):
    net = tree_to_petri_net(sequence(activity("a"), activity("b")))
    ann = annotate_performance(net, timed([[("a", 0), ("b", int(MS_PER_DAY))]]))
    export_performance(ann, tmp_path / "p.csv", unit="d")
    rows = list(csv.reader(open(tmp_path / "p.csv", newline="")))
    assert rows[0] == ["transition", "label", "metric", "count", "mean_d", "std_d", "min_d", "max_d"]
    assert rows[-1][2] == "throughput" and float(rows[-1][4]) == 1.0
    assert format_stats(ann.global_, "d").startswith("n=1 mean=1.00")


def test_estimator(synthetic_log):
    est = PerformanceAnalyzer(normative_rtfm_model()).fit(synthetic_log)
    assert est.annotation_.global_.count == len(synthetic_log)
