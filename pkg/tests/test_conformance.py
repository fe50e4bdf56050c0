import csv
import math

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from pmflow.conformance import (
    COLORS,
    AlignmentBudgetExceeded,
    AlignmentChecker,
    Move,
    MoveCosts,
    ModelCannotTerminate,
    NetMismatchError,
    align_log,
    align_trace,
    export_log_moves,
    export_transition_counters,
    export_variant_costs,
    format_log_projection,
    project_on_log,
    project_on_model,
)
from pmflow.log import EventLog, make_log
from pmflow.petri import (
    PetriNet,
    activity,
    example_fine_net,
    fire,
    normative_rtfm_model,
    sequence,
    silent,
    to_dot,
    tree_to_petri_net,
    xor,
)
from pmflow.petri.normative import ADD_PENALTY, CREATE_FINE, INSERT_FINE_NOTIFICATION, PAYMENT, SEND_FINE, SEND_FOR_CREDIT_COLLECTION

import oracles
from strategies import small_trees, state_machine_nets, traces

FIG4_TRACE = [CREATE_FINE, SEND_FINE, INSERT_FINE_NOTIFICATION, ADD_PENALTY, SEND_FOR_CREDIT_COLLECTION]


def check_projections(net, trace, al):
    assert al.log_projection() == tuple(trace)
    m = net.initial_marking
    for t in al.model_projection():
        m = fire(net, m, t)
    assert m == net.final_marking


class TestMoves:
    def test_costs_fixed(self):
        c = MoveCosts(2, 3)
        assert c.sync == 0 and c.model_move_invisible == 0

    def test_negative_cost(self):
        with pytest.raises(ValueError):
            MoveCosts(-1, 1)

    def test_sync_label_must_match(self):
        with pytest.raises(ValueError):
            Move("synchronous", None, "t")


class TestAlignTrace:
    def test_fig4_example(self):
        net = example_fine_net()
        al = align_trace(net, FIG4_TRACE)
        assert al.cost == 1
        kinds = [(m.kind, m.label) for m in al.moves]
        assert kinds.count(("log", SEND_FOR_CREDIT_COLLECTION)) == 1
        assert sum(1 for m in al.moves if m.kind == "synchronous") == 4
        assert sum(1 for m in al.moves if m.is_invisible) == 2
        check_projections(net, FIG4_TRACE, al)

    def test_perfect(self):
        net = normative_rtfm_model()
        trace = [CREATE_FINE, SEND_FINE, INSERT_FINE_NOTIFICATION, ADD_PENALTY, PAYMENT]
        al = align_trace(net, trace)
        assert al.cost == 0 and al.is_perfect
        assert all(m.kind != "log" for m in al.moves)

    def test_empty_trace_normative(self):
        net = normative_rtfm_model()
        assert align_trace(net, []).cost == oracles.alignment_cost(net, []) == 2

    def test_cannot_terminate(self):
        net = PetriNet(["a", "b", "c"], {"t": "x"}, [("a", "t"), ("t", "b")], {"a": 1}, {"c": 1})
        with pytest.raises(ModelCannotTerminate, match="model cannot terminate"):
            align_trace(net, ["x"])

    def test_budget(self):
        net = normative_rtfm_model()
        with pytest.raises(AlignmentBudgetExceeded, match="alignment budget exceeded"):
            align_trace(net, ["x"] * 20 + [PAYMENT], max_states=5)

    def test_duplicate_payment_is_log_move(self):
        net = normative_rtfm_model()
        al = align_trace(net, [CREATE_FINE, PAYMENT, PAYMENT])
        assert al.cost == 1
        assert [m.kind for m in al.moves if m.label == PAYMENT] == ["synchronous", "log"]


def tree_nets():
    return small_trees(max_leaves=4).map(tree_to_petri_net)


@settings(max_examples=200, deadline=None)
@given(st.one_of(state_machine_nets(max_transitions=8), tree_nets()), traces)
def test_alignment_matches_oracle(net, trace):
    assume(len(net.transitions) <= 8)
    expected = oracles.alignment_cost(net, trace)
    if math.isinf(expected):
        with pytest.raises(ModelCannotTerminate):
            align_trace(net, trace)
        return
    al = align_trace(net, trace)
    assert al.cost == expected
    check_projections(net, trace, al)


@settings(max_examples=80, deadline=None)
@given(tree_nets(), traces)
def test_cost_scaling_keeps_moves(net, trace):
    base = align_trace(net, trace)
    doubled = align_trace(net, trace, MoveCosts(2, 2))
    assert doubled.cost == 2 * base.cost
    assert doubled.moves == base.moves


class TestAlignLog:
    def test_perfect_fitness(self):
        net = tree_to_petri_net(sequence(activity("a"), xor(activity("b"), silent())))
        res = align_log(net, make_log([["a", "b"], ["a"]]))
        assert res.fitness == 1.0

    def test_counters_weighted(self):
        net = tree_to_petri_net(sequence(activity("a"), activity("b")))
        log = make_log([["a", "b"]] * 3 + [["a"]] * 2 + [["a", "c", "b"]])
        res = align_log(net, log)
        tid = {net.label(t): t for t in net.transitions}
        assert res.sync_count[tid["a"]] == 6
        assert res.sync_count[tid["b"]] == 4 and res.model_move_count[tid["b"]] == 2
        assert res.log_move_count == {"c": 1}
        assert res.fitness == pytest.approx(1 - 3 / (3 * 4 + 2 * 3 + 1 * 5))

    def test_dedup_equals_full(self):
        net = example_fine_net()
        seqs = [FIG4_TRACE, FIG4_TRACE, [CREATE_FINE, PAYMENT], [CREATE_FINE]]
        res = align_log(net, make_log(seqs))
        costs = [align_trace(net, s).cost for s in seqs]
        assert res.total_cost == sum(costs)
        assert res.n_traces == 4

    def test_parallel_jobs_identical(self, synthetic_log):
        net = normative_rtfm_model()
        one = align_log(net, synthetic_log)
        two = align_log(net, synthetic_log, n_jobs=2)
        assert one.variants == two.variants and one.sync_count == two.sync_count

    def test_error_carries_variant(self):
        net = PetriNet(["a", "b", "c"], {"t": "x"}, [("a", "t"), ("t", "b")], {"a": 1}, {"c": 1})
        with pytest.raises(ModelCannotTerminate) as info:
            align_log(net, make_log([["x", "y"]]))
        assert info.value.variant == ("x", "y")

    def test_synthetic_create_fine(self, synthetic_log):
        res = align_log(normative_rtfm_model(), synthetic_log)
        assert res.sync_count["create_fine"] == len(synthetic_log)
        assert res.model_move_count["create_fine"] == 0

    def test_estimator(self):
        net = tree_to_petri_net(activity("a"))
        checker = AlignmentChecker(net).fit()
        assert checker.score(make_log([["a"]])) == 1.0
        assert checker.get_params()["log_move_cost"] == 1


@settings(max_examples=60, deadline=None)
@given(tree_nets(), st.lists(traces, min_size=1, max_size=5))
def test_fitness_bounds(net, seqs):
    seqs = [s for s in seqs if s]
    assume(seqs)
    res = align_log(net, make_log(seqs))
    assert 0.0 <= res.fitness <= 1.0
    assert (res.fitness == 1.0) == (res.total_cost == 0)


class TestProjection:
    def result(self, seqs):
        return align_log(example_fine_net(), make_log(seqs))

    def test_solid_and_split(self):
        res = self.result([FIG4_TRACE, [CREATE_FINE, PAYMENT], [CREATE_FINE, SEND_FINE, ADD_PENALTY]])
        notes = project_on_model(res)
        assert notes["create_fine"]["sublabel"] == "(3/0)"
        assert notes["create_fine"]["style"] == "filled"
        split = notes["insert_fine_notification"]
        assert split["sublabel"] == "(1/1)" and split["style"] == "striped"
        assert "tau_join" not in notes
        dot = to_dot(res.net, notes)
        assert "(3/0)" in dot

    def test_all_zero(self):
        res = align_log(example_fine_net(), EventLog())
        assert project_on_model(res) == {}
        assert project_on_log(res) == []

    def test_mismatch(self):
        res = self.result([FIG4_TRACE])
        with pytest.raises(NetMismatchError):
            project_on_model(res, normative_rtfm_model())

    def test_log_projection_colors(self):
        res = align_log(normative_rtfm_model(), make_log([[CREATE_FINE, PAYMENT, PAYMENT]] + [[CREATE_FINE, PAYMENT]] * 2))
        report = project_on_log(res)
        assert [v.frequency for v in report] == [2, 1]
        assert all(s.kind in ("synchronous", "invisible") for s in report[0].steps)
        payments = [s for s in report[1].steps if s.label == PAYMENT]
        assert [s.kind for s in payments] == ["synchronous", "log"]
        assert payments[1].color == COLORS["log"]
        assert "Payment(log)" in format_log_projection(report)


def test_csv_exports(tmp_path):
    res = align_log(example_fine_net(), make_log([FIG4_TRACE] * 2))
    export_transition_counters(res, tmp_path / "t.csv")
    export_variant_costs(res, tmp_path / "v.csv")
    export_log_moves(res, tmp_path / "l.csv")
    rows = list(csv.reader(open(tmp_path / "t.csv", newline="")))
    assert rows[0] == ["transition", "label", "sync_count", "model_move_count"]
    assert ["create_fine", CREATE_FINE, "2", "0"] in rows
    v = list(csv.reader(open(tmp_path / "v.csv", newline="")))
    assert v[1][:4] == ["1", "2", "1", "5"]
    assert list(csv.reader(open(tmp_path / "l.csv", newline="")))[1] == [SEND_FOR_CREDIT_COLLECTION, "2"]
