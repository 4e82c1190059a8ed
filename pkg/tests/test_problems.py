import math
import warnings

import pytest
from hypothesis import given, settings, strategies as st

from lalkit.conditions import InvalidOrder, nonrep_color_threshold, ramsey_certify, ramsey_max_n
from lalkit.engine import ConditionUnsatisfiable, run
from lalkit.graphs import Graph, complete_graph, cycle_graph, path_graph, random_tree
from lalkit.monoid import FreePower, PowersetElement, trace_decodes
from lalkit.problems import (ChoiceSystem, InvalidMarginals, NoLegalColor, acyclic_edge_instance,
                             choice_function_instance, coloring_choice_system, from_descriptor,
                             kept_cycle_edges, nonrep_coloring_instance, nonrep_sequence_instance,
                             proper_coloring_instance, ramsey_instance, uniform_lists)
from lalkit.validators import (BLUE, RED, check_acyclic_edge_coloring, check_proper_coloring,
                               check_ramsey_witness, exhaustive_feasibility, partial_validator)

from small_instances import KINDS, random_small_instance

GOLD = math.sqrt(5) - 1


# --- proper coloring -----------------------------------------------------------

def test_proper_k4_equality():
    inst = proper_coloring_instance(complete_graph(4), 4)
    assert inst.weight()[0] == 4.0
    assert abs(inst.check_condition().min_slack) < 1e-12


def test_proper_trivial_and_path():
    inst = proper_coloring_instance(Graph(1, ()), 1)
    report, _ = run(inst, 0)
    assert report.terminated and report.steps_used == 1
    p3 = proper_coloring_instance(path_graph(3), 3)
    assert p3.weight()[0] == 3.0 and p3.check_condition().holds


def test_proper_too_few_colors_warns():
    with pytest.warns(ConditionUnsatisfiable):
        inst = proper_coloring_instance(complete_graph(4), 3)
    assert not inst.check_condition().holds


# --- sequences -------------------------------------------------------------------

def test_sequence_single_letter():
    report, _ = run(nonrep_sequence_instance([[7]] * 1), 0)
    assert report.terminated and report.final_state == {0: 7}


def test_sequence_equality_at_two():
    inst = nonrep_sequence_instance(uniform_lists(5, 4))
    assert inst.weight() == {0: 2.0}
    assert abs(inst.check_condition().min_slack) < 1e-12


def test_sequence_detects_longest_block():
    inst = nonrep_sequence_instance(uniform_lists(8, 4))
    # 0 1 0 1 ends with the square (01)(01); only t=2 ends here
    ev = inst.detect({0: 0, 1: 1, 2: 0, 3: 1}, 3)
    assert ev.alpha == FreePower(1) and ev.detail == (0, 2)
    # 0 0 0 0 has squares of length 1 and 2 at the end: the longer wins
    ev = inst.detect({0: 0, 1: 0, 2: 0, 3: 0}, 3)
    assert ev.alpha == FreePower(1)
    assert inst.detect({0: 0, 1: 1, 2: 2}, 2) is None


def test_sequence_small_lists_warn():
    with pytest.warns(ConditionUnsatisfiable):
        nonrep_sequence_instance(uniform_lists(5, 3))


def test_sequence_run_500():
    inst = nonrep_sequence_instance(uniform_lists(500, 4))
    report, trace = run(inst, 11)
    assert report.terminated and inst.goal(report.final_state) and trace_decodes(trace)


# --- non-repetitive coloring ----------------------------------------------------

def test_nonrep_coloring_weight_at_threshold():
    g = random_tree(20, 3, 0)
    c = nonrep_color_threshold(3)
    inst = nonrep_coloring_instance(g, c)
    y = 1 - (2 / 3) ** (1 / 3)
    assert inst.weight()[0] == pytest.approx(y * c / 9)
    assert inst.check_condition().holds


def test_nonrep_coloring_closed_form():
    inst = nonrep_coloring_instance(random_tree(10, 3, 1), 76)
    f, d, c = 1.0, 3, 76
    spec = inst.condition_table().rows[0][0]
    assert spec.rhs(f) == pytest.approx(1 + (d * f / c) / (1 - d * d * f / c) ** 2, abs=1e-12)


def test_nonrep_coloring_detect_on_path():
    g = path_graph(6)
    inst = nonrep_coloring_instance(g, 3)
    state = {0: 2, 1: 0, 2: 1, 3: 0, 4: 1}
    ev = inst.detect(state, 4)
    assert ev.alpha == PowersetElement((3, 4)) and set(ev.detail) == {1, 2, 3, 4}
    assert inst.detect({0: 0, 1: 1, 2: 0}, 2) is None


def test_nonrep_coloring_tree_run():
    g = random_tree(30, 3, 5)
    inst = nonrep_coloring_instance(g, nonrep_color_threshold(3), max_half_length=15)
    report, trace = run(inst, 2)
    assert report.terminated and inst.goal(report.final_state)


def test_nonrep_coloring_degree_two_fixpoint():
    # no closed form for delta <= 2, but the series still gives a weight
    inst = nonrep_coloring_instance(cycle_graph(8), 30)
    assert inst.check_condition().holds


# --- acyclic edge coloring ------------------------------------------------------

@pytest.mark.parametrize("strategy,f", [("restricted", GOLD), ("uniform", 2 * GOLD)])
def test_acyclic_weights(strategy, f):
    inst = acyclic_edge_instance(complete_graph(4), 8, strategy)
    assert inst.weight()[0] == f
    assert abs(inst.check_condition().min_slack) < 1e-12


@pytest.mark.parametrize("strategy", ["restricted", "uniform"])
def test_acyclic_k4_fifty_seeds(strategy):
    inst = acyclic_edge_instance(complete_graph(4), 8, strategy)
    for seed in range(50):
        report, trace = run(inst, seed)
        assert report.terminated
        assert check_acyclic_edge_coloring(inst.graph, report.final_state) is None
        assert trace_decodes(trace)


def test_acyclic_detects_long_cycle_and_keeps_far_pair():
    g = cycle_graph(6)
    inst = acyclic_edge_instance(g, 8, "uniform")
    state = {e: (0 if e % 2 == 0 else 1) for e in range(6)}
    ev = inst.detect(state, 0)
    assert ev.class_tag == "bichromatic-cycle"
    cycle = ev.detail
    assert cycle[0] == 0 and len(cycle) == 6
    erased = set(ev.alpha.slots) | {0}
    assert len(erased) == 4
    kept = set(cycle) - erased
    t = 3
    assert kept in ({cycle[t - 1], cycle[t]}, {cycle[t], cycle[t + 1]})


def test_kept_cycle_edges_rule():
    assert kept_cycle_edges((5, 1, 2, 3, 4, 0)) == (5, 1, 4, 0)
    assert kept_cycle_edges((5, 9, 2, 1, 4, 0)) == (5, 9, 4, 0)


def test_acyclic_restricted_sampler_avoids_short_conflicts():
    g = cycle_graph(4)
    inst = acyclic_edge_instance(g, 3, "restricted")
    state = {0: 0, 1: 1, 2: 0}
    # edge 3 touches colors 0 (edges 0, 2) and would close 0/1 on the 4-cycle
    assert inst.forbidden_colors(state, 3) == {0, 1}
    import random
    assert inst.sample(3, state, random.Random(0)) == 2
    inst2 = acyclic_edge_instance(g, 2, "restricted")
    with pytest.raises(NoLegalColor):
        inst2.sample(3, state, random.Random(0))


# --- Ramsey ---------------------------------------------------------------------

def test_ramsey_table_reproduces_series():
    n, k, p = 7, 4, 0.3
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ConditionUnsatisfiable)
        inst = ramsey_instance(n, k, p)
    f = {e: 1.7 for e in inst.slots}
    from lalkit.conditions import lal_rhs
    expected = 1 + (n - 2) * p**3 * 1.7**3 + math.comb(n - 2, k - 2) * (1 - p) ** 6 * 1.7**6
    assert lal_rhs(0, f, inst.condition_table()) == pytest.approx(expected, abs=1e-12)


def test_ramsey_red_triangle_detected():
    inst = ramsey_instance(3, 3, 0.5)
    ev = inst.detect({0: RED, 1: RED, 2: RED}, 2)
    assert ev.class_tag == "red-clique" and ev.detail == (0, 1, 2)
    ev = inst.detect({0: BLUE, 1: BLUE, 2: BLUE}, 1)
    assert ev.class_tag == "blue-triangle"


def test_ramsey_rejects_small_k():
    with pytest.raises(InvalidOrder):
        ramsey_instance(5, 2)


def test_ramsey_certified_weight():
    n = ramsey_max_n(5)
    inst = ramsey_instance(n, 5)
    assert inst.p == ramsey_certify(5, n).p
    assert inst.check_condition().holds
    report, _ = run(inst, 0)
    assert report.terminated and check_ramsey_witness(n, 5, report.final_state) is None


# --- choice functions -------------------------------------------------------------

def test_choice_single_block():
    inst = choice_function_instance(ChoiceSystem((("u",),), (), {"u": 1.0}))
    report, _ = run(inst, 0)
    assert report.final_state == {0: "u"}


def test_choice_c5_equality_and_run():
    g = cycle_graph(5)
    inst = choice_function_instance(coloring_choice_system(g, 8, 0.25))
    assert abs(inst.check_condition().min_slack) < 1e-12
    assert all(abs(s) < 1e-12 for s in inst.marginal_slack().values())
    for seed in range(10):
        report, _ = run(inst, seed)
        colors = {v: report.final_state[v] - 8 * v for v in range(5)}
        assert check_proper_coloring(g, colors) is None


def test_choice_validation():
    with pytest.raises(ValueError):
        ChoiceSystem((("a",), ("a",)), (), {"a": 1.0})
    with pytest.raises(ValueError):
        ChoiceSystem((("a", "b"),), (("a", "b"),), {"a": 1.0, "b": 1.0})
    with pytest.raises(InvalidMarginals):
        ChoiceSystem((("a",),), (), {"a": 1.5})
    with pytest.warns(ConditionUnsatisfiable):
        choice_function_instance(ChoiceSystem((("a",), ("b",)), (("a", "b"),), {"a": 1.0, "b": 1.0}))


@given(st.integers(0, 10**6))
@settings(max_examples=50)
def test_choice_rearranged_condition(seed):
    # the block-sum condition and the table condition are the same inequality
    inst = random_small_instance("choice", seed)
    slack_table = inst.check_condition().slacks
    slack_sums = inst.marginal_slack()
    for k in inst.slots:
        assert slack_table[k] == pytest.approx(slack_sums[k], abs=1e-9)


# --- shared invariants --------------------------------------------------------

@pytest.mark.parametrize("kind", KINDS)
def test_descriptor_round_trip(kind):
    for seed in range(20):
        inst = random_small_instance(kind, seed)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ConditionUnsatisfiable)
            again = from_descriptor(inst.descriptor())
        assert again.descriptor() == inst.descriptor()
        assert run(again, seed, budget=500)[0] == run(inst, seed, budget=500)[0]


def _generator_of(inst, slot):
    return 0 if inst.kind == "free" else slot


@pytest.mark.parametrize("kind", KINDS)
def test_detector_agrees_and_erasure_restores(kind):
    """Step by step: detect fires iff the validator sees a violation, and erasure repairs it."""
    violations = 0
    for seed in range(150):
        inst = random_small_instance(kind, seed)
        ok = partial_validator(inst.descriptor())

        def observe(state, slot, event):
            nonlocal violations
            assert (event is None) == ok(state)
            if event is not None:
                violations += 1
                after = inst.erase_set(event, _generator_of(inst, slot)).act(state)
                assert ok(after)
                assert slot not in after

        report, trace = run(inst, seed, budget=300, observer=observe)
        assert trace_decodes(trace)
        if report.terminated:
            assert inst.goal(report.final_state)
            assert exhaustive_feasibility(inst.descriptor())
    assert violations > 0
