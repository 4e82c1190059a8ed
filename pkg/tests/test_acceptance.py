"""Acceptance criteria, one pass/fail line each.

Run under pytest (lines are printed even with output capture on) or
directly with ``python3 tests/test_acceptance.py``.
"""

import functools
import math
import random
import sys
import time
import warnings
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from lalkit.conditions import (LLLWeights, array_theorem_check, array_theorem_margins,
                               check_lal_inequality, corollary_supremum, lll_condition_table,
                               lll_to_weight, lower_bound_value, nonrep_color_threshold,
                               ramsey_certify, ramsey_max_n)
from lalkit.engine import ConditionUnsatisfiable, run
from lalkit.graphs import random_bounded_degree_graph, random_tree, star_graph
from lalkit.lll import random_certified_space
from lalkit.monoid import PowersetElement, trace_decodes
from lalkit.problems import (acyclic_edge_instance, nonrep_coloring_instance,
                             nonrep_sequence_instance, proper_coloring_instance, ramsey_instance,
                             uniform_lists)
from lalkit.validators import (check_ramsey_witness, exact_event_enumeration,
                               exhaustive_feasibility, find_violation, monte_carlo_frequency,
                               partial_validator)

from small_instances import KINDS, random_small_instance

EQ_TOL = 1e-12
BUDGET = 10**7
SOLVER_SEEDS = 100


def _line(number, ok, detail, seconds):
    return f"criterion {number}: {'PASS' if ok else 'FAIL'} ({seconds:.1f}s) {detail}"


def _emit(request, text):
    if request is None:
        print(text, flush=True)
        return
    capman = request.config.pluginmanager.getplugin("capturemanager")
    with capman.global_and_fixture_disabled():
        print("\n" + text, flush=True)


# --- 1 ---------------------------------------------------------------------------

def criterion_1():
    worst = 0.0
    for delta in range(1, 12):
        inst = proper_coloring_instance(star_graph(delta), delta + 1)
        assert inst.weight()[0] == delta + 1
        worst = max(worst, abs(inst.check_condition().min_slack))
    seq = nonrep_sequence_instance(uniform_lists(3, 4))
    assert seq.weight()[0] == 2
    worst = max(worst, abs(seq.check_condition().min_slack))
    for strategy, f in (("restricted", math.sqrt(5) - 1), ("uniform", 2 * (math.sqrt(5) - 1))):
        for delta in (2, 3, 4, 6):
            inst = acyclic_edge_instance(star_graph(delta), 4 * (delta - 1), strategy)
            assert inst.weight()[0] == f
            worst = max(worst, abs(inst.check_condition().min_slack))
    rng = random.Random(1)
    lll_worst = 0.0
    for _ in range(1000):
        n = rng.randint(1, 8)
        mu = {a: rng.uniform(0, 0.9) for a in range(n)}
        gamma = {a: frozenset(b for b in range(n) if b != a and rng.random() < 0.4) for a in range(n)}
        pr = {a: mu[a] * math.prod(1 - mu[b] for b in gamma[a]) for a in range(n)}
        w = LLLWeights(mu, gamma, pr)
        f = lll_to_weight(w)
        slacks = check_lal_inequality(f, lll_condition_table(w)).slacks
        lll_worst = max(lll_worst, max(abs(s) for s in slacks.values()))
    ok = worst < EQ_TOL and lll_worst < EQ_TOL
    return ok, f"max |slack| {worst:.1e} (closed-form weights), {lll_worst:.1e} (LLL transform)"


# --- 2 and 7 -------------------------------------------------------------------

def _workloads():
    c76 = nonrep_color_threshold(3)
    yield "nonrep-seq", lambda s: nonrep_sequence_instance(uniform_lists(500, 4))

    def proper(s):
        g = random_bounded_degree_graph(200, 5, 450, s)
        return proper_coloring_instance(g, g.max_degree + 1)
    yield "proper", proper

    for strategy in ("restricted", "uniform"):
        def acyclic(s, strategy=strategy):
            rng = random.Random(s)
            g = random_bounded_degree_graph(rng.randint(60, 150), 6, 300, s)
            return acyclic_edge_instance(g, 4 * (g.max_degree - 1), strategy)
        yield f"acyclic-{strategy}", acyclic

    def nonrep_color(s):
        n = random.Random(s).randint(8, 30)
        return nonrep_coloring_instance(random_tree(n, 3, s), c76, max_half_length=n // 2)
    yield "nonrep-color", nonrep_color


@functools.lru_cache(maxsize=1)
def solver_runs():
    """Every criterion-2 run: (workload, seed, instance, report, trace)."""
    out = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ConditionUnsatisfiable)
        for name, make in _workloads():
            for seed in range(SOLVER_SEEDS):
                inst = make(seed)
                report, trace = run(inst, seed, BUDGET)
                out.append((name, seed, inst, report, trace))
    return out


def criterion_2():
    counts = {}
    failures = []
    for name, seed, inst, report, _ in solver_runs():
        ok = report.terminated and report.steps_used <= BUDGET and \
            find_violation(inst.descriptor(), report.final_state) is None
        good, total, steps = counts.get(name, (0, 0, 0))
        counts[name] = (good + ok, total + 1, max(steps, report.steps_used))
        if not ok:
            failures.append((name, seed))
    ok = not failures
    detail = ", ".join(f"{n} {g}/{t} (max steps {s})" for n, (g, t, s) in counts.items())
    return ok, detail + (f"; failed {failures[:5]}" if failures else "")


def criterion_7():
    bad_decode, not_identical = [], []
    for name, seed, inst, report, trace in solver_runs():
        if not trace_decodes(trace):
            bad_decode.append((name, seed))
        again, again_trace = run(inst, seed, BUDGET)
        if again != report or again_trace.to_json() != trace.to_json():
            not_identical.append((name, seed))
    n = len(solver_runs())
    ok = not bad_decode and not not_identical
    return ok, f"{n - len(bad_decode)}/{n} traces decode, {n - len(not_identical)}/{n} reruns identical"


# --- 3 ---------------------------------------------------------------------------

PER_KIND = 200
SMALL_BUDGET = 2000


def criterion_3():
    instances = steps = disagreements = unrepaired = 0
    successes = infeasible_successes = 0
    for kind in KINDS:
        for seed in range(PER_KIND):
            inst = random_small_instance(kind, 10**6 + seed)
            ok = partial_validator(inst.descriptor())
            instances += 1

            def observe(state, slot, event):
                nonlocal steps, disagreements, unrepaired
                steps += 1
                if (event is None) != ok(state):
                    disagreements += 1
                if event is not None:
                    g = 0 if inst.kind == "free" else slot
                    if not ok(inst.erase_set(event, g).act(state)):
                        unrepaired += 1

            report, _ = run(inst, seed, SMALL_BUDGET, observer=observe)
            if report.terminated:
                successes += 1
                if not (inst.goal(report.final_state) and exhaustive_feasibility(inst.descriptor())):
                    infeasible_successes += 1
    ok = instances >= 1000 and disagreements == 0 and unrepaired == 0 and infeasible_successes == 0
    return ok, (f"{instances} instances, {steps} steps, {disagreements} detector/validator "
                f"disagreements, {unrepaired} unrepaired erasures, {successes} successes, "
                f"{infeasible_successes} without oracle feasibility")


# --- 4 ---------------------------------------------------------------------------

_GRID = np.linspace(0, 1, 2002)[1:-1]


def _grid_total(k, n):
    c, m = math.comb(n - 2, k - 2), math.comb(k, 2)
    return (_GRID - (n - 2) * _GRID**3).max() + (_GRID - c * _GRID**m).max()


def criterion_4():
    mismatches = []
    for k in (4, 5, 6):
        for n in range(2, 31):
            if ramsey_certify(k, n).certified != (_grid_total(k, n) >= 1):
                mismatches.append((k, n))
    runs = {}
    failures = []
    for k in (4, 5, 6):
        n = ramsey_max_n(k)
        inst = ramsey_instance(n, k)
        good = 0
        for seed in range(20):
            report, _ = run(inst, seed, BUDGET)
            if report.terminated and check_ramsey_witness(n, k, report.final_state) is None:
                good += 1
            else:
                failures.append((k, seed))
        runs[k] = (n, good)
    ok = not mismatches and not failures
    detail = "; ".join(f"k={k}: n*={n}, {g}/20 witnesses" for k, (n, g) in runs.items())
    return ok, f"certify/grid mismatches {len(mismatches)}; {detail}"


# --- 5 ---------------------------------------------------------------------------

def criterion_5():
    rng = random.Random(5)
    below = nonpositive = 0
    min_margin = math.inf
    for _ in range(100):
        space, w = random_certified_space(rng, max_vars=14, max_events=10)
        assert 2 ** len(space.biases) <= 2**16
        exact = exact_event_enumeration(space.outcomes(), space.event_fns())
        bound = lower_bound_value(PowersetElement(tuple(w.events)), 1.0, lll_to_weight(w))
        assert bound == pytest.approx(math.prod(1 - m for m in w.mu.values()), rel=1e-12)
        nonpositive += exact <= 0
        below += exact < bound - 1e-12
        min_margin = min(min_margin, exact - bound)
    coins = [((a, b), 0.25) for a in (0, 1) for b in (0, 1)]
    heads = [lambda o: o[0] == 1, lambda o: o[1] == 1]
    trials = 1000
    freq = monte_carlo_frequency(coins, heads, trials, seed=2024)
    sigma = math.sqrt(0.25 * 0.75 / trials)
    ok = below == 0 and nonpositive == 0 and abs(freq - 0.25) <= 3 * sigma
    return ok, (f"100 spaces: min(exact - bound) {min_margin:.2e}; two coins "
                f"{freq:.3f} vs 0.25 +- {3 * sigma:.3f}")


# --- 6 ---------------------------------------------------------------------------

def criterion_6():
    rng = np.random.default_rng(6)
    xs = [0.1, 1, 10, 50]
    array_fail = 0
    array_margin = math.inf
    for _ in range(10**4):
        rows, cols = rng.integers(1, 9, size=2)
        a = rng.random((rows, cols)) + 1e-12
        if not array_theorem_check(a, xs):
            array_fail += 1
        array_margin = min(array_margin, float(array_theorem_margins(a, xs).min()))
    cor_fail = 0
    cor_margin = math.inf
    for _ in range(10**4):
        a = rng.random(int(rng.integers(1, 40))) + 1e-12
        for k in range(1, 6):
            sup, _ = corollary_supremum(a, k)
            margin = sup - 1 / (math.e * k)
            cor_margin = min(cor_margin, margin)
            cor_fail += not margin > 0
    ok = array_fail == 0 and cor_fail == 0
    return ok, (f"array failures {array_fail}/10000 (min margin {array_margin:.3e}); corollary "
                f"failures {cor_fail}/50000 (min margin {cor_margin:.3e})")


CRITERIA = {1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4,
            5: criterion_5, 6: criterion_6, 7: criterion_7}


def _check(number, request=None):
    t0 = time.perf_counter()
    try:
        ok, detail = CRITERIA[number]()
    except Exception as exc:  # a crash is a failure, reported on the same line
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    _emit(request, _line(number, ok, detail, time.perf_counter() - t0))
    return ok, detail


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, request):
    ok, detail = _check(number, request)
    assert ok, detail


if __name__ == "__main__":
    results = [_check(n)[0] for n in sorted(CRITERIA)]
    sys.exit(0 if all(results) else 1)
