"""Random instances with at most 12 slots, for oracle comparisons."""

import itertools
import random
import warnings

from lalkit.engine import ConditionUnsatisfiable
from lalkit.graphs import Graph, random_tree
from lalkit.problems import (ChoiceSystem, acyclic_edge_instance, choice_function_instance,
                             coloring_choice_system, nonrep_coloring_instance,
                             nonrep_sequence_instance, proper_coloring_instance, ramsey_instance)

MAX_SLOTS = 12
KINDS = ("proper", "nonrep-seq", "nonrep-color", "acyclic", "ramsey", "choice")


def random_graph(rng, n, p, max_edges=MAX_SLOTS):
    edges = [e for e in itertools.combinations(range(n), 2) if rng.random() < p]
    rng.shuffle(edges)
    return Graph(n, tuple(edges[:max_edges]))


def _make(kind, rng):
    if kind == "proper":
        g = random_graph(rng, rng.randint(1, 9), 0.4)
        d = g.max_degree
        return proper_coloring_instance(g, rng.choice([max(1, d), d + 1, d + 2]))
    if kind == "nonrep-seq":
        n = rng.randint(1, MAX_SLOTS)
        size = rng.choice([3, 4, 4])
        return nonrep_sequence_instance([rng.sample(range(6), size) for _ in range(n)])
    if kind == "nonrep-color":
        n = rng.randint(1, MAX_SLOTS)
        g = random_tree(n, 3, rng.randrange(10**6)) if rng.random() < 0.6 else random_graph(rng, n, 0.3)
        return nonrep_coloring_instance(g, rng.randint(3, 6), max_half_length=None)
    if kind == "acyclic":
        g = random_graph(rng, rng.randint(3, 7), 0.5)
        d = max(g.max_degree, 1)
        colors = rng.randint(2 * d - 1 if d > 1 else 1, max(4 * (d - 1), 2 * d + 1))
        return acyclic_edge_instance(g, colors, rng.choice(["restricted", "uniform"]))
    if kind == "ramsey":
        n, k = rng.choice([(3, 3), (4, 3), (5, 3), (4, 4), (5, 4), (5, 5)])
        return ramsey_instance(n, k, rng.uniform(0.15, 0.6))
    if kind == "choice":
        if rng.random() < 0.5:
            g = random_graph(rng, rng.randint(1, 6), 0.5)
            r = rng.randint(2, 4)
            return choice_function_instance(coloring_choice_system(g, r, rng.uniform(0.2, 1.0)))
        nb = rng.randint(1, 8)
        blocks = [tuple(f"{b}.{i}" for i in range(rng.randint(1, 3))) for b in range(nb)]
        forbidden = []
        for _ in range(rng.randint(0, 6)):
            doms = rng.sample(range(nb), rng.randint(1, min(3, nb)))
            forbidden.append(tuple(rng.choice(blocks[b]) for b in doms))
        marginals = {u: rng.uniform(0.1, 1.0) for b in blocks for u in b}
        return choice_function_instance(ChoiceSystem(tuple(blocks), tuple(forbidden), marginals))
    raise ValueError(kind)


def random_small_instance(kind, seed):
    rng = random.Random(seed)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ConditionUnsatisfiable)
        inst = _make(kind, rng)
    assert len(inst.slots) <= MAX_SLOTS
    return inst
