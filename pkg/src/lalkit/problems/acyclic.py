"""Acyclic edge coloring with 4(Delta-1) colors, under two sampling strategies."""

from __future__ import annotations

import math
import warnings
from typing import Dict, List, Mapping, Optional, Tuple

from ..conditions import GeometricFamily, LalConditionTable, SeriesSpec, solve_series_fixpoint
from ..engine import ConditionUnsatisfiable, ProblemInstance, SamplingError, WitnessEvent
from ..graphs import Graph
from ..monoid import PowersetElement
from ..validators import check_acyclic_edge_coloring

STRATEGIES = ("restricted", "uniform")

RESTRICTED_F = math.sqrt(5) - 1
UNIFORM_F = 2 * (math.sqrt(5) - 1)


class NoLegalColor(SamplingError):
    pass


def acyclic_series(delta: int, colors: int, strategy: str = "restricted") -> SeriesSpec:
    """Right-hand side for one edge.

    There are at most ``(delta-1)**(2t-2)`` cycles of length ``2t`` through
    an edge; each erases ``2t-2`` edges.  The restricted sampler picks among
    at least ``colors - 2(delta-1)`` options per edge, the uniform one among
    all ``colors`` but then also pays for short conflicts at rate
    ``2(delta-1)/colors``.
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    d1 = max(delta - 1, 0)
    if strategy == "restricted":
        options = colors - 2 * d1
        ratio = d1 / options if options > 0 else math.inf
        if d1 == 0:
            ratio = 0.0
        return SeriesSpec(families=(GeometricFamily(ratio=ratio, start=3, step=2, offset=-2),))
    terms = ((min(1.0, 2 * d1 / colors), 1),) if d1 else ()
    return SeriesSpec(terms, (GeometricFamily(ratio=d1 / colors, start=3, step=2, offset=-2),))


class AcyclicEdgeColoring(ProblemInstance):
    """Slots are edges.

    Restricted: ``sample`` makes one ``choice`` over the colors that keep the
    coloring proper and free of two-colored 4-cycles.  Uniform: one
    ``randrange`` over all colors, with adjacent clashes and 4-cycles
    handled as violations that erase only the new edge.

    A two-colored cycle ``e_0 = e, e_1, ..., e_{2t-1}`` of length at least 6
    erases every edge except ``e_t`` and one neighbour of it on the cycle:
    of ``{e_{t-1}, e_t}`` and ``{e_t, e_{t+1}}`` the lexicographically
    smaller pair of edge ids is kept.
    """

    problem = "acyclic"

    def __init__(self, graph: Graph, colors: int, strategy: str = "restricted"):
        if strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {strategy!r}")
        if colors < 1:
            raise ValueError("need at least one color")
        self.graph = graph
        self.colors = colors
        self.strategy = strategy
        self.delta = graph.max_degree
        self.slots = tuple(range(len(graph.edges)))
        self.incident: List[List[Tuple[int, int]]] = [[] for _ in range(graph.n)]
        for i, (u, v) in enumerate(graph.edges):
            self.incident[u].append((v, i))
            self.incident[v].append((u, i))
        self._f = self._solve_weight()

    def _solve_weight(self) -> float:
        d1 = self.delta - 1
        if d1 > 0 and self.colors == 4 * d1:
            return RESTRICTED_F if self.strategy == "restricted" else UNIFORM_F
        res = solve_series_fixpoint(acyclic_series(self.delta, self.colors, self.strategy))
        if not res.feasible:
            warnings.warn(f"{self.colors} colors at max degree {self.delta}: condition fails",
                          ConditionUnsatisfiable, stacklevel=3)
            return RESTRICTED_F if self.strategy == "restricted" else UNIFORM_F
        return res.best_f

    def _edge_with_color(self, state: Mapping, x: int, color, skip: int = -1):
        for y, h in self.incident[x]:
            if h != skip and state.get(h) == color:
                return y, h
        return None

    def forbidden_colors(self, state: Mapping, e: int) -> set:
        """Colors that would clash at an end of ``e`` or close a two-colored 4-cycle."""
        u, w = self.graph.edges[e]
        out = set()
        at_u = {}
        for y, h in self.incident[u]:
            if h != e and h in state:
                out.add(state[h])
                at_u[state[h]] = y
        for x, h in self.incident[w]:
            if h == e or h not in state:
                continue
            d = state[h]
            out.add(d)
            y = at_u.get(d)
            if y is not None and y != x:
                xy = self.graph.edge_index.get((min(x, y), max(x, y)))
                if xy is not None and xy in state:
                    out.add(state[xy])
        return out

    def sample(self, slot, state, rng):
        if self.strategy == "uniform":
            return rng.randrange(self.colors)
        bad = self.forbidden_colors(state, slot)
        legal = [c for c in range(self.colors) if c not in bad]
        if not legal:
            raise NoLegalColor(f"edge {slot}: every color is forbidden")
        return rng.choice(legal)

    def _cycles_through(self, state: Mapping, e: int):
        """Two-colored cycles through ``e`` as edge lists starting at ``e``."""
        u, w = self.graph.edges[e]
        c = state[e]
        out = []
        for x, h in self.incident[w]:
            if h == e or h not in state or state[h] == c:
                continue
            d = state[h]
            cycle = [e, h]
            cur, want = x, c
            while True:
                nxt = self._edge_with_color(state, cur, want, skip=cycle[-1])
                if nxt is None:
                    break
                y, g = nxt
                if g in cycle:
                    break
                cycle.append(g)
                if y == u:
                    out.append(tuple(cycle))
                    break
                cur, want = y, (d if want == c else c)
        return out

    def detect(self, state: Mapping, e: int) -> Optional[WitnessEvent]:
        c = state[e]
        u, w = self.graph.edges[e]
        clash = sorted(h for _, h in self.incident[u] + self.incident[w]
                       if h != e and state.get(h) == c)
        if clash:
            return WitnessEvent("adjacent-same-color", PowersetElement(),
                                tuple(sorted((e, clash[0]))))
        best = None
        for cycle in self._cycles_through(state, e):
            tag = "bichromatic-4-cycle" if len(cycle) == 4 else "bichromatic-cycle"
            key = (tag, tuple(sorted(cycle)), cycle)
            if best is None or key < best:
                best = key
        if best is None:
            return None
        tag, _, cycle = best
        if tag == "bichromatic-4-cycle":
            return WitnessEvent(tag, PowersetElement(), cycle)
        return WitnessEvent(tag, PowersetElement(kept_cycle_edges(cycle)[1:]), cycle)

    def goal(self, state) -> bool:
        if len(state) < len(self.slots):
            return False
        return check_acyclic_edge_coloring(self.graph, state) is None

    def condition_table(self) -> LalConditionTable:
        row = (acyclic_series(self.delta, self.colors, self.strategy),)
        return LalConditionTable("powerset", {e: row for e in self.slots})

    def weight(self) -> Dict[int, float]:
        return {e: self._f for e in self.slots}

    def descriptor(self) -> dict:
        return {"problem": self.problem, "graph": self.graph.to_json(), "colors": self.colors,
                "strategy": self.strategy}


def kept_cycle_edges(cycle) -> Tuple[int, ...]:
    """The erase set of a long cycle, ``cycle[0]`` first: all but two adjacent far edges."""
    t = len(cycle) // 2
    left = tuple(sorted((cycle[t - 1], cycle[t])))
    right = tuple(sorted((cycle[t], cycle[(t + 1) % len(cycle)])))
    drop = set(min(left, right))
    return tuple(h for h in cycle if h not in drop)


def acyclic_edge_instance(graph: Graph, colors: int, strategy: str = "restricted") -> AcyclicEdgeColoring:
    return AcyclicEdgeColoring(graph, colors, strategy)
