"""Non-repetitive vertex coloring of bounded-degree graphs."""

from __future__ import annotations

import warnings
from collections import deque
from typing import Dict, Mapping, Optional

from ..conditions import (GeometricFamily, LalConditionTable, SeriesSpec, default_nonrep_y,
                          solve_series_fixpoint)
from ..engine import ConditionUnsatisfiable, ProblemInstance, WitnessEvent
from ..graphs import Graph
from ..monoid import PowersetElement
from ..validators import check_nonrepetitive_coloring

DEFAULT_MAX_HALF_LENGTH = 8


def nonrep_coloring_series(delta: int, colors: int) -> SeriesSpec:
    """``1 + (1/delta) sum_t t (delta**2 f / colors)**t``.

    At most ``t * delta**(2t-1)`` paths on ``2t`` vertices contain a given
    vertex, each repetitive with probability ``colors**-t``, and each erases
    ``t`` vertices.
    """
    if delta == 0:
        return SeriesSpec()
    return SeriesSpec(families=(GeometricFamily(ratio=delta**2 / colors, pattern="t",
                                                coefficient=1.0 / delta),))


class NonrepColoring(ProblemInstance):
    """Vertices colored uniformly; a repetitive path through ``v`` erases the half holding ``v``.

    Detection grows the two halves in lockstep from every same-colored pair
    near ``v``, so it only sees paths on at most ``2 * max_half_length``
    vertices (``None`` lifts the cap).  ``sample`` makes one ``randrange`` call.
    """

    problem = "nonrep-color"

    def __init__(self, graph: Graph, colors: int,
                 max_half_length: Optional[int] = DEFAULT_MAX_HALF_LENGTH):
        if colors < 1:
            raise ValueError("need at least one color")
        self.graph = graph
        self.colors = colors
        self.delta = graph.max_degree
        self.max_half_length = max_half_length
        self.slots = tuple(range(graph.n))
        self._f = self._solve_weight()

    @property
    def _cap(self) -> int:
        return self.max_half_length if self.max_half_length is not None else self.graph.n // 2

    def _solve_weight(self) -> float:
        d = self.delta
        if d == 0:
            return 1.0
        if d >= 3:
            y = default_nonrep_y(d)
            f = y * self.colors / d**2
            # y < 1 keeps the series convergent at this f
            if f >= nonrep_coloring_series(d, self.colors).rhs(f):
                return f
        res = solve_series_fixpoint(nonrep_coloring_series(d, self.colors))
        if not res.feasible:
            warnings.warn(f"{self.colors} colors at max degree {d}: condition fails",
                          ConditionUnsatisfiable, stacklevel=3)
        return res.best_f

    def sample(self, slot, state, rng):
        return rng.randrange(self.colors)

    def repetitive_paths(self, state: Mapping, v: int):
        """All repetitive paths through ``v`` in the colored subgraph, as (A, B) halves."""
        adj = self.graph.adjacency
        cap = self._cap
        # every vertex of such a path is within 2*cap - 1 steps of v
        dist = {v: 0}
        queue = deque([v])
        while queue:
            x = queue.popleft()
            if dist[x] >= 2 * cap - 1:
                continue
            for y in adj[x]:
                if y in state and y not in dist:
                    dist[y] = dist[x] + 1
                    queue.append(y)
        near = sorted(dist)
        found = []
        for a1 in near:
            for b1 in near:
                if a1 == b1 or state[a1] != state[b1]:
                    continue
                stack = [((a1,), (b1,))]
                while stack:
                    A, B = stack.pop()
                    if B[0] in adj[A[-1]] and (v in A or v in B):
                        found.append((A, B))
                    if len(A) >= cap:
                        continue
                    used = set(A) | set(B)
                    for a in adj[A[-1]]:
                        if a not in dist or a in used:
                            continue
                        for b in adj[B[-1]]:
                            if b in dist and b not in used and b != a and state[a] == state[b]:
                                stack.append((A + (a,), B + (b,)))
        return found

    def detect(self, state: Mapping, v: int) -> Optional[WitnessEvent]:
        best = None
        for A, B in self.repetitive_paths(state, v):
            half = tuple(sorted(A if v in A else B))
            path = A + B
            key = (half, min(path, path[::-1]))
            if best is None or key < best:
                best = key
        if best is None:
            return None
        half, path = best
        return WitnessEvent("repetitive-path", PowersetElement(half), path)

    def goal(self, state) -> bool:
        if len(state) < self.graph.n:
            return False
        return check_nonrepetitive_coloring(self.graph, state, max_vertices=max(self.graph.n, 1)) is None

    def condition_table(self) -> LalConditionTable:
        row = (nonrep_coloring_series(self.delta, self.colors),)
        return LalConditionTable("powerset", {v: row for v in self.slots})

    def weight(self) -> Dict[int, float]:
        return {v: self._f for v in self.slots}

    def descriptor(self) -> dict:
        return {"problem": self.problem, "graph": self.graph.to_json(), "colors": self.colors,
                "max_half_length": self.max_half_length}


def nonrep_coloring_instance(graph: Graph, colors: int,
                             max_half_length: Optional[int] = DEFAULT_MAX_HALF_LENGTH) -> NonrepColoring:
    return NonrepColoring(graph, colors, max_half_length)
