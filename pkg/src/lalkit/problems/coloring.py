"""Proper vertex coloring by uniform retries."""

from __future__ import annotations

import warnings
from typing import Dict, Mapping, Optional

from ..conditions import ConditionRow, LalConditionTable
from ..engine import ConditionUnsatisfiable, ProblemInstance, WitnessEvent
from ..graphs import Graph
from ..monoid import PowersetElement
from ..validators import check_proper_coloring


class ProperColoring(ProblemInstance):
    """Slots are vertices; a clash with a colored neighbour erases only the new vertex.

    ``sample`` makes one ``randrange`` call.
    """

    problem = "proper"

    def __init__(self, graph: Graph, colors: int):
        if colors < 1:
            raise ValueError("need at least one color")
        self.graph = graph
        self.colors = colors
        self.delta = graph.max_degree
        self.slots = tuple(range(graph.n))
        if colors <= self.delta:
            warnings.warn(f"{colors} colors <= max degree {self.delta}: no weight satisfies "
                          "the condition", ConditionUnsatisfiable, stacklevel=2)

    def sample(self, slot, state, rng):
        return rng.randrange(self.colors)

    def detect(self, state: Mapping, v: int) -> Optional[WitnessEvent]:
        c = state[v]
        clash = [u for u in self.graph.adjacency[v] if state.get(u) == c]
        if not clash:
            return None
        u = min(clash)
        return WitnessEvent("monochromatic-edge", PowersetElement(), (min(u, v), max(u, v)))

    def goal(self, state) -> bool:
        return check_proper_coloring(self.graph, state) is None

    @property
    def p_bound(self) -> float:
        # at most delta of the colors clash with the neighbours
        return min(1.0, self.delta / self.colors)

    def condition_table(self) -> LalConditionTable:
        row = (ConditionRow(PowersetElement(), self.p_bound),)
        return LalConditionTable("powerset", {v: row for v in self.slots})

    def weight(self) -> Dict[int, float]:
        # smallest f with f >= 1 + (delta/colors) f
        f = self.colors / (self.colors - self.delta) if self.colors > self.delta else float(self.colors)
        return {v: f for v in self.slots}

    def descriptor(self) -> dict:
        return {"problem": self.problem, "graph": self.graph.to_json(), "colors": self.colors}


def proper_coloring_instance(graph: Graph, colors: int) -> ProperColoring:
    return ProperColoring(graph, colors)
