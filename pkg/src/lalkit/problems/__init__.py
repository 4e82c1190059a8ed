"""The six applications, each packaged as a :class:`~lalkit.engine.ProblemInstance`."""

from __future__ import annotations

from typing import Mapping

from ..conditions import SeriesSpec
from ..graphs import Graph
from .acyclic import (AcyclicEdgeColoring, NoLegalColor, acyclic_edge_instance, acyclic_series,
                      kept_cycle_edges)
from .choice import (ChoiceFunction, ChoiceSystem, InvalidMarginals, choice_function_instance,
                     coloring_choice_system)
from .coloring import ProperColoring, proper_coloring_instance
from .nonrep_coloring import NonrepColoring, nonrep_coloring_instance, nonrep_coloring_series
from .ramsey import RamseyColoring, ramsey_instance
from .sequences import NonrepSequence, nonrep_sequence_instance, nonrep_sequence_series, uniform_lists

PROBLEMS = ("proper", "nonrep-seq", "nonrep-color", "acyclic", "ramsey", "choice")


def proper_series(delta: int, colors: int) -> SeriesSpec:
    return SeriesSpec(((min(1.0, delta / colors), 1),))


def from_descriptor(d: Mapping):
    """Rebuild an instance from the JSON descriptor it emitted."""
    problem = d["problem"]
    if problem == "proper":
        return ProperColoring(Graph.from_json(d["graph"]), int(d["colors"]))
    if problem == "nonrep-seq":
        return NonrepSequence(d["lists"])
    if problem == "nonrep-color":
        return NonrepColoring(Graph.from_json(d["graph"]), int(d["colors"]),
                              d.get("max_half_length", 8))
    if problem == "acyclic":
        return AcyclicEdgeColoring(Graph.from_json(d["graph"]), int(d["colors"]),
                                   d.get("strategy", "restricted"))
    if problem == "ramsey":
        return RamseyColoring(int(d["n"]), int(d["k"]), d.get("p"))
    if problem == "choice":
        return ChoiceFunction(ChoiceSystem.from_json(d))
    raise ValueError(f"unknown problem {problem!r}")


__all__ = [
    "PROBLEMS", "from_descriptor", "proper_series",
    "AcyclicEdgeColoring", "NoLegalColor", "acyclic_edge_instance", "acyclic_series", "kept_cycle_edges",
    "ChoiceFunction", "ChoiceSystem", "InvalidMarginals", "choice_function_instance",
    "coloring_choice_system",
    "ProperColoring", "proper_coloring_instance",
    "NonrepColoring", "nonrep_coloring_instance", "nonrep_coloring_series",
    "RamseyColoring", "ramsey_instance",
    "NonrepSequence", "nonrep_sequence_instance", "nonrep_sequence_series", "uniform_lists",
]
