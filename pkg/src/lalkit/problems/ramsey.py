"""Lower bounds for R(3, k): 2-colorings of K_n with no blue triangle and no red K_k."""

from __future__ import annotations

import itertools
import math
import warnings
from typing import Dict, List, Mapping, Optional, Tuple

from ..conditions import (ConditionRow, InvalidOrder, LalConditionTable, ramsey_certify,
                          ramsey_series, solve_series_fixpoint)
from ..engine import ConditionUnsatisfiable, ProblemInstance, WitnessEvent
from ..graphs import complete_graph
from ..monoid import PowersetElement
from ..validators import BLUE, RED, check_ramsey_witness


class RamseyColoring(ProblemInstance):
    """Slots are the edges of ``K_n`` in lexicographic order.

    ``sample`` makes one ``random()`` call: blue (1) below ``p``, red (0)
    otherwise.  Witnesses are picked by smallest vertex set: the first blue
    triangle, or the first red ``K_k`` found by an ascending DFS over common
    red neighbours.
    """

    problem = "ramsey"

    def __init__(self, n: int, k: int, p: Optional[float] = None):
        if k < 3:
            raise InvalidOrder(f"k={k}: need k >= 3")
        if n < 2:
            raise InvalidOrder(f"n={n}: need n >= 2")
        self.n, self.k = n, k
        cert = ramsey_certify(k, n)
        self.certificate = cert
        if p is None:
            p, f = cert.p, cert.f
            if not cert.certified:
                warnings.warn(f"K_{n} is not certified for k={k}", ConditionUnsatisfiable,
                              stacklevel=2)
        else:
            if not 0.0 < p < 1.0:
                raise ValueError("p must lie in (0, 1)")
            res = solve_series_fixpoint(ramsey_series(n, k, p))
            if not res.feasible:
                warnings.warn(f"p={p} does not satisfy the condition on K_{n}",
                              ConditionUnsatisfiable, stacklevel=2)
            f = res.best_f
        self.p, self._f = p, f
        self.pairs = complete_graph(n).edges
        self._id = {e: i for i, e in enumerate(self.pairs)}
        self.slots = tuple(range(len(self.pairs)))

    def edge(self, a: int, b: int) -> int:
        return self._id[(min(a, b), max(a, b))]

    def sample(self, slot, state, rng):
        return BLUE if rng.random() < self.p else RED

    def _red_clique(self, state: Mapping, cands: List[int], need: int):
        def extend(chosen, pool):
            if len(chosen) == need:
                return chosen
            for i, c in enumerate(pool):
                if len(chosen) + len(pool) - i < need:
                    return None
                nxt = [d for d in pool[i + 1:] if state.get(self.edge(c, d)) == RED]
                found = extend(chosen + [c], nxt)
                if found is not None:
                    return found
            return None

        return extend([], cands)

    def detect(self, state: Mapping, e: int) -> Optional[WitnessEvent]:
        a, b = self.pairs[e]
        color = state[e]
        others = [c for c in range(self.n) if c != a and c != b
                  and state.get(self.edge(a, c)) == color and state.get(self.edge(b, c)) == color]
        if color == BLUE:
            if not others:
                return None
            verts = (a, b, others[0])
            tag = "blue-triangle"
        else:
            rest = self._red_clique(state, others, self.k - 2)
            if rest is None:
                return None
            verts = (a, b) + tuple(rest)
            tag = "red-clique"
        verts = tuple(sorted(verts))
        edges = [self.edge(x, y) for x, y in itertools.combinations(verts, 2)]
        return WitnessEvent(tag, PowersetElement(tuple(h for h in edges if h != e)), verts)

    def goal(self, state) -> bool:
        if len(state) < len(self.slots):
            return False
        return check_ramsey_witness(self.n, self.k, state) is None

    def condition_table(self) -> LalConditionTable:
        m = math.comb(self.k, 2)
        rows = {}
        for e, (a, b) in enumerate(self.pairs):
            others = [c for c in range(self.n) if c != a and c != b]
            row = []
            if others:
                c = others[0]
                tri = PowersetElement((self.edge(a, c), self.edge(b, c)))
                row.append(ConditionRow(tri, self.p**3, self.n - 2))
            if len(others) >= self.k - 2:
                verts = sorted([a, b] + others[:self.k - 2])
                clique = PowersetElement(tuple(self.edge(x, y)
                                               for x, y in itertools.combinations(verts, 2)))
                row.append(ConditionRow(clique, (1 - self.p) ** m,
                                        math.comb(self.n - 2, self.k - 2)))
            rows[e] = tuple(row)
        return LalConditionTable("powerset", rows)

    def weight(self) -> Dict[int, float]:
        return {e: self._f for e in self.slots}

    def descriptor(self) -> dict:
        return {"problem": self.problem, "n": self.n, "k": self.k, "p": self.p}


def ramsey_instance(n: int, k: int, p: Optional[float] = None) -> RamseyColoring:
    return RamseyColoring(n, k, p)
