"""Choice functions avoiding forbidden partial choices."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Dict, Hashable, Mapping, Optional, Sequence, Tuple

from ..conditions import ConditionRow, LalConditionTable
from ..engine import ConditionUnsatisfiable, ProblemInstance, WitnessEvent
from ..graphs import Graph
from ..monoid import PowersetElement
from ..validators import check_choice_function


class InvalidMarginals(ValueError):
    pass


@dataclass(frozen=True)
class ChoiceSystem:
    """Disjoint blocks, forbidden partial choices and a marginal per element."""

    blocks: Tuple[Tuple[Hashable, ...], ...]
    forbidden: Tuple[Tuple[Hashable, ...], ...]
    marginals: Mapping[Hashable, float]

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(tuple(b) for b in self.blocks))
        object.__setattr__(self, "forbidden", tuple(tuple(p) for p in self.forbidden))
        block_of = {}
        for k, block in enumerate(self.blocks):
            if not block:
                raise ValueError(f"block {k} is empty")
            for u in block:
                if u in block_of:
                    raise ValueError(f"element {u!r} appears in two blocks")
                block_of[u] = k
        for j, p in enumerate(self.forbidden):
            if not p:
                raise ValueError(f"forbidden choice {j} is empty")
            dom = [block_of.get(u) for u in p]
            if None in dom:
                raise ValueError(f"forbidden choice {j} uses an unknown element")
            if len(set(dom)) != len(dom):
                raise ValueError(f"forbidden choice {j} picks twice from one block")
        for u in block_of:
            q = self.marginals.get(u, 0.0)
            if not 0.0 <= q <= 1.0:
                raise InvalidMarginals(f"p({u!r})={q} outside [0, 1]")
        for k, block in enumerate(self.blocks):
            if math.fsum(self.marginals.get(u, 0.0) for u in block) <= 0:
                raise InvalidMarginals(f"block {k} has zero total marginal")
        object.__setattr__(self, "_block_of", block_of)

    def block_of(self, u) -> int:
        return self._block_of[u]

    def domain(self, j: int) -> Tuple[int, ...]:
        return tuple(sorted(self._block_of[u] for u in self.forbidden[j]))

    def to_json(self) -> dict:
        labels = [u for b in self.blocks for u in b]
        return {"blocks": [list(b) for b in self.blocks],
                "forbidden": [list(p) for p in self.forbidden],
                "marginals": [self.marginals.get(u, 0.0) for u in labels]}

    @classmethod
    def from_json(cls, data: Mapping) -> "ChoiceSystem":
        blocks = tuple(tuple(b) for b in data["blocks"])
        labels = [u for b in blocks for u in b]
        return cls(blocks, tuple(tuple(p) for p in data["forbidden"]),
                   dict(zip(labels, data["marginals"])))


class ChoiceFunction(ProblemInstance):
    """Block ``k`` picks ``u`` with probability ``p(u) / f(k)``, ``f(k) = sum_{U_k} p``.

    ``sample`` makes one ``choices`` call.  A completed forbidden choice
    ``P_j`` erases its domain; ties go to the smallest domain, then the
    smallest index ``j``.
    """

    problem = "choice"

    def __init__(self, system: ChoiceSystem):
        self.system = system
        self.slots = tuple(range(len(system.blocks)))
        m = system.marginals
        self.f = {k: math.fsum(m.get(u, 0.0) for u in b) for k, b in enumerate(system.blocks)}
        self.p_prime = {u: m.get(u, 0.0) / self.f[k]
                        for k, b in enumerate(system.blocks) for u in b}
        self._weights = {k: [self.p_prime[u] for u in b] for k, b in enumerate(system.blocks)}
        self._by_element: Dict[Hashable, list] = {}
        for j, p in enumerate(system.forbidden):
            for u in p:
                self._by_element.setdefault(u, []).append(j)
        slack = self.marginal_slack()
        if min(slack.values(), default=0.0) < -1e-12:
            warnings.warn("marginals violate the block-sum condition", ConditionUnsatisfiable,
                          stacklevel=2)

    def marginal_slack(self) -> Dict[int, float]:
        """``sum_{U_k} p - 1 - sum_{dom P_j ∋ k} prod_{P_j} p`` per block."""
        m = self.system.marginals
        out = {}
        for k in self.slots:
            hits = [math.prod(m.get(u, 0.0) for u in p)
                    for j, p in enumerate(self.system.forbidden) if k in self.system.domain(j)]
            out[k] = self.f[k] - 1.0 - math.fsum(hits)
        return out

    def sample(self, slot, state, rng):
        return rng.choices(self.system.blocks[slot], weights=self._weights[slot])[0]

    def detect(self, state: Mapping, k: int) -> Optional[WitnessEvent]:
        u = state[k]
        best = None
        for j in self._by_element.get(u, ()):
            p = self.system.forbidden[j]
            if all(state.get(self.system.block_of(w)) == w for w in p):
                key = (self.system.domain(j), j)
                if best is None or key < best:
                    best = key
        if best is None:
            return None
        dom, j = best
        return WitnessEvent("forbidden-choice", PowersetElement(dom), (j,))

    def goal(self, state) -> bool:
        if len(state) < len(self.slots):
            return False
        return check_choice_function(self.system.blocks, self.system.forbidden, state) is None

    def condition_table(self) -> LalConditionTable:
        rows = {k: [] for k in self.slots}
        for j, p in enumerate(self.system.forbidden):
            dom = self.system.domain(j)
            bound = math.prod(self.p_prime[u] for u in p)
            for k in dom:
                rows[k].append(ConditionRow(PowersetElement(dom), bound))
        return LalConditionTable("powerset", {k: tuple(r) for k, r in rows.items()})

    def weight(self) -> Dict[int, float]:
        return dict(self.f)

    def descriptor(self) -> dict:
        return {"problem": self.problem, **self.system.to_json()}


def choice_function_instance(system: ChoiceSystem) -> ChoiceFunction:
    return ChoiceFunction(system)


def coloring_choice_system(graph: Graph, colors: int, q: float) -> ChoiceSystem:
    """Proper coloring as a choice problem: element ``v*colors + c`` means vertex ``v`` gets ``c``."""
    blocks = tuple(tuple(v * colors + c for c in range(colors)) for v in range(graph.n))
    forbidden = tuple((u * colors + c, v * colors + c) for u, v in graph.edges for c in range(colors))
    marginals = {u: q for b in blocks for u in b}
    return ChoiceSystem(blocks, forbidden, marginals)
