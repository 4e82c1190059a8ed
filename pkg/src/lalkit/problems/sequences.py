"""Non-repetitive sequences from lists, built left to right."""

from __future__ import annotations

import warnings
from typing import Dict, Mapping, Optional, Sequence

from ..conditions import GeometricFamily, LalConditionTable, SeriesSpec
from ..engine import ConditionUnsatisfiable, ProblemInstance, WitnessEvent
from ..monoid import FREE_GENERATOR, FreePower
from ..validators import check_nonrepetitive_sequence


def nonrep_sequence_series(list_size: int) -> SeriesSpec:
    """``f >= 1 + sum_{t>=1} (f / list_size)**t``."""
    return SeriesSpec(families=(GeometricFamily(ratio=1.0 / list_size),))


class NonrepSequence(ProblemInstance):
    """The free monoid on one generator: ``beta**t`` drops the last ``t`` letters.

    A square of block length ``t`` ending at the new position maps to
    ``beta**(t-1)``; together with the popped ``beta`` the last ``t``
    positions are erased.  Among several squares the longest is taken.
    ``sample`` makes one ``choice`` call.
    """

    problem = "nonrep-seq"
    kind = "free"

    def __init__(self, lists: Sequence[Sequence]):
        if not lists:
            raise ValueError("need at least one position")
        self.lists = tuple(tuple(l) for l in lists)
        if any(len(l) == 0 for l in self.lists):
            raise ValueError("every list must be non-empty")
        self.slots = tuple(range(len(self.lists)))
        self.list_size = min(len(l) for l in self.lists)
        if self.list_size < 4:
            warnings.warn(f"lists of size {self.list_size} < 4: the condition cannot hold",
                          ConditionUnsatisfiable, stacklevel=2)

    def initial_word(self):
        return (FREE_GENERATOR,) * len(self.lists)

    def slot_for(self, generator, state):
        return len(state)

    def sample(self, slot, state, rng):
        return rng.choice(self.lists[slot])

    def detect(self, state: Mapping, slot: int) -> Optional[WitnessEvent]:
        m = slot + 1
        seq = [state[i] for i in range(m)]
        last = seq[-1]
        for t in range(m // 2, 0, -1):
            if seq[m - 1 - t] == last and seq[m - 2 * t:m - t] == seq[m - t:]:
                return WitnessEvent("block-repeat", FreePower(t - 1), (m - 2 * t, t))
        return None

    def goal(self, state) -> bool:
        n = len(state)
        if set(state) != set(range(n)):
            return False
        return check_nonrepetitive_sequence([state[i] for i in range(n)]) is None

    def condition_table(self) -> LalConditionTable:
        return LalConditionTable("free", {FREE_GENERATOR: (nonrep_sequence_series(self.list_size),)})

    def weight(self) -> Dict[int, float]:
        # f(1 - f/L) >= 1 is best at f = L/2; L = 4 gives f = 2
        return {FREE_GENERATOR: self.list_size / 2}

    def descriptor(self) -> dict:
        return {"problem": self.problem, "lists": [list(l) for l in self.lists]}


def nonrep_sequence_instance(lists) -> NonrepSequence:
    return NonrepSequence(lists)


def uniform_lists(n: int, alphabet: int):
    return [tuple(range(alphabet))] * n
