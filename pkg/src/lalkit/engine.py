"""The forward resampling loop shared by every application.

The engine keeps a word over the generators: the head is the next slot to
fill.  A clean fill drops the head; a violation with witness ``alpha``
erases ``alpha * beta`` from the state and pushes its canonical word back in
front.  The recorded (generator, event, word length) triples are exactly an
admissible pair, so every trace can be replayed by
:func:`lalkit.monoid.trace_decodes`.
"""

from __future__ import annotations

import math
import os
import random
from collections import Counter, deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Mapping, Optional, Sequence, Tuple

from .conditions import LalConditionTable, check_lal_inequality, SlackReport
from .monoid import (DEFAULT_MAX_WORD_LENGTH, MonoidElement, Word, WordTooLong,
                     element_from_json, generator_element)

DEFAULT_BUDGET = 10**7

TERMINATED = "terminated"
BUDGET_EXHAUSTED = "budget_exhausted"
NO_LEGAL_VALUE = "no_legal_value"


class SamplingError(RuntimeError):
    """A slot has no admissible value under the instance's sampler."""


class ConditionUnsatisfiable(UserWarning):
    """The instance's weight does not satisfy its condition table."""


@dataclass(frozen=True)
class WitnessEvent:
    class_tag: str
    alpha: MonoidElement
    detail: Tuple = ()

    def to_json(self) -> dict:
        return {"class": self.class_tag, "alpha": self.alpha.to_json(),
                "detail": _jsonable(self.detail)}

    @classmethod
    def from_json(cls, data: Mapping) -> "WitnessEvent":
        return cls(data["class"], element_from_json(data["alpha"]), _tupled(data["detail"]))


def _jsonable(obj):
    if isinstance(obj, (tuple, list)):
        return [_jsonable(o) for o in obj]
    return obj


def _tupled(obj):
    if isinstance(obj, list):
        return tuple(_tupled(o) for o in obj)
    return obj


class ProblemInstance:
    """Behavioural contract for the engine.

    Subclasses set ``problem``, ``slots`` and ``kind`` (``"powerset"`` or
    ``"free"``) and implement ``sample``, ``detect`` and ``goal``.  The
    defaults below suit the powerset monoid, where generators are slots.
    """

    problem: str = "abstract"
    kind: str = "powerset"
    slots: Tuple[int, ...] = ()

    def initial_word(self) -> Word:
        return tuple(sorted(self.slots))

    def slot_for(self, generator: int, state: Mapping) -> int:
        return generator

    def sample(self, slot: int, state: Mapping, rng: random.Random):
        raise NotImplementedError

    def detect(self, state: Mapping, slot: int) -> Optional[WitnessEvent]:
        raise NotImplementedError

    def goal(self, state: Mapping) -> bool:
        raise NotImplementedError

    def erase_set(self, event: WitnessEvent, generator: int) -> MonoidElement:
        return event.alpha * generator_element(self.kind, generator)

    def condition_table(self) -> LalConditionTable:
        raise NotImplementedError

    def weight(self) -> Dict[int, float]:
        raise NotImplementedError

    def check_condition(self) -> SlackReport:
        return check_lal_inequality(self.weight(), self.condition_table())

    def descriptor(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class Step:
    generator: int
    slot: int
    value: Any
    event: Optional[WitnessEvent]

    def to_json(self) -> dict:
        return {"generator": self.generator, "slot": self.slot, "value": self.value,
                "event": self.event.to_json() if self.event else None}


@dataclass
class RunTrace:
    initial_word: Word
    steps: List[Step] = field(default_factory=list)
    word_lengths: List[int] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"initial_word": list(self.initial_word),
                "steps": [s.to_json() for s in self.steps],
                "word_lengths": list(self.word_lengths)}

    @classmethod
    def from_json(cls, data: Mapping) -> "RunTrace":
        steps = [Step(s["generator"], s["slot"], s["value"],
                      WitnessEvent.from_json(s["event"]) if s["event"] else None)
                 for s in data["steps"]]
        return cls(tuple(data["initial_word"]), steps, list(data["word_lengths"]))


@dataclass
class RunReport:
    terminated: bool
    status: str
    steps_used: int
    events_by_class: Dict[str, int]
    final_state: Dict[int, Any]
    seed: int

    def to_json(self, slots: Optional[Sequence[int]] = None) -> dict:
        if slots is None:
            slots = range(max(self.final_state, default=-1) + 1)
        return {"terminated": self.terminated, "status": self.status,
                "steps_used": self.steps_used,
                "events_by_class": dict(sorted(self.events_by_class.items())),
                "seed": self.seed,
                "final_state": [self.final_state.get(s) for s in slots]}

    @classmethod
    def from_json(cls, data: Mapping) -> "RunReport":
        state = {i: v for i, v in enumerate(data["final_state"]) if v is not None}
        return cls(data["terminated"], data["status"], data["steps_used"],
                   dict(data["events_by_class"]), state, data["seed"])


Observer = Callable[[Mapping, int, Optional[WitnessEvent]], None]


def run(instance: ProblemInstance, seed: int, budget: int = DEFAULT_BUDGET,
        observer: Optional[Observer] = None,
        max_word_length: int = DEFAULT_MAX_WORD_LENGTH) -> Tuple[RunReport, RunTrace]:
    """Fill slots from the head of the word until the word is empty.

    Deterministic given ``seed``: every draw goes through one
    ``random.Random(seed)`` and each ``sample`` call consumes a fixed,
    instance-documented number of calls on it.  ``observer(state, slot,
    event)`` sees the state right after each fill, before any erasure.
    """
    rng = random.Random(seed)
    state: Dict[int, Any] = {}
    w0 = tuple(instance.initial_word())
    word = deque(w0)
    trace = RunTrace(w0)
    events: Counter = Counter()
    steps = 0
    status = TERMINATED
    while word:
        if steps >= budget:
            status = BUDGET_EXHAUSTED
            break
        g = word.popleft()
        slot = instance.slot_for(g, state)
        try:
            value = instance.sample(slot, state, rng)
        except SamplingError:
            word.appendleft(g)
            status = NO_LEGAL_VALUE
            break
        state[slot] = value
        steps += 1
        event = instance.detect(state, slot)
        if observer is not None:
            observer(state, slot, event)
        if event is not None:
            events[event.class_tag] += 1
            ab = instance.erase_set(event, g)
            ab.act_in_place(state)
            word.extendleft(reversed(ab.canonical_word()))
            if len(word) > max_word_length:
                raise WordTooLong(f"word length {len(word)} exceeds {max_word_length}")
        trace.steps.append(Step(g, slot, value, event))
        trace.word_lengths.append(len(word))
    report = RunReport(status == TERMINATED, status, steps, dict(events), dict(state), seed)
    return report, trace


@dataclass
class RunSummary:
    reports: List[RunReport]
    traces: List[RunTrace]

    @property
    def runs(self) -> int:
        return len(self.reports)

    @property
    def success_rate(self) -> float:
        if not self.reports:
            return math.nan
        return sum(r.terminated for r in self.reports) / len(self.reports)

    @property
    def mean_steps(self) -> float:
        if not self.reports:
            return math.nan
        return math.fsum(r.steps_used for r in self.reports) / len(self.reports)

    @property
    def max_steps(self) -> int:
        return max((r.steps_used for r in self.reports), default=0)

    @property
    def events_by_class(self) -> Dict[str, int]:
        total: Counter = Counter()
        for r in self.reports:
            total.update(r.events_by_class)
        return dict(sorted(total.items()))

    def aggregate(self) -> dict:
        return {"runs": self.runs, "success_rate": self.success_rate,
                "mean_steps": self.mean_steps, "max_steps": self.max_steps,
                "events_by_class": self.events_by_class}


def _run_one(args):
    instance, seed, budget = args
    return run(instance, seed, budget)


def max_workers_from_env() -> int:
    try:
        return max(1, int(os.environ.get("LALKIT_MAX_THREADS", "1")))
    except ValueError:
        return 1


def run_many(instance: ProblemInstance, seeds: Sequence[int], budget: int = DEFAULT_BUDGET,
             workers: Optional[int] = None) -> RunSummary:
    """Independent runs, one per seed; results come back in seed-list order."""
    seeds = list(seeds)
    if workers is None:
        workers = max_workers_from_env()
    jobs = [(instance, s, budget) for s in seeds]
    if workers > 1 and len(seeds) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_one, jobs))
    else:
        results = [_run_one(j) for j in jobs]
    return RunSummary([r for r, _ in results], [t for _, t in results])
