"""Monoid words and the two monoid families acting on partial assignments.

Two families cover every application here:

* the powerset of slots under union, generated by singletons, acting on a
  partial assignment by forgetting the values of the slots in the set;
* the free monoid on one generator ``beta``, acting by truncating the last
  ``t`` filled positions of a sequence.

A partial assignment is a plain ``dict`` mapping slot id to value.  Words are
tuples of generator ids; the free monoid uses the single id ``0``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Optional, Sequence, Tuple, Union

DEFAULT_MAX_WORD_LENGTH = 2**20
FREE_GENERATOR = 0

Word = Tuple[int, ...]
SKIP = None


class UndefinedWeight(KeyError):
    """A generator has no weight assigned."""


class EmptyWordError(ValueError):
    """A replay step was requested on the empty word."""


class WordTooLong(RuntimeError):
    """A word grew past the configured cap."""


@dataclass(frozen=True)
class PowersetElement:
    """A finite set of slots; multiplication is union."""

    slots: Tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "slots", tuple(sorted(set(self.slots))))

    kind = "powerset"

    def __mul__(self, other: "PowersetElement") -> "PowersetElement":
        if not isinstance(other, PowersetElement):
            return NotImplemented
        return PowersetElement(self.slots + other.slots)

    def __len__(self) -> int:
        return len(self.slots)

    def __contains__(self, slot) -> bool:
        return slot in set(self.slots)

    @property
    def is_identity(self) -> bool:
        return not self.slots

    def canonical_word(self) -> Word:
        return self.slots

    def act(self, state: Mapping) -> dict:
        drop = set(self.slots)
        return {k: v for k, v in state.items() if k not in drop}

    def act_in_place(self, state: dict) -> None:
        for s in self.slots:
            state.pop(s, None)

    def to_json(self) -> dict:
        return {"kind": "powerset", "slots": list(self.slots)}


@dataclass(frozen=True)
class FreePower:
    """``beta**exponent`` in the free monoid on one generator."""

    exponent: int = 0

    def __post_init__(self):
        if self.exponent < 0:
            raise ValueError("exponent must be non-negative")

    kind = "free"

    def __mul__(self, other: "FreePower") -> "FreePower":
        if not isinstance(other, FreePower):
            return NotImplemented
        return FreePower(self.exponent + other.exponent)

    def __len__(self) -> int:
        return self.exponent

    @property
    def is_identity(self) -> bool:
        return self.exponent == 0

    def canonical_word(self) -> Word:
        return (FREE_GENERATOR,) * self.exponent

    def act(self, state: Mapping) -> dict:
        out = dict(state)
        self.act_in_place(out)
        return out

    def act_in_place(self, state: dict) -> None:
        # truncation removes the highest filled positions
        if self.exponent == 0 or not state:
            return
        for k in sorted(state)[-self.exponent:]:
            del state[k]

    def to_json(self) -> dict:
        return {"kind": "free", "exponent": self.exponent}


MonoidElement = Union[PowersetElement, FreePower]


def generator_element(kind: str, generator: int) -> MonoidElement:
    """The monoid element of a single generator."""
    if kind == "powerset":
        return PowersetElement((generator,))
    if kind == "free":
        if generator != FREE_GENERATOR:
            raise ValueError(f"free monoid has one generator, got {generator}")
        return FreePower(1)
    raise ValueError(f"unknown monoid kind {kind!r}")


def identity(kind: str) -> MonoidElement:
    return PowersetElement() if kind == "powerset" else FreePower(0)


def element_from_json(data: Mapping) -> MonoidElement:
    if data["kind"] == "powerset":
        return PowersetElement(tuple(data["slots"]))
    if data["kind"] == "free":
        return FreePower(int(data["exponent"]))
    raise ValueError(f"unknown monoid kind {data['kind']!r}")


def word_element(kind: str, word: Iterable[int]) -> MonoidElement:
    """Image of a word under the canonical homomorphism onto the monoid."""
    word = tuple(word)
    if kind == "powerset":
        return PowersetElement(word)
    if any(g != FREE_GENERATOR for g in word):
        raise ValueError("free monoid words use generator 0 only")
    return FreePower(len(word))


def underline_f(alpha: MonoidElement, f: Mapping[int, float]) -> float:
    """Infimum over factorizations of ``alpha`` of the product of weights.

    Both families attain the infimum at the canonical word: a set is cheapest
    as the product of its singletons (weights are at least 1 under any
    satisfied condition, and repeats only add factors), and ``beta**t`` has a
    single factorization.
    """
    value = 1.0
    for g in alpha.canonical_word():
        try:
            value *= f[g]
        except KeyError:
            raise UndefinedWeight(g) from None
    return value


def _evolve(w0: Sequence[int], events: Iterable[Optional[MonoidElement]],
            max_length: int) -> Iterator[Tuple[int, deque]]:
    word = deque(w0)
    for event in events:
        if not word:
            raise EmptyWordError("word is empty; nothing to pop")
        head = word.popleft()
        if event is not SKIP:
            u = (event * generator_element(event.kind, head)).canonical_word()
            word.extendleft(reversed(u))
            if len(word) > max_length:
                raise WordTooLong(f"word length {len(word)} exceeds {max_length}")
        yield head, word


def replay_word_evolution(w0: Sequence[int],
                          events: Iterable[Optional[MonoidElement]],
                          max_length: int = DEFAULT_MAX_WORD_LENGTH) -> Word:
    """Run the pop / erase / push-back dynamics and return the last word.

    Each step pops the head generator ``beta``.  A ``SKIP`` step leaves the
    rest of the word; an event ``alpha`` prefixes the canonical word of
    ``alpha * beta``.
    """
    word = deque(w0)
    for _, word in _evolve(w0, events, max_length):
        pass
    return tuple(word)


def trace_decodes(trace, w0: Optional[Sequence[int]] = None) -> bool:
    """Check that replaying a run's events reproduces its recorded words.

    Both the generator popped at each step and the word length after it
    must match the trace.
    """
    if w0 is None:
        w0 = trace.initial_word
    steps = trace.steps
    if len(trace.word_lengths) != len(steps):
        return False
    try:
        evolution = _evolve(w0, (s.event.alpha if s.event else SKIP for s in steps),
                            DEFAULT_MAX_WORD_LENGTH)
        for step, recorded, (head, word) in zip(steps, trace.word_lengths, evolution):
            if head != step.generator or len(word) != recorded:
                return False
    except (EmptyWordError, WordTooLong):
        return False
    return True
