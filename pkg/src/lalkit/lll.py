"""Random explicit probability spaces in the variable framework.

Events are conjunctions of literals over independent biased bits, so
``Pr(A)`` is a product and two events are dependent only when they share a
variable.  Used to exercise the lopsided local lemma against exact
enumeration.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from typing import Callable, Dict, FrozenSet, List, Optional, Tuple

from .conditions import LLLWeights, check_lopsided_condition

Literal = Tuple[int, int]


@dataclass(frozen=True)
class VariableSpace:
    biases: Tuple[float, ...]
    events: Tuple[Tuple[Literal, ...], ...]

    def outcomes(self) -> List[Tuple[Tuple[int, ...], float]]:
        out = []
        for bits in itertools.product((0, 1), repeat=len(self.biases)):
            p = math.prod(b if x else 1 - b for x, b in zip(bits, self.biases))
            out.append((bits, p))
        return out

    def event_fns(self) -> List[Callable[[Tuple[int, ...]], bool]]:
        return [lambda w, lits=lits: all(w[v] == x for v, x in lits) for lits in self.events]

    def pr(self, j: int) -> float:
        return math.prod(self.biases[v] if x else 1 - self.biases[v] for v, x in self.events[j])

    def gamma(self) -> Dict[int, FrozenSet[int]]:
        vars_of = [{v for v, _ in lits} for lits in self.events]
        return {a: frozenset(b for b in range(len(self.events)) if b != a and vars_of[a] & vars_of[b])
                for a in range(len(self.events))}


def random_variable_space(rng: random.Random, max_vars: int = 12, max_events: int = 8,
                          max_width: int = 3) -> VariableSpace:
    n = rng.randint(2, max_vars)
    biases = tuple(rng.uniform(0.05, 0.95) for _ in range(n))
    events = []
    for _ in range(rng.randint(1, max_events)):
        vs = rng.sample(range(n), rng.randint(1, min(max_width, n)))
        events.append(tuple(sorted((v, rng.randint(0, 1)) for v in vs)))
    return VariableSpace(biases, tuple(events))


def fit_mu(pr: Dict[int, float], gamma: Dict[int, FrozenSet[int]],
           iters: int = 10_000, margin: float = 1e-9) -> Optional[Dict[int, float]]:
    """Least ``mu`` with ``Pr(A) <= mu(A) prod_{Gamma(A)} (1 - mu(B))``, or ``None``.

    Iterates ``mu <- Pr / prod(1 - mu)`` upward from ``Pr``, then nudges by
    ``margin`` and keeps the result only if the inequality checks out.
    """
    mu = dict(pr)
    for _ in range(iters):
        nxt = {}
        for a in pr:
            denom = math.prod(1 - mu[b] for b in gamma[a])
            if denom <= 0:
                return None
            nxt[a] = pr[a] / denom
            if nxt[a] >= 1:
                return None
        done = max(abs(nxt[a] - mu[a]) for a in pr) < 1e-15
        mu = nxt
        if done:
            break
    mu = {a: min(m + margin, 1 - 1e-12) for a, m in mu.items()}
    w = LLLWeights(mu, gamma, pr)
    if min(check_lopsided_condition(w).values()) < 0:
        return None
    return mu


def random_certified_space(rng: random.Random, tries: int = 1000, **kw):
    """A random space together with weights passing the lopsided condition."""
    for _ in range(tries):
        space = random_variable_space(rng, **kw)
        pr = {j: space.pr(j) for j in range(len(space.events))}
        gamma = space.gamma()
        mu = fit_mu(pr, gamma)
        if mu is not None:
            return space, LLLWeights(mu, gamma, pr)
    raise RuntimeError("no certified space found")
