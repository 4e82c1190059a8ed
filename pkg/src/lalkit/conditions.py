"""Weight inequalities: checking, solving, and the derived closed forms.

The generic condition asks, for every generator ``beta``::

    f(beta) >= 1 + sum_alpha P(beta, alpha) * underline_f(alpha * beta)

Tables hold the analytic upper bounds on ``P(beta, alpha)`` that each
application proves; the supremum defining ``P`` is not computed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from .monoid import (MonoidElement, PowersetElement, element_from_json,
                     generator_element, underline_f)

EQUALITY_TOL = 1e-12
BISECTION_TOL = 1e-9
SCAN_RANGE = (1.0, 1e6)


class SeriesDivergence(OverflowError):
    """A closed-form family was evaluated outside its radius of convergence."""


class DegenerateDelta(ValueError):
    pass


class InvalidOrder(ValueError):
    pass


class InvalidMu(ValueError):
    pass


class ZeroSum(ValueError):
    pass


# ---------------------------------------------------------------------------
# series


@dataclass(frozen=True)
class GeometricFamily:
    """``coefficient * sum_{t >= start} w(t) * (ratio*f)**(step*t + offset)``.

    ``pattern`` selects ``w(t)``: ``"1"`` (or ``"const"``) for 1, ``"t"``
    for t.
    """

    ratio: float
    start: int = 1
    pattern: str = "1"
    coefficient: float = 1.0
    step: int = 1
    offset: int = 0

    def __post_init__(self):
        if self.pattern not in ("1", "const", "t"):
            raise ValueError(f"unknown pattern {self.pattern!r}")
        if self.ratio < 0 or self.coefficient < 0:
            raise ValueError("ratio and coefficient must be non-negative")
        if self.step < 1 or self.step * self.start + self.offset < 1:
            raise ValueError("exponents must be positive integers")

    @property
    def radius(self) -> float:
        return math.inf if self.ratio == 0 else 1.0 / self.ratio

    def _weight(self, t: int) -> float:
        return float(t) if self.pattern == "t" else 1.0

    def value(self, f: float) -> float:
        if self.ratio == 0 or self.coefficient == 0:
            return 0.0
        u = self.ratio * f
        z = u**self.step
        if z >= 1.0:
            raise SeriesDivergence(f"family diverges at f={f} (ratio*f={u})")
        t0 = self.start
        if self.pattern == "t":
            s = t0 / (1 - z) + z / (1 - z) ** 2
        else:
            s = 1 / (1 - z)
        return self.coefficient * u ** (self.step * t0 + self.offset) * s

    def derivative(self, f: float) -> float:
        if self.ratio == 0 or self.coefficient == 0:
            return 0.0
        u = self.ratio * f
        z = u**self.step
        if z >= 1.0:
            raise SeriesDivergence(f"family diverges at f={f}")
        t0 = self.start
        e0 = self.step * t0 + self.offset
        if self.pattern == "t":
            s = t0 / (1 - z) + z / (1 - z) ** 2
            ds = t0 / (1 - z) ** 2 + (1 + z) / (1 - z) ** 3
        else:
            s = 1 / (1 - z)
            ds = 1 / (1 - z) ** 2
        du = e0 * u ** (e0 - 1) * s + u**e0 * ds * self.step * u ** (self.step - 1)
        return self.coefficient * self.ratio * du

    def summed(self, f: float, cutoff: float = 1e-15, max_terms: int = 10**6) -> float:
        """Term-by-term summation, stopped once terms fall below ``cutoff``."""
        if self.ratio == 0 or self.coefficient == 0:
            return 0.0
        u = self.ratio * f
        if u >= 1.0:
            raise SeriesDivergence(f"family diverges at f={f}")
        total = 0.0
        prev = math.inf
        for t in range(self.start, self.start + max_terms):
            term = self.coefficient * self._weight(t) * u ** (self.step * t + self.offset)
            total += term
            if term < cutoff and term <= prev:
                break
            prev = term
        return total

    def to_json(self) -> dict:
        return {"closed_form": "geometric", "ratio": self.ratio, "start": self.start,
                "pattern": self.pattern, "coefficient": self.coefficient,
                "step": self.step, "offset": self.offset}


@dataclass(frozen=True)
class SeriesSpec:
    """Right-hand side ``1 + sum c_i f**e_i + sum families(f)``."""

    terms: Tuple[Tuple[float, int], ...] = ()
    families: Tuple[GeometricFamily, ...] = ()

    def __post_init__(self):
        terms = tuple((float(c), int(e)) for c, e in self.terms)
        for c, e in terms:
            if not math.isfinite(c) or c < 0 or e < 1:
                raise ValueError(f"bad term ({c}, {e})")
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "families", tuple(self.families))

    @property
    def radius(self) -> float:
        return min([fam.radius for fam in self.families], default=math.inf)

    def series(self, f: float) -> float:
        """The non-constant part of the right-hand side."""
        total = math.fsum(c * f**e for c, e in self.terms)
        return total + math.fsum(fam.value(f) for fam in self.families)

    def rhs(self, f: float) -> float:
        return 1.0 + self.series(f)

    def summed_rhs(self, f: float) -> float:
        total = math.fsum(c * f**e for c, e in self.terms)
        return 1.0 + total + math.fsum(fam.summed(f) for fam in self.families)

    def derivative(self, f: float) -> float:
        total = math.fsum(c * e * f ** (e - 1) for c, e in self.terms)
        return total + math.fsum(fam.derivative(f) for fam in self.families)

    def to_json(self) -> dict:
        return {"terms": [list(t) for t in self.terms],
                "families": [fam.to_json() for fam in self.families]}

    @classmethod
    def from_json(cls, data: Mapping) -> "SeriesSpec":
        fams = []
        for d in data.get("families", []):
            d = dict(d)
            d.pop("closed_form", None)
            fams.append(GeometricFamily(**d))
        return cls(tuple(tuple(t) for t in data.get("terms", [])), tuple(fams))


@dataclass(frozen=True)
class FixpointResult:
    feasible: bool
    best_f: float
    slack: float


def _bisect(fn, lo: float, hi: float, rel_tol: float = 1e-15, max_iter: int = 400) -> Tuple[float, float]:
    """Shrink ``[lo, hi]`` with ``fn(lo) < 0 <= fn(hi)`` (sign convention)."""
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi or hi - lo <= rel_tol * hi:
            break
        if fn(mid) >= 0:
            hi = mid
        else:
            lo = mid
    return lo, hi


def solve_series_fixpoint(spec: SeriesSpec, scan: Tuple[float, float] = SCAN_RANGE,
                          tol: float = EQUALITY_TOL) -> FixpointResult:
    """Smallest ``f`` in the scan range with ``f >= spec.rhs(f)``.

    ``g(f) = f - rhs(f)`` is concave, so the feasible set is an interval.  We
    locate the maximum of ``g`` by bisecting its (decreasing) derivative, then
    bisect ``g`` itself on ``[scan_lo, argmax]``.  Tangent cases such as the
    acyclic-coloring condition have their only feasible point at the maximum.
    """
    lo, hi = scan
    radius = spec.radius
    if radius <= lo:
        return FixpointResult(False, lo, -math.inf)
    if radius < hi:
        hi = radius * (1 - 1e-15)

    def g(f):
        try:
            return f - spec.rhs(f)
        except SeriesDivergence:
            return -math.inf

    def dg(f):
        try:
            return 1.0 - spec.derivative(f)
        except SeriesDivergence:
            return -math.inf

    if dg(lo) <= 0:
        top = lo
    elif dg(hi) > 0:
        top = hi
    else:
        # first argument of _bisect must have fn < 0: flip sign of dg
        _, top = _bisect(lambda f: -dg(f), lo, hi)
    gmax = g(top)
    if gmax < -tol * max(1.0, top):
        return FixpointResult(False, top, gmax)
    if gmax <= tol * max(1.0, top) or g(lo) >= 0:
        best = lo if g(lo) >= 0 else top
        return FixpointResult(True, best, g(best))
    _, best = _bisect(g, lo, top)
    return FixpointResult(True, best, g(best))


# ---------------------------------------------------------------------------
# condition tables


@dataclass(frozen=True)
class ConditionRow:
    """``multiplicity`` witnesses of shape ``alpha``, each with bound ``p_bound``."""

    alpha: MonoidElement
    p_bound: float
    multiplicity: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.p_bound <= 1.0:
            raise ValueError(f"p_bound {self.p_bound} outside [0, 1]")


Row = Union[ConditionRow, SeriesSpec]


@dataclass(frozen=True)
class LalConditionTable:
    """Per-generator rows.

    A ``SeriesSpec`` row stands for an infinite family whose weights are
    homogeneous; its non-constant part is evaluated at ``f(beta)``.
    """

    kind: str
    rows: Mapping[int, Tuple[Row, ...]]

    def to_json(self) -> dict:
        out = []
        for g, rows in sorted(self.rows.items()):
            for row in rows:
                if isinstance(row, SeriesSpec):
                    out.append({"generator": g, "series": row.to_json()})
                else:
                    out.append({"generator": g, "alpha": row.alpha.to_json(),
                                "p_bound": row.p_bound,
                                "multiplicity": row.multiplicity})
        return {"kind": self.kind, "rows": out}

    @classmethod
    def from_json(cls, data: Mapping) -> "LalConditionTable":
        rows: Dict[int, list] = {}
        for r in data["rows"]:
            bucket = rows.setdefault(int(r["generator"]), [])
            if "series" in r:
                bucket.append(SeriesSpec.from_json(r["series"]))
            else:
                bucket.append(ConditionRow(element_from_json(r["alpha"]),
                                           float(r["p_bound"]),
                                           float(r.get("multiplicity", 1.0))))
        return cls(data["kind"], {g: tuple(v) for g, v in rows.items()})


@dataclass(frozen=True)
class SlackReport:
    slacks: Dict[int, float]
    tol: float = EQUALITY_TOL

    @property
    def holds(self) -> bool:
        return all(s >= -self.tol for s in self.slacks.values())

    @property
    def min_slack(self) -> float:
        return min(self.slacks.values(), default=math.inf)

    @property
    def worst_generator(self) -> Optional[int]:
        if not self.slacks:
            return None
        return min(self.slacks, key=lambda g: (self.slacks[g], g))


def lal_rhs(beta: int, f: Mapping[int, float], table: LalConditionTable) -> float:
    parts = [1.0]
    beta_elt = generator_element(table.kind, beta)
    for row in table.rows.get(beta, ()):
        if isinstance(row, SeriesSpec):
            parts.append(row.series(f[beta]))
        elif row.p_bound > 0 and row.multiplicity > 0:
            parts.append(row.multiplicity * row.p_bound * underline_f(row.alpha * beta_elt, f))
    total = math.fsum(parts)
    if not math.isfinite(total):
        raise SeriesDivergence(f"right-hand side for generator {beta} is not finite")
    return total


def check_lal_inequality(f: Mapping[int, float], table: LalConditionTable,
                         tol: float = EQUALITY_TOL) -> SlackReport:
    """Slack ``f(beta) - rhs(beta)`` for every generator in ``f``."""
    return SlackReport({beta: f[beta] - lal_rhs(beta, f, table) for beta in f}, tol)


# ---------------------------------------------------------------------------
# closed-form thresholds


def nonrep_color_threshold(delta: int, y: Optional[float] = None) -> int:
    """Colors sufficient for a non-repetitive vertex coloring at max degree ``delta``.

    The default evaluates the closed form obtained with ``y = 1 - (2/delta)**(1/3)``;
    any other ``y`` in (0, 1) gives ``delta**2/y + delta/(1-y)**2``.
    """
    if delta <= 2:
        raise DegenerateDelta(f"delta={delta}: need delta >= 3")
    d = float(delta)
    if y is None:
        c2 = 2.0 ** (2 / 3)
        value = d**2 + 3 / c2 * d ** (5 / 3) + c2 * d ** (5 / 3) / (d ** (1 / 3) - 2.0 ** (1 / 3))
    else:
        if not 0 < y < 1:
            raise ValueError("y must lie in (0, 1)")
        value = d**2 / y + d / (1 - y) ** 2
    return math.ceil(value)


def default_nonrep_y(delta: int) -> float:
    return 1 - (2 / delta) ** (1 / 3)


@dataclass(frozen=True)
class RamseyCertificate:
    certified: bool
    x: float
    y: float
    p: float
    f: float
    h1: float
    h2: float

    @property
    def total(self) -> float:
        return self.h1 + self.h2


def ramsey_certify(k: int, n: int) -> RamseyCertificate:
    """Decide ``max h1 + max h2 >= 1`` for the decoupled Ramsey inequality.

    ``h1(x) = x - (n-2) x**3`` and ``h2(y) = y - C(n-2, k-2) y**C(k,2)``.
    When a cubic/power term vanishes the corresponding ``h`` is linear and
    unbounded; we then pick a point that leaves slack rather than the
    supremum.
    """
    if k <= 2:
        raise InvalidOrder(f"k={k}: need k >= 3")
    if n < 2:
        raise InvalidOrder(f"n={n}: need n >= 2")
    a = n - 2
    c = math.comb(n - 2, k - 2)
    m = math.comb(k, 2)
    if a > 0:
        x = 1 / math.sqrt(3 * a)
        h1 = x - a * x**3
    else:
        x, h1 = 1.0, 1.0
    if c > 0:
        y = (c * m) ** (-1 / (m - 1))
        h2 = y - c * y**m
    else:
        y = 1 - h1 / 2 if h1 < 2 else 0.5
        h2 = y
    f = x + y
    return RamseyCertificate(h1 + h2 >= 1, x, y, x / f, f, h1, h2)


def ramsey_max_n(k: int, n_max: int = 100000) -> int:
    """Largest ``n`` certified, scanning upward from 2 until the first failure."""
    if k <= 2:
        raise InvalidOrder(f"k={k}: need k >= 3")
    best = 2
    for n in range(3, n_max + 1):
        if not ramsey_certify(k, n).certified:
            break
        best = n
    return best


def ramsey_series(n: int, k: int, p: float) -> SeriesSpec:
    """``f >= 1 + (n-2) p^3 f^3 + C(n-2,k-2) (1-p)^C(k,2) f^C(k,2)``."""
    m = math.comb(k, 2)
    return SeriesSpec(((max(n - 2, 0) * p**3, 3),
                       (math.comb(max(n - 2, 0), k - 2) * (1 - p) ** m, m)))


# ---------------------------------------------------------------------------
# lopsided LLL and the lower bound


@dataclass(frozen=True)
class LLLWeights:
    mu: Mapping[int, float]
    gamma: Mapping[int, FrozenSet[int]]
    pr: Mapping[int, float]

    def __post_init__(self):
        for a, nbrs in self.gamma.items():
            if a in nbrs:
                raise ValueError(f"event {a} listed in its own neighbourhood")

    @property
    def events(self) -> List[int]:
        return sorted(self.pr)


def lll_to_weight(weights: LLLWeights) -> Dict[int, float]:
    """Weights ``f(A) = 1 / (1 - mu(A))``."""
    out = {}
    for a, mu in weights.mu.items():
        if not 0.0 <= mu < 1.0:
            raise InvalidMu(f"mu({a})={mu} outside [0, 1)")
        out[a] = 1.0 / (1.0 - mu)
    return out


def check_lopsided_condition(weights: LLLWeights) -> Dict[int, float]:
    """Slack ``mu(A) prod_{B in Gamma(A)} (1 - mu(B)) - Pr(A)`` per event."""
    slack = {}
    for a in weights.events:
        prod = math.prod(1.0 - weights.mu[b] for b in weights.gamma.get(a, ()))
        slack[a] = weights.mu[a] * prod - weights.pr[a]
    return slack


def lll_condition_table(weights: LLLWeights) -> LalConditionTable:
    """Rows ``(Gamma(A), Pr(A))``: the repair map erases the neighbourhood."""
    rows = {a: (ConditionRow(PowersetElement(tuple(weights.gamma.get(a, ()))), weights.pr[a]),)
            for a in weights.events}
    return LalConditionTable("powerset", rows)


def lower_bound_value(alpha: MonoidElement, pr_alpha_good: float, f: Mapping[int, float]) -> float:
    """``Pr(alpha.X in G) / underline_f(alpha)``, a lower bound for ``Pr(X in G)``."""
    if not 0.0 <= pr_alpha_good <= 1.0:
        raise ValueError("probability outside [0, 1]")
    return pr_alpha_good / underline_f(alpha, f)


# ---------------------------------------------------------------------------
# the array theorem and its corollary


def array_row_suprema(a) -> np.ndarray:
    """``sup_j b_ij`` for each row of a finite (zero-tailed) truncation."""
    a = np.asarray(a, dtype=float)
    if a.ndim != 2:
        raise ValueError("expected a 2-D array")
    if np.any(a < 0):
        raise ValueError("entries must be non-negative")
    total = a.sum()
    if total <= 0:
        raise ZeroSum("array sums to zero")
    rows, cols = a.shape
    prefix = np.concatenate([[0.0], np.cumsum(a.sum(axis=0))])
    i = np.arange(1, rows + 1)[:, None]
    j = np.arange(1, cols + 1)[None, :]
    denom = prefix[np.minimum(i + j - 1, cols)]
    with np.errstate(divide="ignore", invalid="ignore"):
        b = np.where(a > 0, a / np.where(denom > 0, denom, 1.0), 0.0)
    return b.max(axis=1)


def array_theorem_margins(a, x_samples: Sequence[float]) -> np.ndarray:
    """``1 + sum_i s_i x**i - x`` at each sample (positive means the bound holds)."""
    s = array_row_suprema(a)
    out = []
    for x in x_samples:
        powers = float(x) ** np.arange(1, len(s) + 1)
        out.append(1.0 + math.fsum(s * powers) - x)
    return np.array(out)


def array_theorem_check(a, x_samples: Sequence[float]) -> bool:
    return bool(np.all(array_theorem_margins(a, x_samples) > 0))


def corollary_supremum(a: Sequence[float], k: int) -> Tuple[float, int]:
    """``max_j a_j / sum_{i <= j+k-1} a_i`` and its 1-based argmax."""
    if k < 1:
        raise ValueError("k must be a positive integer")
    a = np.asarray(a, dtype=float)
    if np.any(a < 0):
        raise ValueError("entries must be non-negative")
    if a.sum() <= 0:
        raise ZeroSum("sequence sums to zero")
    prefix = np.cumsum(a)
    idx = np.minimum(np.arange(len(a)) + k - 1, len(a) - 1)
    denom = prefix[idx]
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(a > 0, a / np.where(denom > 0, denom, 1.0), 0.0)
    j = int(np.argmax(ratio))
    return float(ratio[j]), j + 1
