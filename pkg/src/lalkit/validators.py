"""Independent checkers and brute-force oracles.

Everything here is written from the definitions of the target objects and
shares no code with the instance detectors in :mod:`lalkit.problems`.
Checkers accept partial structures: unassigned slots are simply absent.
"""

from __future__ import annotations

import itertools
import math
import random
from typing import (Any, Callable, Dict, Hashable, Iterable, List, Mapping, Optional,
                    Sequence, Tuple, Union)

from .graphs import Graph, complete_graph

BLUE, RED = 1, 0
DEFAULT_MAX_PATH_VERTICES = 30
CLIQUE_NODE_BUDGET = 10**8
FEASIBILITY_GUARD = 10**7
MAX_SPACE = 2**20


class TooLarge(RuntimeError):
    pass


class IncompleteColoring(ValueError):
    pass


class InvalidDistribution(ValueError):
    pass


def as_mapping(assignment) -> Dict[int, Any]:
    """Sequences (``None`` = unassigned) and mappings both become dicts."""
    if isinstance(assignment, Mapping):
        return {int(k): v for k, v in assignment.items() if v is not None}
    return {i: v for i, v in enumerate(assignment) if v is not None}


# ---------------------------------------------------------------------------
# sequences


def check_nonrepetitive_sequence(s: Sequence) -> Optional[Tuple[int, int]]:
    """First ``(s, t)`` (1-based start, block length) with ``a[k] == a[k+t]``
    for ``s <= k <= s+t-1``, or ``None``."""
    s = list(s)
    n = len(s)
    for start in range(n):
        for t in range(1, (n - start) // 2 + 1):
            if s[start:start + t] == s[start + t:start + 2 * t]:
                return start + 1, t
    return None


# ---------------------------------------------------------------------------
# vertex colorings


def check_proper_coloring(g: Graph, coloring) -> Optional[Tuple[int, int]]:
    col = as_mapping(coloring)
    for u, v in g.edges:
        if u in col and v in col and col[u] == col[v]:
            return (u, v)
    return None


def _simple_paths(g: Graph, vertices: set, max_vertices: Optional[int] = None):
    """Every simple path inside ``vertices``, each direction, as a tuple."""
    for s in sorted(vertices):
        stack = [(s,)]
        while stack:
            path = stack.pop()
            yield path
            if max_vertices is not None and len(path) >= max_vertices:
                continue
            for w in sorted(g.adjacency[path[-1]], reverse=True):
                if w in vertices and w not in path:
                    stack.append(path + (w,))


def check_nonrepetitive_coloring(g: Graph, coloring,
                                 max_vertices: int = DEFAULT_MAX_PATH_VERTICES) -> Optional[Tuple[int, ...]]:
    """A path ``v_1..v_2t`` whose halves get the same color sequence, or ``None``.

    Exhaustive over simple paths of the colored subgraph, so it refuses graphs
    with more than ``max_vertices`` vertices.
    """
    if g.n > max_vertices:
        raise TooLarge(f"{g.n} vertices exceeds the exhaustive path guard {max_vertices}")
    col = as_mapping(coloring)
    for path in _simple_paths(g, set(col)):
        m = len(path)
        if m % 2 == 0:
            t = m // 2
            if all(col[path[i]] == col[path[i + t]] for i in range(t)):
                return path
    return None


# ---------------------------------------------------------------------------
# edge colorings


def _edge_mapping(g: Graph, coloring) -> Dict[int, Any]:
    if isinstance(coloring, Mapping) and coloring and isinstance(next(iter(coloring)), tuple):
        return {g.edge_id(*e): c for e, c in coloring.items() if c is not None}
    return as_mapping(coloring)


def check_acyclic_edge_coloring(g: Graph, coloring, allow_partial: bool = False):
    """``None`` if the coloring is proper with no two-colored cycle.

    Otherwise returns ``("adjacent", e1, e2)`` for two incident edges sharing a
    color, or ``("bichromatic-cycle", (c1, c2), edges)`` with the edge ids of
    a cycle using only colors ``c1`` and ``c2``.
    """
    col = _edge_mapping(g, coloring)
    if not allow_partial and len(col) < len(g.edges):
        raise IncompleteColoring(f"{len(g.edges) - len(col)} edges uncolored")
    incident: Dict[int, List[int]] = {v: [] for v in range(g.n)}
    for e in sorted(col):
        u, v = g.edges[e]
        incident[u].append(e)
        incident[v].append(e)
    for v in range(g.n):
        seen: Dict[Any, int] = {}
        for e in incident[v]:
            if col[e] in seen:
                return ("adjacent", seen[col[e]], e)
            seen[col[e]] = e
    by_color: Dict[Any, List[int]] = {}
    for e in sorted(col):
        by_color.setdefault(col[e], []).append(e)
    colors = sorted(by_color, key=repr)
    for c1, c2 in itertools.combinations(colors, 2):
        cycle = _find_cycle(g, by_color[c1] + by_color[c2])
        if cycle is not None:
            return ("bichromatic-cycle", (c1, c2), cycle)
    return None


def _find_cycle(g: Graph, edge_ids: List[int]) -> Optional[Tuple[int, ...]]:
    """Union-find forest test; on the first closing edge, recover the cycle."""
    parent: Dict[int, int] = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    forest: Dict[int, List[Tuple[int, int]]] = {}
    for e in sorted(edge_ids):
        u, v = g.edges[e]
        ru, rv = find(u), find(v)
        if ru == rv:
            return tuple(sorted(_tree_path(forest, u, v) + [e]))
        parent[ru] = rv
        forest.setdefault(u, []).append((v, e))
        forest.setdefault(v, []).append((u, e))
    return None


def _tree_path(forest, src, dst) -> List[int]:
    prev = {src: None}
    queue = [src]
    for x in queue:
        if x == dst:
            break
        for y, e in forest.get(x, ()):
            if y not in prev:
                prev[y] = (x, e)
                queue.append(y)
    out = []
    x = dst
    while prev[x] is not None:
        x, e = prev[x]
        out.append(e)
    return out


# ---------------------------------------------------------------------------
# Ramsey colorings


def _ramsey_colors(n: int, coloring) -> Dict[Tuple[int, int], int]:
    pairs = complete_graph(n).edges
    if isinstance(coloring, Mapping) and coloring and isinstance(next(iter(coloring)), tuple):
        items = {(min(e), max(e)): c for e, c in coloring.items()}
    else:
        items = {pairs[i]: c for i, c in as_mapping(coloring).items()}
    out = {}
    for e, c in items.items():
        if c is None:
            continue
        if c in ("blue", "B"):
            c = BLUE
        elif c in ("red", "R"):
            c = RED
        out[e] = int(c)
    return out


def check_ramsey_witness(n: int, k: int, coloring,
                         node_budget: int = CLIQUE_NODE_BUDGET) -> Optional[Tuple[str, Tuple[int, ...]]]:
    """A blue triangle or a red ``K_k`` among the colored edges of ``K_n``."""
    col = _ramsey_colors(n, coloring)
    blue = [set() for _ in range(n)]
    red = [set() for _ in range(n)]
    for (u, v), c in col.items():
        (blue if c == BLUE else red)[u].add(v)
        (blue if c == BLUE else red)[v].add(u)
    for a in range(n):
        for b in sorted(x for x in blue[a] if x > a):
            common = sorted(x for x in blue[a] & blue[b] if x > b)
            if common:
                return ("blue-triangle", (a, b, common[0]))
    clique = _find_clique(red, k, node_budget)
    if clique is not None:
        return ("red-clique", clique)
    return None


def _find_clique(adj: List[set], k: int, node_budget: int) -> Optional[Tuple[int, ...]]:
    """Bron-Kerbosch with pivoting, cut off once a clique reaches size ``k``."""
    nodes = [0]

    def bk(r, p, x):
        nodes[0] += 1
        if nodes[0] > node_budget:
            raise TooLarge("clique search exceeded its node budget")
        if len(r) >= k:
            return r
        if len(r) + len(p) < k:
            return None
        if not p and not x:
            return None
        pivot = max(p | x, key=lambda u: len(p & adj[u]))
        for v in sorted(p - adj[pivot]):
            found = bk(r + [v], p & adj[v], x & adj[v])
            if found is not None:
                return found
            p = p - {v}
            x = x | {v}
        return None

    if k <= 1:
        return (0,) if adj else None
    found = bk([], set(range(len(adj))), set())
    return tuple(sorted(found[:k])) if found is not None else None


# ---------------------------------------------------------------------------
# choice functions


def check_choice_function(blocks: Sequence[Sequence[Hashable]],
                          forbidden: Sequence[Iterable[Hashable]],
                          choice) -> Optional[int]:
    """Index of the first forbidden partial choice contained in ``choice``."""
    chosen = as_mapping(choice)
    for k, u in chosen.items():
        if u not in blocks[k]:
            raise ValueError(f"block {k} has no element {u!r}")
    picked = set(chosen.values())
    for j, p in enumerate(forbidden):
        if set(p) <= picked:
            return j
    return None


# ---------------------------------------------------------------------------
# brute-force oracles


def _feasibility_problem(descriptor: Mapping):
    """Slots, per-slot domains and a partial-validity predicate from a descriptor."""
    problem = descriptor["problem"]
    if problem in ("proper", "nonrep-color", "acyclic"):
        g = Graph.from_json(descriptor["graph"])
        colors = list(range(int(descriptor["colors"])))
        if problem == "proper":
            return list(range(g.n)), [colors] * g.n, lambda a: check_proper_coloring(g, a) is None
        if problem == "nonrep-color":
            return (list(range(g.n)), [colors] * g.n,
                    lambda a: check_nonrepetitive_coloring(g, a, max_vertices=max(g.n, 1)) is None)
        m = len(g.edges)
        return (list(range(m)), [colors] * m,
                lambda a: check_acyclic_edge_coloring(g, a, allow_partial=True) is None)
    if problem == "nonrep-seq":
        lists = [list(l) for l in descriptor["lists"]]

        def ok(a):
            prefix = [a[i] for i in range(len(a))]
            return check_nonrepetitive_sequence(prefix) is None

        return list(range(len(lists))), lists, ok
    if problem == "ramsey":
        n, k = int(descriptor["n"]), int(descriptor["k"])
        m = n * (n - 1) // 2
        return list(range(m)), [[RED, BLUE]] * m, lambda a: check_ramsey_witness(n, k, a) is None
    if problem == "choice":
        blocks = [list(b) for b in descriptor["blocks"]]
        forbidden = [list(p) for p in descriptor["forbidden"]]
        return (list(range(len(blocks))), blocks,
                lambda a: check_choice_function(blocks, forbidden, a) is None)
    raise ValueError(f"unknown problem {problem!r}")


def exhaustive_feasibility(descriptor: Mapping, guard: int = FEASIBILITY_GUARD) -> bool:
    """Backtracking: does a goal-satisfying total assignment exist?

    Slots are assigned in ascending order and every partial assignment is
    checked with the definition-level validator.  Visiting more than
    ``guard`` search nodes raises :class:`TooLarge`.
    """
    slots, domains, ok = _feasibility_problem(descriptor)
    assignment: Dict[int, Any] = {}
    visited = [0]

    def extend(i: int) -> bool:
        if i == len(slots):
            return True
        for value in domains[i]:
            visited[0] += 1
            if visited[0] > guard:
                raise TooLarge(f"search exceeded {guard} nodes")
            assignment[slots[i]] = value
            if ok(assignment) and extend(i + 1):
                return True
            del assignment[slots[i]]
        return False

    return extend(0)


def exact_event_enumeration(space: Sequence[Tuple[Any, float]],
                            events: Sequence[Callable[[Any], bool]]) -> float:
    """``Pr(no event occurs)`` summed exactly over an explicit outcome list."""
    if len(space) > MAX_SPACE:
        raise TooLarge(f"{len(space)} outcomes exceeds {MAX_SPACE}")
    probs = [p for _, p in space]
    if any(p < 0 for p in probs) or abs(math.fsum(probs) - 1.0) > 1e-12:
        raise InvalidDistribution("probabilities must be non-negative and sum to 1")
    return math.fsum(p for omega, p in space if not any(ev(omega) for ev in events))


def monte_carlo_frequency(space: Sequence[Tuple[Any, float]],
                          events: Sequence[Callable[[Any], bool]],
                          trials: int, seed: int) -> float:
    """Empirical frequency of avoiding every event over ``trials`` draws."""
    rng = random.Random(seed)
    outcomes = [o for o, _ in space]
    weights = [p for _, p in space]
    draws = rng.choices(outcomes, weights=weights, k=trials)
    return sum(not any(ev(o) for ev in events) for o in draws) / trials


def find_violation(descriptor: Mapping, assignment):
    """The definition-level witness for a total assignment, or ``None``.

    Unassigned slots count as a violation ``("incomplete", missing)``.
    """
    problem = descriptor["problem"]
    col = as_mapping(assignment)
    if problem in ("proper", "nonrep-color", "acyclic"):
        g = Graph.from_json(descriptor["graph"])
        size = len(g.edges) if problem == "acyclic" else g.n
    elif problem == "nonrep-seq":
        size = len(descriptor["lists"])
    elif problem == "ramsey":
        n = int(descriptor["n"])
        size = n * (n - 1) // 2
    elif problem == "choice":
        size = len(descriptor["blocks"])
    else:
        raise ValueError(f"unknown problem {problem!r}")
    missing = [i for i in range(size) if i not in col]
    if missing:
        return ("incomplete", tuple(missing))
    if problem == "proper":
        return check_proper_coloring(g, col)
    if problem == "nonrep-color":
        return check_nonrepetitive_coloring(g, col, max_vertices=max(g.n, 1))
    if problem == "acyclic":
        return check_acyclic_edge_coloring(g, col)
    if problem == "nonrep-seq":
        return check_nonrepetitive_sequence([col[i] for i in range(size)])
    if problem == "ramsey":
        return check_ramsey_witness(n, int(descriptor["k"]), col)
    return check_choice_function(descriptor["blocks"], descriptor["forbidden"], col)


def partial_validator(descriptor: Mapping) -> Callable[[Mapping], bool]:
    """Predicate: does a partial assignment avoid every fully assigned violation?

    Sequences must be prefixes.  This is the same predicate the backtracking
    oracle prunes with.
    """
    return _feasibility_problem(descriptor)[2]
