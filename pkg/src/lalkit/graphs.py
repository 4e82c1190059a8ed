"""Simple undirected graphs, edge-list I/O and the generated families."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Tuple, Union

Edge = Tuple[int, int]


class GraphParseError(ValueError):
    pass


@dataclass(frozen=True)
class Graph:
    n: int
    edges: Tuple[Edge, ...]
    adjacency: Tuple[frozenset, ...] = field(init=False, repr=False, compare=False)
    edge_index: Dict[Edge, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        seen = {}
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop at {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u}, {v}) outside 0..{self.n - 1}")
            seen.setdefault((min(u, v), max(u, v)), None)
        edges = tuple(seen)
        adj = [set() for _ in range(self.n)]
        for u, v in edges:
            adj[u].add(v)
            adj[v].add(u)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "adjacency", tuple(frozenset(a) for a in adj))
        object.__setattr__(self, "edge_index", {e: i for i, e in enumerate(edges)})

    @property
    def max_degree(self) -> int:
        return max((len(a) for a in self.adjacency), default=0)

    def edge_id(self, u: int, v: int) -> int:
        return self.edge_index[(min(u, v), max(u, v))]

    def to_json(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_json(cls, data) -> "Graph":
        return cls(int(data["n"]), tuple(tuple(e) for e in data["edges"]))


def parse_edge_list(text: str, n: Optional[int] = None) -> Graph:
    """Whitespace-separated ``u v`` pairs, one per line, 0-indexed.

    Blank lines and ``#`` comments are ignored.  ``n`` defaults to one more
    than the largest vertex mentioned.
    """
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise GraphParseError(f"line {lineno}: expected 'u v', got {raw!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphParseError(f"line {lineno}: non-integer vertex in {raw!r}") from None
        if u < 0 or v < 0:
            raise GraphParseError(f"line {lineno}: negative vertex")
        if u == v:
            raise GraphParseError(f"line {lineno}: self-loop at {u}")
        edges.append((u, v))
    top = max((max(e) for e in edges), default=-1) + 1
    if n is None:
        n = top
    elif n < top:
        raise GraphParseError(f"vertex {top - 1} out of range for n={n}")
    return Graph(n, tuple(edges))


def read_edge_list(path: Union[str, Path], n: Optional[int] = None) -> Graph:
    return parse_edge_list(Path(path).read_text(), n)


def format_edge_list(g: Graph) -> str:
    return "".join(f"{u} {v}\n" for u, v in g.edges)


def path_graph(n: int) -> Graph:
    return Graph(n, tuple((i, i + 1) for i in range(n - 1)))


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    return Graph(n, tuple((i, (i + 1) % n) for i in range(n)))


def complete_graph(n: int) -> Graph:
    return Graph(n, tuple((i, j) for i in range(n) for j in range(i + 1, n)))


def star_graph(leaves: int) -> Graph:
    return Graph(leaves + 1, tuple((0, i) for i in range(1, leaves + 1)))


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph(10, tuple(outer + spokes + inner))


def random_regular_graph(n: int, d: int, seed: int) -> Graph:
    import networkx as nx

    g = nx.random_regular_graph(d, n, seed=seed)
    return Graph(n, tuple(g.edges()))


def random_bounded_degree_graph(n: int, max_degree: int, m: int, seed: int,
                                max_tries: int = 100) -> Graph:
    """Up to ``m`` random edges, never pushing a vertex past ``max_degree``."""
    rng = random.Random(seed)
    deg = [0] * n
    edges = set()
    tries = 0
    while len(edges) < m and tries < max_tries * m:
        tries += 1
        u, v = rng.randrange(n), rng.randrange(n)
        if u == v:
            continue
        e = (min(u, v), max(u, v))
        if e in edges or deg[u] >= max_degree or deg[v] >= max_degree:
            continue
        edges.add(e)
        deg[u] += 1
        deg[v] += 1
    return Graph(n, tuple(sorted(edges)))


def random_tree(n: int, max_degree: int, seed: int) -> Graph:
    """Random recursive tree: vertex ``i`` hangs off a random earlier vertex with spare degree."""
    if max_degree < 2 and n > 2:
        raise ValueError("max_degree < 2 cannot span more than 2 vertices")
    rng = random.Random(seed)
    deg = [0] * n
    edges = []
    for i in range(1, n):
        parents = [j for j in range(i) if deg[j] < max_degree]
        p = rng.choice(parents)
        edges.append((p, i))
        deg[p] += 1
        deg[i] += 1
    return Graph(n, tuple(edges))


FAMILIES = ("path", "cycle", "complete", "regular", "star", "petersen")


def generate(family: str, n: int = 0, degree: int = 3, seed: int = 0) -> Graph:
    if family == "path":
        return path_graph(n)
    if family == "cycle":
        return cycle_graph(n)
    if family == "complete":
        return complete_graph(n)
    if family == "regular":
        return random_regular_graph(n, degree, seed)
    if family == "star":
        return star_graph(n)
    if family == "petersen":
        return petersen_graph()
    raise ValueError(f"unknown graph family {family!r}")
