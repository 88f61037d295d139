"""Undirected weighted graph with stable edge ids, plus the traversal helpers
every other module leans on (Dijkstra, components, induced subgraphs).

Edge ids are tombstoned on removal and never reused, so per-edge records
(trajectories, reports) stay addressable across surgeries.
"""

from __future__ import annotations

import heapq
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator

import numpy as np
import scipy.sparse as sp

from .errors import EmptyGraphError, GraphParseError

UNREACHABLE = math.inf


class WeightedGraph:
    """Simple undirected graph with positive edge weights.

    Nodes are dense integers ``0..n-1``; each carries a string label.
    Edges are dense integers assigned in insertion order.
    """

    def __init__(self, n: int = 0, labels: Iterable[str] | None = None):
        self._labels: list[str] = []
        self._index: dict[str, int] = {}
        self._adj: list[dict[int, int]] = []
        self._u: list[int] = []
        self._v: list[int] = []
        self._w: list[float] = []
        self._alive: list[bool] = []
        self._m = 0
        if labels is not None:
            for lab in labels:
                self.add_node(lab)
        for _ in range(n - len(self._labels)):
            self.add_node()

    # -- construction -------------------------------------------------

    def add_node(self, label: str | None = None) -> int:
        idx = len(self._labels)
        if label is None:
            label = str(idx)
        if label in self._index:
            raise ValueError(f"duplicate node label {label!r}")
        self._labels.append(label)
        self._index[label] = idx
        self._adj.append({})
        return idx

    def add_edge(self, u: int, v: int, w: float = 1.0) -> int:
        if u == v:
            raise ValueError(f"self-loop on node {u}")
        if not (0 <= u < self.n and 0 <= v < self.n):
            raise IndexError(f"edge ({u}, {v}) references a missing node")
        if not w > 0 or not math.isfinite(w):
            raise ValueError(f"edge weight must be positive and finite, got {w!r}")
        if v in self._adj[u]:
            raise ValueError(f"duplicate edge ({u}, {v})")
        eid = len(self._u)
        self._u.append(u)
        self._v.append(v)
        self._w.append(float(w))
        self._alive.append(True)
        self._adj[u][v] = eid
        self._adj[v][u] = eid
        self._m += 1
        return eid

    def remove_edge(self, eid: int) -> None:
        if not self._alive[eid]:
            raise KeyError(f"edge {eid} already removed")
        u, v = self._u[eid], self._v[eid]
        del self._adj[u][v]
        del self._adj[v][u]
        self._alive[eid] = False
        self._m -= 1

    def set_weight(self, eid: int, w: float) -> None:
        if not self._alive[eid]:
            raise KeyError(f"edge {eid} is not live")
        if not w > 0:
            raise ValueError(f"edge weight must be positive, got {w!r}")
        self._w[eid] = float(w)

    def copy(self) -> "WeightedGraph":
        g = WeightedGraph.__new__(WeightedGraph)
        g._labels = list(self._labels)
        g._index = dict(self._index)
        g._adj = [dict(a) for a in self._adj]
        g._u = list(self._u)
        g._v = list(self._v)
        g._w = list(self._w)
        g._alive = list(self._alive)
        g._m = self._m
        return g

    @classmethod
    def from_edges(
        cls,
        edges: Iterable[tuple],
        n: int | None = None,
        labels: Iterable[str] | None = None,
    ) -> "WeightedGraph":
        """Build from ``(u, v)`` or ``(u, v, w)`` integer tuples."""
        edges = list(edges)
        if n is None:
            n = 1 + max((max(e[0], e[1]) for e in edges), default=-1)
        g = cls(n, labels)
        for e in edges:
            g.add_edge(e[0], e[1], e[2] if len(e) > 2 else 1.0)
        return g

    # -- queries -------------------------------------------------------

    @property
    def n(self) -> int:
        return len(self._labels)

    @property
    def m(self) -> int:
        """Number of live edges."""
        return self._m

    @property
    def edge_capacity(self) -> int:
        """One past the largest edge id ever issued."""
        return len(self._u)

    def label(self, x: int) -> str:
        return self._labels[x]

    @property
    def labels(self) -> list[str]:
        return list(self._labels)

    def node(self, label: str) -> int:
        return self._index[label]

    def is_live(self, eid: int) -> bool:
        return 0 <= eid < len(self._alive) and self._alive[eid]

    def endpoints(self, eid: int) -> tuple[int, int]:
        return self._u[eid], self._v[eid]

    def weight(self, eid: int) -> float:
        return self._w[eid]

    def edge_between(self, u: int, v: int) -> int | None:
        return self._adj[u].get(v)

    def neighbors(self, x: int) -> dict[int, int]:
        """Live neighbours of ``x`` mapped to the connecting edge id."""
        return self._adj[x]

    def degree(self, x: int) -> int:
        return len(self._adj[x])

    def weighted_degree(self, x: int) -> float:
        w = self._w
        return sum(w[e] for e in self._adj[x].values())

    def edge_ids(self) -> list[int]:
        """Live edge ids in ascending order."""
        return [e for e, ok in enumerate(self._alive) if ok]

    def edges(self) -> Iterator[tuple[int, int, int, float]]:
        """Yield ``(eid, u, v, w)`` for live edges in id order."""
        for e, ok in enumerate(self._alive):
            if ok:
                yield e, self._u[e], self._v[e], self._w[e]

    def weights(self) -> dict[int, float]:
        return {e: self._w[e] for e, ok in enumerate(self._alive) if ok}

    def total_weight(self) -> float:
        return math.fsum(self._w[e] for e, ok in enumerate(self._alive) if ok)

    def to_csr(self, unit_weights: bool = False) -> sp.csr_matrix:
        """Symmetric sparse adjacency over live edges."""
        ids = self.edge_ids()
        u = np.fromiter((self._u[e] for e in ids), dtype=np.int64, count=len(ids))
        v = np.fromiter((self._v[e] for e in ids), dtype=np.int64, count=len(ids))
        if unit_weights:
            w = np.ones(len(ids))
        else:
            w = np.fromiter((self._w[e] for e in ids), dtype=float, count=len(ids))
        rows = np.concatenate([u, v])
        cols = np.concatenate([v, u])
        data = np.concatenate([w, w])
        return sp.csr_matrix((data, (rows, cols)), shape=(self.n, self.n))

    def __repr__(self) -> str:
        return f"WeightedGraph(n={self.n}, m={self.m})"


# -- ingestion ----------------------------------------------------------


def load_edge_list(
    text: str, default_weight: float = 1.0, drop_self_loops: bool = False
) -> WeightedGraph:
    """Parse whitespace-separated ``u v [w]`` rows into a graph.

    Lines starting with ``#`` or ``%`` and blank lines are skipped. Labels
    are arbitrary strings, numbered in order of first appearance. A repeated
    pair (in either orientation) keeps the weight of its first occurrence.
    Self-loops are a parse error unless ``drop_self_loops`` is set, in which
    case they are skipped (their labels still become nodes).
    """
    if not default_weight > 0:
        raise ValueError("default_weight must be positive")
    g = WeightedGraph()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line[0] in "#%":
            continue
        tok = line.split()
        if len(tok) < 2:
            raise GraphParseError(lineno, f"expected 'u v [w]', got {line!r}")
        a, b = tok[0], tok[1]
        if len(tok) >= 3:
            try:
                w = float(tok[2])
            except ValueError:
                raise GraphParseError(lineno, f"non-numeric weight {tok[2]!r}") from None
            if not (w > 0 and math.isfinite(w)):
                raise GraphParseError(lineno, f"weight must be positive, got {tok[2]!r}")
        else:
            w = default_weight
        if a == b:
            if drop_self_loops:
                if a not in g._index:
                    g.add_node(a)
                continue
            raise GraphParseError(lineno, f"self-loop on {a!r}")
        u = g._index.get(a)
        if u is None:
            u = g.add_node(a)
        v = g._index.get(b)
        if v is None:
            v = g.add_node(b)
        if v not in g._adj[u]:
            g.add_edge(u, v, w)
    return g


def read_edge_list(path, default_weight: float = 1.0, drop_self_loops: bool = False) -> WeightedGraph:
    with open(path, encoding="utf-8") as fh:
        return load_edge_list(fh.read(), default_weight, drop_self_loops)


def write_edge_list(g: WeightedGraph) -> str:
    return "".join(f"{g.label(u)} {g.label(v)} {w!r}\n" for _, u, v, w in g.edges())


# -- traversal ----------------------------------------------------------


@dataclass
class DistanceOracle:
    """Single-source distances; ``math.inf`` marks unreachable nodes."""

    source: int
    dist: list[float] = field(repr=False)

    def __getitem__(self, x: int) -> float:
        return self.dist[x]

    def reachable(self, x: int) -> bool:
        return self.dist[x] != UNREACHABLE


def shortest_path_distances(g: WeightedGraph, source: int, unit_weights: bool = False) -> DistanceOracle:
    """Dijkstra from ``source`` over live edges (hop counts if ``unit_weights``)."""
    if not 0 <= source < g.n:
        raise IndexError(f"node {source} not in graph")
    dist = [UNREACHABLE] * g.n
    dist[source] = 0.0
    heap = [(0.0, source)]
    w = g._w
    while heap:
        d, x = heapq.heappop(heap)
        if d > dist[x]:
            continue
        for y, e in g._adj[x].items():
            nd = d + (1.0 if unit_weights else w[e])
            if nd < dist[y]:
                dist[y] = nd
                heapq.heappush(heap, (nd, y))
    return DistanceOracle(source, dist)


def bfs_hops(g: WeightedGraph, source: int, allowed: set[int] | None = None) -> dict[int, int]:
    """Hop counts from ``source``, optionally confined to ``allowed`` nodes."""
    dist = {source: 0}
    q = deque([source])
    while q:
        x = q.popleft()
        for y in g._adj[x]:
            if y not in dist and (allowed is None or y in allowed):
                dist[y] = dist[x] + 1
                q.append(y)
    return dist


def connected_components(g: WeightedGraph) -> list[set[int]]:
    """Components ordered by their smallest node id."""
    seen = [False] * g.n
    comps = []
    for s in range(g.n):
        if seen[s]:
            continue
        seen[s] = True
        comp = {s}
        stack = [s]
        while stack:
            x = stack.pop()
            for y in g._adj[x]:
                if not seen[y]:
                    seen[y] = True
                    comp.add(y)
                    stack.append(y)
        comps.append(comp)
    return comps


def is_connected(g: WeightedGraph) -> bool:
    return g.n > 0 and len(connected_components(g)) == 1


def induced_subgraph(g: WeightedGraph, nodes: Iterable[int]) -> tuple[WeightedGraph, list[int]]:
    """Subgraph on ``nodes`` with original weights and labels.

    Nodes are re-indexed densely in ascending original order and edges are
    added in ascending original edge id. Returns the subgraph and the list
    mapping new node index -> original node id.
    """
    keep = sorted(set(nodes))
    for x in keep:
        if not 0 <= x < g.n:
            raise IndexError(f"node {x} not in graph")
    new_of = {x: i for i, x in enumerate(keep)}
    h = WeightedGraph(labels=[g.label(x) for x in keep])
    for _, u, v, w in g.edges():
        if u in new_of and v in new_of:
            h.add_edge(new_of[u], new_of[v], w)
    return h, keep


def largest_connected_component(g: WeightedGraph) -> WeightedGraph:
    """Induced subgraph on the largest component (ties: smallest node id)."""
    if g.n == 0:
        raise EmptyGraphError("graph has no nodes")
    comps = connected_components(g)
    best = max(comps, key=lambda c: (len(c), -min(c)))
    return induced_subgraph(g, best)[0]


def hop_diameter(g: WeightedGraph) -> int:
    """Largest finite hop distance between any two nodes."""
    from scipy.sparse.csgraph import shortest_path

    if g.n <= 1:
        return 0
    d = shortest_path(g.to_csr(unit_weights=True), directed=False, unweighted=True)
    finite = d[np.isfinite(d)]
    return int(finite.max())
