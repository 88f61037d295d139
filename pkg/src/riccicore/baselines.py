"""Centrality baselines and size-matched connected node groups.

All four centralities ignore edge weights and work on hop distances.
"""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass

import numpy as np
from scipy.sparse.csgraph import shortest_path

from .errors import ConvergenceError, RicciCoreError
from .graph import WeightedGraph

METHODS = ("degree", "betweenness", "closeness", "pagerank")


@dataclass
class CentralityScores:
    method: str
    scores: list[float]

    def ranking(self) -> list[int]:
        """Node ids by descending score, ties by ascending id."""
        return sorted(range(len(self.scores)), key=lambda x: (-self.scores[x], x))


def degree_centrality(g: WeightedGraph) -> list[float]:
    if g.n <= 1:
        return [0.0] * g.n
    return [g.degree(x) / (g.n - 1) for x in range(g.n)]


def betweenness_centrality(g: WeightedGraph) -> list[float]:
    """Brandes accumulation on hop distances, normalised by ``(n-1)(n-2)/2``."""
    n = g.n
    bc = [0.0] * n
    adj = [sorted(g.neighbors(x)) for x in range(n)]
    for s in range(n):
        stack = []
        preds: list[list[int]] = [[] for _ in range(n)]
        sigma = [0] * n
        sigma[s] = 1
        dist = [-1] * n
        dist[s] = 0
        q = deque([s])
        while q:
            v = q.popleft()
            stack.append(v)
            for w in adj[v]:
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    q.append(w)
                if dist[w] == dist[v] + 1:
                    sigma[w] += sigma[v]
                    preds[w].append(v)
        delta = [0.0] * n
        while stack:
            w = stack.pop()
            for v in preds[w]:
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w])
            if w != s:
                bc[w] += delta[w]
    # each unordered pair was counted from both ends
    if n <= 2:
        return [0.0] * n
    scale = 1.0 / ((n - 1) * (n - 2))
    return [b * scale for b in bc]


def closeness_centrality(g: WeightedGraph) -> list[float]:
    """``(r-1)/sum(dist)`` over the ``r`` reachable nodes, scaled by ``(r-1)/(n-1)``.

    On a connected graph this is exactly ``(n-1)/sum(dist)``.
    """
    n = g.n
    if n <= 1:
        return [0.0] * n
    d = shortest_path(g.to_csr(unit_weights=True), directed=False, unweighted=True)
    out = []
    for row in d:
        fin = row[np.isfinite(row)]
        r = len(fin)
        tot = fin.sum()
        out.append(0.0 if tot == 0 else (r - 1) / tot * (r - 1) / (n - 1))
    return out


def pagerank(g: WeightedGraph, damping: float = 0.85, tol: float = 1e-10, max_rounds: int = 1000) -> list[float]:
    """Power iteration on the unweighted graph; dangling mass spread uniformly."""
    n = g.n
    if n == 0:
        return []
    A = g.to_csr(unit_weights=True)
    deg = np.asarray(A.sum(axis=1)).ravel()
    inv = np.divide(1.0, deg, out=np.zeros(n), where=deg > 0)
    P = A.multiply(inv[:, None]).T.tocsr()  # column-stochastic on non-dangling nodes
    dangling = deg == 0
    p = np.full(n, 1.0 / n)
    for _ in range(max_rounds):
        nxt = damping * (P @ p + p[dangling].sum() / n) + (1.0 - damping) / n
        nxt /= nxt.sum()
        if np.abs(nxt - p).sum() < tol:
            return nxt.tolist()
        p = nxt
    raise ConvergenceError(f"pagerank did not reach L1 tolerance {tol} in {max_rounds} rounds")


def centrality(g: WeightedGraph, method: str, damping: float = 0.85, tol: float = 1e-10) -> CentralityScores:
    if method == "degree":
        sc = degree_centrality(g)
    elif method == "betweenness":
        sc = betweenness_centrality(g)
    elif method == "closeness":
        sc = closeness_centrality(g)
    elif method == "pagerank":
        sc = pagerank(g, damping, tol)
    else:
        raise ValueError(f"unknown centrality method {method!r}; choose from {METHODS}")
    return CentralityScores(method, sc)


def connected_top_k(g: WeightedGraph, scores: CentralityScores | list[float], k: int) -> list[int]:
    """Greedy connected group of ``k`` high-scoring nodes.

    Grow from the best seed by repeatedly absorbing the best-scoring
    neighbour of the current set. If the frontier dries up, try the next
    best unused seed; return the first group of size ``k``, else the
    largest one found.
    """
    sc = scores.scores if isinstance(scores, CentralityScores) else list(scores)
    if not 0 < k <= g.n:
        raise ValueError(f"k must lie in [1, {g.n}], got {k}")
    order = sorted(range(g.n), key=lambda x: (-sc[x], x))
    used = set()
    best: list[int] = []
    for seed in order:
        if seed in used:
            continue
        group = {seed}
        heap: list[tuple[float, int]] = []
        queued = {seed}
        for y in g.neighbors(seed):
            heapq.heappush(heap, (-sc[y], y))
            queued.add(y)
        while len(group) < k and heap:
            _, x = heapq.heappop(heap)
            group.add(x)
            for y in g.neighbors(x):
                if y not in queued:
                    queued.add(y)
                    heapq.heappush(heap, (-sc[y], y))
        if len(group) == k:
            return sorted(group)
        used |= group
        if len(group) > len(best):
            best = sorted(group)
    if not best:
        raise RicciCoreError("no connected group could be grown")
    return best
