"""Lazy random-walk measures and exact Wasserstein-1 distances between them.

The primary solver is a transportation simplex (least-cost start, Dantzig
pricing with lowest-index ties, Bland fallback under degeneracy). The
independent oracle is successive shortest augmenting paths on the
bipartite flow network and is meant for tests only.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Any, Callable, Mapping, Sequence

import numpy as np

from .errors import ContractViolation, DisconnectedSupportError, UndefinedWalkError
from .graph import WeightedGraph

MASS_TOL = 1e-9


@dataclass(frozen=True)
class Measure:
    """Probability distribution on graph nodes."""

    support: dict[int, float]

    def __post_init__(self):
        for x, p in self.support.items():
            if p < 0 or not math.isfinite(p):
                raise ContractViolation(f"mass at node {x} is {p!r}")

    @property
    def total(self) -> float:
        return math.fsum(self.support.values())

    def nodes(self) -> list[int]:
        return sorted(self.support)

    def __getitem__(self, x: int) -> float:
        return self.support.get(x, 0.0)

    @classmethod
    def point(cls, x: int) -> "Measure":
        return cls({x: 1.0})


@dataclass
class TransportPlan:
    """Coupling given as sparse ``(from, to, mass)`` flows plus its cost."""

    flows: list[tuple[int, int, float]] = field(default_factory=list)
    cost: float = 0.0

    def row_sums(self) -> dict[int, float]:
        out: dict[int, float] = {}
        for a, _, q in self.flows:
            out[a] = out.get(a, 0.0) + q
        return out

    def col_sums(self) -> dict[int, float]:
        out: dict[int, float] = {}
        for _, b, q in self.flows:
            out[b] = out.get(b, 0.0) + q
        return out


def lazy_measure_arrays(g: WeightedGraph, x: int, alpha: float) -> tuple[list[int], np.ndarray]:
    """Support (x first, then neighbours by id) and masses of the alpha-lazy walk."""
    nbrs = g.neighbors(x)
    if not nbrs:
        if alpha == 1.0:
            return [x], np.array([1.0])
        raise UndefinedWalkError(f"node {x} has no neighbours and alpha={alpha} < 1")
    ys = sorted(nbrs)
    w = np.array([g.weight(nbrs[y]) for y in ys])
    masses = np.empty(len(ys) + 1)
    masses[0] = alpha
    masses[1:] = (1.0 - alpha) * w / w.sum()
    return [x, *ys], masses


def lazy_measure(g: WeightedGraph, x: int, alpha: float) -> Measure:
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
    nodes, masses = lazy_measure_arrays(g, x, alpha)
    return Measure({v: float(p) for v, p in zip(nodes, masses) if p > 0})


# -- cost lookups -------------------------------------------------------


def _cost_matrix(dist: Any, rows: Sequence[int], cols: Sequence[int]) -> np.ndarray:
    if isinstance(dist, np.ndarray):
        return np.asarray(dist[np.ix_(rows, cols)], dtype=float)
    if callable(dist):
        return np.array([[dist(a, b) for b in cols] for a in rows], dtype=float)
    return np.array([[dist[a][b] for b in cols] for a in rows], dtype=float)


def _check_marginals(mu1: Measure, mu2: Measure) -> None:
    for name, mu in (("mu1", mu1), ("mu2", mu2)):
        if abs(mu.total - 1.0) > MASS_TOL:
            raise ContractViolation(f"{name} has total mass {mu.total!r}, expected 1")


# -- primary solver -----------------------------------------------------


def _initial_tree(a: np.ndarray, b: np.ndarray, C: np.ndarray) -> dict[tuple[int, int], float]:
    """Least-cost basic feasible solution, completed to a spanning tree with zero cells."""
    k, l = len(a), len(b)
    parent = list(range(k + l))

    def find(z):
        while parent[z] != z:
            parent[z] = parent[parent[z]]
            z = parent[z]
        return z

    ra = a.astype(float).copy()
    rb = b.astype(float).copy()
    row_open = [True] * k
    col_open = [True] * l
    basis: dict[tuple[int, int], float] = {}
    flat = np.lexsort((np.tile(np.arange(l), k), np.repeat(np.arange(k), l), C.ravel()))
    order = [(int(f) // l, int(f) % l) for f in flat]
    for i, j in order:
        if not (row_open[i] and col_open[j]):
            continue
        ri, rj = find(i), find(k + j)
        if ri == rj:
            return _northwest_tree(a, b)
        q = min(ra[i], rb[j])
        basis[(i, j)] = q
        parent[ri] = rj
        ra[i] -= q
        rb[j] -= q
        if ra[i] <= 0.0:
            row_open[i] = False
        if rb[j] <= 0.0:
            col_open[j] = False
        if len(basis) == k + l - 1:
            break
    # Round-off can leave a sliver of supply with every column closed; it
    # stays unassigned (bounded by the mass tolerance).
    if len(basis) < k + l - 1:
        for i, j in order:
            ri, rj = find(i), find(k + j)
            if ri != rj:
                basis[(i, j)] = 0.0
                parent[ri] = rj
                if len(basis) == k + l - 1:
                    break
    return basis


def _northwest_tree(a: np.ndarray, b: np.ndarray) -> dict[tuple[int, int], float]:
    k, l = len(a), len(b)
    ra, rb = a.astype(float).copy(), b.astype(float).copy()
    basis = {}
    i = j = 0
    while True:
        q = min(ra[i], rb[j])
        basis[(i, j)] = q
        ra[i] -= q
        rb[j] -= q
        if i == k - 1 and j == l - 1:
            return basis
        if j == l - 1 or (i < k - 1 and ra[i] <= 0.0):
            i += 1
        else:
            j += 1


def _tree_path(basis, k: int, l: int, i: int, j: int) -> list[tuple[int, int]]:
    """Cells on the tree path from row ``i`` to column ``j`` (row-first order)."""
    adj: list[list[int]] = [[] for _ in range(k + l)]
    for (r, c) in basis:
        adj[r].append(k + c)
        adj[k + c].append(r)
    prev = [-1] * (k + l)
    prev[i] = i
    q = deque([i])
    target = k + j
    while q:
        z = q.popleft()
        if z == target:
            break
        for y in adj[z]:
            if prev[y] < 0:
                prev[y] = z
                q.append(y)
    nodes = [target]
    while nodes[-1] != i:
        nodes.append(prev[nodes[-1]])
    nodes.reverse()
    cells = []
    for s, t in zip(nodes, nodes[1:]):
        cells.append((s, t - k) if s < k else (t, s - k))
    return cells


def _potentials(basis, C: np.ndarray, k: int, l: int) -> tuple[np.ndarray, np.ndarray]:
    adj: list[list[tuple[int, int, int]]] = [[] for _ in range(k + l)]
    for (r, c) in basis:
        adj[r].append((k + c, r, c))
        adj[k + c].append((r, r, c))
    pot = np.zeros(k + l)
    seen = [False] * (k + l)
    seen[0] = True
    stack = [0]
    while stack:
        z = stack.pop()
        for y, r, c in adj[z]:
            if not seen[y]:
                seen[y] = True
                # u_r + v_c = C[r, c]
                pot[y] = C[r, c] - pot[z]
                stack.append(y)
    return pot[:k], pot[k:]


def solve_transport(
    a: np.ndarray, b: np.ndarray, C: np.ndarray, max_pivots: int | None = None
) -> tuple[float, list[tuple[int, int, float]]]:
    """Exact min-cost transport between supplies ``a`` and demands ``b``.

    ``a`` and ``b`` must have equal totals. Returns ``(cost, flows)`` with
    flows as ``(row, col, mass)`` over positive-mass cells, ordered by cell.
    """
    k, l = len(a), len(b)
    if k == 0 or l == 0:
        return 0.0, []
    if k == 1:
        flows = [(0, j, float(b[j])) for j in range(l) if b[j] > 0]
        return math.fsum(q * C[i, j] for i, j, q in flows), flows
    if l == 1:
        flows = [(i, 0, float(a[i])) for i in range(k) if a[i] > 0]
        return math.fsum(q * C[i, j] for i, j, q in flows), flows

    basis = _initial_tree(a, b, C)
    tol = 1e-12 * max(1.0, float(np.abs(C).max()))
    limit = max_pivots if max_pivots is not None else 50 * (k + l) * (k + l) + 1000
    degenerate_run = 0
    bland = False
    for _ in range(limit):
        u, v = _potentials(basis, C, k, l)
        R = C - u[:, None] - v[None, :]
        if bland:
            neg = np.flatnonzero(R.ravel() < -tol)
            if neg.size == 0:
                break
            f = int(neg[0])
        else:
            f = int(np.argmin(R))
            if R.flat[f] >= -tol:
                break
        i, j = divmod(f, l)
        path = _tree_path(basis, k, l, i, j)
        minus = path[0::2]
        plus = path[1::2]
        theta = min(basis[c] for c in minus)
        leaving = min(c for c in minus if basis[c] == theta)
        for c in plus:
            basis[c] += theta
        for c in minus:
            basis[c] -= theta
        del basis[leaving]
        basis[(i, j)] = theta
        if theta == 0.0:
            degenerate_run += 1
            if degenerate_run > k * l:
                bland = True
        else:
            degenerate_run = 0
    else:
        raise ArithmeticError("transport simplex exceeded its pivot budget")

    flows = sorted((r, c, float(q)) for (r, c), q in basis.items() if q > 0)
    cost = math.fsum(q * C[r, c] for r, c, q in flows)
    return cost, flows


def wasserstein(dist: Any, mu1: Measure, mu2: Measure) -> tuple[float, TransportPlan]:
    """Exact W1 between ``mu1`` and ``mu2`` under ground distance ``dist``.

    ``dist`` is indexable as ``dist[u][v]`` (nested mapping or dense array
    over node ids) or a callable ``dist(u, v)``. Mass shared by both
    measures stays in place; only the signed difference is transported,
    which is exact for metric ground costs.
    """
    _check_marginals(mu1, mu2)
    nodes = sorted(set(mu1.support) | set(mu2.support))
    src, snk, a, b = [], [], [], []
    stay = []
    for x in nodes:
        p, q = mu1[x], mu2[x]
        common = min(p, q)
        if common > 0:
            stay.append((x, x, common))
        if p > q:
            src.append(x)
            a.append(p - q)
        elif q > p:
            snk.append(x)
            b.append(q - p)
    if not src or not snk:
        return 0.0, TransportPlan(stay, 0.0)
    C = _cost_matrix(dist, src, snk)
    if not np.all(np.isfinite(C)):
        raise DisconnectedSupportError("some support nodes are mutually unreachable")
    cost, flows = solve_transport(np.array(a), np.array(b), C)
    moved = [(src[i], snk[j], q) for i, j, q in flows]
    plan = TransportPlan(sorted(stay + moved), cost)
    return cost, plan


# -- independent oracle ---------------------------------------------------


def wasserstein_oracle(dist: Any, mu1: Measure, mu2: Measure) -> float:
    """W1 by successive shortest augmenting paths on the full bipartite network.

    No mass cancellation, no simplex; Bellman-Ford on the residual graph.
    Intended as a cross-check only.
    """
    _check_marginals(mu1, mu2)
    left = sorted(mu1.support)
    right = sorted(mu2.support)
    C = _cost_matrix(dist, left, right)
    if not np.all(np.isfinite(C)):
        raise DisconnectedSupportError("some support nodes are mutually unreachable")
    k, l = len(left), len(right)
    s, t = k + l, k + l + 1
    n = k + l + 2
    # arc: [to, cap, cost, rev_index]
    graph: list[list[list]] = [[] for _ in range(n)]

    def arc(x, y, cap, cost):
        graph[x].append([y, cap, cost, len(graph[y])])
        graph[y].append([x, 0.0, -cost, len(graph[x]) - 1])

    for i, x in enumerate(left):
        arc(s, i, mu1[x], 0.0)
    for j, y in enumerate(right):
        arc(k + j, t, mu2[y], 0.0)
    for i in range(k):
        for j in range(l):
            arc(i, k + j, math.inf, float(C[i, j]))

    eps = 1e-15
    total = 0.0
    target = min(mu1.total, mu2.total)
    while total < target - 1e-13:
        dist_ = [math.inf] * n
        prev: list[tuple[int, int] | None] = [None] * n
        dist_[s] = 0.0
        for _ in range(n - 1):
            changed = False
            for x in range(n):
                if dist_[x] == math.inf:
                    continue
                for idx, (y, cap, cost, _) in enumerate(graph[x]):
                    if cap > eps and dist_[x] + cost < dist_[y] - 1e-15:
                        dist_[y] = dist_[x] + cost
                        prev[y] = (x, idx)
                        changed = True
            if not changed:
                break
        if dist_[t] == math.inf:
            break
        push = math.inf
        y = t
        while y != s:
            x, idx = prev[y]
            push = min(push, graph[x][idx][1])
            y = x
        y = t
        while y != s:
            x, idx = prev[y]
            a = graph[x][idx]
            a[1] -= push
            graph[y][a[3]][1] += push
            y = x
        total += push

    cost = 0.0
    for i in range(k):
        for y, cap, c, rev in graph[i]:
            if k <= y < k + l:
                cost += graph[y][rev][1] * c
    return cost
