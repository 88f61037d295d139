"""Ollivier and Lin-Lu-Yau edge curvature over a frozen graph snapshot."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Union

import numpy as np
from scipy.sparse.csgraph import dijkstra

from .errors import CurvatureError, NumericInstabilityError
from .graph import WeightedGraph
from .transport import lazy_measure_arrays, solve_transport


@dataclass(frozen=True)
class Ollivier:
    alpha: float = 0.5

    def __post_init__(self):
        if not 0.0 <= self.alpha < 1.0:
            raise ValueError(f"Ollivier curvature needs alpha in [0, 1), got {self.alpha}")

    @property
    def name(self) -> str:
        return "ollivier"


@dataclass(frozen=True)
class LinLuYau:
    alpha1: float = 0.995
    alpha2: float = 0.9999
    agree_tol: float = 1e-6
    refinements: int = 6

    @property
    def name(self) -> str:
        return "lly"


CurvatureKind = Union[Ollivier, LinLuYau]


@dataclass(frozen=True)
class EdgeCurvature:
    edge: int
    kappa: float
    rho: float
    kind: CurvatureKind


@dataclass
class CurvatureField:
    iteration: int
    entries: dict[int, EdgeCurvature] = field(default_factory=dict)

    def kappa(self, e: int) -> float:
        return self.entries[e].kappa

    def rho(self, e: int) -> float:
        return self.entries[e].rho

    @property
    def edge_ids(self) -> list[int]:
        return list(self.entries)

    def kappa_range(self) -> tuple[float, float]:
        if not self.entries:
            return (float("nan"), float("nan"))
        ks = [c.kappa for c in self.entries.values()]
        return min(ks), max(ks)


class DistanceTable:
    """Memoised single-source distance rows for one weight snapshot."""

    def __init__(self, g: WeightedGraph):
        self._csr = g.to_csr()
        self._rows: dict[int, np.ndarray] = {}

    def prefetch(self, sources: Iterable[int]) -> None:
        todo = sorted(set(sources) - self._rows.keys())
        if not todo:
            return
        block = dijkstra(self._csr, directed=False, indices=todo)
        for s, row in zip(todo, block):
            self._rows[s] = row

    def row(self, s: int) -> np.ndarray:
        if s not in self._rows:
            self.prefetch([s])
        return self._rows[s]

    def __call__(self, u: int, v: int) -> float:
        return float(self.row(u)[v])

    def block(self, rows: list[int], cols: list[int]) -> np.ndarray:
        self.prefetch(rows)
        return np.stack([self._rows[r][cols] for r in rows])


def _transport_cost(
    g: WeightedGraph, x: int, y: int, alpha: float, dist: DistanceTable
) -> float:
    nx_, mx = lazy_measure_arrays(g, x, alpha)
    ny_, my = lazy_measure_arrays(g, y, alpha)
    diff: dict[int, float] = {}
    for v, p in zip(nx_, mx):
        diff[v] = diff.get(v, 0.0) + p
    for v, p in zip(ny_, my):
        diff[v] = diff.get(v, 0.0) - p
    src = sorted(v for v, d in diff.items() if d > 0)
    snk = sorted(v for v, d in diff.items() if d < 0)
    if not src or not snk:
        return 0.0
    a = np.array([diff[v] for v in src])
    b = np.array([-diff[v] for v in snk])
    C = dist.block(src, snk)
    cost, _ = solve_transport(a, b, C)
    return cost


def _ollivier(g, e, alpha, dist) -> tuple[float, float]:
    x, y = g.endpoints(e)
    rho = dist(x, y)
    W = _transport_cost(g, x, y, alpha, dist)
    return 1.0 - W / rho, rho


def _lly(g, e, kind: LinLuYau, dist) -> tuple[float, float]:
    x, y = g.endpoints(e)
    rho = dist(x, y)

    def quotient(alpha):
        W = _transport_cost(g, x, y, alpha, dist)
        return (1.0 - W / rho) / (1.0 - alpha)

    a_prev, a_next = kind.alpha1, kind.alpha2
    q_prev, q_next = quotient(a_prev), quotient(a_next)
    seen = [q_prev, q_next]
    for _ in range(kind.refinements + 1):
        if abs(q_next - q_prev) <= kind.agree_tol * max(1.0, abs(q_next)):
            return q_next, rho
        a_prev, a_next = a_next, (a_next + 1.0) / 2.0
        q_prev, q_next = q_next, quotient(a_next)
        seen.append(q_next)
    raise NumericInstabilityError(
        f"edge {e}: lazy-walk quotient did not stabilise near alpha=1", tuple(seen)
    )


def _edge_curvature(g, e, kind, dist) -> EdgeCurvature:
    if isinstance(kind, Ollivier):
        kappa, rho = _ollivier(g, e, kind.alpha, dist)
    else:
        kappa, rho = _lly(g, e, kind, dist)
    return EdgeCurvature(e, kappa, rho, kind)


def ollivier_curvature(
    g: WeightedGraph, e: int, alpha: float, dist: DistanceTable | None = None
) -> EdgeCurvature:
    """Ollivier curvature ``1 - W(mu_x, mu_y) / rho`` on live edge ``e = xy``."""
    if not g.is_live(e):
        raise KeyError(f"edge {e} is not live")
    return _edge_curvature(g, e, Ollivier(alpha), dist or DistanceTable(g))


def lly_curvature(
    g: WeightedGraph, e: int, dist: DistanceTable | None = None, kind: LinLuYau | None = None
) -> EdgeCurvature:
    """Lin-Lu-Yau curvature as the stabilised limit of ``kappa^alpha / (1 - alpha)``."""
    if not g.is_live(e):
        raise KeyError(f"edge {e} is not live")
    return _edge_curvature(g, e, kind or LinLuYau(), dist or DistanceTable(g))


def curvature_field(
    g: WeightedGraph,
    kind: CurvatureKind,
    iteration: int = 0,
    workers: int = 1,
    dist: DistanceTable | None = None,
) -> CurvatureField:
    """Curvature of every live edge against the current weights.

    Edges are independent given the snapshot, so ``workers > 1`` splits them
    over a thread pool; results are merged in edge-id order either way.
    """
    ids = g.edge_ids()
    if dist is None:
        dist = DistanceTable(g)
    dist.prefetch(x for x in range(g.n) if g.degree(x) > 0)

    def run(chunk):
        out = []
        for e in chunk:
            try:
                out.append(_edge_curvature(g, e, kind, dist))
            except Exception as exc:  # annotate with the edge, keep the cause
                raise CurvatureError(e, exc) from exc
        return out

    if workers <= 1 or len(ids) < 2:
        results = run(ids)
    else:
        size = -(-len(ids) // workers)
        chunks = [ids[i:i + size] for i in range(0, len(ids), size)]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = [c for part in pool.map(run, chunks) for c in part]
    return CurvatureField(iteration, {c.edge: c for c in results})
