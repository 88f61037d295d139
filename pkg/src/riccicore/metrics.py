"""Core-quality metrics: cohesiveness ``r_d`` and residual distance stretch ``r_s``.

Both metrics are combinatorial: degrees count neighbours and distances
count hops, whatever the edge weights are.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Iterable

import numpy as np
from scipy.sparse.csgraph import shortest_path

from .graph import WeightedGraph, induced_subgraph


@dataclass
class MetricsReport:
    r_d: float
    r_s: float | None  # None when no residual pair stays connected
    xi: int
    core_nodes: int
    core_edges: int

    @property
    def r_s_valid(self) -> bool:
        return self.r_s is not None

    def to_dict(self) -> dict:
        d = asdict(self)
        d["r_s_valid"] = self.r_s_valid
        return {k: d[k] for k in ("r_d", "r_s", "r_s_valid", "xi", "core_nodes", "core_edges")}


def core_cohesiveness(g: WeightedGraph, core_nodes: Iterable[int]) -> float:
    """Mean over core nodes of (neighbours inside the core) / (neighbours in ``g``)."""
    core = set(core_nodes)
    if not core:
        raise ValueError("core must be nonempty")
    total = 0.0
    for x in sorted(core):
        deg = g.degree(x)
        if deg == 0:
            raise ZeroDivisionError(f"core node {x} has degree 0 in the full graph")
        inside = sum(1 for y in g.neighbors(x) if y in core)
        total += inside / deg
    return total / len(core)


def distance_stretch(g: WeightedGraph, core_nodes: Iterable[int]) -> tuple[float | None, int]:
    """Mean ratio of residual to original hop distance over connected residual pairs.

    Returns ``(r_s, xi)``; ``r_s`` is ``None`` when ``xi == 0``.
    """
    core = set(core_nodes)
    residual = [x for x in range(g.n) if x not in core]
    if len(residual) < 2:
        return None, 0
    full = shortest_path(g.to_csr(unit_weights=True), directed=False, unweighted=True, indices=residual)
    d_g = full[:, residual]
    h, _ = induced_subgraph(g, residual)
    d_star = shortest_path(h.to_csr(unit_weights=True), directed=False, unweighted=True)
    iu = np.triu_indices(len(residual), k=1)
    a = d_star[iu]
    b = d_g[iu]
    ok = np.isfinite(a)
    xi = int(ok.sum())
    if xi == 0:
        return None, 0
    return float(np.sum(a[ok] / b[ok]) / xi), xi


def evaluate_core(g: WeightedGraph, core_nodes: Iterable[int]) -> MetricsReport:
    core = sorted(set(core_nodes))
    sub, _ = induced_subgraph(g, core)
    r_d = core_cohesiveness(g, core) if core else 0.0
    r_s, xi = distance_stretch(g, core)
    return MetricsReport(r_d, r_s, xi, len(core), sub.m)
