"""Seeded random connected graphs for property suites and bound checks."""

from __future__ import annotations

import numpy as np

from .graph import WeightedGraph


def random_connected_graph(
    rng: np.random.Generator,
    n: int,
    extra_edge_prob: float = 0.3,
    weight_range: tuple[float, float] = (0.5, 2.0),
    unit: bool = False,
) -> WeightedGraph:
    """Random spanning tree plus independent extra edges."""
    lo, hi = weight_range

    def w():
        return 1.0 if unit else float(rng.uniform(lo, hi))

    g = WeightedGraph(n)
    order = rng.permutation(n)
    for i in range(1, n):
        parent = order[rng.integers(0, i)]
        g.add_edge(int(order[i]), int(parent), w())
    for u in range(n):
        for v in range(u + 1, n):
            if g.edge_between(u, v) is None and rng.random() < extra_edge_prob:
                g.add_edge(u, v, w())
    return g
