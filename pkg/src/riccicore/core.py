"""Core-subgraph detection driven by the rho-driven Ollivier flow.

Pipeline: evolve weights, cut the heaviest fraction of edges, keep the
nodes that still have an edge, top up with isolated nodes of highest
original degree until the budget is met, then return the largest
component of the subgraph those nodes induce in the *original* graph.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

from .curvature import Ollivier
from .errors import ConfigError
from .flow import FlowConfig, FlowVariant, run_flow, step_size_range
from .graph import WeightedGraph, connected_components, induced_subgraph


@dataclass
class CoreConfig:
    iterations: int = 50
    tau: float = 0.8
    s: float = 0.1
    alpha: float = 0.8
    core_budget: int | None = None  # defaults to floor(n/2)
    workers: int = 1

    def __post_init__(self):
        if not 0.0 <= self.tau <= 1.0:
            raise ConfigError(f"removal fraction must lie in [0, 1], got {self.tau}")
        if self.iterations < 0:
            raise ConfigError("iterations must be non-negative")
        if not 0.0 <= self.alpha < 1.0:
            raise ConfigError(f"alpha must lie in [0, 1), got {self.alpha}")
        if self.core_budget is not None and self.core_budget < 0:
            raise ConfigError("core budget must be non-negative")

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class CoreResult:
    S: list[int]
    I: list[int]
    I_backfill: list[int]
    C: list[int]
    core: WeightedGraph
    core_nodes: list[int]  # original ids of the core's nodes
    removed_edges: list[int]
    final_weights: dict[int, float] = field(default_factory=dict)

    @property
    def empty(self) -> bool:
        return not self.core_nodes


def detect_core(g: WeightedGraph, config: CoreConfig) -> CoreResult:
    if g.m > 0:
        bound = step_size_range(FlowVariant.RHO_DRIVEN, Ollivier(config.alpha), g.m)
        if not 0 < config.s < bound:
            raise ConfigError(f"step size {config.s} outside (0, {bound})")
    flow_cfg = FlowConfig(
        variant=FlowVariant.RHO_DRIVEN,
        s=config.s,
        curvature=Ollivier(config.alpha),
        iterations=config.iterations,
        theta=None,
        workers=config.workers,
    )
    traj = run_flow(g, flow_cfg, record_weights=False)
    final = traj.final_weights

    ranked = sorted(final, key=lambda e: (-final[e], e))
    n_remove = math.floor(config.tau * len(ranked))
    removed = ranked[:n_remove]
    survivors = ranked[n_remove:]

    touched = set()
    for e in survivors:
        touched.update(g.endpoints(e))
    S = sorted(touched)
    I = [x for x in range(g.n) if x not in touched]

    budget = g.n // 2 if config.core_budget is None else config.core_budget
    by_degree = sorted(I, key=lambda x: (-g.degree(x), x))
    backfill = by_degree[: max(0, budget - len(S))]
    C = sorted(set(S) | set(backfill))

    if not C:
        return CoreResult(S, I, backfill, C, WeightedGraph(), [], removed, final)
    sub, keep = induced_subgraph(g, C)
    comps = connected_components(sub)
    best = max(comps, key=lambda c: (len(c), -min(c)))
    core_nodes = sorted(keep[i] for i in best)
    core, _ = induced_subgraph(g, core_nodes)
    return CoreResult(S, I, backfill, C, core, core_nodes, removed, final)
