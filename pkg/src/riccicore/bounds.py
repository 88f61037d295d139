"""Randomised check that flow weights stay inside their envelopes."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .curvature import LinLuYau, Ollivier
from .flow import FlowConfig, FlowVariant, run_flow, step_size_range
from .random_graphs import random_connected_graph

CURVATURES = ("ollivier", "lly")


@dataclass
class SuiteRun:
    variant: str
    curvature: str
    graph_index: int
    seed: int
    n: int
    m: int
    alpha: float | None
    s: float
    theta: float | None
    iterations: int
    min_lower_slack: float
    min_upper_slack: float
    max_sum_drift: float  # relative change of total weight across an update, pre-surgery
    violations: list = field(default_factory=list)
    error: str | None = None

    @property
    def ok(self) -> bool:
        return not self.violations and self.error is None


def suite_rows(variants=None, curvatures=None) -> list[tuple[FlowVariant, str]]:
    vs = [FlowVariant(v) for v in variants] if variants else list(FlowVariant)
    cs = list(curvatures) if curvatures else list(CURVATURES)
    return [(v, c) for v in vs for c in cs]


def run_envelope_suite(
    seed: int = 0,
    graphs: int = 50,
    iterations: int = 30,
    theta: float = 4.0,
    variants=None,
    curvatures=None,
    max_n: int = 12,
    step_fraction: float = 0.5,
) -> list[SuiteRun]:
    """One run per (variant, curvature, graph).

    Each graph is drawn from its own seed so a failing run can be replayed
    in isolation. Weights are uniform in [0.5, 2]; the step is
    ``step_fraction`` times the admissible bound.
    """
    runs = []
    for r, (variant, cname) in enumerate(suite_rows(variants, curvatures)):
        for gi in range(graphs):
            run_seed = seed * 1_000_003 + r * 10_007 + gi
            rng = np.random.default_rng(run_seed)
            n = int(rng.integers(3, max_n + 1))
            g = random_connected_graph(rng, n, float(rng.uniform(0.1, 0.6)))
            if cname == "lly":
                kind, alpha = LinLuYau(), None
            else:
                alpha = float(rng.uniform(0.0, 0.9))
                kind = Ollivier(alpha)
            th = theta if variant.needs_theta else None
            s = step_fraction * step_size_range(variant, kind, g.m, th)
            cfg = FlowConfig(variant=variant, s=s, curvature=kind, iterations=iterations,
                             theta=th, envelope_check=True, positivity_guard=True)
            run = SuiteRun(variant.value, cname, gi, run_seed, g.n, g.m, alpha, s, th,
                           iterations, math.inf, math.inf, 0.0)
            try:
                traj = run_flow(g, cfg, record_weights=False)
            except Exception as exc:
                run.error = f"{type(exc).__name__}: {exc}"
                runs.append(run)
                continue
            for st in traj.steps:
                run.min_lower_slack = min(run.min_lower_slack, st.min_lower_slack)
                run.min_upper_slack = min(run.min_upper_slack, st.min_upper_slack)
                if st.total_before > 0:
                    drift = abs(st.total_after_update - st.total_before) / st.total_before
                    run.max_sum_drift = max(run.max_sum_drift, drift)
                run.violations.extend(st.violations)
            runs.append(run)
    return runs


def suite_csv(runs: list[SuiteRun]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["variant", "curvature", "graph", "seed", "n", "m", "alpha", "s", "theta",
                "min_lower_slack", "min_upper_slack", "max_sum_drift", "violations", "error"])
    for r in runs:
        w.writerow([r.variant, r.curvature, r.graph_index, r.seed, r.n, r.m,
                    "" if r.alpha is None else r.alpha, r.s, "" if r.theta is None else r.theta,
                    r.min_lower_slack, r.min_upper_slack, r.max_sum_drift, len(r.violations),
                    r.error or ""])
    return buf.getvalue()
