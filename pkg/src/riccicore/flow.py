"""Discrete Ricci-curvature flows, theta-surgery and weight envelopes.

Five update rules are supported, all applied simultaneously to every live
edge from one curvature snapshot:

    rho         w <- w - s*k*rho
    quasi       w <- w + s*(-k + sum(k*rho)/sum(w))*rho
    weight      w <- w - s*k*w
    normalized  w <- w + s*(-k + sum(k*w)/sum(w))*w
    ni          w <- rho - s*k*rho
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .curvature import CurvatureField, CurvatureKind, DistanceTable, LinLuYau, Ollivier, curvature_field
from .errors import ConfigError, EmptyGraphError, StepTooLargeError
from .graph import WeightedGraph

ENVELOPE_RTOL = 1e-9


class FlowVariant(str, Enum):
    RHO_DRIVEN = "rho"
    QUASI_NORMALIZED = "quasi"
    WEIGHT_DRIVEN = "weight"
    NORMALIZED = "normalized"
    NI_RESET = "ni"

    @property
    def needs_theta(self) -> bool:
        return self in (FlowVariant.WEIGHT_DRIVEN, FlowVariant.NORMALIZED, FlowVariant.NI_RESET)


@dataclass
class FlowConfig:
    variant: FlowVariant = FlowVariant.RHO_DRIVEN
    s: float = 0.1
    curvature: CurvatureKind = field(default_factory=lambda: Ollivier(0.1))
    iterations: int = 1
    theta: float | None = None
    envelope_check: bool = False
    positivity_guard: bool = True
    workers: int = 1
    keep_fields: bool = False

    def __post_init__(self):
        self.variant = FlowVariant(self.variant)
        if not self.s > 0:
            raise ConfigError(f"step size must be positive, got {self.s}")
        if self.iterations < 0:
            raise ConfigError(f"iterations must be non-negative, got {self.iterations}")
        if self.theta is not None and not self.theta > 1:
            raise ConfigError(f"theta must exceed 1, got {self.theta}")


def _is_lly(kind) -> bool:
    return isinstance(kind, LinLuYau)


def step_size_range(variant: FlowVariant, curvature: CurvatureKind, m: int, theta: float | None = None) -> float:
    """Upper end of the open interval ``(0, bound)`` of admissible step sizes."""
    variant = FlowVariant(variant)
    if m < 1:
        raise EmptyGraphError("step size range needs at least one edge")
    lly = _is_lly(curvature)
    if variant is FlowVariant.QUASI_NORMALIZED:
        return 1.0 / (2 * m + 2) if lly else 1.0 / (m + 1)
    if variant is FlowVariant.NORMALIZED:
        if theta is None:
            raise ConfigError("normalized flow bound requires theta")
        return 1.0 / (m * theta + 2) if lly else 1.0 / (m * theta)
    return 0.5 if lly else 1.0


# -- single step --------------------------------------------------------


def flow_step(g: WeightedGraph, fld: CurvatureField, config: FlowConfig) -> dict[int, float]:
    """New weights for every live edge; ``g`` is not modified."""
    ids = g.edge_ids()
    if set(ids) != set(fld.entries):
        raise ValueError("curvature field does not match the graph's live edges")
    if not ids:
        return {}
    w = np.array([g.weight(e) for e in ids])
    k = np.array([fld.kappa(e) for e in ids])
    rho = np.array([fld.rho(e) for e in ids])
    s = config.s
    v = config.variant
    if v is FlowVariant.RHO_DRIVEN:
        new = w - s * k * rho
    elif v is FlowVariant.QUASI_NORMALIZED:
        mean_k = math.fsum(k * rho) / math.fsum(w)
        new = w + s * (-k + mean_k) * rho
    elif v is FlowVariant.WEIGHT_DRIVEN:
        new = w - s * k * w
    elif v is FlowVariant.NORMALIZED:
        mean_k = math.fsum(k * w) / math.fsum(w)
        new = w + s * (-k + mean_k) * w
    else:
        new = rho - s * k * rho
    out = {e: float(x) for e, x in zip(ids, new)}
    if config.positivity_guard:
        for e, x in out.items():
            if not x > 0:
                raise StepTooLargeError(e, x, fld.iteration)
    return out


def theta_surgery(g: WeightedGraph, theta: float, dist: DistanceTable | None = None) -> list[int]:
    """Remove, in one batch, every live edge with ``w / rho > theta``.

    Ratios are read from the pre-surgery snapshot. Returns removed ids.
    """
    if not theta > 1:
        raise ConfigError(f"theta must exceed 1, got {theta}")
    dist = dist or DistanceTable(g)
    doomed = []
    for e, u, v, w in g.edges():
        if w / dist(u, v) > theta:
            doomed.append(e)
    for e in doomed:
        g.remove_edge(e)
    return doomed


# -- envelopes ----------------------------------------------------------


@dataclass
class BoundEnvelope:
    """Per-iteration weight bounds ``lower_factor**j * w0_e`` and
    ``upper_factor**j * (w0_e or baseline_sum)``."""

    lower_factor: float
    upper_factor: float
    upper_scale: str  # "edge" or "sum"
    baseline_sum: float
    note: str = ""

    def lower(self, j: int, w0e: float) -> float:
        return self.lower_factor ** j * w0e

    def upper(self, j: int, w0e: float) -> float:
        base = w0e if self.upper_scale == "edge" else self.baseline_sum
        return self.upper_factor ** j * base


def envelope(config: FlowConfig, m0: int, w0: dict[int, float] | list[float]) -> BoundEnvelope:
    """Weight envelope guaranteed for ``config`` on a graph with ``m0`` initial edges."""
    v = config.variant
    kind = config.curvature
    theta = config.theta
    if v.needs_theta and theta is None:
        raise ConfigError(f"{v.value} flow envelope requires theta")
    bound = step_size_range(v, kind, m0, theta)
    s = config.s
    if not 0 < s < bound:
        raise ConfigError(f"step size {s} outside (0, {bound}) for {v.value}/{kind.name}")
    total = math.fsum(w0.values() if isinstance(w0, dict) else w0)
    m = m0
    lly = _is_lly(kind)
    note = ""
    if v is FlowVariant.RHO_DRIVEN:
        lo, hi = ((1 - 2 * s), (1 + 2 * m * s)) if lly else ((1 - s), (1 + m * s))
    elif v is FlowVariant.QUASI_NORMALIZED:
        lo, hi = ((1 - 2 * (m + 1) * s), (1 + 2 * (m + 1) * s)) if lly else ((1 - (m + 1) * s), (1 + m * s))
    elif v is FlowVariant.WEIGHT_DRIVEN:
        lo, hi = ((1 - 2 * s), (1 + 2 * m * theta * s)) if lly else ((1 - s), (1 - s + m * theta * s))
    elif v is FlowVariant.NORMALIZED:
        lo, hi = ((1 - (m * theta + 2) * s), 1.0) if lly else ((1 - m * theta * s), 1.0)
    else:
        lo = (1 - 2 * s) / theta if lly else (1 - s) / theta
        hi = (1 + 2 * m * s) if lly else (1 + m * s)
        note = "upper bound scaled by total initial weight, not the per-edge initial weight"
    return BoundEnvelope(lo, hi, "sum", total, note)


def iteration_budget(
    eps0: float, overflow_threshold: float, s: float, m: int, w0: list[float] | dict[int, float]
) -> tuple[int, int]:
    """Iteration counts up to which weights provably stay in ``[eps0, threshold]``.

    Uses the rho-driven Ollivier envelope ``(1-s)^j min w0`` and
    ``(1+ms)^j sum w0`` with exact logarithms.
    """
    ws = list(w0.values() if isinstance(w0, dict) else w0)
    if not ws or m < 1:
        raise ValueError("need at least one edge")
    wmin, total = min(ws), math.fsum(ws)
    if not 0 < eps0 < wmin:
        raise ValueError(f"eps0 must lie in (0, min w0={wmin})")
    if overflow_threshold < total:
        raise ValueError(f"threshold must be at least the total initial weight {total}")
    if not 0 < s < 1:
        raise ValueError("s must lie in (0, 1)")
    under = math.floor(math.log(eps0 / wmin) / math.log1p(-s))
    over = math.floor(math.log(overflow_threshold / total) / math.log1p(m * s))
    return under, over


# -- trajectories -------------------------------------------------------


@dataclass
class EnvelopeViolation:
    iteration: int
    edge: int
    weight: float
    lower: float
    upper: float


@dataclass
class StepRecord:
    iteration: int
    weights: dict[int, float] | None
    kappa_min: float
    kappa_max: float
    removed: list[int] = field(default_factory=list)
    removed_weights: dict[int, float] = field(default_factory=dict)
    violations: list[EnvelopeViolation] = field(default_factory=list)
    baseline_sum: float | None = None
    total_before: float = 0.0
    total_after_update: float = 0.0
    min_lower_slack: float = math.inf
    min_upper_slack: float = math.inf


@dataclass
class FlowTrajectory:
    config: FlowConfig
    initial_weights: dict[int, float]
    steps: list[StepRecord]
    graph: WeightedGraph
    fields: list[CurvatureField] = field(default_factory=list)
    envelope: BoundEnvelope | None = None

    @property
    def iterations(self) -> int:
        return len(self.steps)

    @property
    def final_weights(self) -> dict[int, float]:
        return self.graph.weights()

    @property
    def violations(self) -> list[EnvelopeViolation]:
        return [v for st in self.steps for v in st.violations]

    def removed_edges(self) -> list[int]:
        return [e for st in self.steps for e in st.removed]


def run_flow(g: WeightedGraph, config: FlowConfig, record_weights: bool = True) -> FlowTrajectory:
    """Iterate curvature -> update -> optional surgery -> optional envelope check.

    Works on a copy; the input graph is untouched.
    """
    h = g.copy()
    w0 = h.weights()
    m0 = h.m
    env = None
    if config.envelope_check:
        if m0 == 0:
            raise EmptyGraphError("cannot check envelopes on an edgeless graph")
        env = envelope(config, m0, w0)
    steps: list[StepRecord] = []
    fields: list[CurvatureField] = []
    for j in range(config.iterations):
        if h.m == 0:
            break
        total_before = h.total_weight()
        fld = curvature_field(h, config.curvature, iteration=j, workers=config.workers)
        if config.keep_fields:
            fields.append(fld)
        try:
            new = flow_step(h, fld, config)
        except StepTooLargeError as exc:
            raise StepTooLargeError(exc.edge, exc.weight, j) from exc
        for e, x in new.items():
            if x > 0:
                h.set_weight(e, x)
            else:
                # guard is off: keep the value for the record, drop the edge
                h.remove_edge(e)
        kmin, kmax = fld.kappa_range()
        rec = StepRecord(j + 1, None, kmin, kmax)
        rec.total_before = total_before
        rec.total_after_update = math.fsum(new.values())
        if config.theta is not None:
            pre = h.weights()
            rec.removed = theta_surgery(h, config.theta)
            rec.removed_weights = {e: pre[e] for e in rec.removed}
            if env is not None and rec.removed and config.variant is FlowVariant.NORMALIZED:
                # constant-sum envelope: rebase to the post-surgery total
                env.baseline_sum = h.total_weight()
        if env is not None:
            rec.baseline_sum = env.baseline_sum
            _check_envelope(h, env, w0, j + 1, rec)
        if record_weights:
            rec.weights = h.weights()
        steps.append(rec)
    return FlowTrajectory(config, w0, steps, h, fields, env)


def _check_envelope(h: WeightedGraph, env: BoundEnvelope, w0, j: int, rec: StepRecord) -> None:
    for e, _, _, w in h.edges():
        lo = env.lower(j, w0[e])
        hi = env.upper(j, w0[e])
        rec.min_lower_slack = min(rec.min_lower_slack, w / lo - 1.0)
        rec.min_upper_slack = min(rec.min_upper_slack, 1.0 - w / hi)
        if w < lo * (1 - ENVELOPE_RTOL) or w > hi * (1 + ENVELOPE_RTOL):
            rec.violations.append(EnvelopeViolation(j, e, w, lo, hi))


# -- export -------------------------------------------------------------

TRACE_COLUMNS = ("iteration", "edge_id", "u_label", "v_label", "weight", "kappa", "rho", "removed_flag")


def trace_rows(g0: WeightedGraph, traj: FlowTrajectory, final_field: CurvatureField | None = None):
    """Per-iteration rows for the trajectory CSV.

    Row ``(j, e)`` carries ``w_e`` after ``j`` updates and the curvature of
    snapshot ``j`` (blank when that snapshot's field was not kept). Edges cut
    by surgery after update ``j`` appear once more at ``j`` with the flag set.
    """
    fields = {f.iteration: f for f in traj.fields}
    if final_field is not None:
        fields[traj.iterations] = final_field

    def row(j, e, w, removed=False):
        u, v = g0.endpoints(e)
        f = fields.get(j)
        ent = f.entries.get(e) if f is not None and not removed else None
        return (
            j, e, g0.label(u), g0.label(v), w,
            "" if ent is None else ent.kappa,
            "" if ent is None else ent.rho,
            int(removed),
        )

    if traj.iterations == 0:
        for e, w in sorted(traj.initial_weights.items()):
            yield row(0, e, w)
        return
    for st in traj.steps:
        weights = st.weights if st.weights is not None else {}
        for e in sorted(set(weights) | set(st.removed_weights)):
            if e in st.removed_weights:
                yield row(st.iteration, e, st.removed_weights[e], removed=True)
            else:
                yield row(st.iteration, e, weights[e])


def trajectory_csv(g0: WeightedGraph, traj: FlowTrajectory, final_field: CurvatureField | None = None) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(TRACE_COLUMNS)
    for r in trace_rows(g0, traj, final_field):
        wr.writerow(r)
    return buf.getvalue()
