import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from riccicore.curvature import LinLuYau, Ollivier, curvature_field
from riccicore.errors import ConfigError, StepTooLargeError
from riccicore.flow import (
    TRACE_COLUMNS,
    FlowConfig,
    FlowVariant,
    envelope,
    flow_step,
    iteration_budget,
    run_flow,
    step_size_range,
    theta_surgery,
    trace_rows,
    trajectory_csv,
)
from riccicore.graph import WeightedGraph
from riccicore.toy import path, star, triangle_fan, triangle_with_spokes, two_triangles_bridge

from strategies import connected_graphs


def _w(traj, g, a, b):
    return traj.final_weights[g.edge_between(g.node(a), g.node(b))]


def _cfg(**kw):
    base = dict(variant="rho", s=0.1, curvature=Ollivier(0.1), iterations=1)
    base.update(kw)
    return FlowConfig(**base)


def test_star_one_step():
    g = star(6)
    traj = run_flow(g, _cfg())
    assert all(abs(w - 0.98) <= 1e-9 for w in traj.final_weights.values())


def test_triangle_fan_one_step():
    g = triangle_fan(4)
    traj = run_flow(g, _cfg())
    for _, u, v, _ in g.edges():
        w = traj.final_weights[g.edge_between(u, v)]
        target = 1.00125 if 0 in (u, v) else 0.935
        assert abs(w - target) <= 1e-9


def test_triangle_with_spokes_one_step_ordering():
    g = triangle_with_spokes()
    traj = run_flow(g, _cfg())
    tri = [_w(traj, g, a, b) for a, b in [("x1", "x2"), ("x2", "x3"), ("x1", "x3")]]
    spokes = [_w(traj, g, a, b) for a, b in [("x1", "x4"), ("x2", "x5"), ("x3", "x6")]]
    assert max(tri) - min(tri) <= 1e-12
    assert max(tri) < min(spokes) and max(spokes) < 1.0
    assert tri[0] == pytest.approx(0.97, abs=1e-12)
    assert spokes[0] == pytest.approx(0.98, abs=1e-12)


def test_triangle_with_spokes_five_steps_rounded():
    # the printed two-decimal weights correspond to five updates
    g = triangle_with_spokes()
    traj = run_flow(g, _cfg(iterations=5))
    assert round(_w(traj, g, "x1", "x2"), 2) == 0.87
    assert round(_w(traj, g, "x1", "x4"), 2) == 0.90


def test_two_triangles_bridge_five_steps():
    g = two_triangles_bridge()
    traj = run_flow(g, _cfg(iterations=5))
    bridge = g.edge_between(g.node("x3"), g.node("x4"))
    w = traj.final_weights
    assert w[bridge] > 1.0
    assert all(w[e] < w[bridge] for e in w if e != bridge)
    assert round(w[bridge], 2) == 1.15
    assert round(_w(traj, g, "x1", "x2"), 2) == 0.71
    assert round(_w(traj, g, "x1", "x3"), 2) == 0.81


def test_iteration_budget_exact():
    assert iteration_budget(1e-7, 1e7, 0.01, 100, [1.0] * 100) == (1603, 16)


@pytest.mark.parametrize("args", [(0.0, 1e7, 0.01, 100), (2.0, 1e7, 0.01, 100), (1e-7, 10.0, 0.01, 100), (1e-7, 1e7, 1.0, 100)])
def test_iteration_budget_rejects_bad_input(args):
    eps, thr, s, m = args
    with pytest.raises(ValueError):
        iteration_budget(eps, thr, s, m, [1.0] * m)


@given(st.floats(1e-12, 0.5), st.floats(1e-4, 0.5), st.integers(1, 200))
def test_iteration_budget_is_tight(eps, s, m):
    under, over = iteration_budget(eps, 1e9, s, m, [1.0] * m)
    assert (1 - s) ** under >= eps * (1 - 1e-12)
    assert (1 - s) ** (under + 1) < eps * (1 + 1e-12)
    assert (1 + m * s) ** over * m <= 1e9 * (1 + 1e-12)


def test_step_size_ranges():
    m = 10
    assert step_size_range("rho", Ollivier(0.5), m) == 1.0
    assert step_size_range("rho", LinLuYau(), m) == 0.5
    assert step_size_range("quasi", Ollivier(0.5), m) == 1 / 11
    assert step_size_range("quasi", LinLuYau(), m) == 1 / 22
    assert step_size_range("normalized", Ollivier(0.5), m, 4.0) == 1 / 40
    assert step_size_range("normalized", LinLuYau(), m, 4.0) == 1 / 42
    with pytest.raises(ConfigError):
        step_size_range("normalized", Ollivier(0.5), m)


def test_envelope_rejects_out_of_range_step():
    cfg = _cfg(variant="quasi", s=0.5)
    with pytest.raises(ConfigError):
        envelope(cfg, 10, [1.0] * 10)


def test_positivity_guard():
    # spokes of S6 have kappa 0.2, so s = 6 drives them negative
    g = star(6)
    cfg = _cfg(s=6.0)
    with pytest.raises(StepTooLargeError) as ei:
        run_flow(g, cfg)
    assert ei.value.iteration == 0


def test_flow_step_leaves_graph_untouched():
    g = star(3)
    fld = curvature_field(g, Ollivier(0.1))
    before = g.weights()
    flow_step(g, fld, _cfg())
    assert g.weights() == before


def test_surgery_threshold():
    g = WeightedGraph(3)
    g.add_edge(0, 1, 1.0)
    g.add_edge(1, 2, 1.0)
    heavy = g.add_edge(0, 2, 5.0)
    h = g.copy()
    assert theta_surgery(h, 3.0) == [] and h.m == 3
    assert theta_surgery(g, 2.0) == [heavy] and g.m == 2


def test_surgery_is_batched():
    # ratios come from the pre-surgery snapshot, so both long chords go together
    g = WeightedGraph(4)
    g.add_edge(0, 1, 1.0)
    g.add_edge(1, 2, 1.0)
    a = g.add_edge(0, 2, 10.0)
    g.add_edge(2, 3, 1.0)
    b = g.add_edge(1, 3, 10.0)
    assert theta_surgery(g, 3.0) == [a, b]


def test_theta_must_exceed_one():
    with pytest.raises(ConfigError):
        _cfg(theta=1.0)


def test_zero_iterations_is_identity():
    g = triangle_fan(2)
    traj = run_flow(g, _cfg(iterations=0))
    assert traj.final_weights == g.weights() and traj.iterations == 0


@given(connected_graphs(min_n=3, max_n=9), st.sampled_from(["ollivier", "lly"]), st.integers(0, 10**6))
def test_normalized_flow_conserves_total(g, cname, seed):
    kind = LinLuYau() if cname == "lly" else Ollivier(float(np.random.default_rng(seed).uniform(0, 0.9)))
    s = 0.5 * step_size_range("normalized", kind, g.m, 4.0)
    traj = run_flow(g, _cfg(variant="normalized", s=s, curvature=kind, iterations=5, theta=4.0))
    for st_ in traj.steps:
        assert abs(st_.total_after_update - st_.total_before) <= 1e-9 * st_.total_before


@given(connected_graphs(min_n=3, max_n=9), st.sampled_from(list(FlowVariant)), st.sampled_from(["ollivier", "lly"]))
def test_envelopes_hold(g, variant, cname):
    kind = LinLuYau() if cname == "lly" else Ollivier(0.3)
    theta = 4.0 if variant.needs_theta else None
    s = 0.5 * step_size_range(variant, kind, g.m, theta)
    traj = run_flow(g, _cfg(variant=variant, s=s, curvature=kind, iterations=10, theta=theta, envelope_check=True))
    assert traj.violations == []


def test_threads_do_not_change_trajectory():
    g = two_triangles_bridge()
    a = run_flow(g, _cfg(iterations=3, workers=1)).final_weights
    b = run_flow(g, _cfg(iterations=3, workers=3)).final_weights
    assert a == b


def test_trace_rows():
    g = star(6)
    traj = run_flow(g, _cfg(keep_fields=True))
    rows = list(trace_rows(g, traj))
    assert len(rows) == 6
    assert all(r[0] == 1 and r[4] == pytest.approx(0.98) for r in rows)
    zero = list(trace_rows(g, run_flow(g, _cfg(iterations=0))))
    assert [r[4] for r in zero] == [1.0] * 6 and all(r[0] == 0 for r in zero)
    text = trajectory_csv(g, traj)
    assert text.splitlines()[0] == ",".join(TRACE_COLUMNS)


def test_trace_marks_removed_edges():
    g = WeightedGraph(3)
    g.add_edge(0, 1, 1.0)
    g.add_edge(1, 2, 1.0)
    g.add_edge(0, 2, 5.0)
    traj = run_flow(g, _cfg(variant="weight", s=0.01, theta=2.0))
    flagged = [r for r in trace_rows(g, traj) if r[-1] == 1]
    assert [r[1] for r in flagged] == [2]
