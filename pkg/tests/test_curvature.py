import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from riccicore.curvature import (
    DistanceTable,
    LinLuYau,
    Ollivier,
    curvature_field,
    lly_curvature,
    ollivier_curvature,
)
from riccicore.errors import CurvatureError, NumericInstabilityError
from riccicore.graph import WeightedGraph
from riccicore.toy import complete, path, star, triangle_fan, triangle_with_spokes
from riccicore.transport import lazy_measure, wasserstein_oracle

from strategies import connected_graphs


def _edge(g, a, b):
    return g.edge_between(g.node(a), g.node(b))


def test_triangle_values():
    g = complete(3)
    assert ollivier_curvature(g, 0, 0.0).kappa == pytest.approx(0.5, abs=1e-12)
    assert lly_curvature(g, 0).kappa == pytest.approx(1.5, abs=1e-6)


def test_single_edge_values():
    g = complete(2)
    assert ollivier_curvature(g, 0, 0.0).kappa == pytest.approx(0.0, abs=1e-12)
    assert lly_curvature(g, 0).kappa == pytest.approx(2.0, abs=1e-6)


def test_path_end_edge_lly_is_one():
    # leaf a on a-b-c: kappa^alpha = 1 - alpha once alpha > 1/3, so the limit is 1
    g = path([1.0, 1.0])
    assert lly_curvature(g, 0).kappa == pytest.approx(1.0, abs=1e-6)
    assert ollivier_curvature(g, 0, 0.2).kappa == pytest.approx(0.4, abs=1e-12)
    for alpha in (0.4, 0.5, 0.9):
        assert ollivier_curvature(g, 0, alpha).kappa == pytest.approx(1.0 - alpha, abs=1e-12)


def test_star_spoke():
    g = star(6)
    c = ollivier_curvature(g, 0, 0.1)
    assert c.kappa == pytest.approx(0.2, abs=1e-12)
    assert c.rho == 1.0


def test_triangle_with_spokes_snapshot():
    g = triangle_with_spokes()
    fld = curvature_field(g, Ollivier(0.1))
    assert fld.kappa(_edge(g, "x1", "x2")) == pytest.approx(0.3, abs=1e-12)
    assert fld.kappa(_edge(g, "x1", "x4")) == pytest.approx(0.2, abs=1e-12)


def test_triangle_fan_snapshot():
    g = triangle_fan(4)
    fld = curvature_field(g, Ollivier(0.1))
    assert fld.kappa(_edge(g, "x1", "x2")) == pytest.approx(0.65, abs=1e-12)
    assert fld.kappa(_edge(g, "x0", "x1")) == pytest.approx(-0.0125, abs=1e-12)


def test_rho_uses_shortest_path_not_weight():
    g = WeightedGraph(3)
    g.add_edge(0, 1, 1.0)
    g.add_edge(1, 2, 1.0)
    e = g.add_edge(0, 2, 5.0)
    assert ollivier_curvature(g, e, 0.5).rho == 2.0


def test_alpha_out_of_range_rejected():
    with pytest.raises(ValueError):
        Ollivier(1.0)
    with pytest.raises(ValueError):
        Ollivier(-0.1)


def test_lly_unstable_raises_with_quotients():
    # a zero tolerance cannot be met by distinct floating quotients
    g = triangle_fan(2)
    kind = LinLuYau(agree_tol=0.0, refinements=1)
    with pytest.raises(NumericInstabilityError) as ei:
        lly_curvature(g, 0, kind=kind)
    assert len(ei.value.quotients) >= 2


def test_field_wraps_errors_with_edge():
    g = triangle_fan(2)
    with pytest.raises(CurvatureError) as ei:
        curvature_field(g, LinLuYau(agree_tol=0.0, refinements=0))
    assert ei.value.edge == 0


@given(connected_graphs(max_n=9), st.floats(0.0, 0.95))
def test_ollivier_bounds(g, alpha):
    # W >= 0 caps kappa at 1, and rho never exceeds the edge weight
    fld = curvature_field(g, Ollivier(alpha))
    for e, c in fld.entries.items():
        assert c.kappa <= 1.0 + 1e-12
        assert c.rho <= g.weight(e) + 1e-12


@given(connected_graphs(max_n=9, unit=True), st.floats(0.0, 0.95))
def test_unit_weight_ollivier_lower_bound(g, alpha):
    # on combinatorial graphs W <= 3 hops, so kappa >= -2
    fld = curvature_field(g, Ollivier(alpha))
    assert all(c.kappa >= -2.0 - 1e-12 for c in fld.entries.values())


@given(connected_graphs(max_n=8, unit=True))
def test_unit_weight_lly_at_most_two(g):
    fld = curvature_field(g, LinLuYau())
    assert all(c.kappa <= 2.0 + 1e-6 for c in fld.entries.values())


@given(connected_graphs(max_n=9), st.floats(0.0, 0.95), st.floats(0.1, 10.0))
def test_scale_invariance(g, alpha, c):
    h = g.copy()
    for e in h.edge_ids():
        h.set_weight(e, c * h.weight(e))
    f1 = curvature_field(g, Ollivier(alpha))
    f2 = curvature_field(h, Ollivier(alpha))
    for e in f1.entries:
        assert f2.kappa(e) == pytest.approx(f1.kappa(e), abs=1e-9)
        assert f2.rho(e) == pytest.approx(c * f1.rho(e), rel=1e-12)


@given(connected_graphs(max_n=9), st.floats(0.0, 0.95))
def test_ollivier_matches_oracle(g, alpha):
    d = DistanceTable(g)
    fld = curvature_field(g, Ollivier(alpha), dist=d)
    for e, c in fld.entries.items():
        x, y = g.endpoints(e)
        w_ref = wasserstein_oracle(d, lazy_measure(g, x, alpha), lazy_measure(g, y, alpha))
        assert c.kappa == pytest.approx(1.0 - w_ref / d(x, y), abs=1e-9)


def test_lly_matches_oracle_quotient():
    rng = np.random.default_rng(11)
    from riccicore.random_graphs import random_connected_graph
    for _ in range(10):
        g = random_connected_graph(rng, int(rng.integers(3, 9)))
        d = DistanceTable(g)
        fld = curvature_field(g, LinLuYau(), dist=d)
        a = 0.9999
        for e, c in fld.entries.items():
            x, y = g.endpoints(e)
            w_ref = wasserstein_oracle(d, lazy_measure(g, x, a), lazy_measure(g, y, a))
            q = (1.0 - w_ref / d(x, y)) / (1.0 - a)
            assert c.kappa == pytest.approx(q, abs=1e-6 * max(1.0, abs(q)))


def test_threads_do_not_change_results(random_graphs):
    for g in random_graphs[:5]:
        a = curvature_field(g, Ollivier(0.3), workers=1)
        b = curvature_field(g, Ollivier(0.3), workers=4)
        assert [(e, c.kappa, c.rho) for e, c in a.entries.items()] == [(e, c.kappa, c.rho) for e, c in b.entries.items()]


def test_determinism(random_graphs):
    g = random_graphs[0]
    a = curvature_field(g, LinLuYau())
    b = curvature_field(g, LinLuYau())
    assert all(math.isclose(a.kappa(e), b.kappa(e), rel_tol=0, abs_tol=0) for e in a.entries)
