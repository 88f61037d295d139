"""Small labelled graphs used by the worked examples, tests and CLI demos."""

from __future__ import annotations

from .graph import WeightedGraph


def _build(labels: list[str], pairs: list[tuple[str, str]]) -> WeightedGraph:
    g = WeightedGraph(labels=labels)
    for a, b in pairs:
        g.add_edge(g.node(a), g.node(b), 1.0)
    return g


def seven_node_example() -> WeightedGraph:
    """Path x1..x7 plus chords x1x3 and x3x7."""
    labels = [f"x{i}" for i in range(1, 8)]
    pairs = [(f"x{i}", f"x{i + 1}") for i in range(1, 7)] + [("x1", "x3"), ("x3", "x7")]
    return _build(labels, pairs)


def triangle_with_spokes() -> WeightedGraph:
    """Triangle x1x2x3 with pendant x4, x5, x6 on x1, x2, x3."""
    labels = [f"x{i}" for i in range(1, 7)]
    pairs = [("x1", "x2"), ("x2", "x3"), ("x3", "x1"), ("x1", "x4"), ("x2", "x5"), ("x3", "x6")]
    return _build(labels, pairs)


def two_triangles_bridge() -> WeightedGraph:
    """Triangles x1x2x3 and x4x5x6 joined by the bridge x3x4."""
    labels = [f"x{i}" for i in range(1, 7)]
    pairs = [("x1", "x2"), ("x2", "x3"), ("x3", "x1"),
             ("x4", "x5"), ("x5", "x6"), ("x6", "x4"), ("x3", "x4")]
    return _build(labels, pairs)


def star(leaves: int = 6) -> WeightedGraph:
    """Hub x0 with leaves x1..x{leaves}."""
    labels = [f"x{i}" for i in range(leaves + 1)]
    return _build(labels, [("x0", f"x{i}") for i in range(1, leaves + 1)])


def triangle_fan(blades: int = 4) -> WeightedGraph:
    """Hub x0 with ``blades`` triangles x0 x(2i-1) x(2i)."""
    labels = [f"x{i}" for i in range(2 * blades + 1)]
    pairs = []
    for i in range(1, blades + 1):
        a, b = f"x{2 * i - 1}", f"x{2 * i}"
        pairs += [("x0", a), ("x0", b), (a, b)]
    return _build(labels, pairs)


def complete(n: int) -> WeightedGraph:
    g = WeightedGraph(n)
    for u in range(n):
        for v in range(u + 1, n):
            g.add_edge(u, v)
    return g


def path(weights: list[float]) -> WeightedGraph:
    g = WeightedGraph(len(weights) + 1)
    for i, w in enumerate(weights):
        g.add_edge(i, i + 1, w)
    return g


NAMED = {
    "seven_node": seven_node_example,
    "triangle_spokes": triangle_with_spokes,
    "two_triangles": two_triangles_bridge,
    "star6": star,
    "triangle_fan": triangle_fan,
}
