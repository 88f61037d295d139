"""Serialisable reports: dataset stats, core exports, comparison rows."""

from __future__ import annotations

import csv
import io
import json
from datetime import datetime, timezone

from .baselines import CentralityScores, centrality, connected_top_k
from .core import CoreConfig, CoreResult
from .graph import WeightedGraph, hop_diameter
from .metrics import MetricsReport, evaluate_core

# Published characteristics of the three benchmark networks (largest component).
EXPECTED_STATS = {
    "cora": {"n": 2485, "m": 5069, "avg_degree": 4.08, "density": 0.002, "diameter": 19},
    "citeseer": {"n": 2120, "m": 3679, "avg_degree": 3.47, "density": 0.002, "diameter": 28},
    "bio-ce-ht": {"n": 2617, "m": 2985, "avg_degree": 2.28, "density": 0.001, "diameter": 20},
}

# Per-dataset flow settings (N iterations, lazy alpha); s=0.1 and tau=0.8 throughout.
DATASET_PARAMS = {
    "cora": {"iterations": 50, "alpha": 0.8},
    "citeseer": {"iterations": 12, "alpha": 0.1},
    "bio-ce-ht": {"iterations": 30, "alpha": 0.8},
}


def dataset_stats(g: WeightedGraph, diameter: bool = True) -> dict:
    n, m = g.n, g.m
    out = {
        "n": n,
        "m": m,
        "avg_degree": 2 * m / n if n else 0.0,
        "density": 2 * m / (n * (n - 1)) if n > 1 else 0.0,
    }
    if diameter:
        out["diameter"] = hop_diameter(g)
    return out


def compare_stats(name: str, stats: dict) -> list[str]:
    """Human-readable mismatches against the published characteristics."""
    ref = EXPECTED_STATS.get(name)
    if ref is None:
        return []
    notes = []
    for key in ("n", "m", "diameter"):
        if key in stats and stats[key] != ref[key]:
            notes.append(f"{key}: got {stats[key]}, published {ref[key]}")
    for key, digits in (("avg_degree", 2), ("density", 3)):
        if key in stats and round(stats[key], digits) != ref[key]:
            notes.append(f"{key}: got {stats[key]:.{digits + 2}f}, published {ref[key]}")
    return notes


def core_export(g: WeightedGraph, result: CoreResult, config: CoreConfig) -> dict:
    lab = g.label
    return {
        "core_nodes": [lab(x) for x in result.core_nodes],
        "core_edges": [[lab(u), lab(v), w] for _, u, v, w in _edges_on(g, result.core_nodes)],
        "S": [lab(x) for x in result.S],
        "I_backfill": [lab(x) for x in result.I_backfill],
        "removed_edges": list(result.removed_edges),
        "config": config.to_dict(),
    }


def _edges_on(g: WeightedGraph, nodes):
    keep = set(nodes)
    return [(e, u, v, w) for e, u, v, w in g.edges() if u in keep and v in keep]


def method_row(method: str, metrics: MetricsReport) -> dict:
    return {"method": method, **metrics.to_dict()}


def baseline_rows(g: WeightedGraph, k: int, methods) -> list[dict]:
    rows = []
    for method in methods:
        sc: CentralityScores = centrality(g, method)
        group = connected_top_k(g, sc, k)
        rows.append(method_row(method, evaluate_core(g, group)))
    return rows


def timestamp() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2) + "\n"


def scores_csv(g: WeightedGraph, scores: CentralityScores) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["label", "score"])
    for x in scores.ranking():
        w.writerow([g.label(x), scores.scores[x]])
    return buf.getvalue()


def format_table(rows: list[dict]) -> str:
    head = f"{'Method':<14}{'#Nodes':>8}{'#Edges':>8}{'r_d':>8}{'r_s':>8}"
    lines = [head, "-" * len(head)]
    for r in rows:
        rs = "invalid" if r["r_s"] is None else f"{r['r_s']:.2f}"
        lines.append(f"{r['method']:<14}{r['core_nodes']:>8}{r['core_edges']:>8}{r['r_d']:>8.2f}{rs:>8}")
    return "\n".join(lines)
