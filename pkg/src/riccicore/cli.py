"""Command-line front end.

Exit status: 0 success, 1 input error, 2 configuration error,
3 envelope-suite failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from pathlib import Path

from . import report as rep
from .baselines import METHODS, centrality
from .bounds import run_envelope_suite, suite_csv
from .core import CoreConfig, detect_core
from .curvature import LinLuYau, Ollivier, curvature_field
from .errors import ConfigError, GraphParseError
from .flow import FlowConfig, FlowVariant, iteration_budget, run_flow, trajectory_csv
from .graph import WeightedGraph, largest_connected_component, read_edge_list
from .metrics import evaluate_core

log = logging.getLogger("riccicore")

EXIT_OK, EXIT_INPUT, EXIT_CONFIG, EXIT_SUITE = 0, 1, 2, 3

# Fallbacks for every option that may also come from --config.
DEFAULTS = {
    "default_weight": 1.0,
    "unit_weights": False,
    "drop_self_loops": False,
    "no_lcc": False,
    "threads": 1,
    "alpha": 0.1,
    "step": 0.1,
    "iters": 1,
    "remove_frac": 0.8,
    "core_budget": None,
    "baselines": False,
    "timings": False,
    "method": "all",
    "k": None,
    "variant": "rho",
    "curvature": "ollivier",
    "theta": None,
    "no_guard": False,
    "seed": 0,
    "graphs": 50,
    "max_n": 12,
    "eps": 1e-7,
    "threshold": 1e7,
    "s": 0.01,
    "m": 100,
    "w0": 1.0,
}

# detect runs the full pipeline, so it defaults to the core-detection settings
COMMAND_DEFAULTS = {
    "detect": {"alpha": 0.8, "iters": 50},
    "reproduce": {},
}


class InputError(Exception):
    pass


def _resolve(args: argparse.Namespace) -> argparse.Namespace:
    """Fill unset flags from the JSON config file, then from DEFAULTS."""
    cfg = {}
    if getattr(args, "config", None):
        try:
            cfg = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except OSError as exc:
            raise InputError(f"cannot read config {args.config}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config {args.config} is not valid JSON: {exc}") from exc
        cfg = {k.replace("-", "_"): v for k, v in cfg.items()}
    defaults = {**DEFAULTS, **COMMAND_DEFAULTS.get(args.command, {})}
    for key, val in vars(args).items():
        if val is None:
            if key in cfg:
                setattr(args, key, cfg[key])
            elif key in defaults:
                setattr(args, key, defaults[key])
    return args


def _load(args) -> WeightedGraph:
    path = Path(args.input)
    if not path.exists():
        raise InputError(f"input file not found: {path}")
    g = read_edge_list(path, float(args.default_weight), bool(args.drop_self_loops))
    if args.unit_weights:
        for e in g.edge_ids():
            g.set_weight(e, 1.0)
    if not args.no_lcc and g.n:
        g = largest_connected_component(g)
    return g


def _curvature_kind(args):
    if args.curvature == "lly":
        return LinLuYau()
    if args.curvature == "ollivier":
        return Ollivier(float(args.alpha))
    raise ConfigError(f"unknown curvature {args.curvature!r}")


def _write(text: str, out: str | None) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _core_config(args) -> CoreConfig:
    return CoreConfig(
        iterations=int(args.iters),
        tau=float(args.remove_frac),
        s=float(args.step),
        alpha=float(args.alpha),
        core_budget=None if args.core_budget is None else int(args.core_budget),
        workers=int(args.threads),
    )


# -- subcommands ----------------------------------------------------------


def cmd_detect(args) -> int:
    g = _load(args)
    cfg = _core_config(args)
    t0 = time.perf_counter()
    result = detect_core(g, cfg)
    t_flow = time.perf_counter() - t0
    metrics = evaluate_core(g, result.core_nodes) if result.core_nodes else None
    rows = []
    if metrics is not None:
        rows.append(rep.method_row("ricci_flow", metrics))
    if args.baselines and result.core_nodes:
        rows += rep.baseline_rows(g, len(result.core_nodes), METHODS)
    out = {
        "timestamp": rep.timestamp(),
        "command": "detect",
        "input": str(args.input),
        "config": cfg.to_dict(),
        "dataset": rep.dataset_stats(g, diameter=not args.no_diameter),
        "core": rep.core_export(g, result, cfg),
        "metrics": None if metrics is None else metrics.to_dict(),
        "rows": rows,
    }
    if args.timings:
        out["timings"] = {"detect_seconds": t_flow}
    _write(rep.dumps(out), args.output)
    if args.nodes_out:
        Path(args.nodes_out).write_text("".join(f"{g.label(x)}\n" for x in result.core_nodes), encoding="utf-8")
    if args.output not in (None, "-"):
        print(rep.format_table(rows) if rows else "empty core")
    return EXIT_OK


def cmd_baseline(args) -> int:
    g = _load(args)
    k = args.k
    prior = None
    if args.from_report:
        try:
            prior = json.loads(Path(args.from_report).read_text(encoding="utf-8"))
        except OSError as exc:
            raise InputError(f"cannot read report {args.from_report}: {exc}") from exc
        if k is None:
            k = len(prior["core"]["core_nodes"])
    if k is None:
        raise ConfigError("baseline needs --k or --from-report")
    k = int(k)
    if not 0 < k <= g.n:
        raise ConfigError(f"k must lie in [1, {g.n}]")
    methods = METHODS if args.method == "all" else [args.method]
    rows = rep.baseline_rows(g, k, methods)
    if prior is not None:
        prior["rows"] = prior.get("rows", []) + rows
        out = prior
        out["timestamp"] = rep.timestamp()
    else:
        out = {"timestamp": rep.timestamp(), "command": "baseline", "input": str(args.input),
               "config": {"k": k, "methods": list(methods)}, "rows": rows}
    _write(rep.dumps(out), args.output)
    if args.scores_out and len(methods) == 1:
        _write(rep.scores_csv(g, centrality(g, methods[0])), args.scores_out)
    return EXIT_OK


def cmd_metrics(args) -> int:
    g = _load(args)
    try:
        names = [ln.strip() for ln in Path(args.core_nodes).read_text(encoding="utf-8").splitlines() if ln.strip()]
    except OSError as exc:
        raise InputError(f"cannot read core node list: {exc}") from exc
    try:
        core = [g.node(x) for x in names]
    except KeyError as exc:
        raise InputError(f"core node {exc.args[0]!r} not in graph") from exc
    _write(rep.dumps(evaluate_core(g, core).to_dict()), args.output)
    return EXIT_OK


def cmd_flow_trace(args) -> int:
    g = _load(args)
    cfg = FlowConfig(
        variant=FlowVariant(args.variant),
        s=float(args.step),
        curvature=_curvature_kind(args),
        iterations=int(args.iters),
        theta=None if args.theta is None else float(args.theta),
        positivity_guard=not args.no_guard,
        workers=int(args.threads),
        keep_fields=True,
    )
    traj = run_flow(g, cfg)
    final = curvature_field(traj.graph, cfg.curvature, traj.iterations) if traj.graph.m else None
    _write(trajectory_csv(g, traj, final), args.output)
    return EXIT_OK


def cmd_curvature(args) -> int:
    g = _load(args)
    fld = curvature_field(g, _curvature_kind(args), workers=int(args.threads))
    lines = ["edge_id,u_label,v_label,weight,kappa,rho\n"]
    for e, c in fld.entries.items():
        u, v = g.endpoints(e)
        lines.append(f"{e},{g.label(u)},{g.label(v)},{g.weight(e)!r},{c.kappa!r},{c.rho!r}\n")
    _write("".join(lines), args.output)
    return EXIT_OK


def cmd_verify_bounds(args) -> int:
    if args.budget:
        w0 = [float(args.w0)] * int(args.m)
        under, over = iteration_budget(float(args.eps), float(args.threshold), float(args.s), int(args.m), w0)
        print(f"({under}, {over})")
        return EXIT_OK
    variants = [args.variant] if args.variant_given else None
    curvatures = [args.curvature] if args.curvature_given else None
    runs = run_envelope_suite(
        seed=int(args.seed), graphs=int(args.graphs), iterations=int(args.iters),
        theta=4.0 if args.theta is None else float(args.theta),
        variants=variants, curvatures=curvatures, max_n=int(args.max_n),
    )
    if args.csv:
        _write(suite_csv(runs), args.csv)
    failed = [r for r in runs if not r.ok]
    rows = sorted({(r.variant, r.curvature) for r in runs})
    for v, c in rows:
        sub = [r for r in runs if (r.variant, r.curvature) == (v, c)]
        bad = [r for r in sub if not r.ok]
        print(f"{'PASS' if not bad else 'FAIL'} {v}/{c}: {len(sub)} graphs, {len(bad)} failing")
    for r in failed:
        if r.error:
            print(f"  {r.variant}/{r.curvature} seed={r.seed}: {r.error}")
        for vi in r.violations[:5]:
            print(f"  {r.variant}/{r.curvature} seed={r.seed} iteration={vi.iteration} edge={vi.edge} "
                  f"w={vi.weight:.6g} not in [{vi.lower:.6g}, {vi.upper:.6g}]")
    return EXIT_OK if not failed else EXIT_SUITE


def cmd_reproduce(args) -> int:
    data = Path(args.data_dir)
    names = args.datasets.split(",")
    summary = {"timestamp": rep.timestamp(), "command": "reproduce", "datasets": {}}
    for name in names:
        name = name.strip().lower()
        if name not in rep.DATASET_PARAMS:
            raise ConfigError(f"unknown dataset {name!r}; expected one of {sorted(rep.DATASET_PARAMS)}")
        path = _find_dataset(data, name)
        if path is None:
            raise InputError(f"no edge list for {name} under {data} (tried {name}.edges / {name}.txt / {name}.cites)")
        g = read_edge_list(path, 1.0, drop_self_loops=True)
        for e in g.edge_ids():
            g.set_weight(e, 1.0)
        g = largest_connected_component(g)
        stats = rep.dataset_stats(g)
        notes = rep.compare_stats(name, stats)
        params = rep.DATASET_PARAMS[name]
        cfg = CoreConfig(iterations=params["iterations"], alpha=params["alpha"], s=0.1, tau=0.8,
                         workers=int(args.threads))
        if args.quick:
            cfg.iterations = min(cfg.iterations, 2)
        result = detect_core(g, cfg)
        rows = [rep.method_row("ricci_flow", evaluate_core(g, result.core_nodes))]
        rows += rep.baseline_rows(g, len(result.core_nodes), METHODS)
        summary["datasets"][name] = {"file": str(path), "stats": stats, "mismatches": notes,
                                     "config": cfg.to_dict(), "rows": rows}
        print(f"== {name}: n={stats['n']} m={stats['m']} avg_deg={stats['avg_degree']:.2f} "
              f"density={stats['density']:.4f} diameter={stats['diameter']}")
        for note in notes:
            print(f"   mismatch {note}")
        print(rep.format_table(rows))
    if args.output:
        _write(rep.dumps(summary), args.output)
    return EXIT_OK


def _find_dataset(data: Path, name: str) -> Path | None:
    stems = {name, name.replace("-", "_"), name.upper(), "bio-CE-HT" if name == "bio-ce-ht" else name}
    for stem in stems:
        for ext in (".edges", ".txt", ".cites", ".edgelist"):
            p = data / f"{stem}{ext}"
            if p.exists():
                return p
    return None


# -- parser ---------------------------------------------------------------


def _input_opts(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", "-i", required=True, help="edge list: 'u v [w]' per line")
    p.add_argument("--config", help="JSON file mirroring the flags; flags take precedence")
    p.add_argument("--default-weight", type=float, default=None)
    p.add_argument("--unit-weights", action="store_const", const=True, default=None,
                   help="ignore weights in the file and use 1 everywhere")
    p.add_argument("--drop-self-loops", action="store_const", const=True, default=None)
    p.add_argument("--no-lcc", action="store_const", const=True, default=None,
                   help="keep the whole graph instead of its largest component")
    p.add_argument("--threads", type=int, default=None, help="worker cap; results do not depend on it")
    p.add_argument("--output", "-o", default=None)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="riccicore", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("detect", help="core detection via Ricci flow")
    _input_opts(p)
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--step", type=float, default=None)
    p.add_argument("--iters", type=int, default=None)
    p.add_argument("--remove-frac", type=float, default=None, help="fraction in [0,1] of heaviest edges cut")
    p.add_argument("--core-budget", type=int, default=None, help="defaults to floor(n/2)")
    p.add_argument("--baselines", action="store_const", const=True, default=None,
                   help="add size-matched centrality rows")
    p.add_argument("--nodes-out", default=None, help="write core labels, one per line")
    p.add_argument("--timings", action="store_const", const=True, default=None)
    p.add_argument("--no-diameter", action="store_true")
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("baseline", help="size-matched centrality groups")
    _input_opts(p)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--from-report", default=None, help="take k from a detect report and append rows")
    p.add_argument("--method", choices=("all",) + METHODS, default=None)
    p.add_argument("--scores-out", default=None, help="CSV of (label, score) for a single method")
    p.set_defaults(func=cmd_baseline)

    p = sub.add_parser("metrics", help="r_d / r_s for a given core")
    _input_opts(p)
    p.add_argument("--core-nodes", required=True, help="file with one node label per line")
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("flow-trace", help="per-iteration trajectory CSV")
    _input_opts(p)
    p.add_argument("--variant", choices=[v.value for v in FlowVariant], default=None)
    p.add_argument("--curvature", choices=("ollivier", "lly"), default=None)
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--step", type=float, default=None)
    p.add_argument("--iters", type=int, default=None)
    p.add_argument("--theta", type=float, default=None)
    p.add_argument("--no-guard", action="store_const", const=True, default=None)
    p.set_defaults(func=cmd_flow_trace)

    p = sub.add_parser("curvature", help="per-edge curvature CSV")
    _input_opts(p)
    p.add_argument("--curvature", choices=("ollivier", "lly"), default=None)
    p.add_argument("--alpha", type=float, default=None)
    p.set_defaults(func=cmd_curvature)

    p = sub.add_parser("verify-bounds", help="randomised weight-envelope suite")
    p.add_argument("--config", default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--graphs", type=int, default=None)
    p.add_argument("--iters", type=int, default=None)
    p.add_argument("--max-n", type=int, default=None)
    p.add_argument("--variant", choices=[v.value for v in FlowVariant], default=None)
    p.add_argument("--curvature", choices=("ollivier", "lly"), default=None)
    p.add_argument("--theta", type=float, default=None)
    p.add_argument("--csv", default=None, help="per-run slack table")
    p.add_argument("--budget", action="store_true", help="print the iteration budget instead")
    p.add_argument("--eps", type=float, default=None)
    p.add_argument("--threshold", type=float, default=None)
    p.add_argument("--s", type=float, default=None)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--w0", type=float, default=None)
    p.set_defaults(func=cmd_verify_bounds)

    p = sub.add_parser("reproduce", help="dataset statistics and comparison tables")
    p.add_argument("--config", default=None)
    p.add_argument("--data-dir", default="data")
    p.add_argument("--datasets", default="cora,citeseer,bio-ce-ht")
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--quick", action="store_true", help="cap flow iterations at 2 (smoke run)")
    p.add_argument("--output", "-o", default=None)
    p.set_defaults(func=cmd_reproduce)
    return ap


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    if args.command == "verify-bounds":
        args.variant_given = args.variant is not None
        args.curvature_given = args.curvature is not None
    try:
        _resolve(args)
        if args.command == "verify-bounds" and args.config:
            args.variant_given = args.variant_given or "variant" in json.loads(Path(args.config).read_text())
            args.curvature_given = args.curvature_given or "curvature" in json.loads(Path(args.config).read_text())
        return args.func(args)
    except (InputError, GraphParseError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ConfigError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
