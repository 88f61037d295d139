"""Print the worked toy examples: metric vectors, one-step flows, toy cores."""

import argparse

from riccicore.core import CoreConfig, detect_core
from riccicore.curvature import LinLuYau, Ollivier, curvature_field
from riccicore.flow import FlowConfig, iteration_budget, run_flow
from riccicore.metrics import evaluate_core
from riccicore.toy import NAMED, complete, path, seven_node_example


def show_metrics():
    g = seven_node_example()
    for names in (["x1", "x2", "x3"], ["x3", "x4", "x5", "x6", "x7"]):
        rep = evaluate_core(g, [g.node(x) for x in names])
        print(f"core {{{','.join(names)}}}: r_d={rep.r_d:.6f} r_s={rep.r_s:.6f} xi={rep.xi}")


def show_flows(iterations: int):
    cfg = FlowConfig(variant="rho", s=0.1, curvature=Ollivier(0.1), iterations=iterations)
    for name in ("triangle_spokes", "two_triangles", "star6", "triangle_fan"):
        g = NAMED[name]()
        traj = run_flow(g, cfg)
        print(f"{name} after {iterations} step(s):")
        for e, u, v, _ in g.edges():
            print(f"  {g.label(u)}-{g.label(v)}  {traj.final_weights[e]:.6f}")


def show_cores():
    setups = {
        "triangle_spokes": CoreConfig(iterations=1, tau=0.5, alpha=0.1),
        "two_triangles": CoreConfig(iterations=5, tau=1 / 7, alpha=0.1),
        "star6": CoreConfig(iterations=1, tau=1.0, alpha=0.1),
        "triangle_fan": CoreConfig(iterations=1, tau=0.5, alpha=0.1),
    }
    for name, cfg in setups.items():
        g = NAMED[name]()
        res = detect_core(g, cfg)
        rep = evaluate_core(g, res.core_nodes)
        rs = "invalid" if rep.r_s is None else f"{rep.r_s:.4f}"
        print(f"{name}: core {[g.label(x) for x in res.core_nodes]} r_d={rep.r_d:.4f} r_s={rs}")


def show_reference_curvatures():
    for label, g in (("K2", complete(2)), ("K3", complete(3)), ("path a-b-c", path([1.0, 1.0]))):
        lly = curvature_field(g, LinLuYau()).kappa(0)
        oll = curvature_field(g, Ollivier(0.0)).kappa(0)
        print(f"{label}: ollivier(alpha=0)={oll:.6f} lin-lu-yau={lly:.6f}")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--iters", type=int, default=1, help="flow steps for the toy graphs")
    args = ap.parse_args()
    show_metrics()
    show_reference_curvatures()
    show_flows(args.iters)
    show_cores()
    print("iteration budget (eps=1e-7, M=1e7, s=0.01, m=100):", iteration_budget(1e-7, 1e7, 0.01, 100, [1.0] * 100))


if __name__ == "__main__":
    main()
