"""Run the randomised weight-envelope suite and write per-run slacks."""

import argparse
import sys
import time

from riccicore.bounds import run_envelope_suite, suite_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--graphs", type=int, default=50)
    ap.add_argument("--iters", type=int, default=30)
    ap.add_argument("--theta", type=float, default=4.0)
    ap.add_argument("--max-n", type=int, default=12)
    ap.add_argument("--csv", default="envelope_suite.csv")
    args = ap.parse_args()

    t0 = time.perf_counter()
    runs = run_envelope_suite(args.seed, args.graphs, args.iters, args.theta, max_n=args.max_n)
    with open(args.csv, "w", encoding="utf-8") as fh:
        fh.write(suite_csv(runs))

    keys = sorted({(r.variant, r.curvature) for r in runs})
    print(f"{'variant':<12}{'curv':<10}{'runs':>6}{'bad':>6}{'min lo slack':>15}{'min hi slack':>15}{'max drift':>12}")
    for v, c in keys:
        sub = [r for r in runs if (r.variant, r.curvature) == (v, c)]
        bad = sum(not r.ok for r in sub)
        lo = min(r.min_lower_slack for r in sub)
        hi = min(r.min_upper_slack for r in sub)
        drift = max(r.max_sum_drift for r in sub)
        print(f"{v:<12}{c:<10}{len(sub):>6}{bad:>6}{lo:>15.3e}{hi:>15.3e}{drift:>12.1e}")
    print(f"{time.perf_counter() - t0:.1f}s, slacks in {args.csv}")
    sys.exit(0 if all(r.ok for r in runs) else 3)


if __name__ == "__main__":
    main()
