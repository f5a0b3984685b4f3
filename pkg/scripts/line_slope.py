"""Line recurrence and slope against simulation.

    python3 scripts/line_slope.py --edges 100000 --seeds 20

Columns: t, a (expected greedy welfare on t edges), a_exact, and the
simulated mean welfare per edge on long lines in the summary line.
"""

import argparse

import numpy as np

from d2dmatch import WeightDistribution, assign_weights, gen_line, greedy_match
from d2dmatch.analytics import linear_recurrence, linear_slope
from d2dmatch.graph import derive_seed

from table_io import write_rows


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--dist", default="1:0.5,2:0.5")
    ap.add_argument("--t-max", type=int, default=30)
    ap.add_argument("--edges", type=int, default=10**5)
    ap.add_argument("--seeds", type=int, default=20)
    ap.add_argument("--seed", type=int, default=3)
    ap.add_argument("--out", default="results/line_recurrence.csv")
    args = ap.parse_args()

    dist = WeightDistribution.parse(args.dist).exact()
    table = linear_recurrence(dist, args.t_max)
    rows = [{"t": t, "a": float(a), "a_exact": str(a)} for t, a in enumerate(table.a)]
    write_rows(args.out, {"script": "line_slope", **vars(args)}, ["t", "a", "a_exact"], rows)
    slope = linear_slope(dist)
    base = gen_line(args.edges + 1)
    per_edge = [greedy_match(assign_weights(base, dist, derive_seed(args.seed, s))).welfare / args.edges
                for s in range(args.seeds)]
    print(f"slope {slope} = {float(slope):.6f}; simulated {np.mean(per_edge):.6f} "
          f"+- {np.std(per_edge, ddof=1) / np.sqrt(len(per_edge)):.6f}")


if __name__ == "__main__":
    main()
