"""Round counts of the greedy matching as n grows (lines and sparse G(n, d/n)).

    python3 scripts/rounds_scaling.py --max-exp 6 --trials 50

Columns: family, n, trials, median, mean, max, max_over_log_n,
median_over_log_n.
"""

import argparse

from d2dmatch import WeightDistribution, mc_rounds

from table_io import write_rows


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--min-exp", type=int, default=2)
    ap.add_argument("--max-exp", type=int, default=6)
    ap.add_argument("--trials", type=int, default=50)
    ap.add_argument("--d", type=float, default=0.9, help="mean degree of the G(n, d/n) family")
    ap.add_argument("--dist", default="1:0.5,2:0.5")
    ap.add_argument("--seed", type=int, default=10)
    ap.add_argument("--jobs", type=int, default=None)
    ap.add_argument("--out", default="results/rounds_scaling.csv")
    args = ap.parse_args()

    dist = WeightDistribution.parse(args.dist)
    ns = [10**e for e in range(args.min_exp, args.max_exp + 1)]
    rows = []
    for family, spec in (("line", "line:n=2"), ("gnp", f"gnp:n=2,d={args.d}")):
        for r in mc_rounds(spec, ns, dist, args.trials, args.seed, args.jobs):
            rows.append({"family": family, **r.to_json()})
            print(f"{family} n={r.n}: max {r.max}, max/ln n {r.max_over_log_n:.3f}")
    cols = ["family", "n", "trials", "median", "mean", "max", "max_over_log_n", "median_over_log_n"]
    write_rows(args.out, {"script": "rounds_scaling", **vars(args)}, cols, rows)


if __name__ == "__main__":
    main()
