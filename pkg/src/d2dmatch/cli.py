"""Command-line entry point ``d2dmatch``.

Subcommands::

    d2dmatch gen grid|line|gnp|tree|geometric ...      write a graph file
    d2dmatch match greedy|exact|bound --graph FILE     match a graph file
    d2dmatch analytic recurrence|slope|grid-bound|fixed-point|pr-curve
    d2dmatch exp ratio|rounds|tree-approx|range-sweep|worst-case

Exit codes: 0 success, 1 invalid input or usage, 2 solver failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import secrets
import sys
from pathlib import Path

import numpy as np

from . import __version__, analytics, experiments
from .errors import SolverError, ValidationError
from .exact import exact_match, per_instance_bound, welfare_upper_bound
from .graph import (UNIFORM_12, WeightDistribution, assign_weights, format_graph, gen_geometric,
                    gen_gnp, gen_grid, gen_line, gen_poisson_tree, load_graph, load_locations,
                    save_graph, uniform_disk_locations)
from .greedy import TiePolicy, greedy_match

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover
    import tomli as tomllib

DEFAULT_DIST = UNIFORM_12.literal()


class UsageError(ValidationError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: {message}")


# ---------------------------------------------------------------------------
# argument types
# ---------------------------------------------------------------------------


def _seed(text: str) -> int:
    try:
        value = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid seed {text!r}") from None
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def _float_list(text: str) -> list[float]:
    """``a,b,c`` or an inclusive range ``start:stop:step``."""
    if isinstance(text, list):
        return [float(x) for x in text]
    text = str(text)
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise argparse.ArgumentTypeError("range must be start:stop:step")
        start, stop, step = (float(x) for x in parts)
        if step <= 0 or stop < start:
            raise argparse.ArgumentTypeError("range needs step > 0 and stop >= start")
        count = int(np.floor((stop - start) / step + 1e-9)) + 1
        return [round(start + i * step, 12) for i in range(count)]
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad number list {text!r}") from None


def _int_list(text) -> list[int]:
    return [int(round(x)) for x in _float_list(text)]


def _dist(text) -> WeightDistribution:
    return WeightDistribution.parse(str(text))


# ---------------------------------------------------------------------------
# output helpers
# ---------------------------------------------------------------------------


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, Path):
        return str(obj)
    return obj


def _dump_json(payload: dict) -> str:
    return json.dumps(_jsonable(payload), sort_keys=True, indent=2) + "\n"


def _dump_csv(config: dict, columns: list[str], rows: list[dict]) -> str:
    buf = io.StringIO()
    buf.write("# config: " + json.dumps(_jsonable(config), sort_keys=True) + "\n")
    writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n", extrasaction="ignore")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: _fmt(row.get(k)) for k in columns})
    return buf.getvalue()


def _fmt(v):
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if v is None:
        return ""
    return v


def _emit(args, text: str) -> None:
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _emit_rows(args, config: dict, columns: list[str], rows: list[dict], extra: dict | None = None):
    if args.format == "csv":
        _emit(args, _dump_csv(config, columns, rows))
    else:
        payload = {"config": config, "columns": columns, "rows": rows}
        if extra:
            payload.update(extra)
        _emit(args, _dump_json(payload))


def _emit_report(args, config: dict, result: dict, columns: list[str] | None = None):
    if args.format == "csv":
        cols = columns or sorted(k for k, v in result.items() if not isinstance(v, (dict, list)))
        _emit(args, _dump_csv(config, cols, [result]))
    else:
        payload = dict(result)
        payload["config"] = config
        _emit(args, _dump_json(payload))


def _resolve_seed(args) -> int:
    if getattr(args, "seed", None) is None:
        args.seed = secrets.randbits(64)
        print(f"seed: {args.seed}", file=sys.stderr)
    return args.seed


def _config(args, **extra) -> dict:
    cfg = {"command": f"{args.cmd} {args.what}", "version": __version__}
    skip = {"cmd", "what", "func", "config", "out", "emit_trials"}
    for k, v in sorted(vars(args).items()):
        if k in skip:
            continue
        if isinstance(v, WeightDistribution):
            v = v.literal()
        cfg[k] = v
    cfg.update(extra)
    return cfg


# ---------------------------------------------------------------------------
# gen
# ---------------------------------------------------------------------------


def cmd_gen(args) -> None:
    what = args.what
    seed = _resolve_seed(args)
    if what == "grid":
        g = gen_grid(args.rows, args.cols)
    elif what == "line":
        g = gen_line(args.n)
    elif what == "gnp":
        if (args.p is None) == (args.d is None):
            raise ValidationError("gen gnp needs exactly one of --p or --d")
        g = gen_gnp(args.n, args.p if args.p is not None else args.d / args.n, seed)
    elif what == "tree":
        g = gen_poisson_tree(args.d, seed, args.cap)
    else:
        if args.locations:
            locs = load_locations(args.locations)
        elif args.disk:
            n, radius = _float_list(args.disk)
            locs = uniform_disk_locations(int(n), radius, seed)
        else:
            raise ValidationError("gen geometric needs --locations FILE or --disk n,R")
        g = gen_geometric(locs, args.L)
    g = assign_weights(g, args.dist, seed)
    # the graph format has no room for metadata: the config goes to stderr
    # and, with --out, to a sidecar FILE.json
    config = _dump_json(_config(args, n=g.n, m=g.m))
    if args.out:
        save_graph(g, args.out)
        Path(args.out + ".json").write_text(config)
    else:
        sys.stdout.write(format_graph(g))
    sys.stderr.write(config)


# ---------------------------------------------------------------------------
# match
# ---------------------------------------------------------------------------


def cmd_match(args) -> None:
    g = load_graph(args.graph)
    if args.what == "greedy":
        res = greedy_match(g, args.tie)
        out = res.to_json(solver="greedy", n=g.n, m=g.m)
    elif args.what == "exact":
        out = exact_match(g).to_json(n=g.n, m=g.m)
    else:
        rep = welfare_upper_bound(g.degrees, args.dist)
        out = {"solver": "bound", "expected_optimum_bound": rep.value,
               "instance_bound": per_instance_bound(g), "n": g.n, "m": g.m}
    _emit_report(args, _config(args), out,
                 ["solver", "welfare", "rounds", "n", "m"] if args.what != "bound" else None)


# ---------------------------------------------------------------------------
# analytic
# ---------------------------------------------------------------------------


def cmd_analytic(args) -> None:
    what = args.what
    if what == "recurrence":
        table = analytics.linear_recurrence(args.dist.exact(), args.t_max)
        rows = [{"t": t, "a": float(a), "a_exact": str(a)} for t, a in enumerate(table.a)]
        _emit_rows(args, _config(args), ["t", "a", "a_exact"], rows)
    elif what == "slope":
        dist = args.dist.exact()
        slope = analytics.linear_slope(dist)
        out = {"slope": float(slope), "slope_exact": str(slope)}
        if dist.K == 2:
            out["closed_form"] = float(analytics.linear_slope_k2(dist))
        _emit_report(args, _config(args), out)
    elif what == "grid-bound":
        rep = analytics.grid_bound_report(args.dist)
        _emit_report(args, _config(args), rep.to_json(),
                     ["upper_coeff", "lower_coeff", "segment_sum", "ratio"])
    elif what == "fixed-point":
        pp = analytics.solve_proposal_probs(args.d, args.dist, args.exponent)
        out = pp.to_json()
        out["root_expected_weight"] = analytics.root_expected_weight(args.d, args.dist, probs=pp)
        out["pr_bound"] = out["root_expected_weight"] / analytics.poisson_half_max(args.d, args.dist)
        _emit_report(args, _config(args), out, ["d", "root_expected_weight", "pr_bound"])
    else:
        ds = _float_list(args.d)
        rows = analytics.pr_curve(ds, args.dist, exponent=args.exponent)
        cols = ["d"] + [f"y_{k + 1}" for k in range(args.dist.K)] + ["root_weight", "bound", "ratio"]
        ratios = [r["ratio"] for r in rows]
        _emit_rows(args, _config(args), cols, rows,
                   {"min_ratio": min(ratios), "argmin_d": ds[int(np.argmin(ratios))]})


# ---------------------------------------------------------------------------
# exp
# ---------------------------------------------------------------------------

RATIO_COLUMNS = ["gen", "mean", "std_error", "trials", "mean_of_ratios", "lower_bound",
                 "top_weight_fraction", "max_rounds"]
ROUNDS_COLUMNS = ["n", "trials", "median", "mean", "max", "max_over_log_n", "median_over_log_n"]
TREE_COLUMNS = ["n", "d", "mean", "std_error", "trials", "analytic", "rel_error", "ci_rel", "abs_error"]
SWEEP_COLUMNS = ["L", "mean", "std_error", "trials", "expected_per_user", "mean_matched_pairs"]


def cmd_exp(args) -> None:
    what = args.what
    if what == "worst-case":
        ratio = experiments.worst_case_demo(args.eps)
        _emit_report(args, _config(args), {"eps": args.eps, "ratio": ratio}, ["eps", "ratio"])
        return
    seed = _resolve_seed(args)
    jobs = args.jobs = experiments.resolve_jobs(args.jobs)
    if what == "ratio":
        res = experiments.mc_ratio(args.gen, args.dist, args.trials, seed, jobs, args.tie,
                                   args.exact_limit)
        row = {"gen": args.gen, "mean": res.value, "std_error": res.std_error,
               "trials": res.trial_count, "mean_of_ratios": res.mean_of_ratios,
               "lower_bound": res.lower_bound, **res.extra}
        extra = {"trials_detail": [r.to_json() for r in res.records]} if args.emit_trials else None
        _emit_rows(args, _config(args), RATIO_COLUMNS, [row], extra)
    elif what == "rounds":
        rows = experiments.mc_rounds(args.gen, _int_list(args.ns), args.dist, args.trials, seed,
                                     jobs, args.tie)
        _emit_rows(args, _config(args), ROUNDS_COLUMNS, [r.to_json() for r in rows])
    elif what == "tree-approx":
        r = experiments.tree_approx_error(args.n, args.d, args.dist, args.trials, seed,
                                          args.ci_target, args.max_trials, jobs=jobs,
                                          tie=args.tie, exponent=args.exponent)
        row = r.to_json()
        row["mean"], row["std_error"] = row.pop("sim_mean"), row.pop("sim_se")
        row.pop("config")
        _emit_rows(args, _config(args), TREE_COLUMNS, [row])
    else:
        if args.locations:
            source = load_locations(args.locations)
        else:
            n, radius = _float_list(args.disk)
            source = (int(n), radius)
        fm = None if args.no_failures else experiments.FailureModel(
            **{k: v for k, v in (("alpha", args.alpha), ("gamma", args.gamma), ("beta", args.beta),
                                 ("interference_radius", args.radius)) if v is not None})
        res = experiments.range_sweep(source, _float_list(args.L), fm, args.dist, args.trials,
                                      seed, jobs)
        rows = [{"L": r.config["L"], "mean": r.value, "std_error": r.std_error,
                 "trials": r.trial_count, **r.extra} for r in res]
        means = [r.value for r in res]
        ses = [r.std_error for r in res]
        summary = {"unimodal": experiments.is_unimodal(means, ses),
                   "non_decreasing": experiments.is_non_decreasing(means, ses),
                   "failure_model": fm.to_json() if fm else None}
        _emit_rows(args, _config(args), SWEEP_COLUMNS, rows, summary)


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _common(p, seed=False, fmt=True, trials=False, jobs=False):
    p.add_argument("--dist", type=_dist, default=_dist(DEFAULT_DIST),
                   help='weight distribution literal "v1:p1,v2:p2,..."')
    p.add_argument("--out", help="write output to this path instead of stdout")
    p.add_argument("--config", help="JSON or TOML file with default flag values")
    if fmt:
        p.add_argument("--format", choices=("json", "csv"), default="json")
    if seed:
        p.add_argument("--seed", type=_seed, default=None,
                       help="unsigned 64-bit seed (generated and printed if omitted)")
    if trials:
        p.add_argument("--trials", type=int, default=100)
    if jobs:
        p.add_argument("--jobs", type=int, default=None, help="worker processes (default: all cores)")


def build_parser() -> tuple[argparse.ArgumentParser, dict]:
    parser = _Parser(prog="d2dmatch", description="Greedy and exact matching laboratory.")
    parser.add_argument("--version", action="version", version=__version__)
    top = parser.add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    leaves: dict[tuple[str, str], argparse.ArgumentParser] = {}

    def leaf(group, cmd, name, func, **common):
        p = group.add_parser(name)
        _common(p, **common)
        p.set_defaults(func=func)
        leaves[(cmd, name)] = p
        return p

    gen = top.add_parser("gen", help="generate a weighted graph file").add_subparsers(
        dest="what", required=True, parser_class=_Parser)
    p = leaf(gen, "gen", "grid", cmd_gen, seed=True, fmt=False)
    p.add_argument("--rows", type=int, required=True)
    p.add_argument("--cols", type=int, required=True)
    p = leaf(gen, "gen", "line", cmd_gen, seed=True, fmt=False)
    p.add_argument("--n", type=int, required=True)
    p = leaf(gen, "gen", "gnp", cmd_gen, seed=True, fmt=False)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=float)
    p.add_argument("--d", type=float)
    p = leaf(gen, "gen", "tree", cmd_gen, seed=True, fmt=False)
    p.add_argument("--d", type=float, required=True)
    p.add_argument("--cap", type=int, default=10**6)
    p = leaf(gen, "gen", "geometric", cmd_gen, seed=True, fmt=False)
    p.add_argument("--locations")
    p.add_argument("--disk", help="n,R for users uniform on a disk of radius R meters")
    p.add_argument("--L", type=float, required=True)

    match = top.add_parser("match", help="match a graph file").add_subparsers(
        dest="what", required=True, parser_class=_Parser)
    for name in ("greedy", "exact", "bound"):
        p = leaf(match, "match", name, cmd_match)
        p.add_argument("--graph", required=True)
        p.add_argument("--tie", choices=[t.value for t in TiePolicy], default="lowest")

    ana = top.add_parser("analytic", help="closed-form and fixed-point results").add_subparsers(
        dest="what", required=True, parser_class=_Parser)
    p = leaf(ana, "analytic", "recurrence", cmd_analytic)
    p.add_argument("--t-max", type=int, default=20)
    leaf(ana, "analytic", "slope", cmd_analytic)
    leaf(ana, "analytic", "grid-bound", cmd_analytic)
    p = leaf(ana, "analytic", "fixed-point", cmd_analytic)
    p.add_argument("--d", type=float, required=True)
    p.add_argument("--exponent", choices=analytics.EXPONENTS, default="printed")
    p = leaf(ana, "analytic", "pr-curve", cmd_analytic)
    p.add_argument("--d", default="0.1:10:0.1", help="list a,b,c or range start:stop:step")
    p.add_argument("--exponent", choices=analytics.EXPONENTS, default="printed")

    exp = top.add_parser("exp", help="Monte Carlo experiments").add_subparsers(
        dest="what", required=True, parser_class=_Parser)
    p = leaf(exp, "exp", "ratio", cmd_exp, seed=True, trials=True, jobs=True)
    p.add_argument("--gen", required=True, help="generator spec, e.g. grid:rows=100,cols=100")
    p.add_argument("--tie", choices=[t.value for t in TiePolicy], default="lowest")
    p.add_argument("--exact-limit", type=int, default=experiments.EXACT_LIMIT)
    p.add_argument("--emit-trials", action="store_true")
    p = leaf(exp, "exp", "rounds", cmd_exp, seed=True, trials=True, jobs=True)
    p.add_argument("--gen", required=True, help="line:n=100 or gnp:n=100,d=0.9")
    p.add_argument("--ns", default="100,1000,10000,100000,1000000")
    p.add_argument("--tie", choices=[t.value for t in TiePolicy], default="lowest")
    p = leaf(exp, "exp", "tree-approx", cmd_exp, seed=True, trials=True, jobs=True)
    p.add_argument("--n", type=int, default=10**4)
    p.add_argument("--d", type=float, required=True)
    p.add_argument("--ci-target", type=float, default=None)
    p.add_argument("--max-trials", type=int, default=20000)
    p.add_argument("--tie", choices=[t.value for t in TiePolicy], default="lowest")
    p.add_argument("--exponent", choices=analytics.EXPONENTS, default="printed")
    p = leaf(exp, "exp", "range-sweep", cmd_exp, seed=True, trials=True, jobs=True)
    p.add_argument("--locations")
    p.add_argument("--disk", default="10000,1000")
    p.add_argument("--L", default="2,4,6,8,10,12,15,20,25,30,40,50,70,100")
    p.add_argument("--no-failures", action="store_true")
    p.add_argument("--alpha", type=float)
    p.add_argument("--gamma", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--radius", type=float, help="interference radius in meters (default: L)")
    p = leaf(exp, "exp", "worst-case", cmd_exp)
    p.add_argument("--eps", type=float, default=0.01)
    return parser, leaves


SCHEMA_DIR = Path(__file__).with_name("schemas")


def schema_for(command: str, what: str) -> str:
    """Name of the schema file that a JSON output of this subcommand follows."""
    if command == "match" and what != "bound":
        return "matching.schema.json"
    if (command, what) in {("analytic", "recurrence"), ("analytic", "pr-curve"), ("exp", "ratio"),
                           ("exp", "rounds"), ("exp", "tree-approx"), ("exp", "range-sweep")}:
        return "rows.schema.json"
    return "report.schema.json"


def _load_config(path: str) -> dict:
    text = Path(path).read_bytes()
    try:
        if path.endswith(".toml"):
            data = tomllib.loads(text.decode())
        else:
            data = json.loads(text)
    except (ValueError, tomllib.TOMLDecodeError) as exc:
        raise ValidationError(f"cannot parse config {path}: {exc}") from None
    if not isinstance(data, dict):
        raise ValidationError("config file must hold a table/object of flag values")
    return data


def _apply_config(leaf: argparse.ArgumentParser, data: dict) -> None:
    known = {a.dest: a for a in leaf._actions}
    defaults = {}
    for key, value in data.items():
        dest = key.replace("-", "_")
        if dest not in known or dest in ("help", "config"):
            raise ValidationError(f"unknown config key {key!r}")
        action = known[dest]
        if action.type is not None and not isinstance(value, (list, dict, bool)):
            value = action.type(str(value))
        elif action.type is not None and isinstance(value, list):
            value = action.type(",".join(str(v) for v in value))
        defaults[dest] = value
        action.required = False
    leaf.set_defaults(**defaults)


def _config_path(argv: list[str]) -> str | None:
    for i, tok in enumerate(argv):
        if tok == "--config" and i + 1 < len(argv):
            return argv[i + 1]
        if tok.startswith("--config="):
            return tok.split("=", 1)[1]
    return None


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        parser, leaves = build_parser()
        # config values become defaults before the real parse, so they can
        # satisfy required flags
        path = _config_path(argv)
        if path is not None and tuple(argv[:2]) in leaves:
            _apply_config(leaves[tuple(argv[:2])], _load_config(path))
        args = parser.parse_args(argv)
        args.func(args)
    except SolverError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValidationError, argparse.ArgumentTypeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
