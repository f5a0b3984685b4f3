"""Monte Carlo harnesses: performance ratio, round counts, tree approximation
error, Poisson-tree proposal frequencies and the failure-aware range sweep.

Every trial draws its randomness from ``derive_seed(seed, trial)``, and
results are reduced in trial order, so outputs do not depend on ``jobs``.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import partial

import numpy as np
from scipy.spatial import cKDTree

from . import analytics
from .errors import InvalidParameterError
from .exact import exact_match, per_instance_bound, welfare_upper_bound
from .graph import (STREAM_BOOTSTRAP, STREAM_FAILURES, STREAM_TOPOLOGY, LocationSet,
                    WeightDistribution, WeightedGraph, assign_weights, derive_seed,
                    gen_geometric, gen_gnp, gen_grid, gen_line, gen_poisson_forest,
                    gen_poisson_tree, load_locations, make_rng, uniform_disk_locations)
from .greedy import TiePolicy, greedy_match

EXACT_LIMIT = 10**4
BOOTSTRAP_SAMPLES = 1000


# ---------------------------------------------------------------------------
# generator specs
# ---------------------------------------------------------------------------


_KINDS = {
    "grid": ("rows", "cols"),
    "line": ("n",),
    "gnp": ("n",),  # plus p or d
    "tree": ("d",),  # plus optional cap
    "disk": ("n", "R", "L"),
    "geometric": ("path", "L"),
}


@dataclass(frozen=True)
class GenSpec:
    """A random-instance family, written ``kind:key=value,...``.

    ``grid:rows=100,cols=100``, ``line:n=1000``, ``gnp:n=1000,p=0.5``,
    ``gnp:n=10000,d=0.9`` (p = d/n), ``tree:d=0.5,cap=1000000``,
    ``disk:n=10000,R=1000,L=30`` (uniform users on a disk, then the
    sharing-range graph), ``geometric:path=users.csv,L=30``.
    """

    kind: str
    params: tuple  # sorted (key, value) pairs

    @classmethod
    def make(cls, kind: str, **params) -> "GenSpec":
        spec = cls(kind, tuple(sorted(params.items())))
        spec._validate()
        return spec

    @classmethod
    def parse(cls, text: str) -> "GenSpec":
        kind, _, rest = text.partition(":")
        params = {}
        for item in filter(None, (x.strip() for x in rest.split(","))):
            key, eq, val = item.partition("=")
            if not eq:
                raise InvalidParameterError(f"bad generator parameter {item!r}; expected key=value")
            params[key.strip()] = _coerce(val.strip())
        return cls.make(kind.strip(), **params)

    def _validate(self) -> None:
        if self.kind not in _KINDS:
            raise InvalidParameterError(f"unknown generator {self.kind!r}; use one of {sorted(_KINDS)}")
        p = self.get
        for key in _KINDS[self.kind]:
            if p(key) is None:
                raise InvalidParameterError(f"generator {self.kind} needs {key}=")
        if self.kind == "gnp" and (p("p") is None) == (p("d") is None):
            raise InvalidParameterError("gnp needs exactly one of p= or d=")

    def get(self, key, default=None):
        return dict(self.params).get(key, default)

    def with_params(self, **params) -> "GenSpec":
        merged = dict(self.params)
        merged.update(params)
        return GenSpec.make(self.kind, **merged)

    def __str__(self) -> str:
        return self.kind + ":" + ",".join(f"{k}={v}" for k, v in self.params)

    @property
    def n_hint(self) -> int | None:
        if self.kind == "grid":
            return int(self.get("rows")) * int(self.get("cols"))
        if self.kind in ("line", "gnp", "disk"):
            return int(self.get("n"))
        return None

    def build(self, seed: int) -> WeightedGraph:
        """Unweighted instance for ``seed``."""
        p = self.get
        if self.kind == "grid":
            return gen_grid(int(p("rows")), int(p("cols")))
        if self.kind == "line":
            return gen_line(int(p("n")))
        if self.kind == "gnp":
            n = int(p("n"))
            prob = float(p("p")) if p("p") is not None else float(p("d")) / n
            return gen_gnp(n, prob, seed)
        if self.kind == "tree":
            return gen_poisson_tree(float(p("d")), seed, int(p("cap", 10**6)))
        if self.kind == "disk":
            locs = uniform_disk_locations(int(p("n")), float(p("R")), seed)
            return gen_geometric(locs, float(p("L")))
        return gen_geometric(_cached_locations(str(p("path"))), float(p("L")))


def _coerce(val: str):
    for conv in (int, float):
        try:
            return conv(val)
        except ValueError:
            pass
    return val


_LOC_CACHE: dict[str, LocationSet] = {}


def _cached_locations(path: str) -> LocationSet:
    if path not in _LOC_CACHE:
        _LOC_CACHE[path] = load_locations(path)
    return _LOC_CACHE[path]


# ---------------------------------------------------------------------------
# records and aggregation
# ---------------------------------------------------------------------------


@dataclass
class TrialRecord:
    trial: int
    seed: int
    n: int
    m: int
    greedy_welfare: float
    exact_welfare: float | None
    bound_welfare: float | None  # expected-optimum bound, used when exact is skipped
    bound_fallback: bool
    rounds: int
    extra: dict = field(default_factory=dict)

    @property
    def reference(self) -> float:
        return self.exact_welfare if self.exact_welfare is not None else self.bound_welfare

    def to_json(self) -> dict:
        return asdict(self)


@dataclass
class AggregateResult:
    """``value`` is the ratio of means (for PR) or a mean (for weights)."""

    metric: str
    value: float
    std_error: float
    trial_count: int
    config: dict
    mean_of_ratios: float | None = None
    lower_bound: bool = False
    extra: dict = field(default_factory=dict)
    records: list = field(default_factory=list, repr=False)

    def to_json(self, emit_trials: bool = False) -> dict:
        out = {"metric": self.metric, "value": self.value, "std_error": self.std_error,
               "trial_count": self.trial_count, "config": self.config,
               "mean_of_ratios": self.mean_of_ratios, "lower_bound": self.lower_bound,
               "extra": self.extra}
        if emit_trials:
            out["trials"] = [r.to_json() for r in self.records]
        return out


def bootstrap_ratio_se(num: np.ndarray, den: np.ndarray, seed: int,
                       samples: int = BOOTSTRAP_SAMPLES) -> float:
    """Bootstrap standard error of ``sum(num) / sum(den)`` over trials."""
    k = num.size
    if k < 2:
        return 0.0
    rng = make_rng(seed, STREAM_BOOTSTRAP)
    idx = rng.integers(0, k, size=(samples, k))
    ratios = num[idx].sum(axis=1) / den[idx].sum(axis=1)
    return float(np.std(ratios, ddof=1))


def _map(fn, items, jobs: int | None):
    items = list(items)
    jobs = resolve_jobs(jobs)
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=min(jobs, len(items))) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * jobs))))


def resolve_jobs(jobs: int | None) -> int:
    if jobs is None:
        return os.cpu_count() or 1
    if jobs < 1:
        raise InvalidParameterError("jobs must be >= 1")
    return int(jobs)


def _check_trials(trials: int) -> int:
    if int(trials) < 1:
        raise InvalidParameterError("trials must be >= 1")
    return int(trials)


# ---------------------------------------------------------------------------
# performance ratio
# ---------------------------------------------------------------------------


def run_ratio_trial(spec: GenSpec, dist: WeightDistribution, seed: int, trial: int,
                    tie: str = "lowest", exact_limit: int = EXACT_LIMIT) -> TrialRecord:
    s = derive_seed(seed, trial)
    g = assign_weights(spec.build(s), dist, s)
    gr = greedy_match(g, tie)
    top = float(dist.values[-1])
    w_matched = g.weights[gr.matched_edges]
    extra = {"top_weight_fraction": float(np.mean(w_matched == top)) if w_matched.size else 1.0,
             "instance_bound": per_instance_bound(g)}
    if g.n <= exact_limit:
        ex = exact_match(g)
        return TrialRecord(trial, s, g.n, g.m, gr.welfare, ex.welfare, None, False, gr.rounds, extra)
    bound = welfare_upper_bound(g.degrees, dist).value
    return TrialRecord(trial, s, g.n, g.m, gr.welfare, None, bound, True, gr.rounds, extra)


def mc_ratio(spec: GenSpec | str, dist: WeightDistribution, trials: int, seed: int,
             jobs: int | None = 1, tie: str = "lowest", exact_limit: int = EXACT_LIMIT) -> AggregateResult:
    """Estimate PR = E[greedy] / E[optimum] as a ratio of means.

    Instances above ``exact_limit`` vertices use the expected-optimum upper
    bound instead of the exact optimum; the result is then flagged as a
    lower bound on PR.
    """
    spec = GenSpec.parse(spec) if isinstance(spec, str) else spec
    trials = _check_trials(trials)
    fn = partial(_ratio_job, spec, dist, seed, tie, exact_limit)
    records = _map(fn, range(trials), jobs)
    num = np.array([r.greedy_welfare for r in records])
    den = np.array([r.reference for r in records])
    value = float(num.sum() / den.sum()) if den.sum() > 0 else 1.0
    with np.errstate(invalid="ignore", divide="ignore"):
        ratios = np.where(den > 0, num / np.where(den > 0, den, 1), 1.0)
    lower = any(r.bound_fallback for r in records)
    extra = {"mean_greedy": float(num.mean()), "mean_reference": float(den.mean()),
             "top_weight_fraction": float(np.mean([r.extra["top_weight_fraction"] for r in records])),
             "max_rounds": int(max(r.rounds for r in records))}
    config = {"op": "ratio", "gen": str(spec), "dist": dist.literal(), "trials": trials,
              "seed": seed, "tie": tie, "exact_limit": exact_limit}
    return AggregateResult("pr_ratio_of_means", value,
                           bootstrap_ratio_se(num, den, seed) if den.sum() > 0 else 0.0,
                           trials, config, float(ratios.mean()), lower, extra, records)


def _ratio_job(spec, dist, seed, tie, exact_limit, trial):
    return run_ratio_trial(spec, dist, seed, trial, tie, exact_limit)


# ---------------------------------------------------------------------------
# rounds
# ---------------------------------------------------------------------------


@dataclass
class RoundsRow:
    n: int
    trials: int
    median: float
    mean: float
    max: int
    max_over_log_n: float
    median_over_log_n: float

    def to_json(self) -> dict:
        return asdict(self)


def _rounds_job(spec, dist, seed, tie, trial):
    s = derive_seed(seed, trial)
    g = assign_weights(spec.build(s), dist, s)
    return greedy_match(g, tie).rounds


def mc_rounds(spec: GenSpec | str, ns, dist: WeightDistribution, trials: int, seed: int,
              jobs: int | None = 1, tie: str = "lowest") -> list[RoundsRow]:
    """Round counts of the greedy matching for each size in ``ns``.

    ``spec`` must have an ``n`` parameter (``line`` or ``gnp``); for ``gnp``
    give ``d=`` so the mean degree stays fixed as ``n`` grows.
    """
    spec = GenSpec.parse(spec) if isinstance(spec, str) else spec
    trials = _check_trials(trials)
    if spec.kind not in ("line", "gnp"):
        raise InvalidParameterError("mc_rounds sweeps n; use a line or gnp generator")
    rows = []
    for n in ns:
        n = int(n)
        sub = spec.with_params(n=n)
        fn = partial(_rounds_job, sub, dist, derive_seed(seed, n), tie)
        r = np.array(_map(fn, range(trials), jobs))
        ln = math.log(n)
        rows.append(RoundsRow(n, trials, float(np.median(r)), float(r.mean()), int(r.max()),
                              float(r.max() / ln), float(np.median(r) / ln)))
    return rows


# ---------------------------------------------------------------------------
# tree approximation on sparse G(n, d/n)
# ---------------------------------------------------------------------------


@dataclass
class TreeApproxResult:
    n: int
    d: float
    trials: int
    sim_mean: float  # mean matched half-weight per vertex on G(n, d/n)
    sim_se: float
    analytic: float  # root expected weight on T(d)
    rel_error: float
    ci_rel: float  # 95% half-width of sim_mean, relative to analytic
    abs_error: float
    config: dict

    def to_json(self) -> dict:
        return asdict(self)


def _half_weight_job(n, d, dist, seed, tie, trial):
    s = derive_seed(seed, trial)
    g = assign_weights(gen_gnp(n, d / n, s), dist, s)
    return greedy_match(g, tie).welfare / n


def tree_approx_error(n: int, d: float, dist: WeightDistribution, trials: int, seed: int,
                      ci_target: float | None = None, max_trials: int = 20000, batch: int = 100,
                      jobs: int | None = 1, tie: str = "lowest",
                      exponent: str = "printed") -> TreeApproxResult:
    """Compare the per-vertex greedy half-weight on G(n, d/n) with the tree value.

    Each matched edge gives half its weight to both ends, so the per-vertex
    mean is ``welfare / n``.  With ``ci_target`` set, trials continue in
    batches past ``trials`` until the relative 95% half-width drops below it
    (or ``max_trials`` is reached).
    """
    if n < 2:
        raise InvalidParameterError("n must be >= 2")
    trials = _check_trials(trials)
    analytic = analytics.root_expected_weight(d, dist, exponent)
    fn = partial(_half_weight_job, int(n), float(d), dist, seed, tie)
    vals = _map(fn, range(trials), jobs)
    while True:
        arr = np.array(vals)
        mean = float(arr.mean())
        se = float(arr.std(ddof=1) / math.sqrt(arr.size)) if arr.size > 1 else math.inf
        ref = analytic if analytic > 0 else 1.0
        ci = 1.96 * se / ref
        if ci_target is None or ci < ci_target or arr.size >= max_trials:
            break
        start = arr.size
        vals.extend(_map(fn, range(start, min(start + batch, max_trials)), jobs))
    config = {"op": "tree-approx", "n": int(n), "d": float(d), "dist": dist.literal(),
              "seed": seed, "tie": tie, "exponent": exponent, "ci_target": ci_target}
    return TreeApproxResult(int(n), float(d), int(arr.size), mean, se, analytic,
                            abs(mean - analytic) / ref, ci, abs(mean - analytic), config)


# ---------------------------------------------------------------------------
# Poisson-tree Monte Carlo (checks of the fixed point and the root formula)
# ---------------------------------------------------------------------------


def _local_ranks(g: WeightedGraph, seed: int) -> np.ndarray:
    """Independent uniform tie ranks per (vertex, edge) slot."""
    return make_rng(seed, STREAM_TOPOLOGY, 99).random(2 * g.m)


@dataclass
class TreeMCResult:
    d: float
    trees: int
    discarded: int
    estimate: np.ndarray
    std_error: np.ndarray

    def to_json(self) -> dict:
        return {"d": self.d, "trees": self.trees, "discarded": self.discarded,
                "estimate": self.estimate.tolist(), "std_error": self.std_error.tolist()}


def tree_proposal_frequency(d: float, dist: WeightDistribution, trees: int, seed: int,
                            node_cap: int = 10**6) -> TreeMCResult:
    """Monte Carlo estimate of the proposal probabilities ``y_k``.

    For each weight ``v_k`` a forest of T(d) trees is grown and every root
    gets an extra parent leaf joined by a ``v_k`` edge.  The leaf has no
    other option, so it is always available and always proposes; the root
    is matched to it exactly when the root proposes to it.  Ties are broken
    by independent uniform ranks at each vertex.  Truncated trees are
    discarded.
    """
    est, se = [], []
    discarded = 0
    for k, vk in enumerate(dist.values):
        s = derive_seed(seed, k)
        forest = gen_poisson_forest(d, trees, s, node_cap)
        base = assign_weights(forest.graph, dist, s)
        n0 = base.n
        leaves = np.arange(n0, n0 + trees)
        g = WeightedGraph.from_arrays(
            n0 + trees, np.concatenate([base.u, forest.roots]), np.concatenate([base.v, leaves]),
            np.concatenate([base.weights, np.full(trees, float(vk))]))
        res = greedy_match(g, slot_key=_local_ranks(g, s))
        keep = ~forest.truncated
        hit = (res.partner[forest.roots] == leaves)[keep]
        discarded += int((~keep).sum())
        est.append(hit.mean())
        se.append(hit.std(ddof=1) / math.sqrt(hit.size))
    return TreeMCResult(float(d), int(trees), discarded, np.array(est), np.array(se))


def tree_root_weight(d: float, dist: WeightDistribution, trees: int, seed: int,
                     node_cap: int = 10**6, batch: int = 200000) -> TreeMCResult:
    """Monte Carlo mean of the root's matched half-weight on T(d) trees
    (independent uniform tie ranks).  Processed in batches to bound memory."""
    sums = sq = 0.0
    count = discarded = 0
    b = 0
    while count + discarded < trees:
        size = min(batch, trees - count - discarded)
        s = derive_seed(seed, b)
        b += 1
        forest = gen_poisson_forest(d, size, s, node_cap)
        g = assign_weights(forest.graph, dist, s)
        res = greedy_match(g, slot_key=_local_ranks(g, s))
        part = res.partner[forest.roots]
        half = np.zeros(size)
        matched = part >= 0
        if matched.any():
            r = forest.roots[matched]
            half[matched] = 0.5 * _edge_weight(g, r, part[matched])
        keep = ~forest.truncated
        discarded += int((~keep).sum())
        sums += float(half[keep].sum())
        sq += float((half[keep] ** 2).sum())
        count += int(keep.sum())
    mean = sums / count
    var = max(sq / count - mean * mean, 0.0) * count / max(count - 1, 1)
    return TreeMCResult(float(d), int(trees), discarded, np.array([mean]),
                        np.array([math.sqrt(var / count)]))


def _edge_weight(g: WeightedGraph, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    lo, hi = np.minimum(a, b), np.maximum(a, b)
    key = g.u * g.n + g.v
    idx = np.searchsorted(key, lo * g.n + hi)
    return g.weights[idx]


# ---------------------------------------------------------------------------
# failure-aware range sweep
# ---------------------------------------------------------------------------


DEFAULT_GAMMA = 3.5
DEFAULT_BETA = 0.05
CALIBRATION_DISTANCE = 50.0
CALIBRATION_FAILURE = 0.1


@dataclass(frozen=True)
class FailureModel:
    """Link failure probability ``1 - exp(-alpha * dist^gamma - beta * m)``.

    ``m`` counts other matched pairs with an endpoint within
    ``interference_radius`` of either endpoint (``None`` means use the
    current sharing range L).  The default ``alpha`` makes a lone 50 m link
    fail with probability 0.1.
    """

    alpha: float = -math.log(1 - CALIBRATION_FAILURE) / CALIBRATION_DISTANCE**DEFAULT_GAMMA
    gamma: float = DEFAULT_GAMMA
    beta: float = DEFAULT_BETA
    interference_radius: float | None = None

    def __post_init__(self):
        if self.alpha < 0 or self.gamma < 0 or self.beta < 0:
            raise InvalidParameterError("failure model knobs must be >= 0")
        if self.interference_radius is not None and self.interference_radius < 0:
            raise InvalidParameterError("interference radius must be >= 0")

    def p_fail(self, dist, m) -> np.ndarray:
        dist = np.asarray(dist, dtype=float)
        m = np.asarray(m, dtype=float)
        return -np.expm1(-self.alpha * dist**self.gamma - self.beta * m)

    def to_json(self) -> dict:
        return asdict(self)


def interference_counts(pos: np.ndarray, a: np.ndarray, b: np.ndarray, radius: float) -> np.ndarray:
    """For each matched pair ``(a[i], b[i])``, the number of other pairs with
    an endpoint within ``radius`` of ``a[i]`` or ``b[i]``."""
    k = a.size
    if k < 2 or radius <= 0:
        return np.zeros(k, dtype=np.int64)
    pts = np.concatenate([pos[a], pos[b]])
    owner = np.concatenate([np.arange(k), np.arange(k)])
    close = cKDTree(pts).query_pairs(radius, output_type="ndarray")
    if close.size == 0:
        return np.zeros(k, dtype=np.int64)
    p, q = owner[close[:, 0]], owner[close[:, 1]]
    diff = p != q
    p, q = p[diff], q[diff]
    lo, hi = np.minimum(p, q), np.maximum(p, q)
    pairs = np.unique(lo * k + hi)
    lo, hi = pairs // k, pairs % k
    return np.bincount(np.concatenate([lo, hi]), minlength=k)


def realized_welfare(g: WeightedGraph, matched_edges: np.ndarray, L: float,
                     fm: FailureModel | None, rng: np.random.Generator) -> tuple[float, float]:
    """Sampled realized welfare and its expectation given the matching."""
    w = g.weights[matched_edges]
    if fm is None or w.size == 0:
        total = float(w.sum())
        return total, total
    radius = L if fm.interference_radius is None else fm.interference_radius
    m = interference_counts(g.pos, g.u[matched_edges], g.v[matched_edges], radius)
    ok = 1.0 - fm.p_fail(g.edge_length[matched_edges], m)
    success = rng.random(w.size) < ok
    return float(w[success].sum()), float((w * ok).sum())


def _sweep_job(source, L, fm, dist, seed, trial):
    s = derive_seed(seed, trial)
    locs = source if isinstance(source, LocationSet) else uniform_disk_locations(source[0], source[1], s)
    g = assign_weights(gen_geometric(locs, L), dist, derive_seed(s, int(round(L * 1000))))
    res = greedy_match(g)
    rng = make_rng(s, STREAM_FAILURES, int(round(L * 1000)))
    sampled, expected = realized_welfare(g, res.matched_edges, L, fm, rng)
    n = len(locs)
    return sampled / n, expected / n, res.size


def range_sweep(source, L_list, fm: FailureModel | None, dist: WeightDistribution, trials: int,
                seed: int, jobs: int | None = 1) -> list[AggregateResult]:
    """Realized welfare per user for each sharing range ``L``.

    ``source`` is a :class:`LocationSet` (fixed users) or ``(n, R)`` for a
    fresh uniform disk per trial; trial ``t`` uses the same users at every
    ``L``.  ``fm=None`` disables failures.
    """
    trials = _check_trials(trials)
    L_list = [float(x) for x in L_list]
    if any(b <= a for a, b in zip(L_list, L_list[1:])):
        raise InvalidParameterError("L values must be strictly ascending")
    if not isinstance(source, LocationSet):
        n, R = source
        source = (int(n), float(R))
    out = []
    for L in L_list:
        fn = partial(_sweep_job, source, L, fm, dist, seed)
        vals = np.array(_map(fn, range(trials), jobs), dtype=float)
        per_user = vals[:, 0]
        se = float(per_user.std(ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
        config = {"op": "range-sweep", "L": L, "dist": dist.literal(), "trials": trials, "seed": seed,
                  "failure_model": fm.to_json() if fm is not None else None,
                  "source": "locations" if isinstance(source, LocationSet) else
                  {"n": source[0], "R": source[1]}}
        out.append(AggregateResult("welfare_per_user", float(per_user.mean()), se, trials, config,
                                   extra={"expected_per_user": float(vals[:, 1].mean()),
                                          "mean_matched_pairs": float(vals[:, 2].mean())}))
    return out


def is_unimodal(means, ses, z: float = 2.0) -> bool:
    """Single rise then fall: every step before the peak is non-decreasing and
    every step after it non-increasing, up to ``z`` combined standard errors,
    and both the rise and the fall are significant."""
    y = np.asarray(means, dtype=float)
    s = np.asarray(ses, dtype=float)
    k = int(np.argmax(y))
    if k == 0 or k == y.size - 1:
        return False
    tol = z * np.sqrt(s[1:] ** 2 + s[:-1] ** 2)
    step = np.diff(y)
    rise_ok = np.all(step[:k] >= -tol[:k])
    fall_ok = np.all(step[k:] <= tol[k:])
    rise = y[k] - y[0] > z * math.hypot(s[k], s[0])
    fall = y[k] - y[-1] > z * math.hypot(s[k], s[-1])
    return bool(rise_ok and fall_ok and rise and fall)


def is_non_decreasing(means, ses, z: float = 2.0) -> bool:
    y = np.asarray(means, dtype=float)
    s = np.asarray(ses, dtype=float)
    tol = z * np.sqrt(s[1:] ** 2 + s[:-1] ** 2)
    return bool(np.all(np.diff(y) >= -tol))


# ---------------------------------------------------------------------------
# worst case
# ---------------------------------------------------------------------------


def worst_case_demo(eps: float) -> float:
    """Greedy over optimal welfare on the 3-edge path with weights (1, 1+eps, 1)."""
    eps = float(eps)
    if not eps > 0:
        raise InvalidParameterError("eps must be > 0")
    g = WeightedGraph.from_edges(4, [(0, 1, 1.0), (1, 2, 1.0 + eps), (2, 3, 1.0)])
    return greedy_match(g).welfare / exact_match(g).welfare
