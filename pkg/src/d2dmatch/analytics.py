"""Closed-form and iterative analysis of the greedy matching.

* Lines: expected greedy welfare ``a_t`` on a path with ``t`` edges, built
  from a renewal recurrence, and its asymptotic slope.
* Grids: the n^2 coefficients of the upper bound and the greedy lower bound
  for weights uniform on {1, 2}.
* Sparse random graphs: proposal probabilities on Poisson(d) trees, the
  expected matched half-weight of a root, and the resulting PR estimate.

Inputs given as ``Fraction`` (for example ``WeightDistribution.uniform``)
are kept exact in the line and grid computations.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.optimize import brentq

from .errors import InvalidParameterError, SolverError, UnsupportedParameterError
from .graph import UNIFORM_12, WeightDistribution

MAX_PREFIX_K = 6
EXPONENTS = ("printed", "corrected")


# ---------------------------------------------------------------------------
# lines
# ---------------------------------------------------------------------------


def line_greedy_welfare(ws) -> object:
    """Greedy welfare on a path whose edges carry ``ws`` (left-priority ties).

    With left priority every vertex ranks its edges by (weight desc, edge
    index asc), a single global order, so the synchronous outcome equals the
    sequential greedy over that order.  Keeps the element type of ``ws``.
    """
    t = len(ws)
    order = sorted(range(t), key=lambda i: (-ws[i], i))
    taken = [False] * (t + 1)  # vertex i sits between edges i-1 and i
    total = 0 * ws[0] if t else 0
    for i in order:
        if not taken[i] and not taken[i + 1]:
            taken[i] = taken[i + 1] = True
            total += ws[i]
    return total


def _enumerate_line(dist: WeightDistribution, t: int):
    """Exact average of greedy welfare over all K^t weight vectors."""
    if t == 0:
        return 0 * dist.probs[0]
    total = 0 * dist.probs[0]
    idx = range(dist.K)
    for combo in itertools.product(idx, repeat=t):
        prob = math.prod(dist.probs[k] for k in combo)
        total += prob * line_greedy_welfare([dist.values[k] for k in combo])
    return total


@dataclass(frozen=True)
class RenewalTerm:
    """One prefix class: probability, welfare gained and edges consumed."""

    prob: object
    gain: object
    consumed: int


def renewal_terms(dist: WeightDistribution) -> list[RenewalTerm]:
    """Enumerate the K^K prefixes of the first K edges of a long line.

    In each prefix the first edge ``i`` with ``w_i >= w_{i+1}`` (or ``i = K``
    when the prefix is strictly increasing) is certainly matched: both its
    endpoints rank it first.  Edges ``i-1`` and ``i+1`` are then blocked, the
    edges left of ``i-1`` form a short independent line, and the line
    restarts after edge ``i+1``.
    """
    K = dist.K
    if K > MAX_PREFIX_K:
        raise UnsupportedParameterError(f"prefix enumeration supports K <= {MAX_PREFIX_K}")
    grouped: dict[tuple, RenewalTerm] = {}
    for combo in itertools.product(range(K), repeat=K):
        i = K
        for j in range(K - 1):
            if combo[j] >= combo[j + 1]:
                i = j + 1
                break
        # probability of the deciding part only: the first i edges, plus the
        # condition w_{i+1} <= w_i when i < K (marginalised over the rest)
        ws = [dist.values[k] for k in combo]
        gain = ws[i - 1] + (line_greedy_welfare(ws[:i - 2]) if i >= 3 else 0)
        prob = math.prod(dist.probs[k] for k in combo)
        key = (tuple(combo[:i]), i)
        if key in grouped:
            old = grouped[key]
            grouped[key] = RenewalTerm(old.prob + prob, old.gain, old.consumed)
        else:
            grouped[key] = RenewalTerm(prob, gain, i + 1)
    return list(grouped.values())


@dataclass(frozen=True)
class RecurrenceTable:
    a: list  # a[t] = expected greedy welfare on a line with t edges
    dist: WeightDistribution
    terms: list = field(repr=False, default_factory=list)

    @property
    def t_max(self) -> int:
        return len(self.a) - 1

    def as_float(self) -> np.ndarray:
        return np.array([float(x) for x in self.a])

    def to_json(self) -> dict:
        return {"dist": self.dist.to_json(), "t_max": self.t_max,
                "a": [float(x) for x in self.a]}


def linear_recurrence(dist: WeightDistribution, t_max: int) -> RecurrenceTable:
    """``a_0 .. a_{t_max}`` for the line; base cases by enumeration, then the
    machine-built recurrence ``a_t = sum_c prob_c * (gain_c + a_{t - consumed_c})``."""
    t_max = int(t_max)
    if t_max < 1:
        raise InvalidParameterError("t_max must be >= 1")
    terms = renewal_terms(dist)
    K = dist.K
    a = [_enumerate_line(dist, t) for t in range(min(K, t_max) + 1)]
    for t in range(K + 1, t_max + 1):
        a.append(sum(c.prob * (c.gain + a[t - c.consumed]) for c in terms))
    return RecurrenceTable(a, dist, terms)


def linear_slope(dist: WeightDistribution):
    """Asymptotic greedy welfare per edge on a long line (renewal-reward ratio)."""
    terms = renewal_terms(dist)
    num = sum(c.prob * c.gain for c in terms)
    den = sum(c.prob * c.consumed for c in terms)
    return num / den


def linear_slope_k2(dist: WeightDistribution):
    """Closed form of the slope for two weight values."""
    if dist.K != 2:
        raise UnsupportedParameterError("closed form needs exactly two weight values")
    (v1, v2), (p1, p2) = dist.values, dist.probs
    return (p1 * p1 * v1 + (p2 + p1 * p2) * v2) / (2 * p2 + 2 * p1 * p1 + 3 * p1 * p2)


# ---------------------------------------------------------------------------
# grids
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GridBoundReport:
    upper_coeff: Fraction
    lower_coeff: float
    segment_sum: float
    ratio: float
    t_max: int
    tail_bound: float

    def to_json(self) -> dict:
        return {"upper_coeff": float(self.upper_coeff), "upper_coeff_exact": str(self.upper_coeff),
                "lower_coeff": self.lower_coeff, "segment_sum": self.segment_sum,
                "ratio": self.ratio, "t_max": self.t_max, "tail_bound": self.tail_bound,
                "dist": UNIFORM_12.to_json()}


def _is_uniform_12(dist: WeightDistribution) -> bool:
    return (dist.K == 2 and tuple(float(v) for v in dist.values) == (1.0, 2.0)
            and all(abs(float(p) - 0.5) < 1e-12 for p in dist.probs))


def grid_bound_report(dist: WeightDistribution = UNIFORM_12, t_max: int = 1000) -> GridBoundReport:
    """n^2 coefficients of the grid bounds for weights uniform on {1, 2}.

    The upper bound on E[optimum] is (31/32) n^2 + O(n).  The greedy lower
    bound splits the grid into lines through the local maxima; the pieces
    contribute ``1/2 (1 + 1/8 + 2 S)`` per n^2 with
    ``S = sum_{t=2}^{t_max} a_{t-1} / 2^{t+2}``.
    """
    if not _is_uniform_12(dist):
        raise UnsupportedParameterError("grid bound is only derived for weights uniform on {1, 2}")
    table = linear_recurrence(UNIFORM_12, t_max)
    seg = sum(Fraction(table.a[t - 1]) / 2 ** (t + 2) for t in range(2, t_max + 1))
    upper = Fraction(31, 32)
    lower = Fraction(1, 2) * (1 + Fraction(1, 8) + 2 * seg)
    # a_t <= 2t, so the omitted tail is below sum_{t>t_max} 2t / 2^(t+2)
    tail = math.ldexp(t_max + 2, -t_max - 1) / 2
    return GridBoundReport(upper, float(lower), float(seg), float(lower / upper), t_max, tail)


def grid_upper_bound_closed_form(n: int) -> float:
    """Expected-optimum bound on an n x n grid, weights uniform on {1, 2}."""
    return 31 / 32 * n * n - n / 8 - 1 / 8


# ---------------------------------------------------------------------------
# Poisson trees
# ---------------------------------------------------------------------------


SERIES_TOL = 1e-14
SERIES_CAP = 200


def _series(lam: float, y: float) -> float:
    """``e^{-lam} * sum_i lam^i / (i+1)! * s_i(y)`` with ``s_i = sum_{j<=i} (1-y)^j``.

    ``s_i`` equals ``(1 - (1-y)^{i+1}) / y`` but stays finite at ``y = 0``.
    Terms are updated incrementally; summation stops once past the peak of
    the Poisson weights and a term drops below the tolerance.
    """
    q = 1.0 - y
    base = math.exp(-lam)  # e^{-lam} lam^i / (i+1)!
    s = 1.0
    qp = 1.0
    total = base * s
    cap = max(SERIES_CAP, int(lam + 40 * math.sqrt(lam) + 50))
    for i in range(1, cap + 1):
        base *= lam / (i + 1)
        qp *= q
        s += qp
        term = base * s
        total += term
        if i > lam and term < SERIES_TOL:
            break
    return total


@dataclass(frozen=True)
class ProposalProbs:
    d: float
    y: np.ndarray  # y[k] for weight values ascending
    residuals: np.ndarray
    exponent: str
    dist: WeightDistribution

    def to_json(self) -> dict:
        return {"d": self.d, "y": self.y.tolist(), "residuals": self.residuals.tolist(),
                "exponent": self.exponent, "dist": self.dist.to_json(),
                "series_tol": SERIES_TOL, "residual_tol": RESIDUAL_TOL}


RESIDUAL_TOL = 1e-10


def proposal_rhs(y: float, k: int, d: float, dist: WeightDistribution, y_above,
                 exponent: str = "printed") -> float:
    """Right side of the fixed-point equation for ``y_k`` (0-based ``k``).

    ``y_above`` holds the already-solved ``y_j`` for ``j > k``.  The
    ``printed`` exponent is ``p_K + sum_{j>k} y_j p_j``; ``corrected`` uses
    ``p_k`` in place of ``p_K``, which is what a child with ``Poisson(p_k d)``
    equal-weight children gives.  Both coincide for uniform probabilities.
    """
    p = [float(x) for x in dist.probs]
    K = len(p)
    lead = p[K - 1] if exponent == "printed" else p[k]
    c = lead + sum(y_above[j] * p[j] for j in range(k + 1, K))
    lam = p[k] * d
    return math.exp(lam - c * d) * _series(lam, y)


def solve_proposal_probs(d: float, dist: WeightDistribution,
                         exponent: str = "printed") -> ProposalProbs:
    """Solve ``y_k = rhs(y_k)`` for ``k = K .. 1`` by bracketing on (0, 1]."""
    d = float(d)
    if not d > 0:
        raise InvalidParameterError("d must be > 0")
    if exponent not in EXPONENTS:
        raise InvalidParameterError(f"exponent must be one of {EXPONENTS}")
    K = dist.K
    y = np.zeros(K)
    res = np.zeros(K)
    for k in range(K - 1, -1, -1):
        f = lambda t: proposal_rhs(t, k, d, dist, y, exponent) - t  # noqa: E731
        hi = f(1.0)
        if hi >= 0:
            if hi <= RESIDUAL_TOL:
                root = 1.0
            else:
                raise SolverError(
                    f"no root in (0, 1] for y_{k + 1} at d={d} (rhs(1) - 1 = {hi:.3g})")
        else:
            root = brentq(f, 0.0, 1.0, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=500)
        y[k] = root
        res[k] = abs(f(root))
        if res[k] >= RESIDUAL_TOL:
            raise SolverError(f"residual {res[k]:.3g} for y_{k + 1} at d={d}")
    return ProposalProbs(d, y, res, exponent, dist)


def root_match_probs(d: float, dist: WeightDistribution, y) -> np.ndarray:
    """``P(root matched through an edge of weight v_k)`` under Poisson thinning."""
    p = np.array([float(x) for x in dist.probs])
    lam = d * p * np.asarray(y)
    above = np.concatenate([np.cumsum(lam[::-1])[::-1][1:], [0.0]])
    return -np.expm1(-lam) * np.exp(-above)


def root_expected_weight(d: float, dist: WeightDistribution, exponent: str = "printed",
                         probs: ProposalProbs | None = None) -> float:
    """Expected matched half-weight of the root of a Poisson(d) tree."""
    if probs is None:
        probs = solve_proposal_probs(d, dist, exponent)
    v = np.array([float(x) for x in dist.values])
    return float(0.5 * np.sum(v * root_match_probs(d, dist, probs.y)))


def poisson_half_max(d: float, dist: WeightDistribution) -> float:
    """Half the expected heaviest incident weight at a Poisson(d)-degree vertex."""
    F = np.array([float(x) for x in dist.cdf()])
    v = np.array([float(x) for x in dist.values])
    g = np.exp(-d * (1.0 - F))
    return float(0.5 * np.sum(v * np.diff(g)))


def gnp_pr_bound(n: int, d: float, dist: WeightDistribution, exponent: str = "printed") -> float:
    """Tree-based PR estimate on G(n, d/n): root half-weight over the
    Poisson-degree version of the per-vertex upper bound (``n`` cancels)."""
    if n < 2:
        raise InvalidParameterError("n must be >= 2")
    d = float(d)
    if not d > 0:
        raise InvalidParameterError("d must be > 0")
    return root_expected_weight(d, dist, exponent) / poisson_half_max(d, dist)


def pr_curve(ds, dist: WeightDistribution, n: int = 10**4, exponent: str = "printed") -> list[dict]:
    """Rows ``{d, y_1.., root_weight, bound, ratio}`` for each ``d``."""
    rows = []
    for d in ds:
        pp = solve_proposal_probs(d, dist, exponent)
        root = root_expected_weight(d, dist, probs=pp)
        den = poisson_half_max(d, dist)
        row = {"d": float(d), "root_weight": root, "bound": den, "ratio": root / den}
        for k, yk in enumerate(pp.y):
            row[f"y_{k + 1}"] = float(yk)
        rows.append(row)
    return rows
