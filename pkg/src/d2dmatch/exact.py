"""Exact maximum-weight matching oracles and the expected-optimum upper bound.

* :func:`exact_match_bruteforce` enumerates every matching (small graphs only).
* :func:`exact_match` runs the blossom solver per connected component.
* :func:`welfare_upper_bound` bounds the expected optimum from the degree
  sequence: each vertex can earn at most half its heaviest incident edge.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .blossom import max_weight_matching
from .errors import InvalidParameterError
from .graph import WeightDistribution, WeightedGraph
from .greedy import greedy_match


@dataclass(frozen=True, eq=False)
class ExactResult:
    matched_edges: np.ndarray  # sorted edge indices
    welfare: float
    graph: WeightedGraph

    @property
    def size(self) -> int:
        return int(self.matched_edges.size)

    def pairs(self) -> list[tuple[int, int, float]]:
        g = self.graph
        e = self.matched_edges
        return list(zip(g.u[e].tolist(), g.v[e].tolist(), g.weights[e].tolist()))

    def partner(self) -> np.ndarray:
        out = np.full(self.graph.n, -1, dtype=np.int64)
        e = self.matched_edges
        out[self.graph.u[e]] = self.graph.v[e]
        out[self.graph.v[e]] = self.graph.u[e]
        return out

    def to_json(self, **extra) -> dict:
        out = {"solver": "exact", "welfare": self.welfare, "rounds": None,
               "pairs": [list(p) for p in self.pairs()]}
        out.update(extra)
        return out

    def dumps(self, **extra) -> str:
        return json.dumps(self.to_json(**extra), sort_keys=True)


def _result(g: WeightedGraph, edges) -> ExactResult:
    edges = np.unique(np.asarray(edges, dtype=np.int64))
    return ExactResult(edges, math.fsum(g.weights[edges].tolist()), g)


def exact_match_bruteforce(g: WeightedGraph, max_edges: int = 24) -> ExactResult:
    """Enumerate all matchings; refuses graphs with more than ``max_edges`` edges."""
    w = g.require_weights()
    if g.m > max_edges:
        raise InvalidParameterError(
            f"brute force limited to {max_edges} edges, graph has {g.m}")
    u = g.u.tolist()
    v = g.v.tolist()
    wl = w.tolist()
    best_val = -1.0
    best: list[int] = []
    used = [False] * g.n
    chosen: list[int] = []

    def rec(k: int, val: float) -> None:
        nonlocal best_val, best
        if k == g.m:
            if val > best_val:
                best_val = val
                best = chosen.copy()
            return
        a, b = u[k], v[k]
        if not used[a] and not used[b]:
            used[a] = used[b] = True
            chosen.append(k)
            rec(k + 1, val + wl[k])
            chosen.pop()
            used[a] = used[b] = False
        rec(k + 1, val)

    rec(0, 0.0)
    return _result(g, best)


def exact_match(g: WeightedGraph) -> ExactResult:
    """Maximum-weight matching (not necessarily perfect) via the blossom solver.

    Components are solved independently.  Inside each one the solver starts
    from the maximum-weight edges that the greedy matching picked, which is
    always a valid partial solution for the primal-dual method.
    """
    w = g.require_weights()
    if g.m == 0:
        return _result(g, [])
    adj = coo_matrix((np.ones(g.m), (g.u, g.v)), shape=(g.n, g.n))
    _, label = connected_components(adj, directed=False)
    elabel = label[g.u]
    order = np.argsort(elabel, kind="stable")
    bounds = np.flatnonzero(np.diff(elabel[order])) + 1
    greedy_edges = np.zeros(g.m, dtype=bool)
    greedy_edges[greedy_match(g).matched_edges] = True
    chosen = []
    for comp_edges in np.split(order, bounds):
        if comp_edges.size == 1:
            chosen.append(comp_edges)
            continue
        verts, inv = np.unique(np.concatenate([g.u[comp_edges], g.v[comp_edges]]),
                               return_inverse=True)
        k = comp_edges.size
        cu, cv = inv[:k], inv[k:]
        cw = w[comp_edges]
        warm = np.flatnonzero(greedy_edges[comp_edges] & (cw == cw.max()))
        mate = max_weight_matching(verts.size, cu, cv, cw, warm)
        chosen.append(comp_edges[mate[cu] == cv])
    return _result(g, np.concatenate(chosen))


def per_instance_bound(g: WeightedGraph) -> float:
    """Half the sum over vertices of the heaviest incident edge weight."""
    w = g.require_weights()
    best = np.zeros(g.n)
    np.maximum.at(best, g.u, w)
    np.maximum.at(best, g.v, w)
    return 0.5 * math.fsum(best.tolist())


@dataclass(frozen=True)
class BoundReport:
    value: float
    per_vertex_terms: np.ndarray

    def to_json(self) -> dict:
        return {"value": self.value, "n": int(self.per_vertex_terms.size)}


def expected_half_max(degree: int, dist: WeightDistribution) -> float:
    """Half the expected maximum of ``degree`` i.i.d. weights (0 if degree is 0)."""
    if degree < 0:
        raise InvalidParameterError("degrees must be >= 0")
    if degree == 0:
        return 0.0
    F = dist.cdf()
    return 0.5 * sum(float(v) * (float(F[k + 1]) ** degree - float(F[k]) ** degree)
                     for k, v in enumerate(dist.values))


def welfare_upper_bound(degrees, dist: WeightDistribution) -> BoundReport:
    """Upper bound on the expected optimal welfare of a graph with these degrees."""
    degrees = np.asarray(degrees, dtype=np.int64)
    if degrees.size and degrees.min() < 0:
        raise InvalidParameterError("degrees must be >= 0")
    uniq, inv = np.unique(degrees, return_inverse=True)
    per_deg = np.array([expected_half_max(int(d), dist) for d in uniq])
    terms = per_deg[inv] if degrees.size else np.zeros(0)
    return BoundReport(math.fsum(terms.tolist()), terms)
