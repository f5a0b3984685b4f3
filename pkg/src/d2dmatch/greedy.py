"""Distributed greedy matching, simulated round by round.

Each round has a proposal phase (every unmatched vertex proposes to its
best still-unmatched neighbour) and a matching phase (mutual proposals are
matched and leave the graph).  Both phases read a snapshot of the previous
state, so the outcome equals a truly parallel execution; the implementation
just vectorises the per-vertex work with numpy.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError, SolverError
from .graph import WeightedGraph


class TiePolicy(enum.Enum):
    """Which neighbour a vertex prefers among equally heavy edges."""

    LOWEST = "lowest"
    HIGHEST = "highest"

    @classmethod
    def parse(cls, s: "str | TiePolicy") -> "TiePolicy":
        if isinstance(s, TiePolicy):
            return s
        try:
            return cls(s.lower())
        except ValueError:
            raise InvalidParameterError(f"unknown tie policy {s!r}; use lowest or highest") from None


@dataclass(frozen=True, eq=False)
class MatchingResult:
    matched_edges: np.ndarray  # sorted edge indices
    welfare: float
    rounds: int
    partner: np.ndarray  # partner[v] or -1
    graph: WeightedGraph

    @property
    def size(self) -> int:
        return int(self.matched_edges.size)

    def pairs(self) -> list[tuple[int, int, float]]:
        g = self.graph
        e = self.matched_edges
        return list(zip(g.u[e].tolist(), g.v[e].tolist(), g.weights[e].tolist()))

    def to_json(self, **extra) -> dict:
        out = {"welfare": self.welfare, "rounds": self.rounds,
               "pairs": [list(p) for p in self.pairs()]}
        out.update(extra)
        return out

    def dumps(self, **extra) -> str:
        return json.dumps(self.to_json(**extra), sort_keys=True)


def preference_lists(g: WeightedGraph, tie: TiePolicy,
                     slot_key: np.ndarray | None = None) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """CSR of every vertex's neighbours ordered from most to least preferred.

    ``slot_key`` (length ``2m``) overrides the tie policy: entry ``k`` ranks
    edge ``k`` as seen from ``u[k]``, entry ``m + k`` as seen from ``v[k]``;
    smaller keys win ties.  Returns ``(indptr, neighbour, edge_id)``.
    """
    w = g.require_weights()
    src = np.concatenate([g.u, g.v])
    dst = np.concatenate([g.v, g.u])
    eid = np.concatenate([np.arange(g.m), np.arange(g.m)])
    if slot_key is not None:
        key = np.asarray(slot_key)
        if key.shape != (2 * g.m,):
            raise InvalidParameterError("slot_key must have length 2 * m")
    else:
        key = dst if tie is TiePolicy.LOWEST else -dst
    order = np.lexsort((key, -w[eid], src))
    indptr = np.zeros(g.n + 1, dtype=np.int64)
    np.cumsum(np.bincount(src, minlength=g.n), out=indptr[1:])
    return indptr, dst[order], eid[order]


def greedy_match(g: WeightedGraph, tie: TiePolicy | str = TiePolicy.LOWEST,
                 slot_key: np.ndarray | None = None) -> MatchingResult:
    """Run the synchronous greedy matching to termination.

    ``rounds`` is the number of iterations in which at least one vertex was
    still undecided; a vertex whose last free neighbour was matched away
    notices this (and stops) in the following round.

    ``slot_key`` gives every vertex its own ranking of tied edges (see
    :func:`preference_lists`).  Such rankings need not agree between the two
    ends of an edge, so on graphs with cycles proposals can chase each other
    forever; that is reported as :class:`SolverError`.  On forests it cannot
    happen.
    """
    tie = TiePolicy.parse(tie)
    w = g.require_weights()
    n = g.n
    indptr, nbr, eid = preference_lists(g, tie, slot_key)
    ptr = indptr[:-1].copy()
    end = indptr[1:]
    matched = np.zeros(n, dtype=bool)
    partner = np.full(n, -1, dtype=np.int64)
    partner_edge = np.full(n, -1, dtype=np.int64)
    target = np.full(n, -1, dtype=np.int64)
    active = np.flatnonzero(end > ptr)
    rounds = 0
    while active.size:
        rounds += 1
        # proposal phase: skip neighbours matched in earlier rounds
        cur = active
        while cur.size:
            p = ptr[cur]
            ok = p < end[cur]
            stale = np.zeros(cur.size, dtype=bool)
            stale[ok] = matched[nbr[p[ok]]]
            cur = cur[stale]
            ptr[cur] += 1
        live = active[ptr[active] < end[active]]
        target[live] = nbr[ptr[live]]
        # matching phase
        mutual = target[target[live]] == live
        first = live[mutual & (live < target[live])]
        second = target[first]
        e = eid[ptr[first]]
        matched[first] = matched[second] = True
        partner[first], partner[second] = second, first
        partner_edge[first] = partner_edge[second] = e
        still = live[~mutual]
        if still.size == active.size:
            raise SolverError("greedy matching made no progress in a round")
        target[live] = -1
        active = still
    edges = np.unique(partner_edge[partner_edge >= 0])
    welfare = math.fsum(w[edges].tolist())
    return MatchingResult(edges, welfare, rounds, partner, g)


def is_matching(g: WeightedGraph, edges) -> bool:
    edges = np.asarray(edges, dtype=np.int64)
    if edges.size and (edges.min() < 0 or edges.max() >= g.m):
        return False
    ends = np.concatenate([g.u[edges], g.v[edges]])
    return np.unique(ends).size == ends.size and np.unique(edges).size == edges.size


def is_maximal(g: WeightedGraph, partner: np.ndarray) -> bool:
    """No edge has both endpoints unmatched."""
    free = partner < 0
    return not np.any(free[g.u] & free[g.v])


# ---------------------------------------------------------------------------
# chain diagnostic
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ChainStat:
    value: int  # max over vertices of the longest chain (in edges)
    exact_line: bool  # computed by the run-length rule for path components


def _path_order(g: WeightedGraph) -> list[np.ndarray] | None:
    """Vertex sequences of each path component, or None if g is not a union of paths."""
    deg = g.degrees
    if g.m == 0:
        return []
    if deg.max() > 2 or g.m >= g.n:
        return None
    indptr, nbr, _ = g.csr
    seen = np.zeros(g.n, dtype=bool)
    paths = []
    for start in np.flatnonzero(deg == 1):
        if seen[start]:
            continue
        seq = [int(start)]
        seen[start] = True
        prev, cur = -1, int(start)
        while True:
            nxt = [int(x) for x in nbr[indptr[cur]:indptr[cur + 1]] if x != prev]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            if seen[cur]:
                return None
            seen[cur] = True
            seq.append(cur)
        paths.append(np.array(seq))
    if not np.all(seen[deg > 0]):
        return None  # there is a cycle component
    return paths


def _edge_weight_lookup(g: WeightedGraph):
    return {(a, b): x for a, b, x in zip(g.u.tolist(), g.v.tolist(), g.weights.tolist())}


def _longest_run(w: np.ndarray) -> int:
    """Longest run of consecutive entries that is non-decreasing when read in
    one of the two directions."""
    if w.size == 0:
        return 0
    best = 1
    for diffs in (np.diff(w) >= 0, np.diff(w) <= 0):
        run = 1
        for ok in diffs:
            run = run + 1 if ok else 1
            best = max(best, run)
    return best


def longest_chain_stat(g: WeightedGraph, tie: TiePolicy | str = TiePolicy.LOWEST) -> ChainStat:
    """Longest chain of edges with non-decreasing weights starting at some vertex.

    Path components use plain non-decreasing runs (equal weights extend a
    chain in both directions).  Other graphs only follow priority-consistent
    continuations: from ``x`` (reached from ``a``) the chain may move to ``y``
    only if ``x`` prefers ``y`` over ``a``.  Strict preferences make that
    continuation relation acyclic, so the longest chain is found exactly by
    memoised search.
    """
    tie = TiePolicy.parse(tie)
    w = g.require_weights()
    paths = _path_order(g)
    if paths is not None:
        lookup = _edge_weight_lookup(g)
        best = 0
        for seq in paths:
            ws = np.array([lookup[(min(a, b), max(a, b))] for a, b in zip(seq[:-1], seq[1:])])
            best = max(best, _longest_run(ws))
        return ChainStat(best, True)

    indptr, nbr, eid = preference_lists(g, tie)
    # rank[slot] = position of that neighbour in the owner's preference list
    owner = np.repeat(np.arange(g.n), np.diff(indptr))
    rank = np.arange(nbr.size) - indptr[owner]
    # slot of the reverse direction for each directed slot
    rev_lookup = {(int(a), int(b)): s for s, (a, b) in enumerate(zip(owner, nbr))}
    memo = np.full(nbr.size, -1, dtype=np.int64)

    # memo[s] for slot s = (x -> y): edges in the longest chain that starts with x->y
    def solve(s0: int) -> int:
        stack = [s0]
        while stack:
            s = stack[-1]
            if memo[s] >= 0:
                stack.pop()
                continue
            y = int(nbr[s])
            x = int(owner[s])
            back = rev_lookup[(y, x)]  # slot of x in y's list
            pending = False
            best = 0
            for t in range(indptr[y], indptr[y] + rank[back]):
                if memo[t] < 0:
                    stack.append(t)
                    pending = True
                elif not pending:
                    best = max(best, int(memo[t]))
            if not pending:
                memo[s] = 1 + best
                stack.pop()
        return int(memo[s0])

    best = 0
    for s in range(nbr.size):
        best = max(best, solve(s))
    return ChainStat(best, False)
