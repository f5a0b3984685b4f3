"""Weighted-graph data model, weight distributions, instance generators and
location/graph file I/O.

Vertex layout conventions (they matter for index-based tie-breaking):

* grids are row-major, ``vertex = row * cols + col``;
* Poisson trees are numbered in breadth-first order, root = 0;
* geometric graphs order vertices by ascending location id.

Every generator is a pure function of its parameters and seed.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from functools import cached_property
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy.spatial import cKDTree

from .errors import InvalidParameterError, ParseError, ValidationError

# stream ids keep topology and weights independent when callers reuse a seed
STREAM_TOPOLOGY = 1
STREAM_WEIGHTS = 2
STREAM_LOCATIONS = 3
STREAM_FAILURES = 4
STREAM_BOOTSTRAP = 5

_MAX_SEED = 2**64 - 1


def check_seed(seed: int) -> int:
    seed = int(seed)
    if not 0 <= seed <= _MAX_SEED:
        raise InvalidParameterError(f"seed must be an unsigned 64-bit integer, got {seed}")
    return seed


def make_rng(seed: int, *stream: int) -> np.random.Generator:
    """PCG64 generator for ``seed``, split into an independent sub-stream by
    the integer path ``stream`` (e.g. ``(STREAM_WEIGHTS, trial)``)."""
    ss = np.random.SeedSequence(check_seed(seed), spawn_key=tuple(int(s) for s in stream))
    return np.random.Generator(np.random.PCG64(ss))


def derive_seed(seed: int, *stream: int) -> int:
    """A 64-bit child seed, stable across platforms and worker counts."""
    ss = np.random.SeedSequence(check_seed(seed), spawn_key=tuple(int(s) for s in stream))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


# ---------------------------------------------------------------------------
# weight distributions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WeightDistribution:
    """Finite discrete edge-weight law: ``P(w = values[k]) = probs[k]``.

    Values may be floats or ``Fraction``s; the analytic routines keep
    ``Fraction`` inputs exact.
    """

    values: tuple
    probs: tuple

    def __post_init__(self):
        values = tuple(self.values)
        probs = tuple(self.probs)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "probs", probs)
        if len(values) == 0:
            raise InvalidParameterError("distribution needs at least one value")
        if len(values) != len(probs):
            raise InvalidParameterError("values and probs differ in length")
        for v in values:
            if not math.isfinite(v) or v < 0:
                raise InvalidParameterError(f"weight values must be finite and >= 0, got {v}")
        for a, b in zip(values, values[1:]):
            if not a < b:
                raise InvalidParameterError("weight values must be strictly increasing")
        for p in probs:
            if not math.isfinite(p) or p < 0:
                raise InvalidParameterError(f"probabilities must be >= 0, got {p}")
        if abs(sum(probs) - 1) > 1e-12:
            raise InvalidParameterError(f"probabilities sum to {float(sum(probs))!r}, not 1")

    @classmethod
    def uniform(cls, values: Sequence) -> "WeightDistribution":
        k = len(values)
        return cls(tuple(values), tuple(Fraction(1, k) for _ in values))

    @classmethod
    def parse(cls, literal: str) -> "WeightDistribution":
        """Parse ``"v1:p1,v2:p2,..."``; pairs may come in any order."""
        pairs = []
        for i, item in enumerate(literal.split(",")):
            item = item.strip()
            if not item:
                continue
            try:
                v, p = item.split(":")
                pairs.append((float(v), float(p)))
            except ValueError:
                raise InvalidParameterError(
                    f"bad distribution term {item!r} (item {i + 1}); expected value:prob"
                ) from None
        if not pairs:
            raise InvalidParameterError("empty distribution literal")
        pairs.sort()
        return cls(tuple(v for v, _ in pairs), tuple(p for _, p in pairs))

    def exact(self) -> "WeightDistribution":
        """The same law with ``Fraction`` entries; floats are read as their
        shortest decimal form, so ``0.1`` becomes ``1/10``."""
        def fr(x):
            return x if isinstance(x, Fraction) else Fraction(repr(float(x)))
        return WeightDistribution(tuple(fr(v) for v in self.values), tuple(fr(p) for p in self.probs))

    def literal(self) -> str:
        return ",".join(f"{float(v)!r}:{float(p)!r}" for v, p in zip(self.values, self.probs))

    @property
    def K(self) -> int:
        return len(self.values)

    @property
    def mean(self):
        return sum(p * v for p, v in zip(self.probs, self.values))

    def cdf(self) -> list:
        """``[F_0, F_1, ..., F_K]`` with ``F_0 = 0`` and ``F_k = p_1 + ... + p_k``."""
        out = [0 * self.probs[0]]
        for p in self.probs:
            out.append(out[-1] + p)
        return out

    @cached_property
    def _sampler(self):
        cdf = np.cumsum(np.asarray(self.probs, dtype=float))
        return cdf, np.asarray(self.values, dtype=float)

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        cdf, vals = self._sampler
        u = rng.random(size)
        idx = np.searchsorted(cdf, u, side="right")
        np.minimum(idx, len(vals) - 1, out=idx)
        return vals[idx]

    def to_json(self) -> dict:
        return {"values": [float(v) for v in self.values], "probs": [float(p) for p in self.probs]}


UNIFORM_12 = WeightDistribution((1, 2), (Fraction(1, 2), Fraction(1, 2)))


# ---------------------------------------------------------------------------
# graphs
# ---------------------------------------------------------------------------


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class WeightedGraph:
    """Undirected simple graph on vertices ``0..n-1``.

    Edges are stored in canonical order (sorted by ``(u, v)`` with
    ``u < v``).  ``weights`` is ``None`` for an unweighted skeleton.
    ``edge_length`` and ``pos`` are carried by geometric graphs.
    """

    n: int
    u: np.ndarray
    v: np.ndarray
    weights: np.ndarray | None = None
    edge_length: np.ndarray | None = None
    pos: np.ndarray | None = None
    truncated: bool = False

    def __post_init__(self):
        object.__setattr__(self, "u", _frozen(np.asarray(self.u, dtype=np.int64)))
        object.__setattr__(self, "v", _frozen(np.asarray(self.v, dtype=np.int64)))
        for name in ("weights", "edge_length"):
            arr = getattr(self, name)
            if arr is not None:
                arr = _frozen(np.asarray(arr, dtype=np.float64))
                if arr.shape != self.u.shape:
                    raise ValidationError(f"{name} length does not match edge count")
                object.__setattr__(self, name, arr)
        if self.pos is not None:
            object.__setattr__(self, "pos", _frozen(np.asarray(self.pos, dtype=np.float64)))

    @classmethod
    def from_edges(cls, n: int, edges, **extra) -> "WeightedGraph":
        """Build from ``(i, j)`` or ``(i, j, w)`` tuples in any orientation/order.

        Rejects self-loops, duplicate edges and out-of-range endpoints.
        """
        n = int(n)
        if n < 0:
            raise InvalidParameterError("vertex count must be >= 0")
        edges = list(edges)
        weighted = bool(edges) and len(edges[0]) == 3
        if edges:
            arr = np.array([e[:2] for e in edges], dtype=np.int64).reshape(-1, 2)
        else:
            arr = np.empty((0, 2), dtype=np.int64)
        # an edgeless graph is trivially weighted
        w = np.array([e[2] for e in edges], dtype=np.float64) if weighted or not edges else None
        return cls.from_arrays(n, arr[:, 0], arr[:, 1], w, **extra)

    @classmethod
    def from_arrays(cls, n, a, b, weights=None, edge_length=None, **extra) -> "WeightedGraph":
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if a.size and (min(a.min(), b.min()) < 0 or max(a.max(), b.max()) >= n):
            raise ValidationError("edge endpoint out of range")
        if np.any(a == b):
            raise ValidationError("self-loops are not allowed")
        u = np.minimum(a, b)
        v = np.maximum(a, b)
        order = np.lexsort((v, u))
        u, v = u[order], v[order]
        if u.size > 1 and np.any((u[1:] == u[:-1]) & (v[1:] == v[:-1])):
            raise ValidationError("duplicate edges are not allowed")
        if weights is not None:
            weights = np.asarray(weights, dtype=np.float64)[order]
            if np.any(~np.isfinite(weights)) or np.any(weights < 0):
                raise ValidationError("edge weights must be finite and non-negative")
        if edge_length is not None:
            edge_length = np.asarray(edge_length, dtype=np.float64)[order]
        return cls(int(n), u, v, weights, edge_length, **extra)

    @property
    def m(self) -> int:
        return int(self.u.size)

    @property
    def is_weighted(self) -> bool:
        return self.weights is not None

    def with_weights(self, weights) -> "WeightedGraph":
        return WeightedGraph(self.n, self.u, self.v, np.asarray(weights, dtype=float),
                             self.edge_length, self.pos, self.truncated)

    def require_weights(self) -> np.ndarray:
        if self.weights is None:
            raise ValidationError("graph is an unweighted skeleton; call assign_weights first")
        return self.weights

    def edges(self) -> list[tuple[int, int, float]]:
        w = self.weights if self.weights is not None else np.zeros(self.m)
        return list(zip(self.u.tolist(), self.v.tolist(), w.tolist()))

    @cached_property
    def degrees(self) -> np.ndarray:
        return _frozen(np.bincount(np.concatenate([self.u, self.v]), minlength=self.n))

    @cached_property
    def csr(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """``(indptr, neighbor, edge_id)`` with neighbors sorted ascending."""
        src = np.concatenate([self.u, self.v])
        dst = np.concatenate([self.v, self.u])
        eid = np.concatenate([np.arange(self.m), np.arange(self.m)])
        order = np.lexsort((dst, src))
        indptr = np.zeros(self.n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=self.n), out=indptr[1:])
        return _frozen(indptr), _frozen(dst[order]), _frozen(eid[order])

    def neighbors(self, i: int) -> np.ndarray:
        indptr, nbr, _ = self.csr
        return nbr[indptr[i]:indptr[i + 1]]

    def same_structure(self, other: "WeightedGraph") -> bool:
        def eq(a, b):
            if a is None or b is None:
                return a is None and b is None
            return a.shape == b.shape and bool(np.array_equal(a, b))

        return (self.n == other.n and eq(self.u, other.u) and eq(self.v, other.v)
                and eq(self.weights, other.weights) and eq(self.edge_length, other.edge_length))


# ---------------------------------------------------------------------------
# generators
# ---------------------------------------------------------------------------


def gen_grid(rows: int, cols: int) -> WeightedGraph:
    """``rows x cols`` lattice; ``gen_grid(1, n)`` is the n-vertex line."""
    rows, cols = int(rows), int(cols)
    if rows < 1 or cols < 1:
        raise InvalidParameterError("grid dimensions must be positive")
    if rows * cols < 2:
        raise InvalidParameterError("a grid needs at least two vertices")
    idx = np.arange(rows * cols, dtype=np.int64).reshape(rows, cols)
    a = np.concatenate([idx[:, :-1].ravel(), idx[:-1, :].ravel()])
    b = np.concatenate([idx[:, 1:].ravel(), idx[1:, :].ravel()])
    return WeightedGraph.from_arrays(rows * cols, a, b)


def gen_line(n: int) -> WeightedGraph:
    return gen_grid(1, n)


def _decode_pairs(k: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Map linear indices of the upper triangle (row-major) back to (i, j)."""
    k = k.astype(np.int64)
    b = 2 * n - 1
    i = np.floor((b - np.sqrt(float(b) * b - 8.0 * k)) / 2).astype(np.int64)
    i = np.clip(i, 0, n - 2)

    def start(r):
        return r * (2 * n - r - 1) // 2

    for _ in range(3):
        i = np.where(start(i + 1) <= k, i + 1, i)
        i = np.where(start(i) > k, i - 1, i)
    j = k - start(i) + i + 1
    return i, j


def gen_gnp(n: int, p: float, seed: int) -> WeightedGraph:
    """Erdos-Renyi G(n, p).

    Sparse instances skip over absent pairs with geometric gaps, so the cost
    is proportional to the number of edges rather than ``n^2``.
    """
    n, p = int(n), float(p)
    if n < 1:
        raise InvalidParameterError("n must be >= 1")
    if not 0.0 <= p <= 1.0:
        raise InvalidParameterError(f"p must lie in [0, 1], got {p}")
    total = n * (n - 1) // 2
    if total == 0 or p == 0.0:
        return WeightedGraph.from_arrays(n, [], [])
    if p == 1.0:
        i, j = np.triu_indices(n, 1)
        return WeightedGraph.from_arrays(n, i, j)
    rng = make_rng(seed, STREAM_TOPOLOGY)
    if p > 0.05 and total <= 50_000_000:
        i, j = np.triu_indices(n, 1)
        keep = rng.random(total) < p
        return WeightedGraph(n, i[keep], j[keep])
    chunks = []
    pos = -1
    batch = int(total * p + 6 * math.sqrt(total * p) + 64)
    while True:
        # clipping keeps the cumulative sum from overflowing when p is tiny
        gaps = np.minimum(rng.geometric(p, size=batch), total + 1)
        idx = pos + np.cumsum(gaps)
        chunks.append(idx[idx < total])
        if idx[-1] >= total:
            break
        pos = int(idx[-1])
    k = np.concatenate(chunks)
    i, j = _decode_pairs(k, n)
    return WeightedGraph(n, i, j)


@dataclass(frozen=True, eq=False)
class PoissonForest:
    """Many independent T(d) trees packed into one graph.

    ``roots[t]`` is the root of tree ``t``; ``tree_of[v]`` the tree of
    vertex ``v``; ``truncated[t]`` flags trees that hit the node cap.
    """

    graph: WeightedGraph
    roots: np.ndarray
    tree_of: np.ndarray
    truncated: np.ndarray
    sizes: np.ndarray


def gen_poisson_forest(d: float, count: int, seed: int, node_cap: int = 10**6) -> PoissonForest:
    """Grow ``count`` Galton-Watson trees with Poisson(d) offspring at once.

    Nodes are numbered generation by generation, so within each tree every
    parent has a smaller index than its children.  A tree whose population
    would exceed ``node_cap`` stops growing and is flagged truncated.
    """
    d = float(d)
    if not d > 0:
        raise InvalidParameterError("offspring mean d must be > 0")
    if count < 1 or node_cap < 1:
        raise InvalidParameterError("count and node_cap must be >= 1")
    rng = make_rng(seed, STREAM_TOPOLOGY)
    roots = np.arange(count, dtype=np.int64)
    sizes = np.ones(count, dtype=np.int64)
    truncated = np.zeros(count, dtype=bool)
    tree_of = [roots.copy()]
    parents = [np.full(count, -1, dtype=np.int64)]
    frontier = roots
    frontier_tree = roots.copy()
    next_id = count
    while frontier.size:
        kids = rng.poisson(d, size=frontier.size)
        grow = np.bincount(frontier_tree, weights=kids, minlength=count).astype(np.int64)
        over = sizes + grow > node_cap
        if over.any():
            truncated |= over
            kids = np.where(over[frontier_tree], 0, kids)
            grow = np.where(over, 0, grow)
        sizes += grow
        par = np.repeat(frontier, kids)
        if par.size == 0:
            break
        new = np.arange(next_id, next_id + par.size, dtype=np.int64)
        next_id += par.size
        parents.append(par)
        tree_of.append(np.repeat(frontier_tree, kids))
        frontier = new
        frontier_tree = tree_of[-1]
    parent = np.concatenate(parents)
    tree = np.concatenate(tree_of)
    child = np.arange(next_id, dtype=np.int64)
    has_parent = parent >= 0
    g = WeightedGraph.from_arrays(next_id, parent[has_parent], child[has_parent],
                                  truncated=bool(truncated.any()))
    return PoissonForest(g, roots, tree, truncated, sizes)


def gen_poisson_tree(d: float, seed: int, node_cap: int = 10**6) -> WeightedGraph:
    """One T(d) tree rooted at vertex 0, vertices in breadth-first order."""
    return gen_poisson_forest(d, 1, seed, node_cap).graph


@dataclass(frozen=True, eq=False)
class LocationSet:
    """User positions: integer ids, planar coordinates in meters, floor index."""

    ids: np.ndarray
    x: np.ndarray
    y: np.ndarray
    floor: np.ndarray

    def __post_init__(self):
        ids = _frozen(np.asarray(self.ids, dtype=np.int64))
        x = _frozen(np.asarray(self.x, dtype=np.float64))
        y = _frozen(np.asarray(self.y, dtype=np.float64))
        fl = _frozen(np.asarray(self.floor, dtype=np.int64))
        if not (ids.shape == x.shape == y.shape == fl.shape) or ids.ndim != 1:
            raise ValidationError("location columns must be 1-D and equally long")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
            raise ValidationError("coordinates must be finite")
        uniq, counts = np.unique(ids, return_counts=True)
        if np.any(counts > 1):
            raise ValidationError(f"duplicate location id {int(uniq[counts > 1][0])}")
        for name, arr in (("ids", ids), ("x", x), ("y", y), ("floor", fl)):
            object.__setattr__(self, name, arr)

    def __len__(self) -> int:
        return int(self.ids.size)

    def equals(self, other: "LocationSet") -> bool:
        return all(np.array_equal(getattr(self, f), getattr(other, f)) for f in ("ids", "x", "y", "floor"))


def uniform_disk_locations(n: int, radius: float, seed: int, floor: int = 0) -> LocationSet:
    """``n`` users uniform on a disk of ``radius`` meters centred at the origin."""
    if n < 1 or not radius > 0:
        raise InvalidParameterError("need n >= 1 and radius > 0")
    rng = make_rng(seed, STREAM_LOCATIONS)
    r = radius * np.sqrt(rng.random(n))
    theta = 2 * np.pi * rng.random(n)
    return LocationSet(np.arange(n), r * np.cos(theta), r * np.sin(theta), np.full(n, floor))


def gen_geometric(locs: LocationSet, L: float) -> WeightedGraph:
    """Edge between two users iff they share a floor and are closer than ``L``."""
    L = float(L)
    if not L > 0:
        raise InvalidParameterError("sharing range L must be > 0")
    order = np.argsort(locs.ids, kind="stable")
    pos = np.column_stack([locs.x[order], locs.y[order]])
    floors = locs.floor[order]
    a_parts, b_parts = [], []
    for fl in np.unique(floors):
        members = np.flatnonzero(floors == fl)
        if members.size < 2:
            continue
        pairs = cKDTree(pos[members]).query_pairs(L, output_type="ndarray")
        if pairs.size == 0:
            continue
        a, b = members[pairs[:, 0]], members[pairs[:, 1]]
        dist = np.hypot(*(pos[a] - pos[b]).T)
        keep = dist < L
        a_parts.append(a[keep])
        b_parts.append(b[keep])
    if a_parts:
        a = np.concatenate(a_parts)
        b = np.concatenate(b_parts)
    else:
        a = b = np.empty(0, dtype=np.int64)
    length = np.hypot(*(pos[a] - pos[b]).T) if a.size else np.empty(0)
    return WeightedGraph.from_arrays(len(locs), a, b, edge_length=length, pos=pos)


def assign_weights(g: WeightedGraph, dist: WeightDistribution, seed: int) -> WeightedGraph:
    """Draw i.i.d. edge weights in canonical edge order."""
    rng = make_rng(seed, STREAM_WEIGHTS)
    return g.with_weights(dist.sample(rng, g.m))


# ---------------------------------------------------------------------------
# files
# ---------------------------------------------------------------------------


def format_graph(g: WeightedGraph) -> str:
    """Text format: ``n m`` then ``i j w`` per edge; floats use repr so a
    save/load round trip is bit-exact."""
    w = g.require_weights()
    lines = [f"{g.n} {g.m}"]
    lines.extend(f"{i} {j} {x!r}" for i, j, x in zip(g.u.tolist(), g.v.tolist(), w.tolist()))
    return "\n".join(lines) + "\n"


def save_graph(g: WeightedGraph, path) -> None:
    Path(path).write_text(format_graph(g))


def load_graph(path) -> WeightedGraph:
    text = Path(path).read_text().splitlines()
    if not text:
        raise ParseError("empty graph file", 1)
    try:
        n, m = (int(t) for t in text[0].split())
    except ValueError:
        raise ParseError("header must be 'n m'", 1) from None
    edges = []
    for lineno, line in enumerate(text[1:], start=2):
        if not line.strip():
            continue
        parts = line.split()
        try:
            if len(parts) != 3:
                raise ValueError
            edges.append((int(parts[0]), int(parts[1]), float(parts[2])))
        except ValueError:
            raise ParseError(f"expected 'i j w', got {line!r}", lineno) from None
    if len(edges) != m:
        raise ParseError(f"header announces {m} edges, file has {len(edges)}", 1)
    return WeightedGraph.from_edges(n, edges)


LOCATION_HEADER = ["id", "x", "y", "floor"]


def load_locations(path) -> LocationSet:
    """Read ``id,x,y,floor`` CSV (header required)."""
    rows = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != LOCATION_HEADER:
            raise ParseError(f"header must be {','.join(LOCATION_HEADER)}", 1)
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            try:
                if len(row) != 4:
                    raise ValueError
                rec = (int(row[0]), float(row[1]), float(row[2]), int(row[3]))
            except ValueError:
                raise ParseError(f"malformed record {','.join(row)!r}", lineno) from None
            if not (math.isfinite(rec[1]) and math.isfinite(rec[2])):
                raise ParseError("coordinates must be finite", lineno)
            rows.append(rec)
    if not rows:
        return LocationSet(np.empty(0), np.empty(0), np.empty(0), np.empty(0))
    ids, x, y, fl = zip(*rows)
    return LocationSet(np.array(ids), np.array(x), np.array(y), np.array(fl))


def save_locations(locs: LocationSet, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(LOCATION_HEADER)
        for rec in zip(locs.ids.tolist(), locs.x.tolist(), locs.y.tolist(), locs.floor.tolist()):
            w.writerow([rec[0], repr(rec[1]), repr(rec[2]), rec[3]])
