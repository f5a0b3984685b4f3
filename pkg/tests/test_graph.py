from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from d2dmatch import (UNIFORM_12, InvalidParameterError, LocationSet, ParseError,
                      ValidationError, WeightDistribution, WeightedGraph, assign_weights,
                      gen_geometric, gen_gnp, gen_grid, gen_line, gen_poisson_forest,
                      gen_poisson_tree, load_graph, load_locations, save_graph, save_locations,
                      uniform_disk_locations)
from d2dmatch.graph import derive_seed, make_rng


# ---------------------------------------------------------------- distributions


def test_distribution_parse_and_literal_round_trip():
    d = WeightDistribution.parse("2:0.25, 1:0.75")
    assert d.values == (1.0, 2.0) and d.probs == (0.75, 0.25)
    assert WeightDistribution.parse(d.literal()) == d


@pytest.mark.parametrize("values,probs", [
    ((), ()),
    ((1, 1), (0.5, 0.5)),
    ((2, 1), (0.5, 0.5)),
    ((-1, 1), (0.5, 0.5)),
    ((1, 2), (0.5, 0.6)),
    ((1, 2), (1.2, -0.2)),
    ((1,), (0.5, 0.5)),
])
def test_distribution_rejects_invalid(values, probs):
    with pytest.raises(InvalidParameterError):
        WeightDistribution(values, probs)


@pytest.mark.parametrize("literal", ["", "1", "1:0.5,x:0.5", "1:0.5:3"])
def test_distribution_literal_errors(literal):
    with pytest.raises(InvalidParameterError):
        WeightDistribution.parse(literal)


def test_distribution_cdf_and_mean_exact():
    assert UNIFORM_12.cdf() == [0, Fraction(1, 2), 1]
    assert UNIFORM_12.mean == Fraction(3, 2)


# ---------------------------------------------------------------- grid / line


@pytest.mark.parametrize("rows,cols,n,m", [(1, 4, 4, 3), (2, 2, 4, 4), (3, 3, 9, 12), (4, 7, 28, 45)])
def test_grid_counts(rows, cols, n, m):
    g = gen_grid(rows, cols)
    assert (g.n, g.m) == (n, m)
    assert m == rows * (cols - 1) + cols * (rows - 1)


def test_grid_layout_and_degrees():
    g = gen_grid(1, 4)
    assert g.edges() == [(0, 1, 0.0), (1, 2, 0.0), (2, 3, 0.0)]
    deg = gen_grid(3, 3).degrees.reshape(3, 3)
    assert deg[0, 0] == 2 and deg[0, 1] == 3 and deg[1, 1] == 4
    # row-major: vertex 4 = (row 1, col 1) touches 1, 3, 5, 7
    assert gen_grid(3, 3).neighbors(4).tolist() == [1, 3, 5, 7]


@pytest.mark.parametrize("rows,cols", [(0, 3), (3, 0), (1, 1), (-1, 2)])
def test_grid_rejects_bad_dimensions(rows, cols):
    with pytest.raises(InvalidParameterError):
        gen_grid(rows, cols)


def test_line_is_one_row_grid():
    assert gen_line(5).same_structure(gen_grid(1, 5))


# ---------------------------------------------------------------- G(n, p)


@pytest.mark.parametrize("p,m", [(0.0, 0), (1.0, 10)])
def test_gnp_extremes(p, m):
    assert gen_gnp(5, p, 1).m == m


@pytest.mark.parametrize("p", [-0.1, 1.5, float("nan")])
def test_gnp_rejects_bad_p(p):
    with pytest.raises(InvalidParameterError):
        gen_gnp(5, p, 1)


@pytest.mark.parametrize("n,p", [(50, 0.3), (2000, 0.002), (10, 0.9)])
def test_gnp_deterministic_and_simple(n, p):
    a, b = gen_gnp(n, p, 42), gen_gnp(n, p, 42)
    assert a.same_structure(b)
    assert np.all(a.u < a.v)
    key = a.u * n + a.v
    assert np.all(np.diff(key) > 0)  # canonical order, no duplicates


def test_gnp_sparse_edge_count_binomial():
    n, p = 10**4, 0.5 / 10**4
    counts = np.array([gen_gnp(n, p, derive_seed(7, s)).m for s in range(1000)])
    pairs = n * (n - 1) / 2
    mean, sd = pairs * p, np.sqrt(pairs * p * (1 - p))
    # the mean of 1000 draws sits within 3 standard errors of the binomial mean
    assert abs(counts.mean() - mean) < 3 * sd / np.sqrt(counts.size)
    assert abs(counts.std() / sd - 1) < 0.1


def test_gnp_dense_pair_frequency_uniform():
    n = 30
    hits = np.zeros((n, n))
    for s in range(400):
        g = gen_gnp(n, 0.3, s)
        hits[g.u, g.v] += 1
    iu = np.triu_indices(n, 1)
    freq = hits[iu] / 400
    assert abs(freq.mean() - 0.3) < 0.01
    assert freq.min() > 0.15 and freq.max() < 0.45


# ---------------------------------------------------------------- Poisson trees


def _is_tree(g):
    if g.n == 1:
        return g.m == 0
    if g.m != g.n - 1:
        return False
    seen = np.zeros(g.n, bool)
    stack = [0]
    seen[0] = True
    while stack:
        x = stack.pop()
        for y in g.neighbors(x):
            if not seen[y]:
                seen[y] = True
                stack.append(int(y))
    return bool(seen.all())


def test_poisson_tree_is_tree_and_bfs_ordered():
    for s in range(50):
        g = gen_poisson_tree(1.5, s, node_cap=200)
        if not g.truncated:
            assert _is_tree(g)
        assert np.all(g.u < g.v)  # parents precede children


def test_poisson_tree_tiny_d_is_single_root():
    sizes = [gen_poisson_tree(1e-9, s, 100).n for s in range(200)]
    assert sizes.count(1) == 200


@pytest.mark.parametrize("d,trees,tol", [(0.5, 10**5, 0.02), (0.9, 10**5, 0.05)])
def test_poisson_tree_mean_size(d, trees, tol):
    forest = gen_poisson_forest(d, trees, seed=3, node_cap=10**6)
    assert not forest.truncated.any()
    assert abs(forest.sizes.mean() / (1 / (1 - d)) - 1) < tol


def test_poisson_forest_truncation_flag():
    forest = gen_poisson_forest(3.0, 20, seed=1, node_cap=50)
    assert forest.truncated.any()
    assert forest.sizes.max() <= 50
    assert forest.graph.truncated


def test_poisson_tree_rejects_bad_parameters():
    with pytest.raises(InvalidParameterError):
        gen_poisson_tree(0.0, 1)
    with pytest.raises(InvalidParameterError):
        gen_poisson_tree(1.0, 1, node_cap=0)


# ---------------------------------------------------------------- geometric


def _locs(xs, floors=None):
    xs = np.asarray(xs, float)
    floors = np.zeros(xs.size, int) if floors is None else np.asarray(floors)
    return LocationSet(np.arange(xs.size), xs, np.zeros(xs.size), floors)


def test_geometric_examples():
    assert gen_geometric(_locs([0, 5]), 10).m == 1
    assert gen_geometric(_locs([0, 5], [0, 1]), 10).m == 0
    g = gen_geometric(_locs([0, 6, 12]), 10)
    assert [(a, b) for a, b, _ in g.edges()] == [(0, 1), (1, 2)]
    assert np.allclose(g.edge_length, [6, 6])


def test_geometric_threshold_is_strict():
    assert gen_geometric(_locs([0, 10]), 10).m == 0
    assert gen_geometric(_locs([0, 9.999]), 10).m == 1


def test_geometric_orders_vertices_by_id():
    locs = LocationSet(np.array([30, 10, 20]), np.array([0.0, 100.0, 5.0]), np.zeros(3), np.zeros(3))
    g = gen_geometric(locs, 10)
    # ids sorted: 10 -> 0 (x=100), 20 -> 1 (x=5), 30 -> 2 (x=0)
    assert [(a, b) for a, b, _ in g.edges()] == [(1, 2)]


def test_geometric_matches_brute_force():
    locs = uniform_disk_locations(300, 100.0, seed=4)
    locs = LocationSet(locs.ids, locs.x, locs.y, np.arange(300) % 2)
    g = gen_geometric(locs, 15.0)
    pts = np.column_stack([locs.x, locs.y])
    dist = np.hypot(*(pts[:, None, :] - pts[None, :, :]).transpose(2, 0, 1))
    same = locs.floor[:, None] == locs.floor[None, :]
    want = np.argwhere(np.triu((dist < 15.0) & same, 1))
    got = np.column_stack([g.u, g.v])
    assert np.array_equal(got, want)


def test_geometric_rejects_bad_range():
    with pytest.raises(InvalidParameterError):
        gen_geometric(_locs([0, 1]), 0)


# ---------------------------------------------------------------- weights


def test_assign_weights_degenerate_and_deterministic():
    g = gen_grid(5, 5)
    three = WeightDistribution((3.0,), (1.0,))
    assert np.all(assign_weights(g, three, 1).weights == 3.0)
    a = assign_weights(g, UNIFORM_12, 9).weights
    b = assign_weights(g, UNIFORM_12, 9).weights
    assert np.array_equal(a, b)
    assert not np.array_equal(a, assign_weights(g, UNIFORM_12, 10).weights)


def test_assign_weights_frequency():
    g = gen_line(10**6 + 1)
    w = assign_weights(g, UNIFORM_12, 5).weights
    assert set(np.unique(w)) == {1.0, 2.0}
    assert abs(np.mean(w == 2.0) - 0.5) < 0.003 * 0.5


def test_rng_streams_are_independent_and_stable():
    a = make_rng(1, 2).random(5)
    b = make_rng(1, 2).random(5)
    c = make_rng(1, 3).random(5)
    assert np.array_equal(a, b) and not np.array_equal(a, c)
    assert derive_seed(1, 2) == derive_seed(1, 2) != derive_seed(1, 3)
    with pytest.raises(InvalidParameterError):
        make_rng(-1)
    with pytest.raises(InvalidParameterError):
        make_rng(2**64)


# ---------------------------------------------------------------- graph model


@pytest.mark.parametrize("edges", [
    [(0, 0, 1.0)],
    [(0, 1, 1.0), (1, 0, 2.0)],
    [(0, 5, 1.0)],
    [(0, 1, -1.0)],
])
def test_graph_validation(edges):
    with pytest.raises(ValidationError):
        WeightedGraph.from_edges(3, edges)


def test_graph_is_immutable_and_symmetric():
    g = assign_weights(gen_grid(3, 4), UNIFORM_12, 2)
    with pytest.raises(ValueError):
        g.weights[0] = 5
    indptr, nbr, eid = g.csr
    for x in range(g.n):
        for y, e in zip(nbr[indptr[x]:indptr[x + 1]], eid[indptr[x]:indptr[x + 1]]):
            assert x in g.neighbors(y)
            assert {int(g.u[e]), int(g.v[e])} == {x, int(y)}


# ---------------------------------------------------------------- files


def test_graph_file_round_trip_bit_exact(tmp_path):
    rng = np.random.default_rng(0)
    g = gen_gnp(40, 0.2, 3).with_weights(rng.random(gen_gnp(40, 0.2, 3).m) * 1e3)
    path = tmp_path / "g.txt"
    save_graph(g, path)
    h = load_graph(path)
    assert g.same_structure(h)
    assert path.read_text().splitlines()[0] == f"{g.n} {g.m}"


@pytest.mark.parametrize("text,line", [
    ("", 1),
    ("3\n", 1),
    ("3 1\n0 1\n", 2),
    ("3 2\n0 1 1.0\n1 x 2.0\n", 3),
    ("3 2\n0 1 1.0\n", 1),
])
def test_graph_file_parse_errors(tmp_path, text, line):
    p = tmp_path / "bad.txt"
    p.write_text(text)
    with pytest.raises(ParseError) as exc:
        load_graph(p)
    assert exc.value.line == line
    assert f"line {line}" in str(exc.value)


def test_locations_examples(tmp_path):
    p = tmp_path / "one.csv"
    p.write_text("id,x,y,floor\n1,0.0,0.0,1")
    locs = load_locations(p)
    assert len(locs) == 1 and locs.floor[0] == 1
    dup = tmp_path / "dup.csv"
    dup.write_text("id,x,y,floor\n7,0,0,1\n7,1,1,1\n")
    with pytest.raises(ValidationError, match="duplicate"):
        load_locations(dup)


@pytest.mark.parametrize("body,line", [
    ("id,x,y\n1,0,0\n", 1),
    ("id,x,y,floor\n1,0,0\n", 2),
    ("id,x,y,floor\n1,0,0,1\n2,a,0,1\n", 3),
    ("id,x,y,floor\n1,inf,0,1\n", 2),
])
def test_locations_parse_errors(tmp_path, body, line):
    p = tmp_path / "bad.csv"
    p.write_text(body)
    with pytest.raises(ParseError) as exc:
        load_locations(p)
    assert exc.value.line == line


def test_locations_round_trip(tmp_path):
    locs = uniform_disk_locations(300, 1000.0, seed=8, floor=2)
    p = tmp_path / "locs.csv"
    save_locations(locs, p)
    again = load_locations(p)
    assert len(again) == 300 and locs.equals(again)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**64 - 1), st.integers(2, 60), st.floats(0, 1))
def test_generators_deterministic_for_any_seed(seed, n, p):
    assert gen_gnp(n, p, seed).same_structure(gen_gnp(n, p, seed))
    a = assign_weights(gen_gnp(n, p, seed), UNIFORM_12, seed)
    b = assign_weights(gen_gnp(n, p, seed), UNIFORM_12, seed)
    assert a.same_structure(b)
    assert gen_poisson_tree(1.2, seed, 500).same_structure(gen_poisson_tree(1.2, seed, 500))


@pytest.mark.parametrize("p", [5e-324, 1e-300, 1e-20])
def test_gnp_tiny_p_terminates(p):
    assert gen_gnp(1000, p, 1).m == 0


def test_distribution_exact_view():
    d = WeightDistribution.parse("1:0.9,2:0.1").exact()
    assert d.probs == (Fraction(9, 10), Fraction(1, 10))
    assert d.values == (Fraction(1), Fraction(2))
    assert UNIFORM_12.exact() == UNIFORM_12
