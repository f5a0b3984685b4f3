import itertools
import math
from fractions import Fraction

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from d2dmatch import (UNIFORM_12, InvalidParameterError, WeightDistribution, WeightedGraph,
                      assign_weights, exact_match, exact_match_bruteforce, gen_gnp, gen_grid,
                      per_instance_bound, welfare_upper_bound)
from d2dmatch.blossom import max_weight_matching
from d2dmatch.graph import derive_seed
from d2dmatch.greedy import is_matching

from conftest import random_graph, weighted_graphs


def line(ws):
    return WeightedGraph.from_edges(len(ws) + 1, [(i, i + 1, float(w)) for i, w in enumerate(ws)])


def nx_welfare(g):
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_weighted_edges_from(g.edges())
    m = nx.max_weight_matching(h)
    return math.fsum(h[a][b]["weight"] for a, b in m)


# ---------------------------------------------------------------- examples


@pytest.mark.parametrize("solver", [exact_match_bruteforce, exact_match])
@pytest.mark.parametrize("g,welfare", [
    (line([1, 2, 1]), 2.0),
    (line([1, 1.01, 1]), 2.0),
    (WeightedGraph.from_edges(3, [(0, 1, 5.0), (1, 2, 1.0), (0, 2, 1.0)]), 5.0),
    (WeightedGraph.from_edges(4, []), 0.0),
    (line([7]), 7.0),
])
def test_examples(solver, g, welfare):
    r = solver(g)
    assert r.welfare == welfare
    assert is_matching(g, r.matched_edges)


def test_side_edges_chosen_in_worst_case():
    r = exact_match(line([1, 1.01, 1]))
    assert r.pairs() == [(0, 1, 1.0), (2, 3, 1.0)]
    assert r.partner().tolist() == [1, 0, 3, 2]


def test_bruteforce_guard():
    g = gen_grid(4, 4).with_weights(np.ones(24))
    assert exact_match_bruteforce(g).welfare == 8.0
    with pytest.raises(InvalidParameterError):
        exact_match_bruteforce(gen_grid(4, 5).with_weights(np.ones(31)))


def test_to_json():
    obj = exact_match(line([1, 2, 1])).to_json()
    assert obj["solver"] == "exact" and obj["rounds"] is None and obj["welfare"] == 2.0


# ---------------------------------------------------------------- oracle equivalence


@settings(max_examples=500, deadline=None)
@given(weighted_graphs(max_n=9))
def test_exact_equals_bruteforce(g):
    a = exact_match(g)
    b = exact_match_bruteforce(g, max_edges=36)
    assert is_matching(g, a.matched_edges)
    assert math.isclose(a.welfare, b.welfare, rel_tol=1e-12, abs_tol=1e-12)


def test_exact_equals_bruteforce_1000_seeded_instances():
    rng = np.random.default_rng(20)
    for _ in range(1000):
        g = random_graph(rng, n_max=8, real=bool(rng.integers(2)))
        assert math.isclose(exact_match(g).welfare, exact_match_bruteforce(g, 28).welfare,
                            rel_tol=1e-12, abs_tol=1e-12)


@pytest.mark.parametrize("n,p,seed", [(60, 0.1, 1), (200, 0.02, 2), (150, 0.05, 3), (40, 0.5, 4)])
def test_exact_equals_networkx(n, p, seed):
    g = gen_gnp(n, p, seed)
    for w in (assign_weights(g, UNIFORM_12, seed).weights,
              np.random.default_rng(seed).random(g.m) * 100):
        h = g.with_weights(w)
        assert math.isclose(exact_match(h).welfare, nx_welfare(h), rel_tol=1e-12)


def test_blossom_rejects_bad_warm_start():
    with pytest.raises(ValueError):
        max_weight_matching(3, np.array([0, 1]), np.array([1, 2]), np.array([1.0, 2.0]),
                            np.array([0]))


def test_exact_on_large_grid_is_valid():
    g = assign_weights(gen_grid(40, 40), UNIFORM_12, 5)
    r = exact_match(g)
    assert is_matching(g, r.matched_edges)
    assert r.welfare <= per_instance_bound(g)
    assert math.isclose(r.welfare, nx_welfare(g))


# ---------------------------------------------------------------- bounds


@settings(max_examples=300, deadline=None)
@given(weighted_graphs(max_n=9))
def test_per_instance_bound_holds(g):
    assert exact_match_bruteforce(g, 36).welfare <= per_instance_bound(g) + 1e-9


def test_bound_single_edge_and_path():
    assert welfare_upper_bound([1, 1], UNIFORM_12).value == 1.5
    rep = welfare_upper_bound([1, 2, 1], UNIFORM_12)
    assert rep.value == 2.375
    assert rep.per_vertex_terms.tolist() == [0.75, 0.875, 0.75]
    # true optimum on the 3-vertex path is the heavier of its two edges
    true = np.mean([max(a, b) for a, b in itertools.product([1, 2], repeat=2)])
    assert true == 1.75 <= rep.value


def test_bound_degree_zero_and_errors():
    assert welfare_upper_bound([0, 0], UNIFORM_12).value == 0.0
    assert welfare_upper_bound([], UNIFORM_12).value == 0.0
    with pytest.raises(InvalidParameterError):
        welfare_upper_bound([-1], UNIFORM_12)


@pytest.mark.parametrize("n", [2, 3, 5, 10, 31])
def test_bound_grid_closed_form(n):
    value = welfare_upper_bound(gen_grid(n, n).degrees, UNIFORM_12).value
    want = Fraction(31, 32) * n * n - Fraction(n, 8) - Fraction(1, 8)
    assert math.isclose(value, float(want), rel_tol=1e-12)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(0, 12), min_size=1, max_size=10), st.integers(0, 9),
       st.floats(0.0, 3.0))
def test_bound_monotone(degrees, idx, bump):
    dist = WeightDistribution((1.0, 2.0, 4.0), (0.2, 0.5, 0.3))
    base = welfare_upper_bound(degrees, dist).value
    i = idx % len(degrees)
    more = list(degrees)
    more[i] += 1
    assert welfare_upper_bound(more, dist).value >= base - 1e-12
    bigger = WeightDistribution((1.0, 2.0, 4.0 + bump), dist.probs)
    assert welfare_upper_bound(degrees, bigger).value >= base - 1e-12


def test_grid_mean_exact_welfare_below_bound():
    base = gen_grid(10, 10)
    vals = [exact_match(assign_weights(base, UNIFORM_12, derive_seed(11, s))).welfare
            for s in range(200)]
    bound = welfare_upper_bound(base.degrees, UNIFORM_12).value
    se = np.std(vals, ddof=1) / np.sqrt(len(vals))
    assert np.mean(vals) <= bound + 3 * se
