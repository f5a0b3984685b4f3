import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from d2dmatch import (UNIFORM_12, FailureModel, GenSpec, InvalidParameterError, LocationSet,
                      WeightDistribution, mc_ratio, mc_rounds, range_sweep,
                      solve_proposal_probs, tree_approx_error, worst_case_demo)
from d2dmatch.experiments import (bootstrap_ratio_se, interference_counts, is_non_decreasing,
                                  is_unimodal, resolve_jobs, tree_proposal_frequency,
                                  tree_root_weight)
from d2dmatch.analytics import root_expected_weight


# ---------------------------------------------------------------- generator specs


@pytest.mark.parametrize("text,n", [
    ("grid:rows=3,cols=4", 12),
    ("line:n=7", 7),
    ("gnp:n=50,p=0.1", 50),
    ("gnp:n=50,d=2", 50),
    ("disk:n=30,R=100,L=20", 30),
])
def test_genspec_parse_build(text, n):
    spec = GenSpec.parse(text)
    assert spec.n_hint == n
    assert spec.build(1).n == n
    assert GenSpec.parse(str(spec)) == spec


@pytest.mark.parametrize("text", ["cube:n=3", "grid:rows=3", "gnp:n=5", "gnp:n=5,p=0.1,d=1",
                                  "line:n"])
def test_genspec_errors(text):
    with pytest.raises(InvalidParameterError):
        GenSpec.parse(text)


def test_genspec_tree_and_file(tmp_path):
    assert GenSpec.parse("tree:d=0.5,cap=100").build(3).n <= 100
    p = tmp_path / "u.csv"
    p.write_text("id,x,y,floor\n1,0,0,0\n2,3,0,0\n3,100,0,0\n")
    g = GenSpec.parse(f"geometric:path={p},L=10").build(0)
    assert (g.n, g.m) == (3, 1)


# ---------------------------------------------------------------- performance ratio


def test_two_edge_path_ratio_is_one():
    r = mc_ratio("line:n=3", UNIFORM_12, trials=40, seed=5)
    assert r.value == 1.0 and r.mean_of_ratios == 1.0
    assert r.trial_count == 40 and not r.lower_bound


def test_trial_records_respect_bounds():
    r = mc_ratio("gnp:n=60,p=0.08", WeightDistribution((1.0, 2.0, 3.0), (0.3, 0.3, 0.4)),
                 trials=30, seed=2)
    for rec in r.records:
        assert 0.5 * rec.exact_welfare - 1e-9 <= rec.greedy_welfare <= rec.exact_welfare + 1e-9
        assert rec.exact_welfare <= rec.extra["instance_bound"] + 1e-9
    assert 0.5 <= r.value <= 1 and r.std_error >= 0


def test_ratio_deterministic_across_workers():
    a = mc_ratio("grid:rows=8,cols=8", UNIFORM_12, trials=12, seed=99, jobs=1)
    b = mc_ratio("grid:rows=8,cols=8", UNIFORM_12, trials=12, seed=99, jobs=3)
    assert a.to_json(emit_trials=True) == b.to_json(emit_trials=True)
    c = mc_ratio("grid:rows=8,cols=8", UNIFORM_12, trials=12, seed=100, jobs=1)
    assert c.value != a.value


def test_bound_fallback_is_flagged():
    r = mc_ratio("grid:rows=6,cols=6", UNIFORM_12, trials=5, seed=1, exact_limit=10)
    assert r.lower_bound
    assert all(rec.bound_fallback and rec.exact_welfare is None for rec in r.records)
    exact = mc_ratio("grid:rows=6,cols=6", UNIFORM_12, trials=5, seed=1)
    # same instances, the bound is at least the optimum
    assert r.value <= exact.value


def test_dense_gnp_mostly_top_weight():
    n = 400
    r = mc_ratio(f"gnp:n={n},p=0.5", UNIFORM_12, trials=3, seed=4, exact_limit=0)
    for rec in r.records:
        assert rec.extra["top_weight_fraction"] > 1 - 5 / math.sqrt(n)


def test_trials_and_jobs_validated():
    with pytest.raises(InvalidParameterError):
        mc_ratio("line:n=3", UNIFORM_12, trials=0, seed=1)
    with pytest.raises(InvalidParameterError):
        resolve_jobs(0)
    assert resolve_jobs(None) >= 1


def test_bootstrap_se():
    num = np.array([1.0, 2.0, 3.0, 4.0])
    den = np.array([2.0, 2.0, 4.0, 4.0])
    se = bootstrap_ratio_se(num, den, seed=1)
    assert se > 0 and se == bootstrap_ratio_se(num, den, seed=1)
    assert bootstrap_ratio_se(num[:1], den[:1], seed=1) == 0.0


# ---------------------------------------------------------------- rounds


def test_rounds_single_edge():
    rows = mc_rounds("line:n=2", [2], UNIFORM_12, trials=5, seed=1)
    assert rows[0].max == 1 and rows[0].median == 1


def test_rounds_rows_and_determinism():
    a = mc_rounds("gnp:n=100,d=0.9", [100, 1000], UNIFORM_12, trials=10, seed=3)
    b = mc_rounds("gnp:n=100,d=0.9", [100, 1000], UNIFORM_12, trials=10, seed=3, jobs=2)
    assert [r.to_json() for r in a] == [r.to_json() for r in b]
    assert [r.n for r in a] == [100, 1000]
    for r in a:
        assert r.max_over_log_n == pytest.approx(r.max / math.log(r.n))
    with pytest.raises(InvalidParameterError):
        mc_rounds("grid:rows=3,cols=3", [9], UNIFORM_12, trials=1, seed=1)


# ---------------------------------------------------------------- tree approximation


def test_tree_approx_tiny_d():
    r = tree_approx_error(2000, 0.01, UNIFORM_12, trials=50, seed=1)
    assert r.abs_error < 1e-3
    with pytest.raises(InvalidParameterError):
        tree_approx_error(1, 0.5, UNIFORM_12, trials=1, seed=1)


def test_tree_approx_stops_at_ci_target():
    r = tree_approx_error(1000, 0.5, UNIFORM_12, trials=10, seed=2, ci_target=0.02, batch=10)
    assert r.ci_rel < 0.02 or r.trials == 20000
    assert r.trials >= 10


def test_tree_proposal_frequency_matches_fixed_point():
    d = 0.5
    mc = tree_proposal_frequency(d, UNIFORM_12, trees=20000, seed=8)
    y = solve_proposal_probs(d, UNIFORM_12).y
    assert np.all(np.abs(mc.estimate - y) < 4 * mc.std_error + 1e-3)


def test_tree_root_weight_matches_formula():
    d = 0.5
    mc = tree_root_weight(d, UNIFORM_12, trees=50000, seed=9, batch=25000)
    want = root_expected_weight(d, UNIFORM_12)
    assert abs(mc.estimate[0] - want) < 4 * mc.std_error[0]


# ---------------------------------------------------------------- failure model


def test_failure_model_calibration_and_monotonicity():
    fm = FailureModel()
    assert fm.p_fail(50.0, 0) == pytest.approx(0.1)
    d = np.linspace(0, 200, 50)
    assert np.all(np.diff(fm.p_fail(d, 0)) >= 0)
    assert np.all(np.diff(fm.p_fail(30.0, np.arange(20))) >= 0)
    assert fm.p_fail(0.0, 0) == 0.0
    assert np.all(fm.p_fail(d, 5) < 1)


@pytest.mark.parametrize("kw", [{"alpha": -1}, {"gamma": -1}, {"beta": -0.1},
                                {"interference_radius": -5}])
def test_failure_model_rejects_negative(kw):
    with pytest.raises(InvalidParameterError):
        FailureModel(**kw)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 30), st.floats(0.0, 40.0), st.integers(0, 2**32 - 1))
def test_interference_counts_brute_force(k, radius, seed):
    rng = np.random.default_rng(seed)
    pos = rng.random((2 * k, 2)) * 100
    a, b = np.arange(k), np.arange(k, 2 * k)
    got = interference_counts(pos, a, b, radius)
    want = np.zeros(k, dtype=int)
    for i in range(k):
        for j in range(k):
            if i != j:
                ends_i = pos[[a[i], b[i]]]
                ends_j = pos[[a[j], b[j]]]
                dist = np.linalg.norm(ends_i[:, None] - ends_j[None], axis=2)
                want[i] += bool((dist <= radius).any()) if radius > 0 else 0
    assert got.tolist() == want.tolist()


# ---------------------------------------------------------------- range sweep


def test_range_sweep_empty_graph_gives_zero():
    locs = LocationSet(np.arange(3), np.array([0.0, 100.0, 200.0]), np.zeros(3), np.zeros(3))
    out = range_sweep(locs, [10.0, 50.0], FailureModel(), UNIFORM_12, trials=3, seed=1)
    assert [r.value for r in out] == [0.0, 0.0]


def test_range_sweep_without_failures_non_decreasing():
    out = range_sweep((2000, 1000.0), [10, 20, 40, 80], None, UNIFORM_12, trials=6, seed=3)
    means = [r.value for r in out]
    assert is_non_decreasing(means, [r.std_error for r in out])
    assert means[-1] > means[0]
    for r in out:
        assert r.value == pytest.approx(r.extra["expected_per_user"])


def test_range_sweep_expected_matches_sampled():
    out = range_sweep((2000, 1000.0), [40], FailureModel(), UNIFORM_12, trials=30, seed=4)
    r = out[0]
    assert abs(r.value - r.extra["expected_per_user"]) < 4 * r.std_error + 1e-3


def test_range_sweep_validation_and_determinism():
    with pytest.raises(InvalidParameterError):
        range_sweep((100, 100.0), [20, 10], None, UNIFORM_12, trials=1, seed=1)
    a = range_sweep((500, 300.0), [20, 40], FailureModel(), UNIFORM_12, trials=4, seed=7, jobs=1)
    b = range_sweep((500, 300.0), [20, 40], FailureModel(), UNIFORM_12, trials=4, seed=7, jobs=2)
    assert [x.to_json() for x in a] == [x.to_json() for x in b]


# ---------------------------------------------------------------- shape checks


@pytest.mark.parametrize("means,ok", [
    ([1, 3, 5, 4, 2], True),
    ([1, 2, 3, 4, 5], False),
    ([5, 4, 3, 2, 1], False),
    ([1, 5, 1, 5, 1], False),
    ([1, 1.01, 1], False),
])
def test_is_unimodal(means, ok):
    assert is_unimodal(means, [0.1] * len(means)) is ok


def test_is_non_decreasing():
    assert is_non_decreasing([1, 2, 1.95, 3], [0.05] * 4)
    assert not is_non_decreasing([1, 2, 1.0, 3], [0.05] * 4)


# ---------------------------------------------------------------- worst case


@pytest.mark.parametrize("eps,ratio", [(0.01, 0.505), (1.0, 1.0), (0.5, 0.75)])
def test_worst_case_demo(eps, ratio):
    assert worst_case_demo(eps) == pytest.approx(ratio, abs=1e-15)


def test_worst_case_demo_limit_and_errors():
    assert worst_case_demo(1e-9) == pytest.approx(0.5, abs=1e-9)
    with pytest.raises(InvalidParameterError):
        worst_case_demo(0)


@pytest.mark.slow
def test_root_weight_single_value_critical_tree():
    # d = 1 is critical; truncated trees are discarded, which biases the
    # estimate slightly low, so the cap is set high enough to keep that < 1%
    dist = WeightDistribution((2.0,), (1.0,))
    mc = tree_root_weight(1.0, dist, trees=10**5, seed=2, node_cap=10**5, batch=10000)
    want = root_expected_weight(1.0, dist)
    assert want == pytest.approx(0.5106, abs=1e-4)
    assert abs(mc.estimate[0] / want - 1) < 0.01


@pytest.mark.slow
def test_root_weight_ten_million_trees():
    mc = tree_root_weight(0.5, UNIFORM_12, trees=10**7, seed=1)
    want = root_expected_weight(0.5, UNIFORM_12)
    assert mc.discarded == 0
    assert abs(mc.estimate[0] / want - 1) < 0.0005
