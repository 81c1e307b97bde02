import math
import os

import numpy as np
import pytest
import scipy.sparse as sp
from scipy.sparse.linalg import spsolve

from rigwalk import walk
from rigwalk.experiments import random_connected_graph
from rigwalk.genrand import RngStream, sample_graph
from rigwalk.traversal import is_bipartite, is_connected
from rigwalk.model import (
    CapacityError,
    IntersectionGraph,
    ParameterError,
    complete_graph,
    cycle_graph,
    derive_params,
    path_graph,
    star_graph,
)

EDGE = path_graph(2)
TRIANGLE = complete_graph(3)


def _global_cover_oracle(g, start):
    """Expected cover time from one sparse system over all (mask, vertex) states."""
    n = g.n
    full = (1 << n) - 1
    idx = {}
    for mask in range(1, full):
        for v in range(n):
            if mask >> v & 1:
                idx[mask, v] = len(idx)
    rows, cols, vals = [], [], []
    rhs = np.ones(len(idx))
    for (mask, v), r in idx.items():
        rows.append(r), cols.append(r), vals.append(1.0)
        nb = g.neighbors(v)
        for u in nb:
            nm = mask | (1 << int(u))
            if nm != full:
                rows.append(r), cols.append(idx[nm, int(u)]), vals.append(-1.0 / nb.size)
    A = sp.csr_matrix((vals, (rows, cols)), shape=(len(idx), len(idx)))
    x = spsolve(A, rhs)
    return float(x[idx[1 << start, start]])


def _dense_mixing(g, eps, cap=10_000):
    A = g.to_scipy().toarray().astype(float)
    P = A / A.sum(1, keepdims=True)
    pi = A.sum(1) / A.sum()
    M = np.eye(g.n)
    for t in range(cap):
        if np.abs(M - pi).max() <= eps:
            return t
        M = M @ P


# -- exact oracle --------------------------------------------------------------

def test_exact_small_closed_forms():
    assert walk.exact_cover_time(EDGE, 0) == pytest.approx(1.0, abs=1e-12)
    assert walk.exact_cover_time(complete_graph(4), 0) == pytest.approx(5.5, abs=1e-10)
    assert walk.exact_cover_time(cycle_graph(4), 0) == pytest.approx(6.0, abs=1e-10)
    for s in range(8):
        assert walk.exact_cover_time(cycle_graph(8), s) == pytest.approx(28.0, abs=1e-9)


def test_exact_complete_12():
    h = sum(1 / j for j in range(1, 12))
    assert walk.exact_cover_time_all(complete_graph(12)) == pytest.approx(11 * h, abs=1e-9)


def test_exact_matches_global_oracle():
    rng = np.random.default_rng(2024)
    for _ in range(25):
        g = random_connected_graph(int(rng.integers(2, 7)), rng)
        for s in range(g.n):
            assert walk.exact_cover_time(g, s) == pytest.approx(_global_cover_oracle(g, s), rel=1e-10)


def test_exact_capacity():
    with pytest.raises(CapacityError):
        walk.exact_cover_time(path_graph(13), 0)


def test_exact_disconnected():
    g = IntersectionGraph.from_edges(3, [(0, 1)])
    with pytest.raises(walk.WalkError):
        walk.exact_cover_time(g, 0)


# -- Monte Carlo ---------------------------------------------------------------------

def test_cover_walk_single_edge():
    for s in range(20):
        steps, first = walk.cover_walk(EDGE, 0, RngStream(s, 0, "cover"))
        assert steps == 1 and first.tolist() == [0, 1]


def test_cover_walk_first_visits_consistent():
    steps, first = walk.cover_walk(cycle_graph(8), 3, RngStream(1))
    assert first[3] == 0 and first.max() == steps and (first >= 0).all()


def test_cover_walk_disconnected():
    g = IntersectionGraph.from_edges(4, [(0, 1), (2, 3)])
    with pytest.raises(walk.WalkError, match="disconnected"):
        walk.cover_walk(g, 0, RngStream(0))


def test_cover_walk_step_cap():
    with pytest.raises(walk.WalkError, match="step cap"):
        walk.cover_walk(path_graph(50), 0, RngStream(0), step_cap=10)


def test_vertex_transitive_starts_agree():
    est = walk.estimate_cover_time(cycle_graph(8), starts=range(8), trials_per_start=4000, master=3)
    means = np.array([s.mean_cover_steps for s in est.per_start])
    ses = np.array([s.stderr for s in est.per_start])
    grand = means.mean()
    assert (np.abs(means - grand) <= 2 * ses * math.sqrt(1 + 1 / 8) + 1e-9).sum() >= 7
    assert abs(grand - 28) < 3 * ses.mean() / math.sqrt(8)


def test_mean_is_exact_integer_aggregate():
    est = walk.estimate_cover_time(star_graph(4), starts=[0], trials_per_start=101, keep_trials=True)
    s = est.per_start[0]
    assert s.mean_cover_steps == sum(s.per_trial_steps) / 101
    assert s.total_steps == sum(s.per_trial_steps)
    var = np.var(s.per_trial_steps, ddof=1)
    assert s.stderr == pytest.approx(math.sqrt(var / 101))


def test_zero_trials_flag():
    est = walk.estimate_cover_time(cycle_graph(5), trials_per_start=0)
    assert est.error and est.per_start == [] and math.isnan(est.c_empirical)


def test_default_starts_include_extremes():
    g = star_graph(6)
    starts = walk.default_starts(g, master=1)
    assert starts[0] == 1 and starts[1] == 0
    assert len(set(starts)) == len(starts)


def test_determinism_across_threads():
    _, g = sample_graph(derive_params(300, 2, 1, seed=4)[0])
    a = walk.estimate_cover_time(g, trials_per_start=70, master=9, threads=1).to_dict()
    b = walk.estimate_cover_time(g, trials_per_start=70, master=9, threads=4).to_dict()
    assert a == b
    ra = walk.return_stats(g, 5, 10, trials=700, master=2)
    old = os.environ.get("RIGWALK_THREADS")
    os.environ["RIGWALK_THREADS"] = "3"
    try:
        rb = walk.return_stats(g, 5, 10, trials=700, master=2)
    finally:
        if old is None:
            del os.environ["RIGWALK_THREADS"]
        else:
            os.environ["RIGWALK_THREADS"] = old
    assert ra == rb


def test_stationary_occupancy():
    _, g = sample_graph(derive_params(50, 2, 1, seed=1)[0])
    if not is_connected(g):
        pytest.skip("sample disconnected")
    occ = walk.stationary_occupancy(g, 10**6, RngStream(7))
    pi = g.degrees / g.degrees.sum()
    assert np.abs(occ - pi).max() < 0.01


# -- returns ----------------------------------------------------------------------------

def test_return_single_edge():
    r = walk.return_stats(EDGE, 0, 3, trials=500)
    assert r.pbar_v == 1.0 and r.R_T1_mc == 2.0 and r.R_T1 == pytest.approx(2.0)


def test_return_triangle_exact():
    r = walk.return_stats(TRIANGLE, 0, 3, trials=4000)
    assert r.R_T1_exact == pytest.approx(1.5, abs=1e-12)
    assert r.pi_v == pytest.approx(1 / 3)
    assert r.p_v == pytest.approx((1 / 3) / 1.5)
    assert abs(r.R_T1_mc - 1.5) < 4 * r.R_T1_mc_stderr


def test_exact_return_series_matches_dense():
    _, g = sample_graph(derive_params(60, 2, 1, seed=2)[0])
    A = g.to_scipy().toarray().astype(float)
    deg = A.sum(1)
    P = np.divide(A, deg[:, None], out=np.zeros_like(A), where=deg[:, None] > 0)
    v, T = int(np.argmax(deg)), 12
    want, M = [], np.eye(g.n)
    for _ in range(T):
        want.append(M[v, v])
        M = M @ P
    assert np.allclose(walk.exact_return_series(g, v, T), want, atol=1e-12)


def test_return_invariants():
    _, g = sample_graph(derive_params(200, 2, 1, seed=3)[0])
    r = walk.return_stats(g, 0, 15, trials=500)
    assert 0 <= r.pbar_v <= 1 and r.R_T1 >= 1 and 0 < r.p_v <= r.pi_v


def test_return_rejects_small_T():
    with pytest.raises(ParameterError):
        walk.return_stats(TRIANGLE, 0, 1)


# -- mixing -------------------------------------------------------------------------------

def test_mixing_k4():
    assert walk.mixing_time(complete_graph(4), 0.1) == _dense_mixing(complete_graph(4), 0.1) == 2


def test_mixing_c5():
    assert walk.mixing_time(cycle_graph(5), 1e-3) == _dense_mixing(cycle_graph(5), 1e-3) == 29


def test_mixing_random_against_dense():
    _, g = sample_graph(derive_params(80, 2, 1, seed=5)[0])
    if is_bipartite(g) or not is_connected(g):
        pytest.skip("sample not ergodic")
    assert walk.mixing_time(g) == _dense_mixing(g, 80.0**-3)


def test_mixing_rejects_bipartite():
    with pytest.raises(walk.WalkError, match="bipartite"):
        walk.mixing_time(EDGE)


def test_mixing_cap_names_spectral_gap():
    with pytest.raises(walk.WalkError, match="spectral"):
        walk.mixing_time(cycle_graph(101), 1e-12, cap=50)


def test_default_horizon_cap():
    T, capped = walk.default_horizon(cycle_graph(101))
    assert capped and T == 20 * math.ceil(math.log(101))


# -- unvisit ---------------------------------------------------------------------------------

def test_unvisit_empty_window():
    assert walk.unvisit_probability(TRIANGLE, 0, 5, 4) == 1.0


def test_unvisit_k4_long_window():
    assert walk.unvisit_probability(complete_graph(4), 0, 2, 2 + 10**4, trials=200) < 1e-3


def test_unvisit_matches_exact_absorption():
    # walk from uniform start on C6, avoid vertex 0 during steps T..t
    g = cycle_graph(6)
    T, t = 3, 12
    A = g.to_scipy().toarray().astype(float)
    P = A / A.sum(1, keepdims=True)
    dist = np.full(6, 1 / 6) @ np.linalg.matrix_power(P, T)
    Q = P.copy()
    Q[:, 0] = 0.0
    dist[0] = 0.0
    want = (dist @ np.linalg.matrix_power(Q, t - T)).sum()
    got = walk.unvisit_probability(g, 0, T, t, trials=40_000, master=1)
    assert abs(got - want) < 4 * math.sqrt(want * (1 - want) / 40_000)


def test_unvisit_monotone_in_t():
    _, g = sample_graph(derive_params(300, 2, 1, seed=6)[0])
    probs = [walk.unvisit_probability(g, 7, 10, t, trials=500, master=4) for t in range(10, 400, 30)]
    assert all(a >= b for a, b in zip(probs, probs[1:]))


def test_unvisit_prediction():
    assert walk.unvisit_prediction(0.01, 100) == pytest.approx(1.01**-100)


def test_joint_unvisit_le_marginals():
    g = cycle_graph(40)
    j = walk.joint_unvisit_probability(g, 0, 20, 5, 60, trials=2000)
    a = walk.unvisit_probability(g, 0, 5, 60, trials=2000)
    b = walk.unvisit_probability(g, 20, 5, 60, trials=2000)
    assert j <= min(a, b)


# -- merged vertices ------------------------------------------------------------------------

def test_merge_degree_and_ids():
    g = cycle_graph(400)
    mg = walk.merge_vertices(g, 0, 200)
    assert mg.graph.n == 399
    assert mg.degree == g.degree(0) + g.degree(200) == 4
    assert mg.relabel(200) == mg.kappa and mg.relabel(399) == 398
    assert sorted(mg.graph.neighbors(mg.kappa).tolist()) == [1, 199, 200, 398]


def test_merge_precondition():
    with pytest.raises(ParameterError):
        walk.merge_vertices(cycle_graph(30), 0, 5)
    with pytest.raises(ParameterError):
        walk.merge_vertices(cycle_graph(30), 0, 15, min_dist=2)


def test_merged_return_mixture():
    g = cycle_graph(400)
    mg = walk.merge_vertices(g, 0, 200)
    T = 30
    rk = walk.return_stats(mg.graph, mg.kappa, T, trials=20_000, master=1)
    rx = walk.return_stats(g, 0, T, trials=20_000, master=2)
    ry = walk.return_stats(g, 200, T, trials=20_000, master=3)
    qx = g.degree(0) / mg.degree
    pred = qx * rx.pbar_v + (1 - qx) * ry.pbar_v
    se = math.hypot(rk.pbar_stderr, qx * rx.pbar_stderr, (1 - qx) * ry.pbar_stderr)
    assert abs(rk.pbar_v - pred) <= 3 * se


def test_far_pair_and_joint_product():
    params, q = derive_params(2000, 2, 1, seed=0)
    _, g = sample_graph(params)
    assert walk.far_pair(g, min_dist=20) is None
    x, y = walk.far_pair(g, min_dist=4)
    T, _ = walk.default_horizon(g)
    H = walk.window_first_hits(g, [x, y], T, 2000, 20_000)
    ax, ay = (H[:, 0] > 2000).mean(), (H[:, 1] > 2000).mean()
    joint = ((H[:, 0] > 2000) & (H[:, 1] > 2000)).mean()
    assert abs(joint - ax * ay) / (ax * ay) <= 0.30
    mg = walk.merge_vertices(g, x, y, min_dist=4)
    merged = walk.unvisit_probability(mg.graph, mg.kappa, T, 2000, trials=20_000)
    assert abs(merged - joint) / joint <= 0.30
