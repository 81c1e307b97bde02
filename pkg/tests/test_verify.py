import dataclasses
import json
import math
from itertools import combinations

import networkx as nx
import numpy as np
import pytest

from rigwalk import verify
from rigwalk.experiments import random_connected_graph
from rigwalk.genrand import intersection_of, sample_graph
from rigwalk.model import (
    BipartiteGraph,
    GraphParams,
    IntersectionGraph,
    complete_graph,
    cycle_graph,
    derive,
    derive_params,
    path_graph,
    star_graph,
)


def _bip(n, lists, m=None, p=0.3):
    return BipartiteGraph.from_attribute_lists(GraphParams(n, m or max(1, len(lists)), p), lists)


def _nx(g):
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges().tolist())
    return h


def _brute_p2(g):
    h = _nx(g)
    best = math.inf
    for size in range(1, g.n // 2 + 1):
        for S in combinations(range(g.n), size):
            vol = nx.volume(h, S)
            if vol:
                best = min(best, nx.cut_size(h, S) / vol)
    return best


@pytest.fixture(scope="module")
def sample1000():
    params, q = derive_params(1000, 2, 1, seed=3)
    b, g = sample_graph(params)
    return b, g, q


# -- degree profile -----------------------------------------------------------

def test_profile_single_clique():
    b = _bip(3, [[0, 1, 2]])
    prof = verify.degree_profile(b, intersection_of(b))
    assert prof.D == {2: 3}
    assert prof.D_ki == {(2, 1): 3}


def test_singleton_attribute_not_in_wprime():
    b = _bip(4, [[0, 1], [2], [2, 3]])
    prof = verify.degree_profile(b, intersection_of(b))
    assert prof.wprime_size.tolist() == [1, 1, 1, 1]


def test_profile_integrity():
    b = _bip(4, [[0, 1], [2, 3]])
    with pytest.raises(verify.IntegrityError):
        verify.degree_profile(b, path_graph(4))


def test_profile_consistency(sample1000):
    b, g, q = sample1000
    prof = verify.degree_profile(b, g, q)
    assert sum(prof.D.values()) == g.n
    assert sum(k * c for k, c in prof.D.items()) == 2 * g.edge_count
    for k, c in prof.D.items():
        assert sum(v for (kk, _), v in prof.D_ki.items() if kk == k) == c
    small = {v for v in range(g.n) if prof.wprime_size[v] <= 0.1 * math.log(g.n)}
    assert prof.small_set == small


def test_dstar_isolation_rule():
    # vertex 0 is a lone i0-candidate; 5 and 6 are candidates at distance 1 and drop out
    b = _bip(40, [[0, 1], [0, 2], [5, 6], [5, 7], [6, 8]], p=0.05)
    g = intersection_of(b)
    q = dataclasses.replace(derive(b.params), i0=2)
    thr = math.log(40) / math.log(math.log(40)) ** 3
    assert 1 < thr < 2
    prof = verify.degree_profile(b, g, q)
    assert prof.wprime_size[[0, 5, 6]].tolist() == [2, 2, 2]
    assert prof.Dstar_ki0 == {2: 1}


# -- P0, P1 ---------------------------------------------------------------------

def test_p0_examples():
    assert verify.check_P0(complete_graph(3)).passed
    assert not verify.check_P0(path_graph(2)).passed
    assert not verify.check_P0(IntersectionGraph.from_edges(4, [(0, 1), (1, 2), (2, 0)])).passed


def test_p0_against_networkx(sample1000):
    _, g, _ = sample1000
    h = _nx(g)
    assert verify.check_P0(g).passed == (nx.is_connected(h) and not nx.is_bipartite(h))


def test_p1_definition(sample1000):
    _, g, q = sample1000
    v = verify.check_P1(g, q)
    assert v.bound == pytest.approx(math.sqrt(1000) * math.log(1000))
    assert v.statistic == pytest.approx(abs(g.edge_count - 1000**2 * q.m * q.p**2 / 2))


# -- P2 ------------------------------------------------------------------------------

def test_p2_k4():
    v = verify.check_P2(complete_graph(4), "exact")
    assert v.statistic == pytest.approx(2 / 3) and v.passed and not v.estimate


def test_p2_single_edge():
    assert verify.check_P2(path_graph(2), "exact").statistic == pytest.approx(1.0)


def test_p2_star():
    # S = centre + two leaves: 3 cut edges over volume 7
    g = star_graph(5)
    assert verify.conductance_ratio(g, [0]) == 1.0
    assert verify.conductance_ratio(g, [1]) == 1.0
    assert verify.conductance_ratio(g, [0, 1, 2]) == pytest.approx(3 / 7)
    assert verify.check_P2(g, "exact").statistic == pytest.approx(3 / 7)


def test_p2_exact_matches_bruteforce():
    rng = np.random.default_rng(8)
    corpus = [path_graph(6), cycle_graph(8), complete_graph(5), star_graph(7)]
    corpus += [random_connected_graph(int(rng.integers(2, 9)), rng) for _ in range(30)]
    for g in corpus:
        assert verify.check_P2(g, "exact").statistic == pytest.approx(_brute_p2(g), abs=1e-12)


def test_p2_heuristic_is_upper_bound_and_labelled():
    g = cycle_graph(40)
    v = verify.check_P2(g, "heuristic", restarts=16)
    assert v.estimate
    # true minimum on C40 is 2/40 (half the cycle)
    assert v.statistic >= 2 / 40 - 1e-12
    assert v.statistic <= 0.2


def test_p2_exact_size_limit():
    with pytest.raises(ValueError):
        verify.check_P2(cycle_graph(21), "exact")


# -- P3, P4, P5 --------------------------------------------------------------------------

def test_p3_adversarial():
    b = _bip(4, [[0, 1], [0, 2], [0, 3]])
    g = intersection_of(b)
    q = dataclasses.replace(derive(b.params), delta=2)
    prof = verify.degree_profile(b, g, q)
    assert not verify.check_P3(prof, q).passed


def test_p3_empty_attributes():
    b = _bip(5, [[]])
    g = intersection_of(b)
    q = derive(b.params)
    assert verify.check_P3(verify.degree_profile(b, g, q), q).passed


def test_p4_triangle_and_bound():
    b = _bip(3, [[0, 1, 2]])
    q = derive(GraphParams(1000, 21862, 0.001))
    v = verify.check_P4(intersection_of(b), q)
    assert v.statistic == 1
    assert verify.p4_bound(q) == pytest.approx(14.30, abs=5e-3)


def test_p4_against_networkx(sample1000):
    _, g, q = sample1000
    h = _nx(g)
    worst = max(len(set(h[u]) & set(h[v])) for u, v in h.edges())
    assert verify.check_P4(g, q).statistic == worst


def test_p5_clique_and_equality():
    b = _bip(3, [[0, 1, 2]])
    assert verify.check_P5(verify.degree_profile(b, intersection_of(b)), None).passed
    b = _bip(3, [[0, 1], [0, 1]])
    g = intersection_of(b)
    prof = verify.degree_profile(b, g)
    assert g.degree(0) == 1 and prof.wprime_size[0] == 2
    assert verify.check_P5(prof, g).statistic["min_deg_minus_wprime_plus1"] == 0


# -- P6 -------------------------------------------------------------------------------------

def test_p6_path():
    v = verify.check_P6(path_graph(30), a_star=5.0)
    assert v.statistic == 1 and v.passed


def test_p6_c4_boundary():
    b = _bip(4, [[0, 1], [1, 2], [2, 3], [3, 0]])
    v = verify.check_P6(intersection_of(b), a_star=5.0)
    assert v.statistic == 2 and v.passed


def test_p6_violation():
    v = verify.check_P6(IntersectionGraph.from_edges(5, [(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)]), a_star=5.0)
    assert v.statistic == 3 and not v.passed


# -- B-cycles and cycle separation --------------------------------------------------------------

def test_four_link_cycle_iff_shared_pair():
    b = _bip(3, [[0, 1], [0, 1, 2]])
    assert verify.count_four_link_cycles(b) == 1
    assert len(verify.short_b_cycles(b, 4)) == 1
    b = _bip(3, [[0, 1], [1, 2]])
    assert verify.count_four_link_cycles(b) == 0
    assert verify.short_b_cycles(b, 8) == []


def test_short_cycles_against_networkx():
    rng = np.random.default_rng(5)
    for s in range(10):
        lists = [sorted(set(rng.integers(0, 7, size=rng.integers(0, 4)).tolist())) for _ in range(5)]
        b = _bip(7, lists)
        h = nx.Graph()
        h.add_nodes_from(range(12))
        for w, vs in enumerate(lists):
            h.add_edges_from((v, 7 + w) for v in vs)
        want = sum(1 for c in nx.simple_cycles(h, length_bound=8) if len(c) >= 4)
        assert len(verify.short_b_cycles(b, 8)) == want
        want4 = sum(1 for c in nx.simple_cycles(h, length_bound=4) if len(c) == 4)
        assert verify.count_four_link_cycles(b) == want4


def test_fact9_expectation():
    params, q = derive_params(1000, 2, 1)
    n, m, p = params.n, params.m, params.p
    expected = n * (n - 1) * m * (m - 1) * p**4 / 4
    assert expected == pytest.approx(119.4, abs=0.1)
    counts = [verify.count_four_link_cycles(sample_graph(GraphParams(n, m, p, s))[0]) for s in range(40)]
    assert abs(np.mean(counts) - expected) < 4 * np.std(counts) / math.sqrt(40)
    assert math.log(1000) ** 3 == pytest.approx(329.6, abs=0.1)


def test_fact10(sample1000):
    b, _, _ = sample1000
    v = verify.check_fact10(b)
    assert v.statistic == b.clique_sizes().max()
    assert v.bound == pytest.approx(2 * math.log(1000) / math.log(math.log(1000)))


def test_p7_flags_small_threshold(sample1000):
    b, _, q = sample1000
    v = verify.check_P7(b, q)
    assert v.detail["threshold_below_2"] and v.detail["a_star"] == 0.25


def test_p7_detects_close_cycles():
    # two 4-link B-cycles sharing a vertex are at link distance 0
    b = _bip(4, [[0, 1], [0, 1], [0, 2], [0, 2]])
    v = verify.check_P7(b, None, a_star=50.0)
    assert v.detail["short_cycle_count"] >= 2 and not v.passed


# -- P8 ---------------------------------------------------------------------------------------

def test_p8_structure(sample1000):
    b, g, q = sample1000
    prof = verify.degree_profile(b, g, q)
    v = verify.check_P8(prof, q)
    assert v.detail["P8b_applies"]
    assert math.sqrt(math.log(1000)) == pytest.approx(2.628, abs=1e-3)
    assert all(k <= 2 for k in v.statistic["P8b_low_degree"])
    assert v.detail["P8c_I_empty"] and v.detail["P8c"] is False


# -- helpers and report -------------------------------------------------------------------------

def test_psi():
    assert verify.psi(1.0) == 0.0
    assert all(verify.psi(e) > 0 for e in np.linspace(0.01, 0.99, 50))
    assert verify.psi(0.0) == 1.0


def test_bfs_distance():
    g = path_graph(10)
    assert verify.bfs_distance(g, 4, 4) == 0
    assert verify.bfs_distance(g, 0, 9) == 9
    assert verify.bfs_distance(g, 0, 9, cap=5) == math.inf


def test_report_complete_and_stable(sample1000):
    b, g, q = sample1000
    r1 = verify.property_report(b, g, q).to_dict()
    r2 = verify.property_report(b, g, q).to_dict()
    for name in ("P0", "P1", "P2", "P3", "P4", "P5", "P6", "P7", "P8"):
        assert name in r1["verdicts"]
    assert r1["verdicts"]["P2"]["verdict"] == "estimate"
    strip = lambda r: {k: {kk: vv for kk, vv in v.items() if kk != "runtime"} for k, v in r["verdicts"].items()}
    assert strip(r1) == strip(r2)
    assert list(r1["verdicts"]) == sorted(r1["verdicts"])
    json.dumps(r1)


def test_frequencies_shape():
    params, _ = derive_params(200, 2, 1)
    freq = verify.verify_frequencies(params, range(3), ("P0", "F9"))
    assert set(freq) == {"P0", "F9"} and all(t == 3 for _, t in freq.values())
