import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rigwalk.model import (
    BipartiteGraph,
    GraphParams,
    IntersectionGraph,
    ParameterError,
    attribute_share_probability,
    complete_graph,
    cycle_graph,
    derive,
    derive_params,
    dumps_bipartite,
    dumps_graph,
    edge_density,
    loads_bipartite,
    loads_graph,
    path_graph,
    star_graph,
)

mp.mp.dps = 40


@pytest.fixture(scope="module")
def base():
    return derive_params(1000, 2.0, 1.0)


def test_derive_params_reference_point(base):
    params, q = base
    assert params.p == pytest.approx(0.001)
    assert params.m == 21862
    assert abs(q.c - 2.0) < 1e-4


def test_realised_c_matches_high_precision(base):
    params, q = base
    n, m, p = params.n, params.m, mp.mpf(params.p)
    c = m * p * (1 - (1 - p) ** (n - 1)) / mp.log(n)
    assert q.c == pytest.approx(float(c), rel=1e-12)


def test_degree_scalars(base):
    _, q = base
    assert q.d0 == pytest.approx(13.8154, abs=1e-4)
    assert q.d1 == pytest.approx(21.862, abs=1e-9)
    assert q.delta == 263
    assert q.delta >= 4 * q.d0 and q.delta >= 12 * q.d1


def test_i0_k0(base):
    _, q = base
    assert q.i0 == 7
    assert 10 * math.e * (math.e - 1) == pytest.approx(46.7077, abs=1e-4)
    assert q.k0 == 327


def test_kappa_and_cbar(base):
    _, q = base
    assert q.kappa == pytest.approx(1 / (1 - math.exp(-1)), rel=1e-4)
    assert q.cbar == pytest.approx(q.kappa * q.c)
    assert q.cbar > q.c
    tiny = derive(GraphParams(10**6, 10, 1e-12))
    assert abs(tiny.kappa - 1) < 1e-5


@pytest.mark.parametrize("c", [1.0, 0.5, 51.0])
def test_rejects_bad_c(c):
    with pytest.raises(ParameterError):
        derive_params(1000, c, 1.0)


def test_rejects_c_one_at_n8():
    with pytest.raises(ParameterError, match="c ln n"):
        derive_params(8, 1.0, 1.0)


@pytest.mark.parametrize("bad", [dict(n=1), dict(m=0), dict(p=0.0), dict(p=1.0)])
def test_graph_params_invariants(bad):
    kw = dict(n=10, m=5, p=0.3) | bad
    with pytest.raises(ParameterError):
        GraphParams(**kw)


def test_realised_c_close_on_grid():
    for n in (1000, 3000, 10**4, 10**5):
        for c in (1.1, 2.0, 5.0):
            for np_ in (0.1, 1.0, 5.0):
                _, q = derive_params(n, c, np_)
                assert abs(q.c - c) <= 1e-3


def test_edge_density_reference(base):
    params, q = base
    pI, pI_hat = edge_density(params)
    exact = 1 - (1 - mp.mpf(params.p) ** 2) ** params.m
    assert pI == pytest.approx(float(exact), rel=1e-12)
    assert pI == pytest.approx(0.021626, abs=2e-6)
    mp2 = params.m * params.p**2
    assert abs(pI - mp2) <= params.m * params.p**4 * params.m
    assert pI_hat == pytest.approx(q.kappa * math.log(1000) / 1000)


def test_edge_density_small_p_limit():
    pI, _ = edge_density(GraphParams(1000, 50, 1e-9))
    assert pI == pytest.approx(50e-18, rel=1e-6)


def test_share_probability_stable():
    p = 1e-9
    assert attribute_share_probability(10**6, p) == pytest.approx(-math.expm1((10**6 - 1) * math.log1p(-p)))
    assert attribute_share_probability(10**6, p) == pytest.approx(1e-3, rel=1e-3)


def _toy_bipartite():
    params = GraphParams(4, 3, 0.5, seed=9)
    return BipartiteGraph.from_attribute_lists(params, [[0, 1, 2], [], [2, 3]])


def test_bipartite_symmetry():
    b = _toy_bipartite()
    for w in range(b.m):
        for v in b.vertices_of(w):
            assert w in b.attributes_of(v)
    assert b.attributes_of(2).tolist() == [0, 2]
    assert b.clique_sizes().tolist() == [3, 0, 2]
    assert b.link_count == 5


def test_bipartite_roundtrip_bytes():
    b = _toy_bipartite()
    text = dumps_bipartite(b)
    assert text.splitlines()[0] == "rig-v1 4 3 0.5 9"
    assert text.splitlines()[1:] == ["0: 0 1 2", "2: 2 3"]
    assert dumps_bipartite(loads_bipartite(text)) == text


def test_graph_roundtrip_bytes():
    g = cycle_graph(5)
    text = dumps_graph(g)
    assert text.splitlines()[0] == "ig-v1 5"
    assert text.splitlines()[1] == "0: 1 4"
    assert dumps_graph(loads_graph(text)) == text


def test_intersection_graph_invariants():
    g = IntersectionGraph.from_edges(5, [(0, 1), (1, 0), (2, 2), (3, 4), (1, 3)])
    assert g.edge_count == 3
    assert g.degrees.sum() == 2 * g.edge_count
    assert g.has_edge(1, 0) and not g.has_edge(2, 2)
    A = g.to_scipy().toarray()
    assert (A == A.T).all() and np.trace(A) == 0


def test_from_adjacency_rejects_asymmetric():
    with pytest.raises(ParameterError):
        IntersectionGraph.from_adjacency([[1], []])


def test_arrays_frozen():
    g = path_graph(3)
    with pytest.raises(ValueError):
        g.indices[0] = 2


def test_named_graphs():
    assert complete_graph(4).edge_count == 6
    assert path_graph(5).edge_count == 4
    assert star_graph(5).degrees.tolist() == [5, 1, 1, 1, 1, 1]


@settings(max_examples=50, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 9), st.integers(0, 9)), max_size=40))
def test_graph_text_roundtrip_property(edges):
    g = IntersectionGraph.from_edges(10, edges)
    h = loads_graph(dumps_graph(g))
    assert np.array_equal(g.indptr, h.indptr) and np.array_equal(g.indices, h.indices)
