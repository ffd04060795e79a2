import math

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from leonet.errors import UndefinedMetricError
from leonet.metrics import (
    all_sources,
    betweenness,
    clustering_all,
    component_sizes,
    connected_components,
    diameter_apl,
    divergence,
    largest_component_label,
    local_clustering,
)

from oracles import (
    betweenness_oracle,
    clustering_oracle,
    components_oracle,
    diameter_apl_oracle,
    floyd_warshall,
    random_connected_graph,
    to_csr,
)


def ring(n):
    return [(i, (i + 1) % n) if i < (i + 1) % n else ((i + 1) % n, i) for i in range(n)]


@st.composite
def connected_graphs(draw, max_nodes=40):
    n = draw(st.integers(3, max_nodes))
    seed = draw(st.integers(0, 2**32 - 1))
    extra = draw(st.sampled_from([0.0, 0.05, 0.1, 0.2]))
    return n, random_connected_graph(np.random.default_rng(seed), n, extra)


@st.composite
def any_graphs(draw, max_nodes=30):
    n = draw(st.integers(1, max_nodes))
    pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
    if not pairs:
        return n, []
    edges = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=3 * n))
    return n, sorted(edges)


# --- worked examples -------------------------------------------------------


def test_six_cycle_diameter_and_apl():
    d, apl = diameter_apl(to_csr(6, ring(6)))
    assert d == 3
    assert apl == pytest.approx(1.8, abs=1e-12)


def test_clustering_worked_example():
    # v=0 has neighbours 1, 2, 3 and only the edge 1-2 among them
    a = to_csr(4, [(0, 1), (0, 2), (0, 3), (1, 2)])
    assert local_clustering(a, 0) == pytest.approx(1 / 3)
    assert clustering_all(a)[0] == pytest.approx(1 / 3)


def test_divergence_worked_value():
    assert divergence([1, 1, 0, 0]) == pytest.approx(0.5)


def test_star_betweenness():
    # every leaf-to-leaf path runs through the hub
    a = to_csr(5, [(0, k) for k in range(1, 5)])
    bc = betweenness(a, threads=1)
    assert bc[0] == pytest.approx(1.0)
    assert np.all(bc[1:] == 0)


def test_path_graph_betweenness_matches_closed_form():
    n = 7
    bc = betweenness(to_csr(n, [(i, i + 1) for i in range(n - 1)]))
    expected = [2 * i * (n - 1 - i) / ((n - 1) * (n - 2)) for i in range(n)]
    np.testing.assert_allclose(bc, expected, atol=1e-12)


def test_torus_diameter_is_sum_of_half_sides():
    P, S = 6, 10
    edges = set()
    for p in range(P):
        for s in range(S):
            u = p * S + s
            for v in (p * S + (s + 1) % S, ((p + 1) % P) * S + s):
                edges.add((min(u, v), max(u, v)))
    d, _ = diameter_apl(to_csr(P * S, sorted(edges)))
    assert d == P // 2 + S // 2


# --- oracle equivalence on many random graphs ------------------------------


@pytest.mark.parametrize("seed", range(120))
def test_random_graph_oracle_equivalence(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(3, 41))
    edges = random_connected_graph(rng, n, extra=float(rng.choice([0.0, 0.05, 0.1, 0.2])))
    a = to_csr(n, edges)

    np.testing.assert_allclose(betweenness(a, threads=2), betweenness_oracle(n, edges), rtol=0, atol=1e-9)
    assert list(clustering_all(a)) == clustering_oracle(n, edges)
    assert diameter_apl(a) == diameter_apl_oracle(n, edges)


@settings(max_examples=60, deadline=None)
@given(connected_graphs())
def test_betweenness_matches_networkx(graph):
    n, edges = graph
    g = nx.Graph()
    g.add_nodes_from(range(n))
    g.add_edges_from(edges)
    ref = nx.betweenness_centrality(g, normalized=True)
    np.testing.assert_allclose(betweenness(to_csr(n, edges)), [ref[v] for v in range(n)], atol=1e-12)


def test_weighted_betweenness_matches_networkx():
    rng = np.random.default_rng(7)
    for _ in range(20):
        n = int(rng.integers(4, 30))
        edges = random_connected_graph(rng, n, 0.15)
        w = rng.integers(1, 6, size=len(edges)).astype(float)
        a = to_csr(n, edges)
        lookup = {(u, v): w[k] for k, (u, v) in enumerate(edges)}
        lookup.update({(v, u): x for (u, v), x in list(lookup.items())})
        rows = np.repeat(np.arange(n), np.diff(a.indptr))
        csr_w = np.array([lookup[(int(r), int(c))] for r, c in zip(rows, a.indices)])
        got = betweenness(a, weights=csr_w)
        g = nx.Graph()
        g.add_nodes_from(range(n))
        g.add_weighted_edges_from((u, v, lookup[(u, v)]) for u, v in edges)
        ref = nx.betweenness_centrality(g, normalized=True, weight="weight")
        np.testing.assert_allclose(got, [ref[v] for v in range(n)], atol=1e-12)
        stats = all_sources(a, weights=csr_w)
        d = floyd_warshall(n, edges, w)
        np.testing.assert_allclose(stats.ecc, [max(row) for row in d])


# --- properties -------------------------------------------------------------


@settings(max_examples=80, deadline=None)
@given(any_graphs())
def test_components_match_union_find(graph):
    n, edges = graph
    count, labels = connected_components(to_csr(n, edges))
    assert count == components_oracle(n, edges)
    assert component_sizes(labels).sum() == n
    for u, v in edges:
        assert labels[u] == labels[v]


@settings(max_examples=80, deadline=None)
@given(any_graphs())
def test_metric_ranges(graph):
    n, edges = graph
    a = to_csr(n, edges)
    bc = betweenness(a)
    assert np.all(bc >= 0) and np.all(bc <= 1 + 1e-12)
    c = clustering_all(a)
    assert np.all(c >= 0) and np.all(c <= 1)
    if edges:
        d, apl = diameter_apl(a)
        assert 1 <= apl <= d <= n - 1


@settings(max_examples=40, deadline=None)
@given(connected_graphs(), st.integers(1, 4))
def test_results_independent_of_thread_count(graph, threads):
    n, edges = graph
    a = to_csr(n, edges)
    one = all_sources(a, threads=1)
    many = all_sources(a, threads=threads)
    assert np.array_equal(one.bc_raw, many.bc_raw)
    assert np.array_equal(one.ecc, many.ecc)


def test_block_partition_deterministic_on_large_graph():
    rng = np.random.default_rng(3)
    n = 700  # several source blocks
    a = to_csr(n, random_connected_graph(rng, n, 0.004))
    assert np.array_equal(all_sources(a, threads=1).bc_raw, all_sources(a, threads=3).bc_raw)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(0, 1e6, allow_nan=False), min_size=1, max_size=50))
def test_divergence_bounds(values):
    x = np.asarray(values)
    div = divergence(x)
    if not x.any():
        assert div == 0.0
    else:
        assert 1 / len(x) - 1e-12 <= div <= 1 + 1e-12


@settings(max_examples=100, deadline=None)
@given(
    st.lists(st.floats(1e-3, 1e3), min_size=1, max_size=50),
    st.floats(1e-3, 1e3),
)
def test_divergence_scale_invariant(values, c):
    assert divergence(np.asarray(values) * c) == pytest.approx(divergence(values), rel=1e-9)


@given(st.integers(1, 200), st.floats(1e-6, 1e6))
def test_divergence_uniform_is_one(n, v):
    assert divergence([v] * n) == pytest.approx(1.0)


def test_divergence_single_hot_station_is_lower_bound():
    assert divergence([0, 0, 5, 0]) == pytest.approx(0.25)


def test_divergence_empty_undefined():
    with pytest.raises(UndefinedMetricError):
        divergence([])


def test_local_clustering_unknown_node():
    with pytest.raises(KeyError):
        local_clustering(to_csr(3, [(0, 1)]), 5)


def test_largest_component_tie_goes_to_smallest_node():
    # components {0,1} and {2,3} are equal in size
    _, labels = connected_components(to_csr(5, [(2, 3), (0, 1)]))
    assert 0 in np.flatnonzero(labels == largest_component_label(labels))


def test_per_component_scope():
    edges = [(0, 1), (1, 2), (3, 4)]
    res = diameter_apl(to_csr(6, edges), scope="per_component")
    assert res[0] == (2.0, pytest.approx(4 / 3))
    assert res[1] == (1.0, 1.0)
    assert res[2] == (0.0, 0.0)


def test_edgeless_graph_has_no_diameter():
    with pytest.raises(UndefinedMetricError):
        diameter_apl(to_csr(3, np.zeros((0, 2), dtype=int)))


def test_apl_is_finite_mean_over_connected_pairs():
    d, apl = diameter_apl(to_csr(7, [(0, 1), (1, 2), (2, 3), (5, 6)]))
    assert (d, apl) == (3, pytest.approx(20 / 12))
    assert math.isfinite(apl)
