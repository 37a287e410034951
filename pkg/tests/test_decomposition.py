import math

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bcrank.decomposition import (
    bc_aux,
    bc_aux_all,
    block_cut_tree,
    decompose,
    gamma_fsum,
    out_reach,
    q_weight,
    weights,
)
from bcrank.graph import from_edges
from bcrank.oracles import brute_out_reach, segment_pair_mass

from conftest import corpus, random_graph


def pieces(g):
    d = decompose(g)
    return d, out_reach(d)


def test_g_bt_components_and_out_reach(g_bt):
    d, r = pieces(g_bt)
    assert [c.tolist() for c in d.components] == [[0, 1, 2], [2, 3, 4]]
    assert d.cutpoints.tolist() == [2]
    assert r.get(0, 2) == 3 and r.get(1, 2) == 3
    assert r.get(0, 0) == 1
    w = weights(d, r, [2])
    assert w.gamma == pytest.approx(1.4, abs=1e-15)
    assert w.eta == 1.0
    assert bc_aux(d, r, 2) == pytest.approx(0.4, abs=1e-15)


def test_p4_s3_c4(p4, s3, c4):
    d, r = pieces(p4)
    assert d.ell == 3
    assert bc_aux(d, r, 1) == pytest.approx(1 / 3, abs=1e-15)
    d, r = pieces(s3)
    assert weights(d, r, [0]).gamma == pytest.approx(1.5)
    assert bc_aux(d, r, 0) == pytest.approx(0.5)
    d, r = pieces(c4)
    assert d.ell == 1 and len(d.cutpoints) == 0
    assert r.values[0].tolist() == [1, 1, 1, 1]
    assert weights(d, r, [1]).gamma == 1.0


def test_components_match_networkx():
    for g in corpus(10, 20, 120, seed=5):
        d = decompose(g)
        ours = sorted(tuple(c.tolist()) for c in d.components)
        ref = sorted(tuple(sorted(c)) for c in nx.biconnected_components(g.to_networkx()))
        assert ours == ref
        assert sorted(d.cutpoints.tolist()) == sorted(nx.articulation_points(g.to_networkx()))


def test_edges_partition_into_components():
    for g in corpus(8, 20, 150, seed=6):
        d = decompose(g)
        seen = [tuple(e) for edges in d.component_edges for e in np.sort(edges, axis=1).tolist()]
        assert len(seen) == g.m == len(set(seen))
        for i, edges in enumerate(d.component_edges):
            assert set(np.unique(edges).tolist()) == set(d.components[i].tolist())


def test_block_cut_tree_is_a_tree():
    for g in corpus(8, 20, 150, seed=7):
        d = decompose(g)
        t = block_cut_tree(d)
        assert nx.is_tree(t)
        for (kind_a, a), (kind_b, b) in t.edges():
            cut, comp = (a, b) if kind_a == "v" else (b, a)
            assert {kind_a, kind_b} == {"v", "C"}
            assert cut in d.components[comp]


def test_deep_path_does_not_recurse():
    n = 20000
    g = from_edges([(i, i + 1) for i in range(n - 1)])
    d, r = pieces(g)
    assert d.ell == n - 1
    assert all(int(v.sum()) == n for v in r.values)


@given(st.integers(0, 10**6), st.integers(6, 60), st.sampled_from(["er", "ba", "tree"]))
@settings(max_examples=40, deadline=None)
def test_out_reach_matches_brute_force_and_sums_to_n(seed, n, kind):
    g = random_graph(seed, n, kind)
    d, r = pieces(g)
    brute = brute_out_reach(g, d)
    for i in range(d.ell):
        assert r.values[i].tolist() == brute[i].tolist()
        assert int(r.values[i].sum()) == g.n
        nonc = [j for j, v in enumerate(d.components[i].tolist()) if not d.is_cutpoint(v)]
        assert all(r.values[i][j] == 1 for j in nonc)


@given(st.integers(0, 10**6), st.integers(6, 50))
@settings(max_examples=30, deadline=None)
def test_weights_invariants(seed, n):
    g = random_graph(seed, n, "ba" if seed % 2 else "er")
    d, r = pieces(g)
    rng = np.random.default_rng(seed)
    A = rng.choice(g.n, size=int(rng.integers(1, g.n + 1)), replace=False).tolist()
    w = weights(d, r, A)
    assert w.gamma >= 1.0 - 1e-12
    assert 0.0 < w.eta <= 1.0
    assert weights(d, r, range(g.n)).eta == 1.0
    assert w.gamma == pytest.approx(gamma_fsum(d, r), abs=1e-12)
    # pairwise sum of q over every ordered co-component pair equals gamma
    terms = []
    for i, nodes in enumerate(d.components):
        for s in nodes.tolist():
            for t in nodes.tolist():
                if s != t:
                    terms.append(q_weight(r, i, s, t, g.n))
    assert math.fsum(terms) == pytest.approx(w.gamma, abs=1e-12)


def test_bc_aux_positive_exactly_on_cutpoints():
    g = random_graph(11, 80, "ba")
    d, r = pieces(g)
    aux = bc_aux_all(d, r)
    for v in range(g.n):
        assert (aux[v] > 0) == d.is_cutpoint(v)
        assert aux[v] == bc_aux(d, r, v)


def test_q_weight_matches_broken_full_paths():
    # split every full shortest path into intra-component segments and
    # collect the endpoint mass of each segment
    for seed in range(6):
        g = random_graph(100 + seed, 14, "ba" if seed % 2 else "er")
        d, r = pieces(g)
        mass = segment_pair_mass(g, d)
        for i, nodes in enumerate(d.components):
            for s in nodes.tolist():
                for t in nodes.tolist():
                    if s != t:
                        assert mass.get((i, s, t), 0.0) == pytest.approx(q_weight(r, i, s, t, g.n), abs=1e-12)
        assert set(k[0] for k in mass) <= set(range(d.ell))


def test_q_weight_errors(g_bt):
    d, r = pieces(g_bt)
    with pytest.raises(ValueError):
        q_weight(r, 0, 1, 1, 5)
    with pytest.raises(KeyError):
        q_weight(r, 0, 1, 4, 5)
    with pytest.raises(ValueError):
        weights(d, r, [])
