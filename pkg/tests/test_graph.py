import io

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bcrank.graph import (
    GraphFormatError,
    bfs_count,
    bfs_distances,
    eccentricity_probe,
    from_edges,
    is_connected,
    load_edge_list,
    write_edge_list,
)


def load(text):
    return load_edge_list(io.StringIO(text))


def test_loader_drops_loops_and_duplicates():
    g = load("# comment\n% other comment\n1 2\n2 1\n2 2\n2 3\n\n1 2\n")
    assert g.n == 3 and g.m == 2
    assert g.report.self_loops == 1
    assert g.report.duplicate_edges == 2
    assert g.labels.tolist() == [1, 2, 3]


def test_loader_keeps_largest_component_and_records_dropped_labels(caplog):
    with caplog.at_level("WARNING"):
        g = load("0 1\n1 2\n2 0\n7 8\n")
    assert g.n == 3
    assert g.report.dropped_nodes == 2 and g.report.dropped_edges == 1
    assert g.report.dropped_labels == (7, 8)
    assert "largest component" in caplog.text


def test_loader_labels_are_sorted_dense_ids():
    g = load("100 5\n5 42\n")
    assert g.labels.tolist() == [5, 42, 100]
    assert g.node_of(42) == 1
    assert g.has_label(100) and not g.has_label(6)
    assert sorted(g.neighbors(g.node_of(5)).tolist()) == [1, 2]


@pytest.mark.parametrize("text, where", [("1\n", "line 1"), ("1 2\na b\n", "line 2"), ("1 2.5\n", "line 1")])
def test_loader_rejects_malformed_lines(text, where):
    with pytest.raises(GraphFormatError, match=where):
        load(text)


@pytest.mark.parametrize("text", ["", "# only comments\n", "3 3\n"])
def test_loader_rejects_empty(text):
    with pytest.raises(GraphFormatError):
        load(text)


def test_extra_columns_are_ignored():
    g = load("1 2 0.5\n2 3 7\n")
    assert g.m == 2


@given(st.lists(st.tuples(st.integers(0, 30), st.integers(0, 30)), min_size=1, max_size=80))
@settings(max_examples=60, deadline=None)
def test_round_trip_is_canonical(pairs):
    text = "".join(f"{u} {v}\n" for u, v in pairs)
    if all(u == v for u, v in pairs):
        with pytest.raises(GraphFormatError):
            load(text)
        return
    g = load(text)
    buf = io.StringIO()
    write_edge_list(g, buf)
    g2 = load(buf.getvalue())
    assert g.same_structure(g2)
    buf2 = io.StringIO()
    write_edge_list(g2, buf2)
    assert buf.getvalue() == buf2.getvalue()
    assert is_connected(g)


def test_csr_invariants():
    g = from_edges([(0, 1), (1, 2), (2, 0), (2, 3)])
    assert g.indptr[-1] == len(g.indices) == 2 * g.m
    for v in range(g.n):
        nb = g.neighbors(v)
        assert list(nb) == sorted(nb)
        for u in nb:
            assert v in g.neighbors(u)
    with pytest.raises(ValueError):
        g.indices[0] = 5


def test_bfs_count_matches_networkx():
    h = nx.gnp_random_graph(60, 0.08, seed=3)
    g = from_edges(list(h.edges()), n=60)
    for s in (0, 7, 31):
        res = bfs_count(g, s)
        lengths = nx.single_source_shortest_path_length(h, s)
        for t in range(60):
            if t in lengths:
                assert res.dist[t] == lengths[t]
                if t != s:
                    assert res.sigma[t] == len(list(nx.all_shortest_paths(h, s, t)))
            else:
                assert res.dist[t] == -1 and res.sigma[t] == 0
        assert np.array_equal(bfs_distances(g, s), res.dist)


def test_bfs_restricted():
    g = from_edges([(0, 1), (1, 2), (0, 3), (3, 2)])
    res = bfs_count(g, 0, restrict=[0, 1, 2])
    assert res.dist[2] == 2 and res.sigma[2] == 1 and res.dist[3] == -1
    with pytest.raises(ValueError):
        bfs_count(g, 3, restrict=[0, 1])
    with pytest.raises(IndexError):
        bfs_count(g, 9)


def test_sigma_is_exact_for_huge_counts():
    # a chain of 80 diamonds has 2**80 shortest end-to-end paths
    edges, tip = [], 0
    for k in range(80):
        a, b, nxt = tip + 1, tip + 2, tip + 3
        edges += [(tip, a), (tip, b), (a, nxt), (b, nxt)]
        tip = nxt
    g = from_edges(edges)
    assert bfs_count(g, 0).sigma[tip] == 2**80


def test_eccentricity_probe_bounds_the_diameter(p4):
    assert eccentricity_probe(p4, [0, 1, 2, 3], 1) == 2
    assert 2 * eccentricity_probe(p4, [0, 1, 2, 3], 1) >= 3
    with pytest.raises(ValueError):
        eccentricity_probe(p4, [0, 1], 3)
    with pytest.raises(ValueError):
        eccentricity_probe(p4, [], 0)
