import networkx as nx
import numpy as np
import pytest

from bcrank.graph import Graph, from_edges


def graph_from_nx(h: nx.Graph) -> Graph:
    """Largest connected component of ``h``, relabelled ``0..n-1``."""
    big = max(nx.connected_components(h), key=len)
    h = nx.convert_node_labels_to_integers(h.subgraph(big), ordering="sorted")
    return from_edges(list(h.edges()), n=h.number_of_nodes())


def random_graph(seed: int, n: int, kind: str = "er") -> Graph:
    rng = np.random.default_rng(seed)
    if kind == "er":
        p = float(rng.uniform(1.2, 3.0)) / n
        h = nx.gnp_random_graph(n, p, seed=seed)
    elif kind == "ba":
        h = nx.barabasi_albert_graph(n, int(rng.integers(1, 3)), seed=seed)
    elif kind == "tree":
        h = nx.random_labeled_tree(n, seed=seed) if hasattr(nx, "random_labeled_tree") else nx.random_tree(n, seed=seed)
    else:
        raise ValueError(kind)
    g = graph_from_nx(h)
    if g.n < 3:
        return from_edges([(i, i + 1) for i in range(n - 1)])
    return g


def corpus(count: int, lo: int, hi: int, seed: int = 0) -> list[Graph]:
    """Mixed Erdos-Renyi / preferential-attachment graphs with ``n`` in ``[lo, hi]``."""
    rng = np.random.default_rng(seed)
    out = []
    for j in range(count):
        n = int(rng.integers(lo, hi + 1))
        out.append(random_graph(seed * 1000 + j, n, "er" if j % 2 == 0 else "ba"))
    return out


@pytest.fixture
def g_bt():
    """Two triangles sharing node 2."""
    return from_edges([(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)])


@pytest.fixture
def p4():
    return from_edges([(0, 1), (1, 2), (2, 3)])


@pytest.fixture
def c4():
    return from_edges([(0, 1), (1, 2), (2, 3), (3, 0)])


@pytest.fixture
def s3():
    return from_edges([(0, 1), (0, 2), (0, 3)])


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
