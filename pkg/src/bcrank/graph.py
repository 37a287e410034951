"""Undirected, unweighted graph storage and BFS primitives.

Graphs are stored in CSR form with dense integer ids ``0..n-1``; the
original integer labels from the edge list are kept in ``Graph.labels``
(sorted ascending, so id order and label order agree).
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from typing import IO, Iterable, Sequence

import numpy as np

logger = logging.getLogger(__name__)

UNREACHABLE = -1


class GraphFormatError(ValueError):
    """Raised for malformed or empty edge lists."""


@dataclass(frozen=True)
class LoadReport:
    duplicate_edges: int = 0
    self_loops: int = 0
    dropped_nodes: int = 0
    dropped_edges: int = 0
    dropped_labels: tuple[int, ...] = ()  # labels outside the kept component


@dataclass(eq=False)
class Graph:
    """Immutable CSR adjacency structure.

    ``indices[indptr[v]:indptr[v+1]]`` holds the sorted neighbours of ``v``.
    """

    indptr: np.ndarray
    indices: np.ndarray
    labels: np.ndarray
    report: LoadReport = field(default_factory=LoadReport)

    def __post_init__(self):
        self.indptr.setflags(write=False)
        self.indices.setflags(write=False)
        self.labels.setflags(write=False)
        self._adj = None
        self._label_index = None
        self._csr = None

    @property
    def n(self) -> int:
        return len(self.indptr) - 1

    @property
    def m(self) -> int:
        return len(self.indices) // 2

    def degree(self, v: int) -> int:
        return int(self.indptr[v + 1] - self.indptr[v])

    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v] : self.indptr[v + 1]]

    @property
    def adj(self) -> list[list[int]]:
        """Neighbour lists as plain Python lists (fast for scalar loops)."""
        if self._adj is None:
            ind = self.indices.tolist()
            ptr = self.indptr.tolist()
            self._adj = [ind[ptr[v] : ptr[v + 1]] for v in range(self.n)]
        return self._adj

    def csr(self):
        """Adjacency as a ``scipy.sparse.csr_matrix`` of ones."""
        if self._csr is None:
            from scipy.sparse import csr_matrix

            self._csr = csr_matrix(
                (np.ones(len(self.indices)), self.indices, self.indptr), shape=(self.n, self.n)
            )
        return self._csr

    def edges(self) -> np.ndarray:
        """All edges as an ``(m, 2)`` array with ``u < v``, lexicographically sorted."""
        src = np.repeat(np.arange(self.n), self.degrees())
        mask = src < self.indices
        return np.column_stack([src[mask], self.indices[mask]])

    def node_of(self, label: int) -> int:
        """Dense id of an original label; ``KeyError`` if absent."""
        if self._label_index is None:
            self._label_index = {int(x): i for i, x in enumerate(self.labels.tolist())}
        return self._label_index[int(label)]

    def has_label(self, label: int) -> bool:
        try:
            self.node_of(label)
        except KeyError:
            return False
        return True

    def same_structure(self, other: "Graph") -> bool:
        return (
            np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.indices, other.indices)
            and np.array_equal(self.labels, other.labels)
        )

    def to_networkx(self):
        import networkx as nx

        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(self.edges().tolist())
        return g


def from_edges(edges: Iterable[Sequence[int]], n: int | None = None) -> Graph:
    """Build a graph from ``(u, v)`` pairs of dense ids, keeping every node.

    Duplicates and self-loops are dropped silently. Unlike
    :func:`load_edge_list` no component extraction is performed, so the
    caller is responsible for connectivity.
    """
    if not isinstance(edges, np.ndarray):
        edges = list(edges)
    arr = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    if n is None:
        n = int(arr.max()) + 1 if len(arr) else 0
    arr = arr[arr[:, 0] != arr[:, 1]]
    arr = np.sort(arr, axis=1)
    arr = np.unique(arr, axis=0)
    both = np.concatenate([arr, arr[:, ::-1]])
    order = np.lexsort((both[:, 1], both[:, 0]))
    both = both[order]
    counts = np.bincount(both[:, 0], minlength=n)
    indptr = np.concatenate([[0], np.cumsum(counts)]).astype(np.int64)
    return Graph(indptr, both[:, 1].astype(np.int64).copy(), np.arange(n, dtype=np.int64))


def _parse(stream: IO[str]) -> list[tuple[int, int]]:
    pairs = []
    for lineno, line in enumerate(stream, start=1):
        s = line.strip()
        if not s or s[0] in "#%":
            continue
        parts = s.split()
        if len(parts) < 2:
            raise GraphFormatError(f"line {lineno}: expected two node labels, got {s!r}")
        try:
            pairs.append((int(parts[0]), int(parts[1])))
        except ValueError:
            raise GraphFormatError(f"line {lineno}: node labels must be integers, got {s!r}") from None
    return pairs


def load_edge_list(stream: IO[str]) -> Graph:
    """Parse a whitespace-separated edge list and return its largest component.

    Lines starting with ``#`` or ``%`` are comments. Self-loops and
    duplicate edges (in either orientation) are dropped and counted in
    ``Graph.report``.
    """
    pairs = _parse(stream)
    if not pairs:
        raise GraphFormatError("edge list contains no edges")
    raw = np.asarray(pairs, dtype=np.int64)
    loops = raw[:, 0] == raw[:, 1]
    n_loops = int(loops.sum())
    labels = np.unique(raw)
    kept = np.sort(raw[~loops], axis=1)
    uniq = np.unique(kept, axis=0)
    n_dup = len(kept) - len(uniq)
    if len(uniq) == 0:
        raise GraphFormatError("edge list contains only self-loops")

    dense = np.searchsorted(labels, uniq)
    full = from_edges(dense, n=len(labels))
    comp = _component_labels(full)
    sizes = np.bincount(comp)
    big = int(np.argmax(sizes))
    keep_nodes = np.flatnonzero(comp == big)
    remap = np.full(full.n, -1, dtype=np.int64)
    remap[keep_nodes] = np.arange(len(keep_nodes))
    e = full.edges()
    e = e[comp[e[:, 0]] == big]
    g = from_edges(remap[e], n=len(keep_nodes))
    report = LoadReport(
        duplicate_edges=n_dup,
        self_loops=n_loops,
        dropped_nodes=full.n - len(keep_nodes),
        dropped_edges=full.m - g.m,
        dropped_labels=tuple(labels[comp != big].tolist()),
    )
    g = Graph(g.indptr, g.indices, labels[keep_nodes], report)
    if report.dropped_nodes:
        logger.warning(
            "graph is disconnected: kept largest component (%d nodes), dropped %d nodes / %d edges",
            g.n, report.dropped_nodes, report.dropped_edges,
        )
    if n_dup or n_loops:
        logger.info("dropped %d duplicate edges and %d self-loops", n_dup, n_loops)
    return g


def write_edge_list(g: Graph, stream: IO[str]) -> None:
    """Canonical serialization: one ``u v`` line per edge (labels, ``u < v``), sorted."""
    lab = g.labels
    e = np.sort(lab[g.edges()], axis=1)
    e = e[np.lexsort((e[:, 1], e[:, 0]))]
    for u, v in e.tolist():
        stream.write(f"{u} {v}\n")


def _component_labels(g: Graph) -> np.ndarray:
    from scipy.sparse.csgraph import connected_components

    return connected_components(g.csr(), directed=False)[1]


def is_connected(g: Graph) -> bool:
    return g.n > 0 and int(_component_labels(g).max()) == 0


@dataclass
class BfsResult:
    """Hop distances and shortest-path counts from one source.

    ``sigma`` holds Python ints, so counts never overflow.
    """

    source: int
    dist: np.ndarray
    sigma: list[int]


def bfs_count(g: Graph, source: int, restrict: Iterable[int] | None = None) -> BfsResult:
    """Single-source BFS counting shortest paths, optionally inside ``restrict``."""
    if not 0 <= source < g.n:
        raise IndexError(f"source {source} out of range for graph with {g.n} nodes")
    allowed = None
    if restrict is not None:
        allowed = np.zeros(g.n, dtype=bool)
        allowed[list(restrict)] = True
        if not allowed[source]:
            raise ValueError("source must belong to the restriction set")
    adj = g.adj
    dist = [UNREACHABLE] * g.n
    sigma = [0] * g.n
    dist[source] = 0
    sigma[source] = 1
    queue = deque([source])
    while queue:
        u = queue.popleft()
        du, su = dist[u] + 1, sigma[u]
        for w in adj[u]:
            if allowed is not None and not allowed[w]:
                continue
            dw = dist[w]
            if dw == UNREACHABLE:
                dist[w] = du
                sigma[w] = su
                queue.append(w)
            elif dw == du:
                sigma[w] += su
    return BfsResult(source, np.asarray(dist, dtype=np.int64), sigma)


def bfs_distances(g: Graph, sources) -> np.ndarray:
    """Hop distances from one source (1-d result) or several (one row each).

    Unreachable entries are ``UNREACHABLE``.
    """
    from scipy.sparse.csgraph import shortest_path

    d = shortest_path(g.csr(), unweighted=True, directed=False, indices=sources)
    out = np.full(d.shape, UNREACHABLE, dtype=np.int64)
    fin = np.isfinite(d)
    out[fin] = d[fin].astype(np.int64)
    return out


def eccentricity_probe(g: Graph, subset: Iterable[int], probe: int) -> int:
    """Largest hop distance from ``probe`` to any member of ``subset``.

    Twice this value bounds the diameter of ``subset`` from above.
    """
    members = np.fromiter(subset, dtype=np.int64)
    if len(members) == 0:
        raise ValueError("subset must be nonempty")
    if probe not in set(members.tolist()):
        raise ValueError("probe must be a member of the subset")
    dist = bfs_distances(g, probe)
    return int(dist[members].max())
