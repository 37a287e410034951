"""Bi-component decomposition, out-reach sizes and the derived weights.

For a bi-component ``C_i`` and a member ``v``, the out-reach ``r_i(v)`` is
the number of nodes (``v`` included) that ``v`` reaches without touching
any other node of ``C_i``. Summed over the members of one component it
always gives ``n``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .graph import Graph


@dataclass
class LocalComponent:
    """A bi-component relabelled to local ids ``0..size-1``."""

    nodes: np.ndarray  # local id -> global id, sorted
    adj: list[list[int]]  # local adjacency
    index: dict[int, int]  # global id -> local id

    @property
    def size(self) -> int:
        return len(self.nodes)


@dataclass
class Decomposition:
    n: int
    components: list[np.ndarray]
    component_edges: list[np.ndarray]
    cutpoints: np.ndarray
    membership: list[list[int]]
    tree_edges: list[tuple[int, int]]  # (cutpoint node id, component index)
    _local: dict[int, LocalComponent] = field(default_factory=dict, repr=False)

    @property
    def ell(self) -> int:
        return len(self.components)

    def is_cutpoint(self, v: int) -> bool:
        return len(self.membership[v]) >= 2

    def local(self, i: int) -> LocalComponent:
        """Component ``i`` as a standalone graph (cached)."""
        lc = self._local.get(i)
        if lc is None:
            nodes = self.components[i]
            index = {int(v): j for j, v in enumerate(nodes.tolist())}
            adj: list[list[int]] = [[] for _ in range(len(nodes))]
            for u, v in self.component_edges[i].tolist():
                a, b = index[u], index[v]
                adj[a].append(b)
                adj[b].append(a)
            for row in adj:
                row.sort()
            lc = LocalComponent(nodes, adj, index)
            self._local[i] = lc
        return lc

    def components_of(self, nodes: Iterable[int]) -> np.ndarray:
        """Sorted indices of the components containing at least one of ``nodes``."""
        out = set()
        for v in nodes:
            out.update(self.membership[v])
        return np.array(sorted(out), dtype=np.int64)


def decompose(g: Graph) -> Decomposition:
    """Split a connected graph into bi-components (iterative Hopcroft-Tarjan)."""
    n = g.n
    adj = g.adj
    disc = [-1] * n
    low = [0] * n
    pos = [0] * n
    parent = [-1] * n
    edge_stack: list[tuple[int, int]] = []
    comps_edges: list[list[tuple[int, int]]] = []
    timer = 0
    for root in range(n):
        if disc[root] != -1:
            continue
        disc[root] = low[root] = timer
        timer += 1
        stack = [root]
        while stack:
            u = stack[-1]
            nbrs = adj[u]
            if pos[u] < len(nbrs):
                w = nbrs[pos[u]]
                pos[u] += 1
                if disc[w] == -1:
                    parent[w] = u
                    disc[w] = low[w] = timer
                    timer += 1
                    edge_stack.append((u, w))
                    stack.append(w)
                elif w != parent[u] and disc[w] < disc[u]:
                    edge_stack.append((u, w))
                    if disc[w] < low[u]:
                        low[u] = disc[w]
                continue
            stack.pop()
            if not stack:
                continue
            p = stack[-1]
            if low[u] < low[p]:
                low[p] = low[u]
            if low[u] >= disc[p]:
                block = []
                while True:
                    e = edge_stack.pop()
                    block.append(e)
                    if e == (p, u):
                        break
                comps_edges.append(block)

    blocks = []
    for block in comps_edges:
        e = np.sort(np.asarray(block, dtype=np.int64), axis=1)
        e = e[np.lexsort((e[:, 1], e[:, 0]))]
        blocks.append((np.unique(e), e))
    # deterministic order: by sorted member list
    blocks.sort(key=lambda b: b[0].tolist())
    components = [b[0] for b in blocks]
    component_edges = [b[1] for b in blocks]
    membership: list[list[int]] = [[] for _ in range(n)]
    for i, nodes in enumerate(components):
        for v in nodes.tolist():
            membership[v].append(i)
    cutpoints = np.array([v for v in range(n) if len(membership[v]) >= 2], dtype=np.int64)
    tree_edges = [(int(c), i) for c in cutpoints.tolist() for i in membership[c]]
    return Decomposition(n, components, component_edges, cutpoints, membership, tree_edges)


def block_cut_tree(d: Decomposition):
    """The block-cut tree as a ``networkx.Graph``.

    Vertices are ``("C", i)`` for components and ``("v", c)`` for cutpoints.
    """
    import networkx as nx

    t = nx.Graph()
    t.add_nodes_from(("C", i) for i in range(d.ell))
    t.add_nodes_from(("v", int(c)) for c in d.cutpoints.tolist())
    t.add_edges_from((("v", c), ("C", i)) for c, i in d.tree_edges)
    return t


@dataclass
class OutReachTable:
    """``values[i][j]`` is ``r_i`` of ``decomposition.components[i][j]``."""

    decomposition: Decomposition
    values: list[np.ndarray]

    def get(self, i: int, v: int) -> int:
        nodes = self.decomposition.components[i]
        j = int(np.searchsorted(nodes, v))
        if j >= len(nodes) or nodes[j] != v:
            raise KeyError(f"node {v} is not a member of component {i}")
        return int(self.values[i][j])


def out_reach(d: Decomposition, n: int | None = None) -> OutReachTable:
    """Out-reach sizes for every (component, member) pair.

    Two passes over the block-cut tree rooted at component 0: subtree
    sizes, then complements for cutpoints whose parent is the component.
    """
    n = d.n if n is None else n
    ell = d.ell
    cut_ids = {int(c): ell + k for k, c in enumerate(d.cutpoints.tolist())}
    nv = ell + len(cut_ids)
    weight = np.ones(nv, dtype=np.int64)
    tadj: list[list[int]] = [[] for _ in range(nv)]
    for i, nodes in enumerate(d.components):
        weight[i] = sum(1 for v in nodes.tolist() if v not in cut_ids)
    for c, i in d.tree_edges:
        x = cut_ids[c]
        tadj[x].append(i)
        tadj[i].append(x)

    tparent = np.full(nv, -1, dtype=np.int64)
    order = []
    seen = np.zeros(nv, dtype=bool)
    for root in range(nv):
        if seen[root]:
            continue
        seen[root] = True
        stack = [root]
        while stack:
            x = stack.pop()
            order.append(x)
            for y in tadj[x]:
                if not seen[y]:
                    seen[y] = True
                    tparent[y] = x
                    stack.append(y)
    size = weight.copy()
    for x in reversed(order):
        if tparent[x] >= 0:
            size[tparent[x]] += size[x]

    values = []
    for i, nodes in enumerate(d.components):
        r = np.ones(len(nodes), dtype=np.int64)
        for j, v in enumerate(nodes.tolist()):
            x = cut_ids.get(v)
            if x is None:
                continue
            r[j] = size[x] if tparent[x] == i else n - size[i]
        values.append(r)
    return OutReachTable(d, values)


@dataclass
class PartitionWeights:
    n: int
    gamma: float
    component_mass: np.ndarray  # W_i = n^2 - sum r_i^2 (exact integers)
    eta: float
    touched: np.ndarray  # I(A), sorted component indices

    @property
    def gamma_eta(self) -> float:
        return self.gamma * self.eta


def weights(d: Decomposition, r: OutReachTable, A: Iterable[int]) -> PartitionWeights:
    """Normalisers ``gamma`` and ``eta`` for the target set ``A``."""
    A = list(A)
    if not A:
        raise ValueError("target set A must be nonempty")
    n = d.n
    mass = np.array([n * n - int(np.dot(ri, ri)) for ri in r.values], dtype=np.int64)
    total = int(mass.sum())
    touched = d.components_of(A)
    gamma = total / (n * (n - 1))
    eta = int(mass[touched].sum()) / total if total else 0.0
    return PartitionWeights(n, gamma, mass, eta, touched)


def q_weight(r: OutReachTable, i: int, s: int, t: int, n: int) -> float:
    """Probability mass ``r_i(s) r_i(t) / (n (n-1))`` of the pair ``(s, t)`` in ``C_i``."""
    if s == t:
        raise ValueError("q_weight needs two distinct nodes")
    return r.get(i, s) * r.get(i, t) / (n * (n - 1))


def bc_aux(d: Decomposition, r: OutReachTable, v: int, n: int | None = None) -> float:
    """Probability that ``v`` is a break point of a uniform random shortest path."""
    n = d.n if n is None else n
    comps = d.membership[v]
    if len(comps) < 2:
        return 0.0
    total = 0
    for i in comps:
        rv = r.get(i, v)
        total += (rv - 1) * (n - rv)
    return total / (n * (n - 1))


def bc_aux_all(d: Decomposition, r: OutReachTable) -> np.ndarray:
    n = d.n
    out = np.zeros(n, dtype=np.float64)
    for c in d.cutpoints.tolist():
        out[c] = bc_aux(d, r, c, n)
    return out


def gamma_fsum(d: Decomposition, r: OutReachTable) -> float:
    """``gamma`` re-derived pairwise from ``q_weight`` terms (compensated sum)."""
    n = d.n
    terms = []
    for ri in r.values:
        tot = int(ri.sum())
        terms.extend(int(x) * (tot - int(x)) / (n * (n - 1)) for x in ri.tolist())
    return math.fsum(terms)
