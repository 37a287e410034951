"""Desk-scale ground truth: exact betweenness and brute-force enumerations.

These are reference implementations for tests and evaluation. They take
deliberately different routes from the estimators they check.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .decomposition import Decomposition, OutReachTable, PartitionWeights
from .graph import Graph, bfs_count


class EnumerationTooLarge(RuntimeError):
    pass


def brandes_bc(g: Graph, batch: int = 256) -> np.ndarray:
    """Exact betweenness normalised by ``n (n-1)`` over ordered pairs.

    Brandes' dependency accumulation, run level-synchronously for a batch
    of sources at a time with sparse matrix products.
    """
    n = g.n
    if n < 3:
        return np.zeros(n)
    adj = g.csr()
    bc = np.zeros(n)
    for start in range(0, n, batch):
        src = np.arange(start, min(start + batch, n))
        b = len(src)
        cols = np.arange(b)
        dist = np.full((n, b), -1, dtype=np.int64)
        sigma = np.zeros((n, b))
        dist[src, cols] = 0
        sigma[src, cols] = 1.0
        frontier = np.zeros((n, b), dtype=bool)
        frontier[src, cols] = True
        level = 0
        while frontier.any():
            level += 1
            reach = adj @ np.where(frontier, sigma, 0.0)
            frontier = (reach > 0) & (dist < 0)
            dist[frontier] = level
            sigma[frontier] = reach[frontier]
        delta = np.zeros((n, b))
        for lv in range(level - 1, 0, -1):
            coef = np.where(dist == lv, (1.0 + delta) / np.where(sigma > 0, sigma, 1.0), 0.0)
            back = adj @ coef
            upper = dist == lv - 1
            delta[upper] += sigma[upper] * back[upper]
        delta[dist <= 0] = 0.0
        bc += delta.sum(axis=1)
    return bc / (n * (n - 1))


def brute_out_reach(g: Graph, d: Decomposition) -> list[np.ndarray]:
    """Out-reach by deleting ``C_i \\ {v}`` and counting what ``v`` still reaches."""
    out = []
    for nodes in d.components:
        members = set(nodes.tolist())
        vals = []
        for v in nodes.tolist():
            blocked = members - {v}
            seen = {v}
            stack = [v]
            while stack:
                u = stack.pop()
                for w in g.adj[u]:
                    if w not in seen and w not in blocked:
                        seen.add(w)
                        stack.append(w)
            vals.append(len(seen))
        out.append(np.array(vals, dtype=np.int64))
    return out


def _bfs_dag(adj: list[list[int]], s: int):
    dist = {s: 0}
    sigma = {s: 1}
    preds: dict[int, list[int]] = {s: []}
    order = [s]
    head = 0
    while head < len(order):
        u = order[head]
        head += 1
        for w in adj[u]:
            if w not in dist:
                dist[w] = dist[u] + 1
                sigma[w] = 0
                preds[w] = []
                order.append(w)
            if dist[w] == dist[u] + 1:
                sigma[w] += sigma[u]
                preds[w].append(u)
    return dist, sigma, preds


def _paths_to(preds: dict[int, list[int]], s: int, t: int) -> list[tuple[int, ...]]:
    out = []
    stack = [(t, (t,))]
    while stack:
        u, suffix = stack.pop()
        if u == s:
            out.append(suffix)
            continue
        for p in preds[u]:
            stack.append((p, (p,) + suffix))
    return out


@dataclass
class EnumeratedSpace:
    paths: list[tuple[int, ...]]  # global ids, source first
    component: np.ndarray
    prob: np.ndarray
    is_exact: np.ndarray
    targets: np.ndarray
    risk: dict[int, float]  # full personalised-space risk per target
    exact_risk: dict[int, float]  # risk restricted to the exact subspace

    @property
    def hat_lambda(self) -> float:
        return math.fsum(self.prob[self.is_exact].tolist())

    def approx_distribution(self) -> dict[tuple[int, ...], float]:
        """Probabilities over the approximate subspace, renormalised."""
        lam = 1.0 - self.hat_lambda
        return {p: pr / lam for p, pr, ex in zip(self.paths, self.prob.tolist(), self.is_exact.tolist()) if not ex}


def enumerate_pisp(
    g: Graph,
    d: Decomposition,
    r: OutReachTable,
    w: PartitionWeights,
    A: Iterable[int],
    cap: int = 10**6,
) -> EnumeratedSpace:
    """List every intra-component shortest path of the personalised space.

    Each path from ``s`` to ``t`` in ``C_i`` gets probability
    ``r_i(s) r_i(t) / (n (n-1) sigma_st gamma eta)``.
    """
    targets = np.array(sorted(set(A)), dtype=np.int64)
    tset = set(targets.tolist())
    n = g.n
    norm = n * (n - 1) * w.gamma_eta

    dags = []
    total = 0
    for i in w.touched.tolist():
        lc = d.local(i)
        for s in range(lc.size):
            dist, sigma, preds = _bfs_dag(lc.adj, s)
            total += sum(sigma.values()) - 1
            if total > cap:
                raise EnumerationTooLarge(f"more than {cap} paths in the personalised space")
            dags.append((i, lc, s, sigma, preds))

    paths, comp, prob, exact = [], [], [], []
    risk: dict[int, list[float]] = defaultdict(list)
    exact_risk: dict[int, list[float]] = defaultdict(list)
    for i, lc, s, sigma, preds in dags:
        rv = r.values[i]
        glob = lc.nodes
        for t in range(lc.size):
            if t == s:
                continue
            pr = rv[s] * rv[t] / (norm * sigma[t])
            for p in _paths_to(preds, s, t):
                gp = tuple(int(x) for x in glob[list(p)])
                inner = [v for v in gp[1:-1] if v in tset]
                ex = len(gp) == 3 and bool(inner)
                paths.append(gp)
                comp.append(i)
                prob.append(pr)
                exact.append(ex)
                for v in inner:
                    risk[v].append(pr)
                    if ex:
                        exact_risk[v].append(pr)
    return EnumeratedSpace(
        paths,
        np.array(comp, dtype=np.int64),
        np.array(prob, dtype=np.float64),
        np.array(exact, dtype=bool),
        targets,
        {v: math.fsum(risk.get(v, [])) for v in targets.tolist()},
        {v: math.fsum(exact_risk.get(v, [])) for v in targets.tolist()},
    )


def two_hop_oracle(
    g: Graph, d: Decomposition, r: OutReachTable, w: PartitionWeights, A: Iterable[int]
) -> tuple[dict[int, float], float]:
    """Exact-subspace risks from one full BFS per component member."""
    targets = sorted(set(A))
    tset = set(targets)
    n = g.n
    norm = n * (n - 1) * w.gamma_eta
    acc: dict[int, list[float]] = {v: [] for v in targets}
    for i in w.touched.tolist():
        members = d.components[i].tolist()
        mset = set(members)
        for s in members:
            res = bfs_count(g, s)
            near = set(g.adj[s])
            for t in members:
                if res.dist[t] != 2:
                    continue
                q = r.get(i, s) * r.get(i, t) / norm
                for v in near.intersection(g.adj[t]):
                    if v in tset and v in mset:
                        acc[v].append(q / res.sigma[t])
    hat = {v: math.fsum(acc[v]) for v in targets}
    return hat, math.fsum(hat.values())


def segment_pair_mass(g: Graph, d: Decomposition) -> dict[tuple[int, int, int], float]:
    """``q`` for every ordered co-component pair, by breaking full shortest paths.

    Every shortest path of the graph is enumerated and split into maximal
    runs of edges from one component; each run's endpoints collect the
    path's probability ``1 / (n (n-1) sigma_st)``. Keys are
    ``(component, first, last)``. Exponential in the worst case: tiny
    graphs only.
    """
    edge_comp = {}
    for i, e in enumerate(d.component_edges):
        for u, v in e.tolist():
            edge_comp[(u, v)] = edge_comp[(v, u)] = i
    n = g.n
    mass: dict[tuple[int, int, int], list[float]] = defaultdict(list)
    for s in range(n):
        dist, sigma, preds = _bfs_dag(g.adj, s)
        for t in range(n):
            if t == s:
                continue
            pr = 1.0 / (n * (n - 1) * sigma[t])
            for p in _paths_to(preds, s, t):
                cur = edge_comp[(p[0], p[1])]
                start = 0
                for k in range(1, len(p) - 1):
                    nxt = edge_comp[(p[k], p[k + 1])]
                    if nxt != cur:
                        mass[(cur, p[start], p[k])].append(pr)
                        cur, start = nxt, k
                mass[(cur, p[start], p[-1])].append(pr)
    return {k: math.fsum(v) for k, v in mass.items()}
