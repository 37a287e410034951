"""Sampling intra-component shortest paths.

A draw picks a component (weight ``W_i``), a source (``r(s)(n - r(s))``),
a target (``r(t)``, ``t != s``) and then a uniformly random shortest path
between them inside the component. Paths of the exact subspace are
rejected, leaving the approximate-subspace distribution.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .decomposition import Decomposition, OutReachTable, PartitionWeights
from .graph import Graph


class NothingToSample(ValueError):
    """The personalised space has no probability mass to sample from."""


class RejectionCapExceeded(RuntimeError):
    """Too many consecutive rejections; the exact-subspace mass is suspect."""


@dataclass(frozen=True)
class SamplePath:
    nodes: tuple[int, ...]
    component: int

    @property
    def length(self) -> int:
        return len(self.nodes) - 1

    @property
    def inner(self) -> tuple[int, ...]:
        return self.nodes[1:-1]


@dataclass
class SamplerTables:
    n: int
    components: np.ndarray  # I(A)
    component_cdf: np.ndarray  # cumulative W_i over I(A)
    source_cdf: dict[int, np.ndarray]  # cumulative r(s)(n - r(s)) per component
    target_cdf: dict[int, np.ndarray]  # cumulative r(t) per component
    out_reach: dict[int, np.ndarray]
    seed: int | None = None

    def component_probabilities(self) -> dict[int, float]:
        p = np.diff(self.component_cdf, prepend=0.0) / self.component_cdf[-1]
        return dict(zip(self.components.tolist(), p.tolist()))


def build_sampler(
    d: Decomposition,
    r: OutReachTable,
    w: PartitionWeights,
    A: Iterable[int] | None = None,
    seed: int | None = None,
) -> SamplerTables:
    """Stage tables over the components touched by ``A`` (``w.touched``).

    ``A`` is accepted for symmetry with the other entry points; the touched
    set is taken from ``w``.
    """
    n = d.n
    comps = w.touched
    mass = w.component_mass[comps].astype(np.float64)
    if len(comps) == 0 or mass.sum() <= 0:
        raise NothingToSample("no component touched by the target set carries mass")
    src, tgt, rr = {}, {}, {}
    for i in comps.tolist():
        ri = r.values[i]
        src[i] = np.cumsum((ri * (n - ri)).astype(np.float64))
        tgt[i] = np.cumsum(ri.astype(np.float64))
        rr[i] = ri
    return SamplerTables(n, comps.copy(), np.cumsum(mass), src, tgt, rr, seed)


def _pick(cdf: np.ndarray, u: float) -> int:
    j = int(np.searchsorted(cdf, u * cdf[-1], side="right"))
    return min(j, len(cdf) - 1)


def draw_endpoints(tables: SamplerTables, rng: np.random.Generator) -> tuple[int, int, int]:
    """Component index and local ``(s, t)`` for one draw from the pair stages."""
    u1, u2, u3 = rng.random(3)
    i = int(tables.components[_pick(tables.component_cdf, u1)])
    s = _pick(tables.source_cdf[i], u2)
    # target proportional to r(t) over t != s: skip over the slot of s
    tcdf = tables.target_cdf[i]
    rs = float(tables.out_reach[i][s])
    before = float(tcdf[s - 1]) if s > 0 else 0.0
    x = u3 * (float(tcdf[-1]) - rs)
    if x >= before:
        x += rs
    t = min(int(np.searchsorted(tcdf, x, side="right")), len(tcdf) - 1)
    if t == s:  # floating-point edge at the slot boundary
        t = s + 1 if s + 1 < len(tcdf) else s - 1
    return i, s, t


def _choose(weights: list, rng: np.random.Generator) -> int:
    if len(weights) == 1:
        return 0
    total = sum(weights)
    x = rng.random() * float(total)
    acc = 0.0
    for k, wk in enumerate(weights):
        acc += float(wk)
        if x < acc:
            return k
    return len(weights) - 1


def _walk_back(adj, dist, sigma, start: int, rng) -> list[int]:
    """From ``start`` towards the BFS root, choosing predecessors by ``sigma``."""
    out = [start]
    u = start
    while dist[u] > 0:
        du = dist[u] - 1
        preds = [p for p in adj[u] if dist.get(p) == du]
        u = preds[_choose([sigma[p] for p in preds], rng)]
        out.append(u)
    return out


def uniform_shortest_path_local(adj: list[list[int]], s: int, t: int, rng: np.random.Generator) -> list[int]:
    """A uniformly random shortest ``s``-``t`` path, by balanced bidirectional BFS.

    The side whose frontier has the smaller degree sum is expanded one
    full level at a time. At the first contact the meeting level holds
    exactly one node of every shortest path; one is chosen proportionally
    to ``sigma_s(u) sigma_t(u)`` and both halves are walked back.
    """
    if s == t:
        raise ValueError("endpoints must differ")
    dist = ({s: 0}, {t: 0})
    sigma = ({s: 1}, {t: 1})
    frontier = ([s], [t])
    vol = [len(adj[s]), len(adj[t])]
    while True:
        x = 0 if vol[0] <= vol[1] else 1
        dx, sx, dy = dist[x], sigma[x], dist[1 - x]
        level = dx[frontier[x][0]] + 1
        nxt = []
        for u in frontier[x]:
            su = sx[u]
            for v in adj[u]:
                dv = dx.get(v)
                if dv is None:
                    dx[v] = level
                    sx[v] = su
                    nxt.append(v)
                elif dv == level:
                    sx[v] += su
        if not nxt:
            raise RuntimeError(f"nodes {s} and {t} are disconnected")
        meet = [v for v in nxt if v in dy]
        if meet:
            sy = sigma[1 - x]
            k = _choose([sx[v] * sy[v] for v in meet], rng)
            mid = meet[k]
            half_x = _walk_back(adj, dx, sx, mid, rng)
            half_y = _walk_back(adj, dy, sy, mid, rng)
            if x == 0:
                return half_x[::-1] + half_y[1:]
            return half_y[::-1] + half_x[1:]
        frontier[x][:] = nxt
        vol[x] = sum(len(adj[v]) for v in nxt)


def reference_shortest_path_local(adj: list[list[int]], s: int, t: int, rng: np.random.Generator) -> list[int]:
    """Single-source counterpart of :func:`uniform_shortest_path_local` (test oracle)."""
    dist = {s: 0}
    sigma = {s: 1}
    order = [s]
    head = 0
    while head < len(order) and t not in dist:
        u = order[head]
        head += 1
        for v in adj[u]:
            if v not in dist:
                dist[v] = dist[u] + 1
                sigma[v] = 0
                order.append(v)
            if dist[v] == dist[u] + 1:
                sigma[v] += sigma[u]
    # finish the level containing t so its sigma is complete
    while head < len(order) and dist[order[head]] < dist[t]:
        u = order[head]
        head += 1
        for v in adj[u]:
            if v not in dist:
                dist[v] = dist[u] + 1
                sigma[v] = 0
                order.append(v)
            if dist[v] == dist[u] + 1:
                sigma[v] += sigma[u]
    if t not in dist:
        raise RuntimeError(f"nodes {s} and {t} are disconnected")
    return _walk_back(adj, dist, sigma, t, rng)[::-1]


def sample_uniform_shortest_path(g: Graph, s: int, t: int, rng: np.random.Generator) -> SamplePath:
    """Uniform shortest path between two nodes of the whole graph."""
    return SamplePath(tuple(uniform_shortest_path_local(g.adj, s, t, rng)), -1)


class PathSampler:
    """Draws from the personalised space, optionally rejecting exact-subspace paths."""

    def __init__(
        self,
        d: Decomposition,
        tables: SamplerTables,
        A: Iterable[int],
        reject_exact: bool = True,
        rejection_cap: int = 10**6,
    ):
        self.d = d
        self.tables = tables
        self.targets = frozenset(int(v) for v in A)
        self.reject_exact = reject_exact
        self.rejection_cap = rejection_cap
        self.rejections = 0
        self._locals = {i: d.local(i) for i in tables.components.tolist()}

    def draw_unconditioned(self, rng: np.random.Generator) -> SamplePath:
        i, s, t = draw_endpoints(self.tables, rng)
        lc = self._locals[i]
        local = uniform_shortest_path_local(lc.adj, s, t, rng)
        nodes = lc.nodes
        return SamplePath(tuple(int(nodes[v]) for v in local), i)

    def is_exact(self, p: SamplePath) -> bool:
        return len(p.nodes) == 3 and p.nodes[1] in self.targets

    def draw(self, rng: np.random.Generator) -> SamplePath:
        for _ in range(self.rejection_cap + 1):
            p = self.draw_unconditioned(rng)
            if not (self.reject_exact and self.is_exact(p)):
                return p
            self.rejections += 1
        raise RejectionCapExceeded(
            f"{self.rejection_cap} consecutive draws fell in the exact subspace"
        )

    def hits(self, p: SamplePath) -> list[int]:
        """Targets that are inner nodes of ``p``."""
        tg = self.targets
        return [v for v in p.nodes[1:-1] if v in tg]


def draw_approx_sample(
    g: Graph,
    tables: SamplerTables,
    A: Iterable[int],
    rng: np.random.Generator,
    d: Decomposition,
    rejection_cap: int = 10**6,
) -> SamplePath:
    """One draw from the approximate subspace (convenience wrapper)."""
    return PathSampler(d, tables, A, rejection_cap=rejection_cap).draw(rng)
