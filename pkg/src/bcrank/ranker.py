"""Betweenness estimates and ranking for a target subset of nodes."""

from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .decomposition import (
    Decomposition,
    OutReachTable,
    PartitionWeights,
    bc_aux,
    decompose,
    out_reach,
    weights,
)
from .estimator import EstimatorConfig, RiskBreakdown, estimate_risks
from .exact import ExactRisks, exact_two_hop
from .graph import Graph, bfs_distances
from .sampler import PathSampler, build_sampler

logger = logging.getLogger(__name__)


@dataclass
class VCBoundInputs:
    components: np.ndarray  # I(A)
    diameter_bound: np.ndarray  # upper bound on VD(C_i)
    subset_diameter_bound: np.ndarray  # upper bound on VD(A & C_i)
    subset_size: np.ndarray  # |A & C_i|
    bs_bound: int  # componentwise min of the three terms, maxed over components
    bs_bound_alt: int  # the max-of-two-terms variant, logged for comparison
    vc_bound: int


def vc_bound_for_subset(
    g: Graph,
    d: Decomposition,
    r: OutReachTable | None,
    A: Iterable[int],
    probes: int = 3,
    rng: np.random.Generator | None = None,
    probe_nodes: Sequence[int] = (),
    exact_diameter_limit: int = 64,
) -> VCBoundInputs:
    """Upper bound on the VC dimension of the target hypotheses.

    For every touched component the number of targets on one shortest
    path is at most ``min(VD(C) - 1, VD(A & C) + 1, |A & C|)``. Diameters
    are bounded by twice the eccentricity from a probe node; the tightest
    of several probes is kept. Any node is a valid probe for the
    triangle-inequality bound, so ``probe_nodes`` may lie outside ``A``.
    Components with at most ``exact_diameter_limit`` nodes get exact
    diameters instead.
    """
    A = np.array(sorted(set(A)), dtype=np.int64)
    if len(A) == 0:
        raise ValueError("target set A must be nonempty")
    rng = np.random.default_rng(0) if rng is None else rng
    comps = d.components_of(A.tolist())
    tset = set(A.tolist())

    chosen = list(dict.fromkeys(int(p) for p in probe_nodes))
    pool = [v for v in A.tolist() if v not in chosen]
    extra = min(max(probes, 1) if not chosen else probes, len(pool))
    if extra:
        chosen += rng.choice(pool, size=extra, replace=False).tolist()
    dist = bfs_distances(g, chosen).reshape(len(chosen), -1)

    vd_c = np.zeros(len(comps), dtype=np.int64)
    vd_a = np.zeros(len(comps), dtype=np.int64)
    size_a = np.zeros(len(comps), dtype=np.int64)
    for k, i in enumerate(comps.tolist()):
        nodes = d.components[i]
        members_a = np.array([v for v in nodes.tolist() if v in tset], dtype=np.int64)
        size_a[k] = len(members_a)
        if len(nodes) <= 2:
            vd_c[k] = vd_a[k] = len(nodes) - 1
            continue
        lc = d.local(i)
        local_a = [lc.index[v] for v in members_a.tolist()]
        if len(nodes) <= exact_diameter_limit:
            # small component: exact diameters from all local sources
            rows = [_local_eccentricities(lc.adj, u) for u in range(len(nodes))]
            vd_c[k] = max(int(row.max()) for row in rows)
            vd_a[k] = max(int(rows[u][local_a].max()) for u in local_a)
            continue
        # one extra probe inside the component, searched without leaving it
        own = _local_eccentricities(lc.adj, local_a[0])
        ecc_c = [int(own.max())] + [int(row[nodes].max()) for row in dist]
        ecc_a = [int(own[local_a].max())] + [int(row[members_a].max()) for row in dist]
        vd_c[k] = min(2 * min(ecc_c), len(nodes) - 1)
        vd_a[k] = min(2 * min(ecc_a), vd_c[k])
    per_comp = np.minimum(np.minimum(vd_c - 1, vd_a + 1), size_a)
    bs = int(per_comp.max()) if len(per_comp) else 0
    bs_alt = int(np.maximum(vd_c - 1, vd_a + 1).max()) if len(per_comp) else 0
    vc = math.floor(math.log2(bs)) + 1 if bs >= 1 else 1
    if g.n > 2:
        vc = min(vc, math.floor(math.log2(g.n - 2)) + 1)
    vc = max(vc, 1)
    logger.debug("BS(A) bound %d (max-form %d), vc bound %d", bs, bs_alt, vc)
    return VCBoundInputs(comps, vd_c, vd_a, size_a, bs, bs_alt, vc)


def _local_eccentricities(adj: list[list[int]], source: int) -> np.ndarray:
    dist = [-1] * len(adj)
    dist[source] = 0
    queue = [source]
    for u in queue:
        du = dist[u] + 1
        for v in adj[u]:
            if dist[v] < 0:
                dist[v] = du
                queue.append(v)
    return np.asarray(dist, dtype=np.int64)


@dataclass
class BCEstimate:
    nodes: np.ndarray  # dense ids, sorted
    labels: np.ndarray
    tilde_bc: np.ndarray
    bc_a: np.ndarray
    hat_share: np.ndarray
    sampled_share: np.ndarray
    ranks: np.ndarray  # 1 = largest estimate
    epsilon: float
    delta: float
    samples_used: int
    vc_bound: int
    gamma: float
    eta: float
    elapsed_s: float
    breakdown: RiskBreakdown | None = None
    vc: VCBoundInputs | None = None
    meta: dict = field(default_factory=dict)

    def as_dict(self) -> dict[int, float]:
        return dict(zip(self.nodes.tolist(), self.tilde_bc.tolist()))


def rank_order(values: Sequence[float], ids: Sequence[int]) -> np.ndarray:
    """Ranks ``1..k``: descending value, ties broken by ascending id."""
    values = np.asarray(values, dtype=np.float64)
    ids = np.asarray(ids)
    order = np.lexsort((ids, -values))
    ranks = np.empty(len(values), dtype=np.int64)
    ranks[order] = np.arange(1, len(values) + 1)
    return ranks


@dataclass
class Prepared:
    """Graph-level structures reusable across subsets."""

    graph: Graph
    decomposition: Decomposition
    out_reach: OutReachTable


def prepare(g: Graph) -> Prepared:
    d = decompose(g)
    return Prepared(g, d, out_reach(d))


def _all_cliques(d: Decomposition, comps: np.ndarray) -> bool:
    for i in comps.tolist():
        size = len(d.components[i])
        if len(d.component_edges[i]) != size * (size - 1) // 2:
            return False
    return True


def rank_subset(
    g: Graph | Prepared,
    A: Iterable[int],
    cfg: EstimatorConfig | None = None,
    *,
    probes: int = 3,
    probe_nodes: Sequence[int] = (),
    partition: bool = True,
) -> BCEstimate:
    """Estimate betweenness for every node of ``A`` within ``cfg.epsilon``.

    With ``partition=False`` the 2-hop exact subspace is left empty and
    every component is sampled, which is the direct estimator used as a
    baseline.
    """
    t0 = time.perf_counter()
    cfg = EstimatorConfig() if cfg is None else cfg
    prep = g if isinstance(g, Prepared) else prepare(g)
    g, d, r = prep.graph, prep.decomposition, prep.out_reach
    nodes = np.array(sorted(set(int(v) for v in A)), dtype=np.int64)
    if len(nodes) == 0:
        raise ValueError("target set A must be nonempty")
    if nodes[0] < 0 or nodes[-1] >= g.n:
        raise IndexError("target node out of range")
    n, k = g.n, len(nodes)
    pos = {v: j for j, v in enumerate(nodes.tolist())}

    w: PartitionWeights = weights(d, r, nodes.tolist() if partition else range(n))
    ge = w.gamma_eta
    vc = vc_bound_for_subset(
        g, d, r, nodes.tolist(), probes=probes, probe_nodes=probe_nodes,
        rng=np.random.default_rng(np.random.SeedSequence(cfg.seed).spawn(3)[2]),
    )
    bc_a = np.array([bc_aux(d, r, v, n) for v in nodes.tolist()])

    if partition:
        ex: ExactRisks = exact_two_hop(g, d, r, w, nodes.tolist())
        hat_lambda, hat_ell = ex.hat_lambda, ex.hat_ell
    else:
        hat_lambda, hat_ell = 0.0, np.zeros(k)

    # error in bc equals gamma * eta times the error in risk units
    eps_risk = min(cfg.epsilon / ge, 1.0 - 1e-12)
    run_cfg = EstimatorConfig(
        epsilon=eps_risk, delta=cfg.delta, c=cfg.c, vc_bound=vc.vc_bound, seed=cfg.seed,
        max_workers=cfg.max_workers, rejection_cap=cfg.rejection_cap, max_samples=cfg.max_samples,
    )
    tables = build_sampler(d, r, w, nodes.tolist(), seed=cfg.seed)
    sampler = PathSampler(d, tables, nodes.tolist(), reject_exact=partition, rejection_cap=cfg.rejection_cap)

    def losses(p):
        return [pos[v] for v in sampler.hits(p)]

    if _all_cliques(d, w.touched):
        # every intra-component shortest path is a single edge: nothing has an inner node
        lam = 1.0 - hat_lambda
        br = RiskBreakdown(hat_ell, np.zeros(k), hat_ell.copy(), hat_lambda, lam, 0, 0, 0, "no-inner-nodes")
    else:
        br = estimate_risks(lambda: (hat_lambda, hat_ell), sampler.draw, losses, k, run_cfg)
    tilde = np.clip(bc_a + ge * br.ell, 0.0, 1.0)
    elapsed = time.perf_counter() - t0
    logger.info(
        "ranked %d nodes: %d samples (%s), vc bound %d, gamma %.4g, eta %.4g, %.2fs",
        k, br.samples_used, br.halted_by, vc.vc_bound, w.gamma, w.eta, elapsed,
    )
    return BCEstimate(
        nodes=nodes,
        labels=g.labels[nodes],
        tilde_bc=tilde,
        bc_a=bc_a,
        hat_share=ge * br.hat_ell,
        sampled_share=ge * br.lam * br.tilde_ell,
        ranks=rank_order(tilde, g.labels[nodes]),
        epsilon=cfg.epsilon,
        delta=cfg.delta,
        samples_used=br.samples_used,
        vc_bound=vc.vc_bound,
        gamma=w.gamma,
        eta=w.eta,
        elapsed_s=elapsed,
        breakdown=br,
        vc=vc,
        meta={"partition": partition, "rejections": sampler.rejections, "halted_by": br.halted_by},
    )
