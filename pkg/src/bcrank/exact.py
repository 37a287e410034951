"""Exact risks over the 2-hop subspace.

The exact subspace holds every intra-component shortest path of length
two whose middle node is a target. Its risks are computed by scanning,
for each component and each source ``s`` adjacent to a target, the
neighbours of neighbours of ``s`` inside that component.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .decomposition import Decomposition, OutReachTable, PartitionWeights
from .graph import Graph


@dataclass
class ExactRisks:
    nodes: np.ndarray  # target ids, sorted
    hat_ell: np.ndarray  # aligned with ``nodes``
    hat_lambda: float
    work_bound: int  # sum of deg(v)^2 over neighbours of targets

    def as_dict(self) -> dict[int, float]:
        return dict(zip(self.nodes.tolist(), self.hat_ell.tolist()))


def exact_two_hop(
    g: Graph, d: Decomposition, r: OutReachTable, w: PartitionWeights, A: Iterable[int]
) -> ExactRisks:
    nodes = np.array(sorted(set(A)), dtype=np.int64)
    if len(nodes) == 0:
        raise ValueError("target set A must be nonempty")
    n = g.n
    target = np.zeros(n, dtype=bool)
    target[nodes] = True
    in_b = np.zeros(n, dtype=bool)
    for v in nodes.tolist():
        in_b[g.neighbors(v)] = True
    deg = g.degrees()
    work = int(np.sum(deg[in_b].astype(np.int64) ** 2))

    scale = 1.0 / (n * (n - 1) * w.gamma_eta)
    acc: dict[int, list[float]] = {int(v): [] for v in nodes.tolist()}
    for i in w.touched.tolist():
        lc = d.local(i)
        if lc.size < 3:
            continue
        glob = lc.nodes.tolist()
        is_target = target[lc.nodes].tolist()
        sources = np.flatnonzero(in_b[lc.nodes]).tolist()
        if not sources:
            continue
        rloc = r.values[i].tolist()
        ladj = lc.adj
        count = [0] * lc.size
        for s in sources:
            near = set(ladj[s])
            near.add(s)
            # phase 1: number of length-2 paths from s to every t at distance 2
            reached = []
            for v in ladj[s]:
                for t in ladj[v]:
                    if t not in near:
                        if count[t] == 0:
                            reached.append(t)
                        count[t] += 1
            if not reached:
                continue
            # phase 2: credit each target middle node with its share of q_st
            rs = rloc[s]
            for v in ladj[s]:
                if not is_target[v]:
                    continue
                bucket = acc[glob[v]]
                for t in ladj[v]:
                    if t not in near:
                        bucket.append(rs * rloc[t] / count[t])
            for t in reached:
                count[t] = 0

    hat = np.array([math.fsum(acc[v]) * scale for v in nodes.tolist()])
    return ExactRisks(nodes, hat, math.fsum(hat.tolist()), work)
