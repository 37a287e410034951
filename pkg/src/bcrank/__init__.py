"""Betweenness centrality estimation and ranking for a target subset of nodes.

The sample space of shortest paths is split at cutpoints into
intra-component segments; two-hop segments through a target are counted
exactly and the rest are sampled with an adaptive empirical-Bernstein
stopping rule.
"""

from .decomposition import (
    Decomposition,
    OutReachTable,
    PartitionWeights,
    bc_aux,
    bc_aux_all,
    block_cut_tree,
    decompose,
    out_reach,
    q_weight,
    weights,
)
from .estimator import EstimatorConfig, RiskBreakdown, bernstein_epsilon, estimate_risks, sample_sizes
from .evaluation import RankReport, relative_error_report, spearman_rank_correlation
from .exact import ExactRisks, exact_two_hop
from .graph import Graph, GraphFormatError, from_edges, load_edge_list, write_edge_list
from .oracles import brandes_bc, enumerate_pisp
from .ranker import BCEstimate, prepare, rank_subset, vc_bound_for_subset
from .sampler import PathSampler, build_sampler, sample_uniform_shortest_path

__all__ = [
    "BCEstimate", "Decomposition", "EstimatorConfig", "ExactRisks", "Graph", "GraphFormatError",
    "OutReachTable", "PartitionWeights", "PathSampler", "RankReport", "RiskBreakdown",
    "bc_aux", "bc_aux_all", "bernstein_epsilon", "block_cut_tree", "brandes_bc", "build_sampler",
    "decompose", "enumerate_pisp", "estimate_risks", "exact_two_hop", "from_edges", "load_edge_list",
    "out_reach", "prepare", "q_weight", "rank_subset", "relative_error_report", "sample_sizes",
    "sample_uniform_shortest_path", "spearman_rank_correlation", "vc_bound_for_subset", "weights",
    "write_edge_list",
]
