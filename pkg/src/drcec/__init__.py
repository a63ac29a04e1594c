"""Diversity-regularized clustering of edge-labeled hypergraphs."""
from .hypergraph import Clustering, Hyperedge, LabeledHypergraph, parse_hypergraph, write_clustering
from .lp_encode import algorithm1, encode, round_solution, solve_relaxation
from .metrics import ObjectiveBreakdown, drcec_objective
from .sensitivity import beta_hat, stability_interval
from .vote import exact_ilp, majority_vote, minority_vote

__all__ = [
    "Clustering",
    "Hyperedge",
    "LabeledHypergraph",
    "ObjectiveBreakdown",
    "algorithm1",
    "beta_hat",
    "drcec_objective",
    "encode",
    "exact_ilp",
    "majority_vote",
    "minority_vote",
    "parse_hypergraph",
    "round_solution",
    "solve_relaxation",
    "stability_interval",
    "write_clustering",
]
