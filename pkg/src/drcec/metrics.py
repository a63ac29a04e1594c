"""Scores defined on a clustering of an edge-labeled hypergraph."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hypergraph import Clustering, LabeledHypergraph


@dataclass(frozen=True)
class ObjectiveBreakdown:
    """Value of the regularized clustering objective, split into its two terms.

    ``edge_cost`` counts hyperedges not fully inside the cluster of their own
    color; ``experience_penalty`` is the sum over nodes of the node's degree in
    the color it was assigned to.
    """

    edge_cost: int
    experience_penalty: int
    beta: float

    @property
    def total(self):
        return self.edge_cost + self.beta * self.experience_penalty


def _check(h: LabeledHypergraph, c: Clustering) -> np.ndarray:
    c.validate(h)
    return c.as_array()


def diversity_experience_scores(h: LabeledHypergraph, c: Clustering) -> list[tuple[int, int]]:
    """Per color ``i``: ``(D(i), E(i))``.

    ``E(i)`` sums the color-``i`` degree of the nodes placed in cluster ``i``;
    ``D(i)`` sums their degrees in every other color.
    """
    a = _check(h, c)
    deg = h.color_degree
    total = h.degree
    scores = []
    for i in range(h.k):
        members = a == i
        e = int(deg[members, i].sum())
        scores.append((int(total[members].sum()) - e, e))
    return scores


def naive_objective(h: LabeledHypergraph, c: Clustering, beta):
    """``sum_i E(i) + beta * D(i)``; exact when ``beta`` is an int or Fraction."""
    return sum(e + beta * d for d, e in diversity_experience_scores(h, c))


def edge_violations(h: LabeledHypergraph, c: Clustering) -> list[bool]:
    a = _check(h, c)
    return [bool(np.any(a[list(e.nodes)] != e.color)) for e in h.edges]


def experience_penalty(h: LabeledHypergraph, c: Clustering) -> int:
    a = _check(h, c)
    return int(h.color_degree[np.arange(h.num_nodes), a].sum()) if h.num_nodes else 0


def drcec_objective(h: LabeledHypergraph, c: Clustering, beta: float) -> ObjectiveBreakdown:
    if beta < 0:
        raise ValueError("beta must be non-negative")
    return ObjectiveBreakdown(
        edge_cost=sum(edge_violations(h, c)),
        experience_penalty=experience_penalty(h, c),
        beta=beta,
    )


def edge_satisfaction(h: LabeledHypergraph, c: Clustering) -> float:
    """Fraction of hyperedges whose nodes all sit in the edge's own color."""
    if not h.edges:
        raise ValueError("edge satisfaction is undefined without hyperedges")
    violated = edge_violations(h, c)
    return 1.0 - sum(violated) / len(violated)


def _within_ratios(h: LabeledHypergraph, a: np.ndarray) -> np.ndarray:
    # per-node share of its edges that match its assigned color; NaN for isolated nodes
    total = h.degree.astype(float)
    own = h.color_degree[np.arange(h.num_nodes), a].astype(float) if h.num_nodes else total
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.where(total > 0, own / np.where(total > 0, total, 1.0), np.nan)


def experience_homogeneity(h: LabeledHypergraph, c: Clustering, i: int) -> float:
    """Sum over members ``v`` of cluster ``i`` of ``d_v^i / d(v)``; isolated nodes are skipped."""
    if not 0 <= i < h.k:
        raise IndexError(f"color {i} out of range")
    a = _check(h, c)
    ratios = _within_ratios(h, a)[a == i]
    return float(np.nansum(ratios)) if ratios.size else 0.0


def f_within(h: LabeledHypergraph, c: Clustering) -> float:
    """``sum_i |C(i)|/|V| * homogeneity(i)``, taken literally (can exceed 1)."""
    a = _check(h, c)
    if h.num_nodes == 0:
        return 0.0
    ratios = _within_ratios(h, a)
    total = 0.0
    for i in range(h.k):
        members = a == i
        if members.any():
            total += members.sum() / h.num_nodes * float(np.nansum(ratios[members]))
    return total


def f_within_normalized(h: LabeledHypergraph, c: Clustering) -> float:
    """Size-weighted average over clusters of the mean within-color share.

    Each cluster contributes ``|C(i)|/|V|`` times the average of ``d_v^i/d(v)``
    over its non-isolated members, so the result lies in ``[0, 1]``.
    """
    a = _check(h, c)
    if h.num_nodes == 0:
        return 0.0
    ratios = _within_ratios(h, a)
    total = 0.0
    for i in range(h.k):
        r = ratios[a == i]
        r = r[~np.isnan(r)]
        if r.size:
            total += (a == i).sum() / h.num_nodes * float(r.mean())
    return total
