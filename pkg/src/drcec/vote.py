"""Majority/minority vote clusterings and the exhaustive exact solver.

The exact solver enumerates all ``k**n`` assignments and is meant as a
verification oracle for small instances, not as a production solver.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .hypergraph import Clustering, LabeledHypergraph
from .metrics import ObjectiveBreakdown

DEFAULT_NODE_CAP = 12
DEFAULT_BUDGET = 2**24
_CHUNK = 1 << 16
_TIE_RTOL = 1e-9


class EnumerationBudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class Deterministic:
    """Break ties toward the lowest color index."""

    def choose(self, candidates: np.ndarray) -> int:
        return int(candidates[0])


class SeededRandom:
    """Break ties uniformly at random from a seeded generator."""

    def __init__(self, seed=None):
        self.rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)

    def choose(self, candidates: np.ndarray) -> int:
        if len(candidates) == 1:
            return int(candidates[0])
        return int(self.rng.choice(candidates))


def minority_sets(h: LabeledHypergraph) -> list[frozenset[int]]:
    """For every node, the set of colors attaining its smallest color degree."""
    deg = h.color_degree
    if h.k == 0:
        return [frozenset() for _ in range(h.num_nodes)]
    low = deg.min(axis=1, keepdims=True)
    return [frozenset(np.flatnonzero(row).tolist()) for row in deg == low]


def majority_sets(h: LabeledHypergraph) -> list[frozenset[int]]:
    deg = h.color_degree
    if h.k == 0:
        return [frozenset() for _ in range(h.num_nodes)]
    high = deg.max(axis=1, keepdims=True)
    return [frozenset(np.flatnonzero(row).tolist()) for row in deg == high]


def is_minority_clustering(h: LabeledHypergraph, c: Clustering) -> bool:
    return all(col in m for col, m in zip(c.assignment, minority_sets(h)))


def is_majority_clustering(h: LabeledHypergraph, c: Clustering) -> bool:
    return all(col in m for col, m in zip(c.assignment, majority_sets(h)))


def _vote(sets: list[frozenset[int]], tie_break) -> Clustering:
    tie_break = tie_break or Deterministic()
    return Clustering(tuple(tie_break.choose(np.array(sorted(s))) for s in sets))


def majority_vote(h: LabeledHypergraph, tie_break=None) -> Clustering:
    """Place every node in a color where it has the most experience."""
    if h.k < 1:
        raise ValueError("majority vote needs at least one color")
    return _vote(majority_sets(h), tie_break)


def minority_vote(h: LabeledHypergraph, tie_break=None) -> Clustering:
    """Place every node in a color where it has the least experience."""
    if h.k < 1:
        raise ValueError("minority vote needs at least one color")
    return _vote(minority_sets(h), tie_break)


def naive_optimum(h: LabeledHypergraph, beta) -> Clustering:
    """Maximizer of the experience + beta * diversity score.

    Per node the score is ``beta * d(v) + (1 - beta) * d_v^c`` for its color
    ``c``, so majority vote wins for ``beta < 1`` and minority vote for
    ``beta > 1``. At ``beta == 1`` every clustering scores the same and
    majority is returned.
    """
    if beta < 0:
        raise ValueError("beta must be non-negative")
    return minority_vote(h) if beta > 1 else majority_vote(h)


# -- enumeration ------------------------------------------------------------


def _check_budget(h: LabeledHypergraph, node_cap: int, budget: int) -> None:
    if h.k < 1:
        raise ValueError("enumeration needs at least one color")
    if h.num_nodes > node_cap:
        raise EnumerationBudgetExceeded(
            f"{h.num_nodes} nodes exceeds the enumeration node cap of {node_cap}"
        )
    if h.k**h.num_nodes > budget:
        raise EnumerationBudgetExceeded(
            f"{h.k}^{h.num_nodes} = {h.k ** h.num_nodes} assignments exceeds the budget of {budget}"
        )


def enumerate_assignments(n: int, k: int, chunk: int = _CHUNK) -> Iterator[tuple[int, np.ndarray]]:
    """Yield ``(first_index, block)`` with all ``k**n`` assignments in lexicographic order.

    Node 0 is the most significant digit, so index order is lexicographic order.
    """
    total = k**n
    powers = k ** np.arange(n - 1, -1, -1, dtype=np.int64)
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        yield start, (idx[:, None] // powers[None, :]) % k


def score_assignments(h: LabeledHypergraph, block: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Edge cost and experience penalty for each row of an assignment block."""
    edge_cost = np.zeros(len(block), dtype=np.int64)
    for e in h.edges:
        edge_cost += np.any(block[:, list(e.nodes)] != e.color, axis=1)
    if h.num_nodes:
        penalty = h.color_degree[np.arange(h.num_nodes)[None, :], block].sum(axis=1)
    else:
        penalty = np.zeros(len(block), dtype=np.int64)
    return edge_cost, penalty


def exact_ilp(
    h: LabeledHypergraph,
    beta: float,
    node_cap: int = DEFAULT_NODE_CAP,
    budget: int = DEFAULT_BUDGET,
) -> tuple[Clustering, ObjectiveBreakdown]:
    """Globally optimal clustering by exhaustive enumeration.

    Among optimal assignments the lexicographically smallest is returned.
    """
    if beta < 0:
        raise ValueError("beta must be non-negative")
    _check_budget(h, node_cap, budget)
    best_total = 0.0
    best = None
    for _, block in enumerate_assignments(h.num_nodes, h.k):
        ec, pen = score_assignments(h, block)
        totals = ec + beta * pen
        low = float(totals.min())
        # later chunks are lexicographically larger, so they only win on a strict improvement
        if best is None or low < best_total - _TIE_RTOL * max(1.0, abs(best_total)):
            j = int(np.flatnonzero(totals <= low + _TIE_RTOL * max(1.0, abs(low)))[0])
            best_total = low
            best = (block[j].copy(), int(ec[j]), int(pen[j]))
    assignment, ec, pen = best
    return Clustering(tuple(assignment.tolist())), ObjectiveBreakdown(ec, pen, beta)


def x0_set(
    h: LabeledHypergraph, node_cap: int = DEFAULT_NODE_CAP, budget: int = DEFAULT_BUDGET
) -> set[Clustering]:
    """All clusterings that minimize the unregularized edge cost."""
    _check_budget(h, node_cap, budget)
    best = None
    found: list[np.ndarray] = []
    for _, block in enumerate_assignments(h.num_nodes, h.k):
        ec, _ = score_assignments(h, block)
        low = int(ec.min())
        if best is None or low < best:
            best, found = low, []
        if low == best:
            found.append(block[ec == low])
    return {Clustering(tuple(row.tolist())) for rows in found for row in rows}


def deviation_threshold(
    h: LabeledHypergraph,
    v: int,
    x_ce: Clustering,
    node_cap: int = DEFAULT_NODE_CAP,
    budget: int = DEFAULT_BUDGET,
) -> float | None:
    """Regularization weight above which ``v`` must leave its ``x_ce`` color.

    Returns ``d(v) / dE`` where ``dE`` is the largest drop in ``v``'s own
    experience term over all clusterings outside the unregularized optimum
    set, or ``None`` when no clustering outside that set lowers it.
    """
    if not 0 <= v < h.num_nodes:
        raise IndexError(f"node {v} out of range")
    x_ce.validate(h)
    _check_budget(h, node_cap, budget)
    deg = h.color_degree
    best_ec = None
    for _, block in enumerate_assignments(h.num_nodes, h.k):
        ec, _ = score_assignments(h, block)
        low = int(ec.min())
        best_ec = low if best_ec is None else min(best_ec, low)
    here = np.asarray([x_ce.assignment])
    if int(score_assignments(h, here)[0][0]) != best_ec:
        raise ValueError("x_ce is not optimal for the unregularized objective")

    # smallest experience v can have in any clustering outside the optimum set
    lowest = None
    for _, block in enumerate_assignments(h.num_nodes, h.k):
        ec, _ = score_assignments(h, block)
        outside = block[ec != best_ec, v]
        if outside.size:
            m = int(deg[v, outside].min())
            lowest = m if lowest is None else min(lowest, m)
    if lowest is None:
        return None
    delta = int(deg[v, x_ce[v]]) - lowest
    if delta <= 0:
        return None
    return float(h.degree[v]) / delta
