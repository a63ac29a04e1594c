"""Iterated group formation over a sliding window of history.

At every step the hypergraph made of the last ``w`` steps' hyperedges is
clustered, and each non-empty cluster becomes one new hyperedge of its color.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .hypergraph import Clustering, Hyperedge, LabeledHypergraph
from .lp_encode import algorithm1
from .metrics import ObjectiveBreakdown, drcec_objective
from .vote import SeededRandom, exact_ilp, majority_vote, minority_vote

METHODS = ("lp-round", "exact", "minority", "majority")


@dataclass(frozen=True)
class DynamicsConfig:
    beta: float
    window: int
    steps: int
    warm_start: int | None = None
    method: str = "lp-round"
    seed: int | None = 0

    def __post_init__(self):
        if self.window < 1:
            raise ValueError("window must be at least 1")
        if self.steps < 1:
            raise ValueError("steps must be at least 1")
        if self.beta < 0:
            raise ValueError("beta must be non-negative")
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}")
        if self.warm_start is not None and self.warm_start < 0:
            raise ValueError("warm_start must be non-negative")

    @property
    def warm_steps(self) -> int:
        return self.window if self.warm_start is None else self.warm_start


class HistoryWindow:
    """The most recent ``w`` steps of hyperedges, oldest first."""

    def __init__(self, num_nodes: int, colors, window: int):
        self.num_nodes = num_nodes
        self.colors = tuple(colors)
        self.window = window
        self.slots: deque[list[Hyperedge]] = deque(maxlen=window)

    @classmethod
    def from_hypergraph(cls, h: LabeledHypergraph, window: int) -> "HistoryWindow":
        """Spread the edges of ``h`` over ``w`` pseudo-steps, round-robin from the oldest."""
        win = cls(h.num_nodes, h.colors, window)
        slots: list[list[Hyperedge]] = [[] for _ in range(window)]
        for i, e in enumerate(h.edges):
            slots[i % window].append(e)
        win.slots.extend(slots)
        return win

    def push(self, edges: list[Hyperedge]) -> None:
        self.slots.append(edges)  # deque drops the oldest slot

    def hypergraph(self) -> LabeledHypergraph:
        return LabeledHypergraph(
            self.num_nodes, self.colors, tuple(e for slot in self.slots for e in slot)
        )


def cluster_edges(c: Clustering, k: int) -> list[Hyperedge]:
    """One hyperedge per non-empty cluster, colored by the cluster."""
    return [Hyperedge(i, tuple(c.members(i))) for i in range(k) if i in c.assignment]


def cluster_window(h: LabeledHypergraph, cfg: DynamicsConfig, tie_break) -> Clustering:
    if cfg.method == "lp-round":
        return algorithm1(h, cfg.beta, tie_break=tie_break)[0]
    if cfg.method == "exact":
        return exact_ilp(h, cfg.beta)[0]
    if cfg.method == "minority":
        return minority_vote(h, tie_break)
    return majority_vote(h, tie_break)


def step(
    window: HistoryWindow, cfg: DynamicsConfig, tie_break=None
) -> tuple[Clustering, ObjectiveBreakdown, HistoryWindow]:
    """Cluster the current window and append the resulting hyperedges to it.

    The window is updated in place and also returned.
    """
    h = window.hypergraph()
    c = cluster_window(h, cfg, tie_break)
    breakdown = drcec_objective(h, c, cfg.beta)
    window.push(cluster_edges(c, h.k))
    return c, breakdown, window


@dataclass
class DynamicsTrace:
    """Recorded steps after the warm start.

    ``counts[t, v, c]`` is how often ``v`` was put in color ``c`` during the
    first ``t + 1`` recorded steps; ``exchanged[t, v]`` says whether ``v``
    changed color relative to the step before (False when there was none).
    """

    clusterings: list[Clustering]
    counts: np.ndarray
    exchanged: np.ndarray
    breakdowns: list[ObjectiveBreakdown]
    config: DynamicsConfig = field(repr=False)

    @property
    def steps(self) -> int:
        return len(self.clusterings)


def run(h_initial: LabeledHypergraph, cfg: DynamicsConfig) -> DynamicsTrace:
    """Warm up for ``cfg.warm_steps`` steps, then record ``cfg.steps`` steps."""
    if h_initial.k < 1:
        raise ValueError("dynamics needs at least one color")
    tie_break = SeededRandom(cfg.seed)
    window = HistoryWindow.from_hypergraph(h_initial, cfg.window)
    prev = None
    for _ in range(cfg.warm_steps):
        prev, _, window = step(window, cfg, tie_break)

    n, k = h_initial.num_nodes, h_initial.k
    counts = np.zeros((cfg.steps, n, k), dtype=np.int64)
    exchanged = np.zeros((cfg.steps, n), dtype=bool)
    clusterings, breakdowns = [], []
    running = np.zeros((n, k), dtype=np.int64)
    for t in range(cfg.steps):
        c, breakdown, window = step(window, cfg, tie_break)
        a = c.as_array()
        running[np.arange(n), a] += 1
        counts[t] = running
        if prev is not None:
            exchanged[t] = a != prev.as_array()
        clusterings.append(c)
        breakdowns.append(breakdown)
        prev = c
    return DynamicsTrace(clusterings, counts, exchanged, breakdowns, cfg)


def uniformity_gap(trace: DynamicsTrace, t: int | None = None) -> np.ndarray:
    """Per node, the spread ``max_c - min_c`` of color shares after ``t`` recorded steps."""
    t = trace.steps if t is None else t
    if not 1 <= t <= trace.steps:
        raise ValueError(f"t must lie in 1..{trace.steps}")
    shares = trace.counts[t - 1] / t
    return shares.max(axis=1) - shares.min(axis=1)


def mean_exchanges(trace: DynamicsTrace) -> float:
    """Fraction of (node, step) pairs that changed color between consecutive recorded steps."""
    if trace.steps < 2:
        raise ValueError("mean exchanges needs at least two recorded steps")
    return float(trace.exchanged[1:].mean()) if trace.exchanged.shape[1] else 0.0
