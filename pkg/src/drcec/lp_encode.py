"""LP relaxation of the regularized clustering ILP, and LP rounding.

Columns are ordered node-major: ``x_v^c`` sits at ``v * k + c`` and the edge
indicator ``x_e`` of edge ``j`` at ``n * k + j``. All rows are ``>=`` rows so
every dual multiplier is non-negative:

* per node, ``sum_c x_v^c >= k - 1`` and ``-sum_c x_v^c >= -(k - 1)``;
* per edge ``e`` of color ``c`` and node ``v`` in ``e``, ``x_e - x_v^c >= 0``;
* per column, ``-x >= -1``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hypergraph import Clustering, LabeledHypergraph
from .metrics import ObjectiveBreakdown, drcec_objective
from .simplex import DEFAULT_TOL, GE, KktReport, LpProblem, SimplexError, Tolerances, check_kkt, solve

ROUND_TIE_TOL = 1e-9


class RelaxationError(SimplexError):
    """The relaxation did not solve cleanly; ``report`` holds the KKT residuals if any."""

    def __init__(self, message: str, report: KktReport | None = None):
        super().__init__(message if report is None else f"{message}: {report}")
        self.report = report


@dataclass(frozen=True)
class DrcecEncoding:
    num_nodes: int
    num_colors: int
    num_edges: int
    c_e: np.ndarray
    c_d: np.ndarray
    const_offset: float
    A: np.ndarray
    b: np.ndarray

    @property
    def num_cols(self) -> int:
        return self.num_nodes * self.num_colors + self.num_edges

    def node_col(self, v: int, c: int) -> int:
        return v * self.num_colors + c

    def edge_col(self, j: int) -> int:
        return self.num_nodes * self.num_colors + j

    def cost(self, beta: float) -> np.ndarray:
        return self.c_e + beta * self.c_d

    def problem(self, beta: float) -> LpProblem:
        return LpProblem(self.cost(beta), self.A, self.b, (GE,) * self.b.size)

    def value(self, x: np.ndarray, beta: float) -> float:
        """Objective including the constant ``beta * sum d`` offset."""
        return float(self.c_e @ x + beta * (self.const_offset + self.c_d @ x))

    def node_block(self, x: np.ndarray) -> np.ndarray:
        """``x_v^c`` reshaped to ``(n, k)``."""
        return x[: self.num_nodes * self.num_colors].reshape(self.num_nodes, self.num_colors)

    def vector_of(self, h: LabeledHypergraph, c: Clustering) -> np.ndarray:
        """0/1 LP point encoding clustering ``c``."""
        c.validate(h)
        x = np.ones(self.num_cols)
        block = self.node_block(x)
        block[np.arange(self.num_nodes), c.as_array()] = 0.0
        a = c.as_array()
        for j, e in enumerate(h.edges):
            x[self.edge_col(j)] = float(np.any(a[list(e.nodes)] != e.color))
        return x


def encode(h: LabeledHypergraph, beta: float = 0.0) -> tuple[LpProblem, DrcecEncoding]:
    """Build the relaxation at ``beta`` together with its index map."""
    if beta < 0:
        raise ValueError("beta must be non-negative")
    n, k, m = h.num_nodes, h.k, len(h.edges)
    if k < 1 and n > 0:
        raise ValueError("encoding needs at least one color")
    ncols = n * k + m
    n_coupling = sum(len(e) for e in h.edges)
    A = np.zeros((2 * n + n_coupling + ncols, ncols))
    b = np.zeros(A.shape[0])
    row = 0
    for v in range(n):
        A[row, v * k : (v + 1) * k] = 1.0
        b[row] = k - 1
        A[row + 1, v * k : (v + 1) * k] = -1.0
        b[row + 1] = -(k - 1)
        row += 2
    for j, e in enumerate(h.edges):
        for v in e.nodes:
            A[row, n * k + j] = 1.0
            A[row, v * k + e.color] = -1.0
            row += 1
    A[row:, :] = -np.eye(ncols)
    b[row:] = -1.0

    c_e = np.zeros(ncols)
    c_e[n * k :] = 1.0
    c_d = np.zeros(ncols)
    c_d[: n * k] = -h.color_degree.reshape(-1)
    enc = DrcecEncoding(n, k, m, c_e, c_d, float(h.color_degree.sum()), A, b)
    return enc.problem(beta), enc


@dataclass
class RelaxedSolution:
    x: np.ndarray
    y: np.ndarray
    objective_with_offset: float
    beta: float
    encoding: DrcecEncoding

    @property
    def lp_objective(self) -> float:
        """Raw LP cost without the constant offset."""
        return float(self.encoding.cost(self.beta) @ self.x)

    @property
    def node_x(self) -> np.ndarray:
        return self.encoding.node_block(self.x)

    @property
    def weights(self) -> np.ndarray:
        """Per-node cluster weights ``1 - x_v^c``; each row sums to one."""
        return 1.0 - self.node_x

    def is_integral(self, tol: float = DEFAULT_TOL.integrality) -> bool:
        return bool(np.all(np.minimum(np.abs(self.x), np.abs(1.0 - self.x)) <= tol))


def solve_relaxation(h: LabeledHypergraph, beta: float, tol: Tolerances = DEFAULT_TOL) -> RelaxedSolution:
    """Solve the LP relaxation at ``beta`` and certify the result.

    Raises:
        RelaxationError: if the solver does not report an optimum or the
            returned pair fails the KKT check.
    """
    problem, enc = encode(h, beta)
    sol = solve(problem, tol)
    if not sol.optimal:
        raise RelaxationError(f"relaxation reported {sol.status.value}; it is always feasible and bounded")
    report = check_kkt(problem, sol, tol)
    if not report.ok(tol):
        raise RelaxationError("relaxation failed its optimality certificate", report)
    return RelaxedSolution(sol.x, sol.y, enc.value(sol.x, beta), beta, enc)


def round_solution(sol: RelaxedSolution, h: LabeledHypergraph, tie_break=None) -> Clustering:
    """Send every node to a color with the smallest ``x_v^c``.

    Colors within ``1e-9`` of the minimum count as tied; ties go to the lowest
    index unless a tie-break policy is supplied.
    """
    block = sol.node_x
    if block.shape != (h.num_nodes, h.k):
        raise ValueError("solution does not belong to this hypergraph")
    out = []
    for row in block:
        tied = np.flatnonzero(row <= row.min() + ROUND_TIE_TOL)
        out.append(int(tied[0]) if tie_break is None else tie_break.choose(tied))
    return Clustering(tuple(out))


def algorithm1(
    h: LabeledHypergraph, beta: float, tol: Tolerances = DEFAULT_TOL, tie_break=None
) -> tuple[Clustering, ObjectiveBreakdown, RelaxedSolution]:
    """Solve the relaxation, round it, and score the rounded clustering."""
    relaxed = solve_relaxation(h, beta, tol)
    clustering = round_solution(relaxed, h, tie_break)
    return clustering, drcec_objective(h, clustering, beta), relaxed
