"""Stability ranges of the parametric relaxation in the regularization weight.

For an LP solution ``x0`` found at weight ``beta0`` the auxiliary program

    max theta  s.t.  A^T y <= c - theta * c_d,
                     b^T y  = (c - theta * c_d)^T x0,
                     y >= 0,  0 <= theta (<= cap)

finds the largest shift ``theta`` for which some dual vector still certifies
``x0`` as optimal under the cost ``c - theta * c_d``, i.e. at weight
``beta0 - theta``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .hypergraph import LabeledHypergraph
from .lp_encode import RelaxationError, encode, solve_relaxation
from .simplex import DEFAULT_TOL, EQ, GE, LpProblem, Status, Tolerances, check_kkt, solve
from .vote import minority_sets


@dataclass(frozen=True)
class AuxSolution:
    theta: float
    y: np.ndarray
    unbounded: bool
    dual_violation: float
    equality_residual: float


@dataclass(frozen=True)
class StabilityResult:
    beta0: float
    x0: np.ndarray
    theta_plus: float
    beta_hat: float
    clamped: bool
    unique_minority: bool
    epsilon: float
    residual_above: float
    gap_below: float | None
    aux_dual_violation: float
    aux_equality_residual: float

    @property
    def verified(self) -> bool:
        """Both re-solve checks passed: equal value above, strictly lower value below."""
        above = self.residual_above <= 1e-5
        below = self.gap_below is None or self.gap_below > 1e-7
        return above and below


def build_aux_lp(
    p: LpProblem, c_d: np.ndarray, x0: np.ndarray, cap: float | None = None
) -> LpProblem:
    """Auxiliary LP over ``(y, theta)``, posed as a minimization of ``-theta``.

    ``p`` must have only ``>=`` rows so that ``y >= 0`` is the right dual
    domain. ``c_d`` is the direction along which the cost moves; pass its
    negation to explore increasing weights.
    """
    c_d = np.asarray(c_d, dtype=float)
    x0 = np.asarray(x0, dtype=float)
    if c_d.size != p.num_vars or x0.size != p.num_vars:
        raise ValueError("c_d and x0 must have one entry per LP column")
    if any(s != GE for s in p.senses):
        raise ValueError("auxiliary LP needs a problem with only '>=' rows")
    m, n = p.num_rows, p.num_vars
    # columns: y_0..y_{m-1}, theta
    rows = [np.hstack([-p.A.T, -c_d[:, None]])]  # -A^T y - theta c_d >= -c
    rhs = [-p.cost]
    senses = [GE] * n
    rows.append(np.append(p.b, c_d @ x0)[None, :])  # b^T y + theta c_d^T x0 = c^T x0
    rhs.append(np.array([p.cost @ x0]))
    senses.append(EQ)
    if cap is not None:
        cap_row = np.zeros((1, m + 1))
        cap_row[0, m] = -1.0
        rows.append(cap_row)
        rhs.append(np.array([-float(cap)]))
        senses.append(GE)
    cost = np.zeros(m + 1)
    cost[m] = -1.0
    return LpProblem(cost, np.vstack(rows), np.concatenate(rhs), tuple(senses))


def solve_aux(
    p: LpProblem, c_d: np.ndarray, x0: np.ndarray, cap: float | None = None, tol: Tolerances = DEFAULT_TOL
) -> AuxSolution:
    aux = build_aux_lp(p, c_d, x0, cap)
    sol = solve(aux, tol)
    if sol.status is Status.INFEASIBLE:
        raise RelaxationError("auxiliary LP is infeasible; x0 was not optimal at the starting weight")
    if sol.status is Status.UNBOUNDED:
        return AuxSolution(math.inf, sol.x[:-1], True, 0.0, 0.0)
    report = check_kkt(aux, sol, tol)
    if not report.ok(tol):
        raise RelaxationError("auxiliary LP failed its optimality certificate", report)
    y, theta = sol.x[:-1], float(sol.x[-1])
    shifted = p.cost - theta * c_d
    dual_violation = float(np.max(p.A.T @ y - shifted, initial=0.0))
    equality = abs(float(p.b @ y) - float(shifted @ x0))
    return AuxSolution(theta, y, False, dual_violation, equality)


def verification_epsilon(beta0: float) -> float:
    return max(1e-6, 1e-4 * beta0)


def beta_hat(h: LabeledHypergraph, beta0: float | None = None, tol: Tolerances = DEFAULT_TOL) -> StabilityResult:
    """Smallest weight at which the large-weight LP solution is still optimal.

    The LP is first solved at ``beta0`` (default ``d_max + 1``), where every
    optimum puts each node's weight on its least-experienced colors. The
    returned ``beta_hat`` is certified for that particular ``x0`` and then
    checked by re-solving just above and just below it.
    """
    if beta0 is None:
        beta0 = float(h.d_max + 1)
    if beta0 <= h.d_max:
        raise ValueError(f"beta0 must exceed d_max = {h.d_max}")
    relaxed = solve_relaxation(h, beta0, tol)
    enc = relaxed.encoding
    problem = enc.problem(beta0)
    x0 = relaxed.x
    aux = solve_aux(problem, enc.c_d, x0, cap=beta0, tol=tol)
    theta = min(aux.theta, beta0)
    clamped = theta >= beta0 - 1e-9 * max(1.0, beta0)
    bhat = 0.0 if clamped else max(0.0, beta0 - theta)

    eps = verification_epsilon(beta0)
    above = bhat + eps
    residual_above = abs(solve_relaxation(h, above, tol).objective_with_offset - enc.value(x0, above))
    gap_below = None
    if bhat > 0:
        below = max(0.0, bhat - eps)
        gap_below = enc.value(x0, below) - solve_relaxation(h, below, tol).objective_with_offset

    return StabilityResult(
        beta0=beta0,
        x0=x0,
        theta_plus=theta,
        beta_hat=bhat,
        clamped=clamped,
        unique_minority=all(len(s) == 1 for s in minority_sets(h)),
        epsilon=eps,
        residual_above=residual_above,
        gap_below=gap_below,
        aux_dual_violation=aux.dual_violation,
        aux_equality_residual=aux.equality_residual,
    )


def stability_interval(
    h: LabeledHypergraph, beta: float, x: np.ndarray | None = None, tol: Tolerances = DEFAULT_TOL
) -> tuple[float, float]:
    """Weights ``[lo, hi]`` over which an LP optimum at ``beta`` stays optimal.

    By default the point is whatever the solver returns at ``beta``; pass
    ``x`` to ask about a specific optimal point instead. ``hi`` is ``inf``
    when the point stays optimal for every larger weight.
    """
    if beta < 0:
        raise ValueError("beta must be non-negative")
    _, enc = encode(h, beta)
    if x is None:
        x = solve_relaxation(h, beta, tol).x
    problem = enc.problem(beta)
    down = solve_aux(problem, enc.c_d, x, cap=beta, tol=tol)
    up = solve_aux(problem, -enc.c_d, x, cap=None, tol=tol)
    lo = max(0.0, beta - min(down.theta, beta))
    hi = math.inf if up.unbounded else beta + up.theta
    return lo, hi


def lp_value_curve(h: LabeledHypergraph, betas, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """LP optimum (with offset) at each weight in ``betas``."""
    return np.array([solve_relaxation(h, float(b), tol).objective_with_offset for b in betas])
