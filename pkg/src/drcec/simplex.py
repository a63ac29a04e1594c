"""Dense two-phase primal simplex for ``min c^T x  s.t.  A x (>=|=) b,  x >= 0``.

The solver returns basic primal and dual solutions. Dual signs follow the
row sense: ``y_i >= 0`` on ``>=`` rows, free on ``=`` rows, and at optimality
``A^T y <= c`` with ``b^T y == c^T x``.

Pivoting uses Dantzig's rule until the objective stalls for a number of
consecutive degenerate pivots, after which Bland's rule takes over for the
rest of the phase so the method always terminates.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

GE = ">="
EQ = "="


class SimplexError(RuntimeError):
    """Numerical breakdown or iteration limit inside the solver."""


class Status(enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class Tolerances:
    feas: float = 1e-7
    gap: float = 1e-6
    integrality: float = 1e-6
    pivot: float = 1e-9
    optimality: float = 1e-9


DEFAULT_TOL = Tolerances()


@dataclass(frozen=True)
class LpProblem:
    """Linear program over non-negative variables.

    ``A`` holds one row per constraint, ``senses[i]`` is ``">="`` or ``"="``.
    """

    cost: np.ndarray
    A: np.ndarray
    b: np.ndarray
    senses: tuple[str, ...]

    def __post_init__(self):
        cost = np.asarray(self.cost, dtype=float).reshape(-1)
        A = np.asarray(self.A, dtype=float)
        if A.size == 0:
            A = A.reshape(len(np.atleast_1d(self.b)) if np.size(self.b) else 0, cost.size)
        b = np.asarray(self.b, dtype=float).reshape(-1)
        senses = tuple(self.senses)
        if A.ndim != 2 or A.shape[1] != cost.size:
            raise ValueError(f"constraint matrix shape {A.shape} does not match {cost.size} variables")
        if A.shape[0] != b.size or len(senses) != b.size:
            raise ValueError("A, b and senses disagree on the number of rows")
        if any(s not in (GE, EQ) for s in senses):
            raise ValueError(f"row senses must be {GE!r} or {EQ!r}")
        for name, arr in (("cost", cost), ("A", A), ("b", b)):
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"non-finite entry in {name}")
        object.__setattr__(self, "cost", cost)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "senses", senses)

    @classmethod
    def from_rows(
        cls, cost: Sequence[float], rows: Iterable[tuple[Sequence[float], str, float]]
    ) -> "LpProblem":
        rows = list(rows)
        n = len(cost)
        A = np.array([r[0] for r in rows], dtype=float).reshape(len(rows), n)
        return cls(np.asarray(cost, float), A, np.array([r[2] for r in rows], float), tuple(r[1] for r in rows))

    @property
    def num_vars(self) -> int:
        return self.cost.size

    @property
    def num_rows(self) -> int:
        return self.b.size

    @property
    def rows(self):
        return [(self.A[i], self.senses[i], self.b[i]) for i in range(self.num_rows)]


@dataclass
class LpSolution:
    status: Status
    x: np.ndarray
    objective: float
    y: np.ndarray
    iterations: int = 0
    basis: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64), repr=False)

    @property
    def optimal(self) -> bool:
        return self.status is Status.OPTIMAL


@dataclass(frozen=True)
class KktReport:
    primal_violation: float
    dual_violation: float
    duality_gap: float
    complementarity: float

    def ok(self, tol: Tolerances = DEFAULT_TOL) -> bool:
        return (
            self.primal_violation <= tol.feas
            and self.dual_violation <= tol.feas
            and self.duality_gap <= tol.gap
            and self.complementarity <= tol.gap
        )


def check_kkt(p: LpProblem, sol: LpSolution, tol: Tolerances = DEFAULT_TOL) -> KktReport:
    """Measure how far ``(sol.x, sol.y)`` is from satisfying the optimality conditions."""
    if not sol.optimal:
        raise ValueError("KKT check needs an optimal solution")
    x, y = sol.x, sol.y
    ge = np.array([s == GE for s in p.senses], dtype=bool)
    slack = p.A @ x - p.b if p.num_rows else np.zeros(0)
    primal = 0.0
    if p.num_rows:
        primal = max(
            float(np.max(-slack[ge], initial=0.0)),
            float(np.max(np.abs(slack[~ge]), initial=0.0)),
        )
    primal = max(primal, float(np.max(-x, initial=0.0)))
    reduced = p.cost - (p.A.T @ y if p.num_rows else 0.0)
    dual = max(float(np.max(-reduced, initial=0.0)), float(np.max(-y[ge], initial=0.0)) if p.num_rows else 0.0)
    gap = abs(float(p.cost @ x) - float(p.b @ y)) if p.num_rows else abs(float(p.cost @ x))
    comp = float(np.max(np.abs(x * reduced), initial=0.0))
    if p.num_rows:
        comp = max(comp, float(np.max(np.abs(y * slack), initial=0.0)))
    return KktReport(primal + 0.0, dual + 0.0, gap + 0.0, comp + 0.0)


class _Tableau:
    """Full tableau ``B^-1 [Z | b]`` with an explicit reduced-cost row."""

    def __init__(self, Z: np.ndarray, rhs: np.ndarray, basis: np.ndarray, tol: Tolerances):
        self.Z = Z  # original equality-form columns, kept for reinversion
        self.b = rhs.copy()
        self.T = Z.copy()
        self.rhs = rhs.copy()
        self.basis = basis.copy()
        self.tol = tol
        self.iterations = 0

    def reinvert(self) -> None:
        B = self.Z[:, self.basis]
        try:
            self.T = np.linalg.solve(B, self.Z)
            self.rhs = np.linalg.solve(B, self.b)
        except np.linalg.LinAlgError as exc:
            raise SimplexError("basis became singular") from exc
        self.T[np.abs(self.T) < 1e-13] = 0.0
        self.rhs[np.abs(self.rhs) < 1e-13] = 0.0

    def pivot(self, r: int, s: int, d: np.ndarray) -> None:
        T = self.T
        piv = T[r, s]
        T[r] /= piv
        self.rhs[r] /= piv
        col = T[:, s].copy()
        col[r] = 0.0
        nz = np.flatnonzero(col)
        if nz.size:
            T[nz] -= np.outer(col[nz], T[r])
            self.rhs[nz] -= col[nz] * self.rhs[r]
        d -= d[s] * T[r]
        d[s] = 0.0
        self.rhs[np.abs(self.rhs) < 1e-13] = 0.0
        np.maximum(self.rhs, 0.0, out=self.rhs, where=self.rhs > -self.tol.feas)
        self.basis[r] = s
        self.iterations += 1

    def run(self, cost: np.ndarray, allowed: np.ndarray, max_iter: int, stall_limit: int = 50) -> bool:
        """Optimize ``cost`` over the current basis; False means unbounded."""
        tol = self.tol
        bland = False
        stalled = 0
        since_reinvert = 0
        d = cost - cost[self.basis] @ self.T
        obj = float(cost[self.basis] @ self.rhs)
        while True:
            if self.iterations >= max_iter:
                raise SimplexError(f"iteration limit {max_iter} reached")
            if since_reinvert >= 100:
                self.reinvert()
                d = cost - cost[self.basis] @ self.T
                since_reinvert = 0
            cand = np.flatnonzero(allowed & (d < -tol.optimality))
            if cand.size == 0:
                # confirm on a fresh factorization before declaring optimality
                if since_reinvert:
                    self.reinvert()
                    d = cost - cost[self.basis] @ self.T
                    since_reinvert = 0
                    continue
                return True
            s = int(cand[0]) if bland else int(cand[np.argmin(d[cand])])
            column = self.T[:, s]
            rows = np.flatnonzero(column > tol.pivot)
            if rows.size == 0:
                return False
            ratios = self.rhs[rows] / column[rows]
            best = ratios.min()
            tied = rows[ratios <= best + 1e-12 * max(1.0, abs(best))]
            if bland:
                r = int(tied[np.argmin(self.basis[tied])])
            else:
                # prefer the largest pivot element among ties for stability
                r = int(tied[np.argmax(column[tied])])
            self.pivot(r, s, d)
            since_reinvert += 1
            new_obj = float(cost[self.basis] @ self.rhs)
            if new_obj < obj - 1e-12 * max(1.0, abs(obj)):
                stalled = 0
            else:
                stalled += 1
                if stalled >= stall_limit:
                    bland = True
            obj = new_obj


def solve(p: LpProblem, tol: Tolerances = DEFAULT_TOL, max_iter: int | None = None) -> LpSolution:
    """Solve ``p`` with the two-phase simplex method.

    Raises:
        SimplexError: if the basis degenerates numerically or the iteration
            limit is hit.
    """
    m, n = p.num_rows, p.num_vars
    if m == 0:
        if np.any(p.cost < 0):
            return LpSolution(Status.UNBOUNDED, np.zeros(n), -np.inf, np.zeros(0))
        return LpSolution(Status.OPTIMAL, np.zeros(n), 0.0, np.zeros(0))

    ge_rows = [i for i, s in enumerate(p.senses) if s == GE]
    n_sur = len(ge_rows)
    Z = np.zeros((m, n + n_sur))
    Z[:, :n] = p.A
    for j, i in enumerate(ge_rows):
        Z[i, n + j] = -1.0
    b = p.b.copy()
    flip = b < 0
    Z[flip] *= -1.0
    b[flip] *= -1.0

    # a surplus column that became +1 after flipping is a ready-made basic variable
    basis = np.full(m, -1, dtype=np.int64)
    for j, i in enumerate(ge_rows):
        if flip[i]:
            basis[i] = n + j
    need_art = np.flatnonzero(basis < 0)
    n_art = need_art.size
    N = n + n_sur + n_art
    Zfull = np.zeros((m, N))
    Zfull[:, : n + n_sur] = Z
    for j, i in enumerate(need_art):
        Zfull[i, n + n_sur + j] = 1.0
        basis[i] = n + n_sur + j

    if max_iter is None:
        max_iter = 50 * (m + N) + 1000
    tab = _Tableau(Zfull, b, basis, tol)
    is_art = np.zeros(N, dtype=bool)
    is_art[n + n_sur :] = True

    scale = max(1.0, float(np.max(np.abs(b), initial=0.0)))
    if n_art:
        phase1 = is_art.astype(float)
        tab.run(phase1, np.ones(N, dtype=bool), max_iter)
        infeas = float(phase1[tab.basis] @ tab.rhs)
        if infeas > tol.feas * scale:
            return LpSolution(Status.INFEASIBLE, np.zeros(n), np.nan, np.zeros(m), tab.iterations)
        # drive zero-level artificials out of the basis where a real column can replace them
        scratch = np.zeros(N)
        for r in range(m):
            if is_art[tab.basis[r]]:
                row = np.abs(tab.T[r, : n + n_sur])
                j = int(np.argmax(row))
                if row[j] > 1e-7:
                    tab.pivot(r, j, scratch)
        # rows still carrying an artificial are linear combinations of the others
        keep = ~is_art[tab.basis]
        iters = tab.iterations
        Zkeep = Zfull[keep][:, : n + n_sur]
        tab = _Tableau(Zkeep, b[keep], tab.basis[keep], tol)
        tab.iterations = iters
        tab.reinvert()
    else:
        keep = np.ones(m, dtype=bool)

    width = n + n_sur
    cost = np.zeros(width)
    cost[:n] = p.cost
    bounded = tab.run(cost, np.ones(width, dtype=bool), max_iter)

    z = np.zeros(width)
    z[tab.basis] = tab.rhs
    x = z[:n].copy()
    if not bounded:
        return LpSolution(Status.UNBOUNDED, x, -np.inf, np.zeros(m), tab.iterations, tab.basis.copy())

    B = tab.Z[:, tab.basis]
    try:
        yhat_kept = np.linalg.solve(B.T, cost[tab.basis])
    except np.linalg.LinAlgError as exc:
        raise SimplexError("final basis is singular") from exc
    yhat = np.zeros(m)
    yhat[keep] = yhat_kept
    y = np.where(flip, -yhat, yhat)
    # clean signs that are only rounding noise
    for i in ge_rows:
        if -tol.feas < y[i] < 0:
            y[i] = 0.0
    x[np.abs(x) < 1e-12] = 0.0
    return LpSolution(Status.OPTIMAL, x, float(p.cost @ x), y, tab.iterations, tab.basis.copy())


def dump_triplets(p: LpProblem) -> str:
    """Plain-text dump for cross-checking against other solvers.

    Lines are ``c <col> <value>``, ``b <row> <sense> <value>`` and
    ``a <row> <col> <value>`` for every non-zero; not a stable format.
    """
    out = [f"# {p.num_rows} rows {p.num_vars} cols"]
    out += [f"c {j} {float(v)!r}" for j, v in enumerate(p.cost) if v != 0.0]
    out += [f"b {i} {s} {float(v)!r}" for i, (s, v) in enumerate(zip(p.senses, p.b))]
    rows, cols = np.nonzero(p.A)
    out += [f"a {i} {j} {float(p.A[i, j])!r}" for i, j in zip(rows, cols)]
    return "\n".join(out) + "\n"
