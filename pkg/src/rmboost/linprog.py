"""Master linear program: types, solver entry point, and column pricing.

The master problem over a column set U (one column per base rule, entries
in [-1, 1]) with labels y and regularization weight lam is

    min  1/2 - (1/n) sum_i y_i u_i^T (mu_plus - mu_minus)
         + lam 1^T (mu_plus + mu_minus)
    s.t. -1/2 <= u_i^T (mu_plus - mu_minus) <= 1/2   for every sample i,
         mu_plus, mu_minus >= 0.

``solve_master`` runs the bounded-variable simplex kernel, reads the row
duals off the optimal basis (alpha for the upper margin bounds, beta for
the lower ones), and returns an opaque basis snapshot that warm-starts
later solves after columns are appended (new columns start nonbasic at
zero) or removed (snapshots are remapped with ``BasisSnapshot.remapped``).

The zero solution is always feasible, so a status of "infeasible" can
never legitimately occur; internal inconsistencies raise
:class:`LpInternalError` instead of returning.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .kernels import (
    ROW_AT_LOWER,
    ROW_AT_UPPER,
    ROW_SLACK_BASIC,
    STATUS_ITERATION_LIMIT,
    STATUS_OPTIMAL,
    STATUS_SINGULAR,
    get_kernels,
)

STATUS_NAMES = {
    STATUS_OPTIMAL: "optimal",
    STATUS_ITERATION_LIMIT: "iteration-limit",
}

# Internal solver tolerances.
FEAS_TOL = 1e-9
PIVOT_TOL = 1e-9
DEGEN_TOL = 1e-12
MAX_PIVOTS = 100_000
REFACTOR_EVERY = 100

# Post-solve consistency thresholds; violations mean an internal bug.
MARGIN_CHECK_TOL = 1e-6
GAP_CHECK_TOL = 1e-6


class LpError(ValueError):
    """Invalid master-problem inputs."""


class LpInternalError(RuntimeError):
    """The solver reached a state that valid inputs cannot produce."""


@dataclass(frozen=True)
class LpProblem:
    """Master problem data: columns (n, t), labels (n,) in {-1, +1}, lam > 0."""

    columns: np.ndarray
    labels: np.ndarray
    lam: float

    def validated(self) -> "LpProblem":
        cols = np.ascontiguousarray(np.asarray(self.columns, dtype=np.float64))
        y = np.ascontiguousarray(np.asarray(self.labels, dtype=np.float64))
        if cols.ndim != 2:
            raise LpError("columns must be a 2-d array of shape (n, t)")
        n, t = cols.shape
        if n < 1 or t < 1:
            raise LpError("columns must have at least one row and one column")
        if y.shape != (n,):
            raise LpError(f"labels must have shape ({n},), got {y.shape}")
        if not np.all(np.isfinite(cols)):
            raise LpError("columns contain non-finite entries")
        if np.max(np.abs(cols)) > 1.0 + 1e-9:
            raise LpError("column entries must lie in [-1, 1]")
        if not np.all(np.abs(y) == 1.0):
            raise LpError("labels must be +1 or -1")
        lam = float(self.lam)
        if not (lam > 0.0) or not np.isfinite(lam):
            raise LpError("lam must be a positive finite real")
        return LpProblem(cols, y, lam)


@dataclass(frozen=True)
class BasisSnapshot:
    """Opaque warm-start state for ``solve_master``.

    Holds the basic structural variable ids, the active rows, and the full
    row-state vector at the end of a solve, together with the column count
    it was taken against.  Appending columns keeps a snapshot valid as-is;
    after removing columns, call :meth:`remapped` with the position map.
    """

    bcols: np.ndarray = field(repr=False)
    brows: np.ndarray = field(repr=False)
    rstate: np.ndarray = field(repr=False)
    n_columns: int
    n_rows: int

    def remapped(self, new_index_of_old: Sequence[int], new_n_columns: int) -> "BasisSnapshot":
        """Snapshot rewritten for a column set after deletions/reordering.

        new_index_of_old[j] is the position of old column j in the new
        column set, or -1 if it was removed.  Removing a column that is in
        the basis is invalid (the learner only prunes nonbasic columns).
        """
        mapping = np.asarray(new_index_of_old, dtype=np.int64)
        if mapping.shape != (self.n_columns,):
            raise LpError("index map length must equal the snapshot column count")
        t_old = self.n_columns
        new_bcols = np.empty_like(self.bcols)
        for i, vid in enumerate(self.bcols):
            pos = int(vid) % t_old
            new_pos = int(mapping[pos])
            if new_pos < 0:
                raise LpError("cannot remap: a basic column was removed")
            if not 0 <= new_pos < new_n_columns:
                raise LpError("index map points outside the new column range")
            new_bcols[i] = new_pos if int(vid) < t_old else new_n_columns + new_pos
        return BasisSnapshot(new_bcols, self.brows.copy(), self.rstate.copy(),
                             int(new_n_columns), self.n_rows)


@dataclass(frozen=True)
class LpSolution:
    """Optimal (or last reached) state of a master solve."""

    mu_plus: np.ndarray
    mu_minus: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray
    objective: float
    status: str  # "optimal" | "infeasible" | "iteration-limit"
    basis: BasisSnapshot
    pivots: int

    @property
    def mu(self) -> np.ndarray:
        return self.mu_plus - self.mu_minus


def _cold_start(n: int):
    return (np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64),
            np.zeros(n, dtype=np.int8))


def _warm_arrays(snapshot: BasisSnapshot, U: np.ndarray):
    """Validate a snapshot against the current problem; fall back to cold.

    Structural validity (index ranges, uniqueness, state coherence) plus a
    numeric check that the reconstructed basis is invertible and primal
    feasible.  A snapshot that fails any check silently degrades to a cold
    start; the learner's append/prune discipline never triggers this, but a
    caller-supplied stale snapshot must not corrupt the solve.
    """
    n, t = U.shape
    t_old = snapshot.n_columns
    if snapshot.n_rows != n or t_old > t:
        raise LpError(
            f"warm-start snapshot shape ({snapshot.n_rows}, {snapshot.n_columns})"
            f" does not match problem ({n}, {t})")
    bcols = np.asarray(snapshot.bcols, dtype=np.int64)
    if t_old < t:
        # Columns appended since the snapshot shift the mu_minus id block.
        bcols = np.where(bcols >= t_old, bcols - t_old + t, bcols)
    brows = np.asarray(snapshot.brows, dtype=np.int64)
    rstate = np.asarray(snapshot.rstate, dtype=np.int8).copy()
    k = bcols.shape[0]
    ok = (
        brows.shape[0] == k
        and rstate.shape[0] == n
        and (k == 0 or (bcols.min() >= 0 and bcols.max() < 2 * t
                        and brows.min() >= 0 and brows.max() < n))
        and np.unique(bcols).shape[0] == k
        and np.unique(brows).shape[0] == k
        and np.all((rstate >= ROW_SLACK_BASIC) & (rstate <= ROW_AT_UPPER))
        and np.all(rstate[brows] != ROW_SLACK_BASIC)
        and int(np.sum(rstate != ROW_SLACK_BASIC)) == k
    )
    if not ok:
        return _cold_start(n)
    if k > 0:
        signs = np.where(bcols < t, 1.0, -1.0)
        AJ = U[:, bcols % t] * signs
        W = AJ[brows, :]
        try:
            Winv = np.linalg.inv(W)
        except np.linalg.LinAlgError:
            return _cold_start(n)
        rhs = np.where(rstate[brows] == ROW_AT_UPPER, 0.5, -0.5)
        xJ = Winv @ rhs
        s = AJ @ xJ + 0.5
        if xJ.min() < -1e-7 or s.min() < -1e-7 or s.max() > 1.0 + 1e-7:
            return _cold_start(n)
    return bcols, brows, rstate


def solve_master(problem: LpProblem, warm_start: Optional[BasisSnapshot] = None,
                 force_bland: bool = False, max_pivots: int = MAX_PIVOTS) -> LpSolution:
    """Solve the master problem to optimality with the simplex kernel.

    warm_start restores a previous basis (columns appended since the
    snapshot enter nonbasic at zero).  force_bland runs Bland's rule from
    the first pivot; otherwise Dantzig pricing is used with an automatic
    Bland fallback after a long degenerate streak.  A status of
    "iteration-limit" means the pivot cap was hit; the caller retries with
    force_bland=True.
    """
    prob = problem.validated()
    U, y, lam = prob.columns, prob.labels, prob.lam
    n, t = U.shape
    q = U.T @ y / n

    if warm_start is None:
        bcols0, brows0, rstate0 = _cold_start(n)
    else:
        bcols0, brows0, rstate0 = _warm_arrays(warm_start, U)

    kern = get_kernels()["simplex_solve"]

    def run(bc, br, rs, bland):
        return kern(U, q, lam, bc, br, rs, 1 if bland else 0,
                    FEAS_TOL, PIVOT_TOL, DEGEN_TOL,
                    int(max_pivots), 50 * (n + t), REFACTOR_EVERY)

    out = run(bcols0, brows0, rstate0, force_bland)
    if int(out[0]) == STATUS_SINGULAR:
        if warm_start is None:
            raise LpInternalError("singular working basis from a cold start")
        # Corrupt or stale warm basis: restart cold.
        bcols0, brows0, rstate0 = _cold_start(n)
        out = run(bcols0, brows0, rstate0, force_bland)
        if int(out[0]) == STATUS_SINGULAR:
            raise LpInternalError("singular working basis from a cold start")

    status_code, pivots, bcols, brows, rstate, xJ, Winv, s = out
    status_code = int(status_code)
    if status_code not in STATUS_NAMES:
        raise LpInternalError(
            f"solver returned impossible state {status_code}; the zero "
            "solution is always feasible, so this is an internal bug")
    status = STATUS_NAMES[status_code]

    k = bcols.shape[0]
    mu_plus = np.zeros(t)
    mu_minus = np.zeros(t)
    for c in range(k):
        vid = int(bcols[c])
        val = float(xJ[c])
        if val < -1e-7:
            raise LpInternalError(f"basic variable {vid} is negative: {val}")
        val = max(val, 0.0)
        if vid < t:
            mu_plus[vid] = val
        else:
            mu_minus[vid - t] = val

    cost = np.concatenate((lam - q, lam + q))
    pi = np.zeros(n)
    if k > 0:
        piN = cost[bcols] @ Winv
        pi[brows] = piN
    alpha = np.maximum(-pi, 0.0)
    beta = np.maximum(pi, 0.0)

    mu = mu_plus - mu_minus
    objective = float(0.5 - q @ mu + lam * (mu_plus.sum() + mu_minus.sum()))

    if status == "optimal":
        margins = U @ mu
        worst = float(np.max(np.abs(margins))) if n else 0.0
        if worst > 0.5 + MARGIN_CHECK_TOL:
            raise LpInternalError(f"margin constraint violated by {worst - 0.5:.3e}")
        dual_obj = 0.5 * (1.0 - float(alpha.sum() + beta.sum()))
        gap = abs(objective - dual_obj)
        if gap > GAP_CHECK_TOL * (1.0 + abs(objective)):
            raise LpInternalError(f"duality gap {gap:.3e} exceeds tolerance")

    snapshot = BasisSnapshot(np.asarray(bcols, dtype=np.int64).copy(),
                             np.asarray(brows, dtype=np.int64).copy(),
                             np.asarray(rstate, dtype=np.int8).copy(), t, n)
    return LpSolution(mu_plus=mu_plus, mu_minus=mu_minus, alpha=alpha, beta=beta,
                      objective=objective, status=status, basis=snapshot,
                      pivots=int(pivots))


def price_columns(solution: LpSolution, columns: np.ndarray, labels: np.ndarray):
    """Pricing value v^T (y/n - (alpha - beta)) for candidate column(s).

    A value above lam means the column's dual constraint pair is violated
    and adding the column can improve the master optimum; the rule family's
    closure under negation covers the -lam side.  columns may be a single
    (n,) column (returns a float) or an (n, m) matrix (returns (m,)).
    """
    y = np.asarray(labels, dtype=np.float64)
    n = y.shape[0]
    resid = y / n - (solution.alpha - solution.beta)
    cols = np.asarray(columns, dtype=np.float64)
    if cols.ndim == 1:
        if cols.shape[0] != n:
            raise LpError("column length must match the label count")
        return float(cols @ resid)
    if cols.shape[0] != n:
        raise LpError("columns must have one row per sample")
    return cols.T @ resid
