"""Minimax-risk boosting by column generation over decision stumps.

Each round searches the full stump family for the rule with the largest
pricing score under the current reweighting, stops when no rule prices
above lam (the break certificate: the master optimum over the whole family
has been reached), otherwise appends the rule's output column with a zero
coefficient, re-solves the master LP from the previous basis, reweights
from the new duals, and removes rules whose dual constraints hold strictly
(those coefficients are zero and stay zero).

The fitted model's score function h(x) = sum_j mu_j s_j(x) is constrained
to [-1/2, 1/2] on the training set.  Its randomized decision rule accepts
label y with probability clip(y * h(x) + 1/2, 0, 1); the deterministic
rule takes the sign of h(x) with sign(0) := +1 and its zero-one loss is at
most twice the randomized rule's expected loss, pointwise.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .linprog import (
    LpInternalError,
    LpProblem,
    LpSolution,
    price_columns,
    solve_master,
)
from .stumps import (
    Stump,
    StumpScanIndex,
    WeightedSample,
    best_stump,
    stump_columns,
    update_weights,
)

MODEL_FORMAT_VERSION = 1


class RmbFitError(RuntimeError):
    """Training aborted; carries the failing round's LP state when present."""

    def __init__(self, message: str, lp_solution: Optional[LpSolution] = None):
        super().__init__(message)
        self.lp_solution = lp_solution


@dataclass(frozen=True)
class RmbConfig:
    """Training controls.

    lam        : regularization weight; the uncertainty-set radius.
    max_rounds : column-generation round cap (default 200).
    break_tol  : slack added to lam in the termination test and subtracted
                 in the pruning test.
    max_pivots : per-solve simplex pivot cap.
    prune      : drop strictly-inside columns after each solve (default on);
                 turning it off keeps every generated rule in the master.
    seed       : accepted for interface parity with the other learners;
                 training never draws randomness, so it has no effect.
    """

    lam: float
    max_rounds: int = 200
    break_tol: float = 1e-3
    max_pivots: int = 100_000
    prune: bool = True
    seed: int = 0

    def validated(self) -> "RmbConfig":
        if not (self.lam > 0.0 and np.isfinite(self.lam)):
            raise ValueError("lam must be a positive finite real")
        if self.max_rounds < 1:
            raise ValueError("max_rounds must be at least 1")
        if not (0.0 <= self.break_tol < 1.0):
            raise ValueError("break_tol must lie in [0, 1)")
        if self.seed < 0:
            raise ValueError("seed must be a nonnegative integer")
        return self


@dataclass(frozen=True)
class HistoryRow:
    """One solved round: its risk, coefficient mass, rule count, and the
    pricing score of the column that entered."""

    round: int
    risk: float
    l1_mu: float
    n_rules: int
    pricing_score: float


@dataclass
class RmbModel:
    """Fitted minimax boosting model."""

    rules: List[Stump]
    mu: np.ndarray
    lam: float
    minimax_risk: float
    rounds_run: int
    terminated_by_break: bool
    history: List[HistoryRow] = field(default_factory=list)

    @property
    def l1_mu(self) -> float:
        return float(np.abs(self.mu).sum())


def decision_scores(model: RmbModel, X: np.ndarray) -> np.ndarray:
    """h(x) = sum_j mu_j s_j(x) for each row of X."""
    X = np.asarray(X, dtype=np.float64)
    n = X.shape[0]
    if not model.rules:
        return np.zeros(n)
    return stump_columns(model.rules, X) @ model.mu


def predict_deterministic(model: RmbModel, X: np.ndarray) -> np.ndarray:
    """Labels in {-1, +1}; the sign of the score with sign(0) := +1."""
    sc = decision_scores(model, X)
    return np.where(sc >= 0.0, 1.0, -1.0)


def predict_randomized(model: RmbModel, X: np.ndarray,
                       labels: Optional[np.ndarray] = None) -> np.ndarray:
    """Probability the randomized rule assigns to each given label:
    clip(y * h(x) + 1/2, 0, 1).  With labels omitted, the probability of
    predicting +1."""
    sc = decision_scores(model, X)
    y = 1.0 if labels is None else np.asarray(labels, dtype=np.float64)
    return np.clip(y * sc + 0.5, 0.0, 1.0)


def randomized_error(model: RmbModel, X: np.ndarray, labels: np.ndarray) -> float:
    """Expected zero-one loss of the randomized rule against true labels."""
    return float(np.mean(1.0 - predict_randomized(model, X, labels)))


def deterministic_error(model: RmbModel, X: np.ndarray, labels: np.ndarray) -> float:
    y = np.asarray(labels, dtype=np.float64)
    return float(np.mean(predict_deterministic(model, X) != y))


def objective_F(model: RmbModel, X: np.ndarray, labels: np.ndarray,
                lam: Optional[float] = None) -> float:
    """F(mu) = 1/2 - (1/n) sum_i y_i h(x_i) + lam * ||mu||_1."""
    y = np.asarray(labels, dtype=np.float64)
    lam_val = model.lam if lam is None else float(lam)
    sc = decision_scores(model, X)
    return float(0.5 - np.mean(y * sc) + lam_val * model.l1_mu)


def fit(X: np.ndarray, labels: np.ndarray, config: RmbConfig) -> RmbModel:
    """Column-generation training loop.

    Raises RmbFitError when the LP solver cannot finish even under Bland's
    rule, with the failing round's solution state attached.
    """
    cfg = config.validated()
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(labels, dtype=np.float64)
    if X.ndim != 2 or y.shape != (X.shape[0],):
        raise ValueError("X must be (n, d) with one label per row")
    if not np.all(np.abs(y) == 1.0):
        raise ValueError("labels must be +1 or -1")
    n = X.shape[0]
    index = StumpScanIndex(X)

    sample = WeightedSample(np.full(n, 1.0 / n), y.copy())
    rules: List[Stump] = []
    columns = np.empty((n, 0))
    history: List[HistoryRow] = []
    snapshot = None
    solution: Optional[LpSolution] = None
    risk = 0.5
    terminated_by_break = False

    for _ in range(cfg.max_rounds):
        rule, score = best_stump(index, sample)
        if score <= cfg.lam + cfg.break_tol:
            terminated_by_break = True
            break
        if rule in rules:
            # A duplicate cannot improve an optimally solved master; treat
            # as termination rather than building a degenerate column set.
            terminated_by_break = True
            break

        columns = np.hstack((columns, rule.evaluate(X).reshape(n, 1)))
        rules.append(rule)
        problem = LpProblem(columns, y, cfg.lam)
        solution = solve_master(problem, warm_start=snapshot,
                                max_pivots=cfg.max_pivots)
        if solution.status == "iteration-limit":
            solution = solve_master(problem, warm_start=None, force_bland=True,
                                    max_pivots=cfg.max_pivots)
            if solution.status != "optimal":
                raise RmbFitError(
                    f"master LP did not converge within {cfg.max_pivots} pivots "
                    f"even under Bland's rule at round {len(history) + 1}",
                    solution)

        new_risk = solution.objective
        if new_risk > risk + 1e-7:
            raise RmbFitError(
                f"risk increased from {risk:.9f} to {new_risk:.9f}; "
                "the master solve is inconsistent", solution)
        risk = new_risk
        sample = update_weights(solution.alpha, solution.beta, y)

        if cfg.prune:
            prices = price_columns(solution, columns, y)
            strictly_inside = np.abs(prices) < cfg.lam - cfg.break_tol
        else:
            strictly_inside = np.zeros(len(rules), dtype=bool)
        mu_now = solution.mu
        if np.any(strictly_inside):
            worst = float(np.max(np.abs(mu_now[strictly_inside])))
            if worst > 10.0 * max(cfg.break_tol, 1e-12):
                raise RmbFitError(
                    f"pruning would drop a rule with |mu| = {worst:.3e}",
                    solution)
            keep_pos = np.flatnonzero(~strictly_inside)
            index_map = np.full(len(rules), -1, dtype=np.int64)
            index_map[keep_pos] = np.arange(keep_pos.shape[0])
            snapshot = solution.basis.remapped(index_map, int(keep_pos.shape[0]))
            rules = [rules[j] for j in keep_pos]
            columns = columns[:, keep_pos]
            mu_final = mu_now[keep_pos]
        else:
            snapshot = solution.basis
            mu_final = mu_now

        history.append(HistoryRow(
            round=len(history) + 1,
            risk=risk,
            l1_mu=float(np.abs(solution.mu).sum()),
            n_rules=len(rules),
            pricing_score=float(score),
        ))

    if solution is None:
        model = RmbModel(rules=[], mu=np.zeros(0), lam=cfg.lam, minimax_risk=0.5,
                         rounds_run=0, terminated_by_break=terminated_by_break,
                         history=history)
        return model

    # Pruned columns were nonbasic at zero, so restricting mu to the
    # surviving rules leaves the score function unchanged.
    model = RmbModel(rules=list(rules), mu=np.asarray(mu_final, dtype=np.float64),
                     lam=cfg.lam, minimax_risk=risk, rounds_run=len(history),
                     terminated_by_break=terminated_by_break, history=history)

    if terminated_by_break:
        f_val = objective_F(model, X, y)
        if abs(f_val - risk) > 1e-6:
            raise RmbFitError(
                f"objective F(mu) = {f_val:.9f} disagrees with the master "
                f"optimum {risk:.9f} at termination", solution)
    return model


def epsilon_opt_diagnostic(model: RmbModel, X_train: np.ndarray,
                           y_train: np.ndarray, X_holdout: np.ndarray,
                           lam: Optional[float] = None,
                           reference_risk: Optional[float] = None) -> float:
    """Suboptimality certificate: (F(mu) - R)_+ plus the mean holdout
    margin-constraint violation (|h(x)| - 1/2)_+.

    reference_risk defaults to the model's own minimax risk, which is exact
    when training terminated by break and a conservative stand-in otherwise.
    """
    r_bar = model.minimax_risk if reference_risk is None else float(reference_risk)
    f_val = objective_F(model, X_train, y_train, lam=lam)
    value_term = max(f_val - r_bar, 0.0)
    sc = np.abs(decision_scores(model, X_holdout))
    violation = float(np.mean(np.maximum(sc - 0.5, 0.0)))
    return value_term + violation


def model_to_json(model: RmbModel) -> str:
    doc = {
        "version": MODEL_FORMAT_VERSION,
        "model_kind": "rmboost",
        "lambda": float(model.lam),
        "rules": [r.to_dict() for r in model.rules],
        "mu": [float(v) for v in model.mu],
        "minimax_risk": float(model.minimax_risk),
        "rounds_run": int(model.rounds_run),
        "terminated_by_break": bool(model.terminated_by_break),
    }
    return json.dumps(doc, indent=2)


def model_from_json(text: str) -> RmbModel:
    doc = json.loads(text)
    version = int(doc.get("version", -1))
    if version != MODEL_FORMAT_VERSION:
        raise ValueError(f"unsupported model format version: {version!r}")
    kind = doc.get("model_kind", "rmboost")
    if kind != "rmboost":
        raise ValueError(f"not a minimax boosting model: kind {kind!r}")
    rules = [Stump.from_dict(r) for r in doc["rules"]]
    mu = np.asarray(doc["mu"], dtype=np.float64)
    if mu.shape[0] != len(rules):
        raise ValueError("mu length does not match the rule count")
    return RmbModel(rules=rules, mu=mu, lam=float(doc["lambda"]),
                    minimax_risk=float(doc["minimax_risk"]),
                    rounds_run=int(doc["rounds_run"]),
                    terminated_by_break=bool(doc["terminated_by_break"]))


def history_to_tsv(model: RmbModel) -> str:
    buf = io.StringIO()
    buf.write("round\tR_k\tl1_norm_mu\tn_rules\tpricing_score\n")
    for row in model.history:
        buf.write(f"{row.round}\t{row.risk!r}\t{row.l1_mu!r}\t"
                  f"{row.n_rules}\t{row.pricing_score!r}\n")
    return buf.getvalue()
