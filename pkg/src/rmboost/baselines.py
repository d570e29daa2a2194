"""Stagewise boosting baselines over stumps: discrete exponential-loss
boosting and Newton-step logistic boosting.

Both produce additive models used for comparison columns in experiment
tables; the logistic model also serves as the reference rule that ranks
training margins for adversarial label flipping.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import List, Optional, Union

import numpy as np

from .stumps import (
    RegressionStump,
    Stump,
    StumpScanIndex,
    WeightedSample,
    best_stump,
    fit_regression_stump,
)

MODEL_FORMAT_VERSION = 1
DEFAULT_ROUNDS = 200

_EPS_CAP = 1e-10
_MAX_COEF = 0.5 * math.log((1.0 - _EPS_CAP) / _EPS_CAP)

# Newton-step stabilizers: working responses are clipped and the curvature
# weights floored, per the original algorithm's published guidance.
_Z_CLIP = 4.0
_W_FLOOR = 1e-10
_NEWTON_STEP = 0.5


@dataclass
class StagewiseModel:
    """Additive model sum_t c_t s_t(x).

    For the exponential-loss model the rules are sign stumps with per-round
    coefficients; for the logistic model the rules are regression stumps
    whose leaf values already carry the magnitude, each applied with the
    fixed Newton step factor, so coefficients is None.
    """

    model_kind: str  # "adaboost" | "logitboost"
    rules: List[Union[Stump, RegressionStump]]
    coefficients: Optional[np.ndarray]
    rounds_run: int = field(default=0)

    @property
    def l1_coefficients(self) -> float:
        if self.coefficients is not None:
            return float(np.abs(self.coefficients).sum())
        return _NEWTON_STEP * len(self.rules)


def stagewise_scores(model: StagewiseModel, X: np.ndarray) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    total = np.zeros(X.shape[0])
    if model.coefficients is not None:
        for coef, rule in zip(model.coefficients, model.rules):
            total += coef * rule.evaluate(X)
    else:
        for rule in model.rules:
            total += _NEWTON_STEP * rule.evaluate(X)
    return total


def predict_baseline(model: StagewiseModel, X: np.ndarray) -> np.ndarray:
    """Labels in {-1, +1}: the sign of the additive score, sign(0) := +1."""
    return np.where(stagewise_scores(model, X) >= 0.0, 1.0, -1.0)


def baseline_error(model: StagewiseModel, X: np.ndarray,
                   labels: np.ndarray) -> float:
    y = np.asarray(labels, dtype=np.float64)
    return float(np.mean(predict_baseline(model, X) != y))


def _check_training_inputs(X: np.ndarray, y: np.ndarray, rounds: int):
    if X.ndim != 2 or y.shape != (X.shape[0],):
        raise ValueError("X must be (n, d) with one label per row")
    if X.shape[0] == 0:
        raise ValueError("cannot fit on empty data")
    if not np.all(np.abs(y) == 1.0):
        raise ValueError("labels must be +1 or -1")
    if rounds < 1:
        raise ValueError("rounds must be at least 1")


def fit_adaboost(X: np.ndarray, labels: np.ndarray,
                 rounds: int = DEFAULT_ROUNDS) -> StagewiseModel:
    """Discrete exponential-loss boosting.

    Each round picks the stump with the lowest weighted 0-1 error eps,
    weights it by (1/2) ln((1 - eps)/eps), multiplies sample weights by
    exp(-coef y s(x)), and renormalizes.  Stops early when no stump beats
    chance (eps >= 1/2 - 1e-10, round discarded) or a stump is perfect
    (eps <= 0, added with a capped coefficient).
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(labels, dtype=np.float64)
    _check_training_inputs(X, y, rounds)
    n = X.shape[0]
    index = StumpScanIndex(X)
    w = np.full(n, 1.0 / n)
    rules: List[Stump] = []
    coefs: List[float] = []
    for _ in range(rounds):
        rule, score = best_stump(index, WeightedSample(w, y))
        # weights sum to 1, so the weighted error is (1 - score) / 2
        eps = 0.5 * (1.0 - score)
        if eps >= 0.5 - _EPS_CAP:
            break
        if eps <= 0.0:
            rules.append(rule)
            coefs.append(_MAX_COEF)
            break
        coef = 0.5 * math.log((1.0 - eps) / eps)
        rules.append(rule)
        coefs.append(coef)
        w = w * np.exp(-coef * y * rule.evaluate(X))
        w = w / w.sum()
    return StagewiseModel(model_kind="adaboost", rules=rules,
                          coefficients=np.asarray(coefs), rounds_run=len(rules))


def logit_working_responses(scores: np.ndarray, labels01: np.ndarray):
    """Newton working set at additive score F: probabilities
    p = 1/(1 + exp(-2F)), curvature weights w = max(p(1-p), floor), and
    responses z = clip((y* - p)/w, +-4) with y* in {0, 1}."""
    p = 1.0 / (1.0 + np.exp(-2.0 * scores))
    w = np.maximum(p * (1.0 - p), _W_FLOOR)
    z = np.clip((labels01 - p) / w, -_Z_CLIP, _Z_CLIP)
    return z, w


def fit_logitboost(X: np.ndarray, labels: np.ndarray,
                   rounds: int = DEFAULT_ROUNDS) -> StagewiseModel:
    """Newton-step logistic boosting with regression stumps.

    Each round fits a weighted least-squares regression stump to the
    logistic working responses and advances the score by half the stump's
    output.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(labels, dtype=np.float64)
    _check_training_inputs(X, y, rounds)
    n = X.shape[0]
    index = StumpScanIndex(X)
    y01 = (y + 1.0) / 2.0
    F = np.zeros(n)
    rules: List[RegressionStump] = []
    for _ in range(rounds):
        z, w = logit_working_responses(F, y01)
        stump, _ = fit_regression_stump(index, z, w)
        rules.append(stump)
        F = F + _NEWTON_STEP * stump.evaluate(X)
    return StagewiseModel(model_kind="logitboost", rules=rules,
                          coefficients=None, rounds_run=len(rules))


def model_to_json(model: StagewiseModel) -> str:
    doc = {
        "version": MODEL_FORMAT_VERSION,
        "model_kind": model.model_kind,
        "rules": [r.to_dict() for r in model.rules],
        "rounds_run": int(model.rounds_run),
    }
    if model.coefficients is not None:
        doc["coefficients"] = [float(c) for c in model.coefficients]
    return json.dumps(doc, indent=2)


def model_from_json(text: str) -> StagewiseModel:
    doc = json.loads(text)
    version = int(doc.get("version", -1))
    if version != MODEL_FORMAT_VERSION:
        raise ValueError(f"unsupported model format version: {version!r}")
    kind = doc.get("model_kind")
    if kind == "adaboost":
        rules = [Stump.from_dict(r) for r in doc["rules"]]
        coefs = np.asarray(doc["coefficients"], dtype=np.float64)
        if coefs.shape[0] != len(rules):
            raise ValueError("coefficient length does not match the rule count")
        return StagewiseModel("adaboost", rules, coefs, int(doc["rounds_run"]))
    if kind == "logitboost":
        rules = [RegressionStump.from_dict(r) for r in doc["rules"]]
        return StagewiseModel("logitboost", rules, None, int(doc["rounds_run"]))
    raise ValueError(f"not a stagewise baseline model: kind {kind!r}")
