"""Decision-stump base rules and the weighted stump search.

A stump is s(x) = polarity * (+1 if x[feature] > threshold else -1).  The
search space for a training matrix X is every feature crossed with the
midpoints of consecutive distinct sorted feature values, plus one
threshold below each feature's minimum (which yields the two constant
rules), crossed with both polarities.  ``best_stump`` maximizes
sum_i w_i ytil_i s(x_i) exactly over that space.

``StumpScanIndex`` precomputes the per-feature sort once so repeated
searches over the same X (one per boosting round) cost a prefix scan.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

from .kernels import get_kernels


@dataclass(frozen=True)
class Stump:
    """Threshold rule s(x) = polarity * sign(x[feature] - threshold), ties to -1."""

    feature: int
    threshold: float
    polarity: int

    def __post_init__(self):
        if self.polarity not in (-1, 1):
            raise ValueError("polarity must be +1 or -1")
        if self.feature < 0:
            raise ValueError("feature index must be nonnegative")

    def evaluate(self, X: np.ndarray) -> np.ndarray:
        """Rule outputs in {-1, +1} for each row of X, as float64."""
        X = np.asarray(X, dtype=np.float64)
        col = X[:, self.feature] if X.ndim == 2 else X[self.feature:self.feature + 1]
        pol = float(self.polarity)
        return np.where(col > self.threshold, pol, -pol)

    def to_dict(self) -> dict:
        return {"feature": int(self.feature), "threshold": float(self.threshold),
                "polarity": int(self.polarity)}

    @staticmethod
    def from_dict(d: dict) -> "Stump":
        return Stump(int(d["feature"]), float(d["threshold"]), int(d["polarity"]))


@dataclass(frozen=True)
class RegressionStump:
    """Piecewise-constant rule: left_value if x[feature] <= threshold else right_value."""

    feature: int
    threshold: float
    left_value: float
    right_value: float

    def evaluate(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        col = X[:, self.feature] if X.ndim == 2 else X[self.feature:self.feature + 1]
        return np.where(col <= self.threshold, self.left_value, self.right_value)

    def to_dict(self) -> dict:
        return {"feature": int(self.feature), "threshold": float(self.threshold),
                "left_value": float(self.left_value),
                "right_value": float(self.right_value)}

    @staticmethod
    def from_dict(d: dict) -> "RegressionStump":
        return RegressionStump(int(d["feature"]), float(d["threshold"]),
                               float(d["left_value"]), float(d["right_value"]))


@dataclass(frozen=True)
class WeightedSample:
    """Nonnegative per-sample weights and working labels in {-1, +1}."""

    weights: np.ndarray
    labels: np.ndarray

    def validated(self) -> "WeightedSample":
        w = np.asarray(self.weights, dtype=np.float64)
        lab = np.asarray(self.labels, dtype=np.float64)
        if w.ndim != 1 or lab.shape != w.shape:
            raise ValueError("weights and labels must be 1-d arrays of equal length")
        if np.any(w < 0) or not np.all(np.isfinite(w)):
            raise ValueError("weights must be finite and nonnegative")
        if not np.all(np.abs(lab) == 1.0):
            raise ValueError("working labels must be +1 or -1")
        return WeightedSample(w, lab)


class StumpScanIndex:
    """Per-feature stable sort of a training matrix, reused across scans."""

    def __init__(self, X: np.ndarray):
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2:
            raise ValueError("X must be a 2-d matrix")
        if not np.all(np.isfinite(X)):
            raise ValueError("X contains non-finite entries")
        n, d = X.shape
        self.n = n
        self.d = d
        self.order = np.empty((n, d), dtype=np.int64, order="F")
        self.xsort = np.empty((n, d), dtype=np.float64, order="F")
        for f in range(d):
            o = np.argsort(X[:, f], kind="stable")
            self.order[:, f] = o
            self.xsort[:, f] = X[o, f]


def best_stump(data: Union[np.ndarray, StumpScanIndex],
               sample: WeightedSample) -> Tuple[Stump, float]:
    """Exact argmax of sum_i w_i ytil_i s(x_i) over the stump family.

    Ties break toward the lowest feature index, then the lowest threshold,
    then polarity +1.  The returned score is always >= |sum_i w_i ytil_i|
    because the two constant rules are candidates.
    """
    index = data if isinstance(data, StumpScanIndex) else StumpScanIndex(data)
    ws = sample.validated()
    if ws.weights.shape[0] != index.n:
        raise ValueError("sample size does not match the indexed matrix")
    g = np.ascontiguousarray(ws.weights * ws.labels)
    kern = get_kernels()["stump_scan"]
    feat, thr, pol, score = kern(index.xsort, index.order, g)
    return Stump(int(feat), float(thr), int(pol)), float(score)


def fit_regression_stump(data: Union[np.ndarray, StumpScanIndex],
                         targets: np.ndarray,
                         weights: np.ndarray) -> Tuple[RegressionStump, float]:
    """Weighted least-squares regression stump; returns (stump, gain).

    gain is the explained weighted sum of squares over fitting z with the
    stump versus zero; when no split strictly beats the single weighted
    mean, the stump degenerates to that constant (threshold below the
    first feature's minimum).
    """
    index = data if isinstance(data, StumpScanIndex) else StumpScanIndex(data)
    z = np.ascontiguousarray(np.asarray(targets, dtype=np.float64))
    w = np.ascontiguousarray(np.asarray(weights, dtype=np.float64))
    if z.shape != (index.n,) or w.shape != (index.n,):
        raise ValueError("targets and weights must match the indexed matrix")
    if np.any(w <= 0):
        raise ValueError("regression stump weights must be positive")
    kern = get_kernels()["reg_stump_scan"]
    feat, thr, left, right, gain = kern(index.xsort, index.order, w, z)
    if int(feat) < 0:
        return RegressionStump(0, float(index.xsort[0, 0] - 1.0),
                               float(left), float(right)), float(gain)
    return RegressionStump(int(feat), float(thr), float(left), float(right)), float(gain)


def update_weights(alpha: np.ndarray, beta: np.ndarray,
                   labels: np.ndarray) -> WeightedSample:
    """Per-round reweighting from the master duals.

    w_i = |y_i / n - (alpha_i - beta_i)| and ytil_i is the sign of the same
    quantity with sign(0) := +1, so that w_i ytil_i reconstructs
    y_i / n - (alpha_i - beta_i) exactly.
    """
    y = np.asarray(labels, dtype=np.float64)
    n = y.shape[0]
    resid = y / n - (np.asarray(alpha, dtype=np.float64)
                     - np.asarray(beta, dtype=np.float64))
    w = np.abs(resid)
    ytil = np.where(resid >= 0.0, 1.0, -1.0)
    return WeightedSample(w, ytil)


def stump_columns(rules, X: np.ndarray) -> np.ndarray:
    """(n, t) matrix of rule outputs for the given stumps."""
    X = np.asarray(X, dtype=np.float64)
    n = X.shape[0]
    out = np.empty((n, len(rules)), dtype=np.float64)
    for j, rule in enumerate(rules):
        out[:, j] = rule.evaluate(X)
    return out


def enumerate_stumps(X: np.ndarray):
    """Every candidate stump for X: all midpoint thresholds, one
    below-minimum threshold per feature, both polarities.

    Used by the full-LP reference path and the break-certificate checks;
    the count is at most 2 * d * n.
    """
    X = np.asarray(X, dtype=np.float64)
    n, d = X.shape
    rules = []
    for f in range(d):
        vals = np.unique(X[:, f])
        thresholds = [vals[0] - 1.0]
        if vals.shape[0] > 1:
            thresholds.extend(0.5 * (vals[:-1] + vals[1:]))
        for thr in thresholds:
            rules.append(Stump(f, float(thr), 1))
            rules.append(Stump(f, float(thr), -1))
    return rules
