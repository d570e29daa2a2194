"""Independent brute-force reference implementations used only by tests.

These deliberately share no code with the package's solver or scan kernels:
the LP reference enumerates vertices of the explicit inequality system, and
the stump references enumerate the full rule family directly.  Sizes are
kept tiny so exhaustive enumeration stays exact.
"""

from __future__ import annotations

import itertools

import numpy as np


def lp_vertex_optimum(columns: np.ndarray, labels: np.ndarray, lam: float,
                      feas_tol: float = 1e-9) -> float:
    """Optimal value of

        min 1/2 - (1/n) sum_i y_i u_i . (mu+ - mu-) + lam 1.(mu+ + mu-)
        s.t. |u_i . (mu+ - mu-)| <= 1/2,  mu+, mu- >= 0

    by enumerating every vertex of the feasible polyhedron in the variables
    x = (mu+, mu-).  The region has vertices (x >= 0 pins it) and the
    objective is bounded below, so some vertex is optimal.  Only suitable
    for tiny instances: cost grows as C(2n + 2t, 2t).
    """
    U = np.asarray(columns, dtype=np.float64)
    y = np.asarray(labels, dtype=np.float64)
    n, t = U.shape
    m = 2 * t

    G = np.vstack([
        np.hstack([U, -U]),
        np.hstack([-U, U]),
        -np.eye(m),
    ])
    h = np.concatenate([np.full(2 * n, 0.5), np.zeros(m)])
    q = U.T @ y / n
    c = np.concatenate([lam - q, lam + q])

    n_rows = G.shape[0]
    combos = np.array(list(itertools.combinations(range(n_rows), m)), dtype=np.int64)
    mats = G[combos]                      # (K, m, m)
    dets = np.linalg.det(mats)
    ok = np.abs(dets) > 1e-12
    if not np.any(ok):
        raise AssertionError("no nonsingular active set; degenerate test instance")
    rhs = h[combos[ok]]                                    # (K_ok, m)
    xs = np.linalg.solve(mats[ok], rhs[:, :, None])[:, :, 0]
    feas = np.all(G @ xs.T <= h[:, None] + feas_tol, axis=0)
    if not np.any(feas):
        raise AssertionError("no feasible vertex found; oracle bug (origin is feasible)")
    vals = xs[feas] @ c
    return float(0.5 + np.min(vals))


def best_stump_bruteforce(X: np.ndarray, weights: np.ndarray,
                          labels: np.ndarray):
    """Exhaustive best weighted stump.

    Enumerates, per feature, one threshold below the minimum plus the
    midpoint between each pair of consecutive distinct sorted values, and
    both polarities.  Maximizes sum_i w_i ytil_i s(x_i); ties prefer the
    lowest feature, then the lowest threshold, then polarity +1.

    Returns (feature, threshold, polarity, score).
    """
    X = np.asarray(X, dtype=np.float64)
    g = np.asarray(weights, dtype=np.float64) * np.asarray(labels, dtype=np.float64)
    n, d = X.shape
    best = None
    for f in range(d):
        col = X[:, f]
        vals = np.unique(col)
        thresholds = [vals[0] - 1.0]
        thresholds += [0.5 * (a + b) for a, b in zip(vals[:-1], vals[1:])]
        for thr in thresholds:
            base = np.where(col > thr, 1.0, -1.0)
            for pol in (1, -1):
                sc = float(g @ (pol * base))
                key = (-sc, f, thr, -pol)
                if best is None or key < best[0]:
                    best = (key, (f, float(thr), pol, sc))
    return best[1]


def best_regression_stump_bruteforce(X: np.ndarray, targets: np.ndarray,
                                     weights: np.ndarray):
    """Exhaustive best weighted least-squares regression stump.

    For each candidate split the two leaf values are the weighted means of
    the sides; reports the split minimizing weighted SSE, or the global
    weighted mean when no split strictly beats it.  Ties prefer the lowest
    feature then the lowest threshold.  Returns
    (feature, threshold, left_value, right_value, sse); feature -1 means
    the constant fit.
    """
    X = np.asarray(X, dtype=np.float64)
    z = np.asarray(targets, dtype=np.float64)
    w = np.asarray(weights, dtype=np.float64)
    n, d = X.shape
    mean = float(np.average(z, weights=w))
    best_sse = float(w @ (z - mean) ** 2)
    best = (-1, 0.0, mean, mean, best_sse)
    for f in range(d):
        col = X[:, f]
        vals = np.unique(col)
        for a, b in zip(vals[:-1], vals[1:]):
            thr = 0.5 * (a + b)
            left = col <= thr
            wl, wr = w[left], w[~left]
            lv = float(np.average(z[left], weights=wl))
            rv = float(np.average(z[~left], weights=wr))
            sse = float(wl @ (z[left] - lv) ** 2 + wr @ (z[~left] - rv) ** 2)
            if sse < best_sse - 1e-12:
                best_sse = sse
                best = (f, float(thr), lv, rv, sse)
    return best
