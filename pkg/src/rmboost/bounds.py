"""Finite-sample diagnostic bounds for the minimax boosting pipeline.

Pure arithmetic on run statistics: concentration of base-rule training
averages, the high-probability risk inflation term, per-round error
bounds, a VC bound for depth-limited tree rules, and the early-termination
suboptimality certificate.  Nothing in the learner depends on this module;
the dependency points the other way by design, so these can never steer
training.

Logarithms are natural except in the explicitly base-2 VC formula.
"""

from __future__ import annotations

import math
from typing import Tuple


def _check_common(n: float, D: float, delta: float) -> None:
    if n < 1:
        raise ValueError("sample count must be at least 1")
    if D < 1:
        raise ValueError("VC dimension must be at least 1")
    if not (0.0 < delta < 1.0):
        raise ValueError("confidence delta must lie in (0, 1)")
    if 3.0 * n / D <= 1.0:
        raise ValueError("bound vacuous: log argument 3n/D must exceed 1")


def est_error_bound(n: float, D: float, delta: float) -> float:
    """High-probability bound on the sup-norm estimation error of the
    base-rule correlation vector:

        2 sqrt(2 D ln(3n/D) / n) + sqrt(ln(2/delta) / (2n))
    """
    _check_common(n, D, delta)
    first = 2.0 * math.sqrt(2.0 * D * math.log(3.0 * n / D) / n)
    second = math.sqrt(math.log(2.0 / delta) / (2.0 * n))
    return first + second


def epsilon_delta(l1_mu: float, n: float, D: float, delta: float) -> float:
    """Risk-inflation term for the randomized rule at coefficient mass
    ||mu||_1: exactly 0 when ||mu||_1 <= 1/2, else

        2 ||mu||_1 sqrt(2 D ln(3n/D) / n) + (||mu||_1 - 1/2) sqrt(ln(1/delta) / (2n)).

    The form is deliberately piecewise with a jump at 1/2; it must not be
    smoothed.
    """
    if l1_mu < 0 or not math.isfinite(l1_mu):
        raise ValueError("coefficient mass must be finite and nonnegative")
    _check_common(n, D, delta)
    if l1_mu <= 0.5:
        return 0.0
    first = 2.0 * l1_mu * math.sqrt(2.0 * D * math.log(3.0 * n / D) / n)
    second = (l1_mu - 0.5) * math.sqrt(math.log(1.0 / delta) / (2.0 * n))
    return first + second


def round_error_bound(R_k: float, eps_delta: float, eps_est: float,
                      P_noise: float, lam: float, l1_mu: float) -> float:
    """Error-probability bound carried by a round's solution:

        R_k + eps_delta + (eps_est + 2 P_noise - lam) * ||mu||_1
    """
    return R_k + eps_delta + (eps_est + 2.0 * P_noise - lam) * l1_mu


def vc_bound_trees(t_nodes: int, d: int) -> float:
    """VC-dimension bound (2t + 1) log2(d + 2) for threshold-split trees
    with t internal nodes over d features; t = 1 covers stumps."""
    if t_nodes < 1:
        raise ValueError("node count must be at least 1")
    if d < 1:
        raise ValueError("feature count must be at least 1")
    return (2.0 * t_nodes + 1.0) * math.log2(d + 2.0)


def noise_theorem_bounds(eps_opt: float, eps_est: float, P_noise: float,
                         lam: float, l1_gap: float,
                         var_rho: float) -> Tuple[float, float]:
    """Excess-risk bounds under label corruption, as a pair.

    The first holds for any corruption level:

        eps_opt + (eps_est + 2 P_noise + lam) * l1_gap

    the second, valid only when P_noise < 1/2, replaces the worst-case
    corruption term by the noise-probability variance:

        [eps_opt + (eps_est + 2 sqrt(var_rho) + lam) * l1_gap] / (1 - 2 P_noise)

    where l1_gap is the L1 distance between the solved and the comparison
    coefficient vectors.
    """
    if var_rho < 0:
        raise ValueError("noise variance must be nonnegative")
    bound10 = eps_opt + (eps_est + 2.0 * P_noise + lam) * l1_gap
    if P_noise >= 0.5:
        raise ValueError("bound vacuous: requires corruption probability below 1/2")
    bound11 = (eps_opt + (eps_est + 2.0 * math.sqrt(var_rho) + lam) * l1_gap) \
        / (1.0 - 2.0 * P_noise)
    return bound10, bound11


def early_termination_bound(max_pricing_score: float, lam: float,
                            l1_mu_star: float, eps_delta: float) -> float:
    """Suboptimality certificate when training stops while some rule still
    prices above lam:

        (max_pricing_score - lam)_+ * ||mu*||_1 + eps_delta
    """
    for v in (max_pricing_score, lam, l1_mu_star, eps_delta):
        if not math.isfinite(v):
            raise ValueError("inputs must be finite")
    return max(max_pricing_score - lam, 0.0) * l1_mu_star + eps_delta
