"""Bound-calculator tests: frozen worked values, shape, and guards.

The frozen constants were hand-checked once against the closed forms and
must reproduce to 4 decimals; they are the contract.
"""

import math

import numpy as np
import pytest

from rmboost.bounds import (
    early_termination_bound,
    epsilon_delta,
    est_error_bound,
    noise_theorem_bounds,
    round_error_bound,
    vc_bound_trees,
)


def test_est_error_bound_worked_value():
    assert est_error_bound(9, 3, 2 / math.e) == pytest.approx(2.6563, abs=5e-5)


def test_est_error_bound_shrinks_with_n_and_grows_with_D():
    values = [est_error_bound(n, 3, 0.05) for n in (50, 200, 1000, 5000)]
    assert all(b < a for a, b in zip(values, values[1:]))
    values = [est_error_bound(1000, D, 0.05) for D in (1, 3, 6, 12)]
    assert all(b > a for a, b in zip(values, values[1:]))
    assert est_error_bound(1000, 3, 0.01) > est_error_bound(1000, 3, 0.2)


def test_epsilon_delta_worked_value():
    assert epsilon_delta(1.0, 1000, 3, 0.05) == pytest.approx(0.4265, abs=5e-5)


def test_epsilon_delta_zero_at_and_below_half():
    for l1 in (0.0, 0.2, 0.5):
        assert epsilon_delta(l1, 1000, 3, 0.05) == 0.0


def test_epsilon_delta_jumps_at_half():
    # The piecewise form is not smoothed: just above 1/2 the first term
    # contributes at full weight, so the bound leaps from exactly 0.
    just_above = epsilon_delta(0.5 + 1e-9, 1000, 3, 0.05)
    floor = math.sqrt(2 * 3 * math.log(3 * 1000 / 3) / 1000)  # l1 ~ 1/2 term
    assert just_above >= floor
    assert epsilon_delta(0.5, 1000, 3, 0.05) == 0.0


def test_epsilon_delta_monotone_in_mass():
    values = [epsilon_delta(l1, 500, 4, 0.1) for l1 in (0.6, 1.0, 2.0, 5.0)]
    assert all(b > a for a, b in zip(values, values[1:]))


def test_vc_bound_worked_values():
    assert vc_bound_trees(1, 2) == 6.0
    assert vc_bound_trees(1, 14) == 12.0
    assert vc_bound_trees(2, 2) == 10.0


def test_round_error_bound_formula():
    got = round_error_bound(R_k=0.3, eps_delta=0.05, eps_est=0.04,
                            P_noise=0.1, lam=0.02, l1_mu=3.0)
    assert got == pytest.approx(0.3 + 0.05 + (0.04 + 0.2 - 0.02) * 3.0)


def test_noise_theorem_bounds_formulas():
    b10, b11 = noise_theorem_bounds(eps_opt=0.1, eps_est=0.05, P_noise=0.1,
                                    lam=0.02, l1_gap=2.0, var_rho=0.01)
    assert b10 == pytest.approx(0.1 + (0.05 + 0.2 + 0.02) * 2.0)
    assert b11 == pytest.approx((0.1 + (0.05 + 0.2 + 0.02) * 2.0) / 0.8)
    # Zero variance and zero corruption collapse both to the same value.
    b10, b11 = noise_theorem_bounds(0.1, 0.05, 0.0, 0.02, 2.0, 0.0)
    assert b10 == pytest.approx(b11)


def test_noise_theorem_bounds_guards():
    with pytest.raises(ValueError):
        noise_theorem_bounds(0.1, 0.05, 0.5, 0.02, 2.0, 0.01)
    with pytest.raises(ValueError):
        noise_theorem_bounds(0.1, 0.05, 0.1, 0.02, 2.0, -0.01)


def test_early_termination_bound():
    assert early_termination_bound(0.06, 0.02, 4.0, 0.05) == \
        pytest.approx((0.06 - 0.02) * 4.0 + 0.05)
    # Pricing already at or under lam leaves only the delta term.
    assert early_termination_bound(0.01, 0.02, 4.0, 0.05) == 0.05
    with pytest.raises(ValueError):
        early_termination_bound(np.inf, 0.02, 4.0, 0.05)


def test_common_guards():
    with pytest.raises(ValueError):
        est_error_bound(0, 3, 0.05)
    with pytest.raises(ValueError):
        est_error_bound(100, 0, 0.05)
    with pytest.raises(ValueError):
        est_error_bound(100, 3, 0.0)
    with pytest.raises(ValueError):
        est_error_bound(100, 3, 1.0)
    with pytest.raises(ValueError):
        est_error_bound(1, 3, 0.05)  # 3n/D = 1: vacuous log argument
    with pytest.raises(ValueError):
        epsilon_delta(-0.5, 1000, 3, 0.05)
    with pytest.raises(ValueError):
        epsilon_delta(float("nan"), 1000, 3, 0.05)
    with pytest.raises(ValueError):
        vc_bound_trees(0, 5)
    with pytest.raises(ValueError):
        vc_bound_trees(1, 0)
