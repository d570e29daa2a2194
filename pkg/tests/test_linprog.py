"""Master-LP solver tests against independent references.

Layer 1 validates the vertex-enumeration reference itself (closed-form
cases plus an external LP solver).  Layer 2 sweeps the production solver
against that reference on randomized tiny instances, on both execution
paths.  Layer 3 exercises determinism, warm starts, pruning, and input
validation.
"""

import numpy as np
import pytest

from oracles import lp_vertex_optimum

from rmboost import accel
from rmboost.linprog import (
    BasisSnapshot,
    LpError,
    LpProblem,
    LpSolution,
    price_columns,
    solve_master,
)

scipy_opt = pytest.importorskip("scipy.optimize")


def random_instance(rng, n_max=6, t_max=3):
    n = int(rng.integers(1, n_max + 1))
    t = int(rng.integers(1, t_max + 1))
    kind = rng.integers(0, 3)
    if kind == 0:
        U = rng.choice([-1.0, 1.0], size=(n, t))
    elif kind == 1:
        U = np.round(rng.uniform(-1, 1, size=(n, t)), 2)
    else:
        U = rng.choice([-1.0, 0.0, 1.0], size=(n, t))
    y = rng.choice([-1.0, 1.0], size=n)
    lam = float(rng.choice([0.01, 0.1, 0.5]))
    return U, y, lam


def reference_lp(U, y, lam):
    """Third-party LP solution of the same master, for oracle validation."""
    n, t = U.shape
    q = U.T @ y / n
    c = np.concatenate([lam - q, lam + q])
    G = np.vstack([np.hstack([U, -U]), np.hstack([-U, U])])
    h = np.full(2 * n, 0.5)
    res = scipy_opt.linprog(c, A_ub=G, b_ub=h, bounds=(0, None), method="highs")
    assert res.status == 0, res.message
    return 0.5 + float(res.fun)


# --------------------------------------------------------------------------
# Layer 1: the vertex-enumeration reference itself.
# --------------------------------------------------------------------------

def test_vertex_oracle_zero_solution_when_lam_dominates():
    rng = np.random.default_rng(11)
    for _ in range(50):
        U, y, _ = random_instance(rng)
        q = U.T @ y / y.shape[0]
        lam = float(np.max(np.abs(q)) + 0.25)
        assert lp_vertex_optimum(U, y, lam) == pytest.approx(0.5, abs=1e-12)


def test_vertex_oracle_perfect_column_closed_form():
    # One rule agreeing with every label: optimum puts mu = 1/2 on it, so
    # the value is 1/2 - 1/2 + lam/2 = lam/2 whenever lam < 1.
    y = np.array([-1.0, 1.0, 1.0, -1.0])
    U = y.reshape(4, 1)
    for lam in (0.01, 0.1, 0.5):
        assert lp_vertex_optimum(U, y, lam) == pytest.approx(lam / 2, abs=1e-12)


def test_vertex_oracle_matches_external_solver():
    rng = np.random.default_rng(12)
    for _ in range(150):
        U, y, lam = random_instance(rng)
        assert lp_vertex_optimum(U, y, lam) == pytest.approx(
            reference_lp(U, y, lam), abs=1e-8)


# --------------------------------------------------------------------------
# Layer 2: production solver against the reference, both execution paths.
# --------------------------------------------------------------------------

@pytest.fixture(params=["compiled", "plain"])
def execution_path(request, monkeypatch):
    if request.param == "compiled" and not accel.NUMBA_ENABLED:
        pytest.skip("compiled path unavailable")
    monkeypatch.setattr(accel, "NUMBA_ENABLED", request.param == "compiled")
    return request.param


def test_solver_matches_vertex_oracle(execution_path):
    count = 500 if execution_path == "compiled" else 200
    rng = np.random.default_rng(13)
    for i in range(count):
        U, y, lam = random_instance(rng)
        sol = solve_master(LpProblem(U, y, lam))
        assert sol.status == "optimal"
        expect = lp_vertex_optimum(U, y, lam)
        assert sol.objective == pytest.approx(expect, abs=1e-9), f"instance {i}"


def test_solver_matches_external_solver_medium_sizes(execution_path):
    rng = np.random.default_rng(14)
    reps = 40 if execution_path == "compiled" else 15
    for _ in range(reps):
        n = int(rng.integers(20, 120))
        t = int(rng.integers(1, 25))
        U = rng.choice([-1.0, 1.0], size=(n, t))
        y = rng.choice([-1.0, 1.0], size=n)
        lam = float(rng.choice([0.01, 0.05, 0.2]))
        sol = solve_master(LpProblem(U, y, lam))
        assert sol.status == "optimal"
        assert sol.objective == pytest.approx(reference_lp(U, y, lam), abs=1e-8)


def test_solver_duality_and_margins(execution_path):
    rng = np.random.default_rng(15)
    for _ in range(60):
        U, y, lam = random_instance(rng, n_max=12, t_max=6)
        sol = solve_master(LpProblem(U, y, lam))
        n = y.shape[0]
        margins = U @ sol.mu
        assert np.max(np.abs(margins)) <= 0.5 + 1e-9
        # complementary slackness: alpha rides the upper bound, beta the lower
        assert np.all(sol.alpha[margins < 0.5 - 1e-7] <= 1e-9)
        assert np.all(sol.beta[margins > -0.5 + 1e-7] <= 1e-9)
        dual = 0.5 * (1.0 - float(sol.alpha.sum() + sol.beta.sum()))
        assert sol.objective == pytest.approx(dual, abs=1e-8)
        # every dual constraint holds: |pricing| <= lam for all columns
        prices = price_columns(sol, U, y)
        assert np.max(np.abs(prices)) <= lam + 1e-8


# --------------------------------------------------------------------------
# Layer 3: worked examples, determinism, warm starts, validation.
# --------------------------------------------------------------------------

def test_worked_example_perfect_rule():
    y = np.array([-1.0, 1.0])
    U = y.reshape(2, 1)
    sol = solve_master(LpProblem(U, y, 0.1))
    assert sol.status == "optimal"
    assert sol.objective == pytest.approx(0.05, abs=1e-12)
    assert sol.mu_plus[0] == pytest.approx(0.5, abs=1e-12)
    assert sol.mu_minus[0] == 0.0


def test_worked_example_uninformative_column():
    # A column orthogonal to the labels cannot reduce the risk below 1/2.
    U = np.array([[1.0], [1.0]])
    y = np.array([-1.0, 1.0])
    sol = solve_master(LpProblem(U, y, 0.1))
    assert sol.objective == pytest.approx(0.5, abs=1e-12)
    assert np.all(sol.mu == 0.0)


def test_determinism_bitwise():
    rng = np.random.default_rng(16)
    U = rng.choice([-1.0, 1.0], size=(40, 8))
    y = rng.choice([-1.0, 1.0], size=40)
    a = solve_master(LpProblem(U, y, 0.05))
    b = solve_master(LpProblem(U, y, 0.05))
    assert a.objective == b.objective
    assert np.array_equal(a.mu, b.mu)
    assert np.array_equal(a.alpha, b.alpha)
    assert np.array_equal(a.beta, b.beta)
    assert a.pivots == b.pivots


def test_warm_restart_same_problem_zero_pivots():
    rng = np.random.default_rng(17)
    U = rng.choice([-1.0, 1.0], size=(30, 6))
    y = rng.choice([-1.0, 1.0], size=30)
    prob = LpProblem(U, y, 0.05)
    cold = solve_master(prob)
    warm = solve_master(prob, warm_start=cold.basis)
    assert warm.pivots == 0
    assert warm.objective == cold.objective
    assert np.array_equal(warm.mu, cold.mu)


def test_warm_start_after_appending_column():
    rng = np.random.default_rng(18)
    U = rng.choice([-1.0, 1.0], size=(30, 5))
    y = rng.choice([-1.0, 1.0], size=30)
    cold = solve_master(LpProblem(U, y, 0.05))
    U2 = np.hstack([U, rng.choice([-1.0, 1.0], size=(30, 1))])
    warm = solve_master(LpProblem(U2, y, 0.05), warm_start=cold.basis)
    fresh = solve_master(LpProblem(U2, y, 0.05))
    assert warm.status == "optimal"
    assert warm.objective == pytest.approx(fresh.objective, abs=1e-10)
    assert warm.pivots <= fresh.pivots + 5


def test_warm_start_after_pruning_zero_pivots():
    rng = np.random.default_rng(19)
    U = rng.choice([-1.0, 1.0], size=(30, 8))
    y = rng.choice([-1.0, 1.0], size=30)
    prob = LpProblem(U, y, 0.05)
    sol = solve_master(prob)
    prices = price_columns(sol, U, y)
    keep = np.abs(prices) >= 0.05 - 1e-3
    if keep.all():
        pytest.skip("no prunable column in this instance")
    keep_pos = np.flatnonzero(keep)
    index_map = np.full(U.shape[1], -1, dtype=np.int64)
    index_map[keep_pos] = np.arange(keep_pos.shape[0])
    snap = sol.basis.remapped(index_map, keep_pos.shape[0])
    warm = solve_master(LpProblem(U[:, keep_pos], y, 0.05), warm_start=snap)
    assert warm.pivots == 0
    assert warm.objective == pytest.approx(sol.objective, abs=1e-12)


def test_remap_rejects_dropping_basic_column():
    y = np.array([-1.0, 1.0])
    U = y.reshape(2, 1)
    sol = solve_master(LpProblem(U, y, 0.1))
    assert sol.mu_plus[0] > 0  # the lone column is basic
    index_map = np.array([-1], dtype=np.int64)
    with pytest.raises(LpError):
        sol.basis.remapped(index_map, 0)


def test_stale_warm_start_falls_back_to_cold():
    rng = np.random.default_rng(20)
    U = rng.choice([-1.0, 1.0], size=(20, 4))
    y = rng.choice([-1.0, 1.0], size=20)
    sol = solve_master(LpProblem(U, y, 0.05))
    # Hand the basis to a different random problem of the same shape; the
    # solver must still reach the correct optimum.
    U2 = rng.choice([-1.0, 1.0], size=(20, 4))
    y2 = rng.choice([-1.0, 1.0], size=20)
    warm = solve_master(LpProblem(U2, y2, 0.05), warm_start=sol.basis)
    fresh = solve_master(LpProblem(U2, y2, 0.05))
    assert warm.status == "optimal"
    assert warm.objective == pytest.approx(fresh.objective, abs=1e-10)


def test_iteration_limit_status():
    rng = np.random.default_rng(21)
    U = rng.choice([-1.0, 1.0], size=(40, 10))
    y = rng.choice([-1.0, 1.0], size=40)
    sol = solve_master(LpProblem(U, y, 0.01), max_pivots=1)
    assert sol.status == "iteration-limit"


def test_price_columns_shapes():
    y = np.array([-1.0, 1.0])
    U = y.reshape(2, 1)
    sol = solve_master(LpProblem(U, y, 0.1))
    single = price_columns(sol, U[:, 0], y)
    assert np.isscalar(single) or np.ndim(single) == 0
    many = price_columns(sol, U, y)
    assert many.shape == (1,)
    assert float(many[0]) == pytest.approx(float(single))


def test_problem_validation_errors():
    y = np.array([-1.0, 1.0])
    U = y.reshape(2, 1)
    with pytest.raises(LpError):
        LpProblem(U, y, 0.0).validated()
    with pytest.raises(LpError):
        LpProblem(U, y, -1.0).validated()
    with pytest.raises(LpError):
        LpProblem(U, np.array([0.0, 1.0]), 0.1).validated()
    with pytest.raises(LpError):
        LpProblem(np.array([[2.0], [0.0]]), y, 0.1).validated()
    with pytest.raises(LpError):
        LpProblem(np.array([[np.nan], [0.0]]), y, 0.1).validated()
    with pytest.raises(LpError):
        LpProblem(U.ravel(), y, 0.1).validated()


def test_solution_exposes_basis_snapshot_copy():
    y = np.array([-1.0, 1.0])
    U = y.reshape(2, 1)
    sol = solve_master(LpProblem(U, y, 0.1))
    assert isinstance(sol, LpSolution)
    assert isinstance(sol.basis, BasisSnapshot)
    before = sol.basis.bcols.copy()
    sol.basis.bcols[:] = -99
    again = solve_master(LpProblem(U, y, 0.1))
    assert np.array_equal(again.basis.bcols, before)
