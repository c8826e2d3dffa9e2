import itertools

import numpy as np
import pytest

from src.errors import DataFormatError, DimensionError
from src.qpcore import (
    QpProblem,
    QpStatus,
    dump_problem,
    eliminate_equalities,
    kkt_residuals,
    load_problem,
    solve
)


def enumerate_box_qp(P, q, lb, ub):
    """Global minimizer of a strictly convex box QP by trying all 3^n active sets."""
    n = q.size
    best_x, best_value = None, np.inf
    for pattern in itertools.product((-1, 0, 1), repeat=n):
        pattern = np.array(pattern)
        x = np.where(pattern < 0, lb, np.where(pattern > 0, ub, 0.0))
        free = pattern == 0
        if free.any():
            fixed = ~free
            rhs = -(q[free] + P[np.ix_(free, fixed)] @ x[fixed])
            x[free] = np.linalg.solve(P[np.ix_(free, free)], rhs)
        if np.any(x < lb - 1e-12) or np.any(x > ub + 1e-12):
            continue
        value = 0.5 * x @ P @ x + q @ x
        if value < best_value:
            best_x, best_value = x, value
    return best_x, best_value


def random_box_qp(seed, n=4):
    rng = np.random.default_rng(seed)
    M = rng.standard_normal((n, n))
    P = M @ M.T + 0.1 * np.eye(n)
    q = 3.0 * rng.standard_normal(n)
    lb = -rng.uniform(0.2, 1.0, n)
    ub = rng.uniform(0.2, 1.0, n)
    return P, q, lb, ub


class TestProblem:
    def test_defaults(self):
        prob = QpProblem(P=np.eye(2), q=np.zeros(2))
        assert prob.m_eq == 0
        assert prob.m_in == 0
        assert prob.objective(np.ones(2)) == 1.0

    def test_asymmetric_hessian(self):
        with pytest.raises(DimensionError):
            QpProblem(P=np.array([[1.0, 1.0], [0.0, 1.0]]), q=np.zeros(2))

    def test_crossed_bounds(self):
        with pytest.raises(DimensionError):
            QpProblem(P=np.eye(1), q=np.zeros(1), Ain=np.eye(1), lb=[1.0], ub=[0.0])

    def test_shape_mismatch(self):
        with pytest.raises(DimensionError):
            QpProblem(P=np.eye(2), q=np.zeros(3))

    def test_residual_sizes(self):
        prob = QpProblem(P=np.eye(2), q=np.zeros(2))
        with pytest.raises(DimensionError):
            kkt_residuals(prob, np.zeros(3))


class TestSolver:
    def test_unconstrained(self):
        prob = QpProblem(P=np.diag([2.0, 4.0]), q=np.array([-2.0, -4.0]))
        solution = solve(prob)
        assert solution.optimal
        np.testing.assert_allclose(solution.x, [1.0, 1.0], atol=1e-10)
        assert solution.objective == pytest.approx(-3.0)

    def test_equality_constrained(self):
        prob = QpProblem(P=2.0 * np.eye(2), q=np.zeros(2), Aeq=[[1.0, 1.0]], beq=[1.0])
        solution = solve(prob)
        assert solution.optimal
        np.testing.assert_allclose(solution.x, [0.5, 0.5], atol=1e-10)
        np.testing.assert_allclose(solution.nu, [-1.0], atol=1e-9)

    def test_active_upper_bound_sign(self):
        prob = QpProblem(P=[[2.0]], q=[-4.0], Ain=[[1.0]], lb=[-np.inf], ub=[1.0])
        solution = solve(prob)
        assert solution.optimal
        assert solution.x[0] == pytest.approx(1.0, abs=1e-9)
        assert solution.lam[0] == pytest.approx(2.0, abs=1e-7)

    def test_active_lower_bound_sign(self):
        prob = QpProblem(P=[[2.0]], q=[4.0], Ain=[[1.0]], lb=[-1.0], ub=[np.inf])
        solution = solve(prob)
        assert solution.x[0] == pytest.approx(-1.0, abs=1e-9)
        assert solution.lam[0] == pytest.approx(-2.0, abs=1e-7)

    def test_bound_at_zero(self):
        prob = QpProblem(P=[[2.0]], q=[-2.0], Ain=[[1.0]], lb=[-np.inf], ub=[0.0])
        solution = solve(prob)
        assert solution.optimal
        assert solution.x[0] == pytest.approx(0.0, abs=1e-9)
        assert solution.objective == pytest.approx(0.0, abs=1e-9)

    @pytest.mark.parametrize('seed', range(4))
    def test_merit_history_never_increases(self, seed):
        P, q, lb, ub = random_box_qp(seed, n=6)
        solution = solve(QpProblem(P=P, q=q, Ain=np.eye(6), lb=lb, ub=ub))
        history = solution.merit_history
        assert all(later <= earlier for earlier, later in zip(history, history[1:]))

    def test_suboptimal_point_has_stationarity_residual(self):
        prob = QpProblem(P=np.diag([2.0, 4.0]), q=np.array([-2.0, -4.0]))
        assert kkt_residuals(prob, np.zeros(2)).stationarity > 0.1
        assert kkt_residuals(prob, np.ones(2)).within(1e-12)

    @pytest.mark.parametrize('seed', range(8))
    def test_matches_active_set_enumeration(self, seed):
        P, q, lb, ub = random_box_qp(seed)
        prob = QpProblem(P=P, q=q, Ain=np.eye(q.size), lb=lb, ub=ub)
        solution = solve(prob)
        x_ref, value_ref = enumerate_box_qp(P, q, lb, ub)
        assert solution.status is QpStatus.OPTIMAL
        np.testing.assert_allclose(solution.x, x_ref, atol=1e-8)
        assert solution.objective == pytest.approx(value_ref, abs=1e-8)
        assert solution.kkt.within(1e-9)

    def test_general_rows_with_equality(self):
        # min |x - c|^2 on the plane sum(x) = 0 with x_1 - x_2 <= 0.1
        c = np.array([1.0, -1.0, 0.5])
        prob = QpProblem(
            P=2.0 * np.eye(3),
            q=-2.0 * c,
            Aeq=[[1.0, 1.0, 1.0]],
            beq=[0.0],
            Ain=[[1.0, -1.0, 0.0]],
            lb=[-np.inf],
            ub=[0.1]
        )
        solution = solve(prob)
        assert solution.optimal
        x = solution.x
        assert x.sum() == pytest.approx(0.0, abs=1e-9)
        assert x[0] - x[1] == pytest.approx(0.1, abs=1e-9)
        np.testing.assert_allclose(x, [-7.0 / 60.0, -13.0 / 60.0, 1.0 / 3.0], atol=1e-9)
        assert solution.lam[0] == pytest.approx(1.9, abs=1e-7)
        assert solution.nu[0] == pytest.approx(1.0 / 3.0, abs=1e-7)

    def test_positive_semidefinite_hessian(self):
        # flat direction along x_2, fixed by the equality
        prob = QpProblem(
            P=np.diag([2.0, 0.0]),
            q=np.array([-2.0, 0.0]),
            Aeq=[[0.0, 1.0]],
            beq=[3.0],
            Ain=np.eye(2),
            lb=[-5.0, -5.0],
            ub=[0.5, 5.0]
        )
        solution = solve(prob)
        assert solution.optimal
        np.testing.assert_allclose(solution.x, [0.5, 3.0], atol=1e-9)

    def test_inconsistent_equalities(self):
        prob = QpProblem(P=np.eye(1), q=np.zeros(1), Aeq=[[1.0], [1.0]], beq=[0.0, 1.0])
        assert solve(prob).status is QpStatus.INFEASIBLE

    def test_fixed_point_outside_bounds(self):
        prob = QpProblem(P=np.eye(1), q=np.zeros(1), Aeq=[[1.0]], beq=[1.0], Ain=[[1.0]], lb=[-1.0], ub=[0.0])
        assert solve(prob).status is QpStatus.INFEASIBLE

    def test_contradicting_bounds(self):
        prob = QpProblem(
            P=np.eye(1),
            q=np.zeros(1),
            Ain=[[1.0], [1.0]],
            lb=[1.0, -np.inf],
            ub=[np.inf, 0.0]
        )
        assert solve(prob).status is QpStatus.INFEASIBLE

    def test_unbounded_reports_max_iterations(self):
        prob = QpProblem(P=np.zeros((1, 1)), q=[1.0])
        solution = solve(prob)
        assert solution.status is QpStatus.MAX_ITERATIONS
        assert not solution.optimal

    def test_iteration_budget(self):
        P, q, lb, ub = random_box_qp(3, n=6)
        prob = QpProblem(P=P, q=q, Ain=np.eye(6), lb=lb, ub=ub)
        solution = solve(prob, max_iter=1, check_every=10)
        assert solution.status in (QpStatus.OPTIMAL, QpStatus.MAX_ITERATIONS)
        assert solution.iterations <= 1


def random_lifted_qp(seed):
    """Box QP in v, lifted to x = (v, Dv + e) with the lift held by equalities.

    Returns the lifted problem, the reduced box data and the constant the
    lift adds to the objective.
    """
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 7))
    n_dep = int(rng.integers(0, 3))
    D = rng.standard_normal((n_dep, n))
    e = rng.standard_normal(n_dep)
    M = rng.standard_normal((n + n_dep, n + n_dep))
    P = M @ M.T + 0.1 * np.eye(n + n_dep)
    q = 2.0 * rng.standard_normal(n + n_dep)
    lb = -rng.uniform(0.2, 1.0, n)
    ub = rng.uniform(0.2, 1.0, n)

    T = np.vstack([np.eye(n), D])
    t = np.concatenate([np.zeros(n), e])
    P_red = T.T @ P @ T
    q_red = T.T @ (P @ t + q)
    constant = 0.5 * t @ P @ t + q @ t

    Aeq = np.hstack([-D, np.eye(n_dep)])
    Ain = np.hstack([np.eye(n), np.zeros((n, n_dep))])
    prob = QpProblem(P=0.5 * (P + P.T), q=q, Aeq=Aeq, beq=e, Ain=Ain, lb=lb, ub=ub)
    return prob, (0.5 * (P_red + P_red.T), q_red, lb, ub), constant


class TestRandomQps:
    def test_two_hundred_problems_match_enumeration(self):
        for seed in range(200):
            prob, (P_red, q_red, lb, ub), constant = random_lifted_qp(seed)
            solution = solve(prob)
            v_ref, value_ref = enumerate_box_qp(P_red, q_red, lb, ub)
            assert solution.status is QpStatus.OPTIMAL, seed
            np.testing.assert_allclose(solution.x[:v_ref.size], v_ref, atol=1e-7)
            assert solution.objective == pytest.approx(value_ref + constant, abs=1e-8 * (1.0 + abs(value_ref))), seed
            assert solution.kkt.within(1e-9), seed

    def test_infeasible_rows_reported_by_iterations(self):
        # x1 + x2 >= 1 and x1 + x2 <= 0 both depend on the reduced variable
        prob = QpProblem(
            P=np.eye(2),
            q=np.zeros(2),
            Ain=[[1.0, 1.0], [1.0, 1.0]],
            lb=[1.0, -np.inf],
            ub=[np.inf, 0.0]
        )
        solution = solve(prob)
        assert solution.status is QpStatus.INFEASIBLE
        assert not solution.optimal


class TestElimination:
    def test_null_basis(self, rng):
        Aeq = rng.standard_normal((2, 5))
        beq = rng.standard_normal(2)
        prob = QpProblem(P=np.eye(5), q=np.zeros(5), Aeq=Aeq, beq=beq)
        x0, Z, consistent = eliminate_equalities(prob)
        assert consistent
        assert Z.shape == (5, 3)
        np.testing.assert_allclose(Aeq @ Z, 0.0, atol=1e-12)
        np.testing.assert_allclose(Z.T @ Z, np.eye(3), atol=1e-12)
        np.testing.assert_allclose(Aeq @ x0, beq, atol=1e-12)

    def test_redundant_rows(self):
        Aeq = np.array([[1.0, 1.0, 0.0], [2.0, 2.0, 0.0]])
        prob = QpProblem(P=np.eye(3), q=np.zeros(3), Aeq=Aeq, beq=[1.0, 2.0])
        _, Z, consistent = eliminate_equalities(prob)
        assert consistent
        assert Z.shape == (3, 2)


class TestArchive:
    def test_reloaded_problem_solves_identically(self, tmp_path):
        P, q, lb, ub = random_box_qp(1)
        prob = QpProblem(P=P, q=q, c0=0.25, Aeq=[[1.0, 0.0, 0.0, 1.0]], beq=[0.1], Ain=np.eye(4), lb=lb, ub=ub)
        loaded = load_problem(dump_problem(prob, tmp_path / 'qp'))
        for name in ('P', 'q', 'Aeq', 'beq', 'Ain', 'lb', 'ub'):
            np.testing.assert_array_equal(getattr(loaded, name), getattr(prob, name))
        assert loaded.c0 == 0.25
        np.testing.assert_array_equal(solve(loaded).x, solve(prob).x)

    def test_missing_field(self, tmp_path):
        directory = dump_problem(QpProblem(P=np.eye(2), q=np.ones(2)), tmp_path / 'qp')
        (directory / 'P.csv').unlink()
        with pytest.raises(DataFormatError):
            load_problem(directory)
