import numpy as np
import pytest
from structlog.testing import capture_logs

from src.control import (
    Box,
    DpcConfig,
    DpcController,
    GSpace,
    MpcController,
    SchedulingPolicy,
    build_dpc_qp,
    build_mpc_qp,
    open_loop_check,
    prediction_maps,
    resolve_schedule,
    restrict_to_row_space
)
from src.errors import ConfigError, DimensionError, InitializationError
from src.plantlab import LpvIoModel, example1_model, example1_scheduling
from src.predictor import assemble_equality
from src.qpcore import solve
from src.signals import SignalSequence


def example1_config(**kwargs):
    settings = dict(
        N_p=5,
        n_ell=2,
        Q=[[10.0]],
        R=[[0.001]],
        u_box=Box.symmetric(5.0),
        y_box=Box.symmetric(1.0)
    )
    settings.update(kwargs)
    return DpcConfig(**settings)


def past_window(trajectory, start=10, n_ell=2):
    u, p, y = trajectory
    return u.window(start, n_ell), p.window(start, n_ell), y.window(start, n_ell)


class TestSettings:
    def test_box_violation(self):
        box = Box([-1.0, 0.0], [1.0, 2.0])
        assert box.violation(np.array([[0.5, 1.0]])) == 0.0
        assert box.violation(np.array([[1.5, -0.25]])) == pytest.approx(0.5)
        np.testing.assert_array_equal(box.clip(np.array([3.0, -1.0])), [1.0, 0.0])

    def test_empty_box(self):
        with pytest.raises(ConfigError):
            Box([1.0], [0.0])

    def test_tile(self):
        lower, upper = Box.symmetric(2.0, size=2).tile(3)
        assert lower.tolist() == [-2.0] * 6
        assert upper.tolist() == [2.0] * 6

    def test_indefinite_weight(self):
        with pytest.raises(ConfigError):
            example1_config(Q=[[-1.0]])

    def test_weight_box_mismatch(self):
        with pytest.raises(ConfigError):
            example1_config(R=np.eye(2))

    def test_policy_from_string(self):
        cfg = example1_config(sched_policy='frozen')
        assert cfg.sched_policy is SchedulingPolicy.FROZEN
        assert cfg.g_space is GSpace.FREE
        assert cfg.N_c == cfg.N_p

    def test_stage_cost(self):
        cfg = example1_config()
        assert cfg.stage_cost([0.5], [0.0], [1.0]) == pytest.approx(10.0 * 0.25 + 0.001)


class TestScheduling:
    def test_frozen_tiles_current_value(self):
        p_hat = resolve_schedule(SchedulingPolicy.FROZEN, np.array([0.3, 0.09]), None, 4)
        assert p_hat.values.shape == (4, 2)
        assert np.all(p_hat.values == [0.3, 0.09])

    def test_known_future_window(self):
        future = example1_scheduling(8)
        p_hat = resolve_schedule(SchedulingPolicy.KNOWN_FUTURE, future[0], future, 5)
        np.testing.assert_array_equal(p_hat.values, future.values[:5])

    def test_known_future_too_short(self):
        future = example1_scheduling(3)
        with pytest.raises(DimensionError):
            resolve_schedule(SchedulingPolicy.KNOWN_FUTURE, future[0], future, 5)

    def test_known_future_missing(self):
        with pytest.raises(DimensionError):
            resolve_schedule(SchedulingPolicy.KNOWN_FUTURE, np.zeros(2), None, 5)


class TestPredictionMaps:
    def test_gamma_is_strictly_lower_triangular(self, example1_trajectory):
        past_u, past_p, past_y = past_window(example1_trajectory)
        p_hat = example1_trajectory[1].window(12, 5)
        _, Gamma = prediction_maps(example1_model(), past_u, past_p, past_y, p_hat)
        assert Gamma.shape == (5, 5)
        assert np.all(np.triu(Gamma) == 0.0)

    def test_two_step_closed_form(self):
        model = LpvIoModel.siso([[0.4, 0.2]], [[1.5, -0.5]])
        past_u = SignalSequence([0.7])
        past_p = SignalSequence([0.3])
        past_y = SignalSequence([-0.2])
        p_hat = SignalSequence([0.6, 0.1])
        Phi, Gamma = prediction_maps(model, past_u, past_p, past_y, p_hat)
        a = lambda p: 0.4 + 0.2 * p
        b = lambda p: 1.5 - 0.5 * p
        y0 = -a(0.3) * -0.2 + b(0.3) * 0.7
        np.testing.assert_allclose(Phi, [y0, -a(0.6) * y0], atol=1e-10)
        np.testing.assert_allclose(Gamma, [[0.0, 0.0], [b(0.6), 0.0]], atol=1e-10)

    def test_mpc_plan_is_consistent_with_model(self, example1_trajectory):
        past = past_window(example1_trajectory)
        p_hat = example1_trajectory[1].window(12, 5)
        reference = SignalSequence(np.full(5, 0.4))
        problem, _, _ = build_mpc_qp(example1_model(), *past, reference, p_hat, example1_config())
        solution = solve(problem)
        assert solution.optimal
        u_plan = solution.x.reshape(5, 1)
        Phi, Gamma = prediction_maps(example1_model(), *past, p_hat)
        y_plan = Phi + Gamma @ solution.x
        assert open_loop_check(example1_model(), past, p_hat, u_plan, y_plan) < 1e-10


class TestDpcProgram:
    def test_program_dimensions(self, example1_blocks, example1_trajectory):
        past = past_window(example1_trajectory)
        p_hat = example1_trajectory[1].window(12, 5)
        problem = build_dpc_qp(example1_blocks, *past, SignalSequence(np.zeros(5)), p_hat, example1_config())
        assert problem.n == 42
        assert problem.m_eq == 32
        assert problem.m_in == 10

    def test_plan_matches_model(self, example1_blocks, example1_trajectory):
        past = past_window(example1_trajectory)
        p_hat = example1_trajectory[1].window(12, 5)
        reference = SignalSequence(np.full(5, -0.3))
        problem = build_dpc_qp(example1_blocks, *past, reference, p_hat, example1_config())
        solution = solve(problem)
        assert solution.optimal
        u_plan = example1_blocks.Uf @ solution.x
        y_plan = example1_blocks.Yf @ solution.x
        assert open_loop_check(example1_model(), past, p_hat, u_plan, y_plan) < 1e-6

    def test_same_plan_as_model_based(self, example1_blocks, example1_trajectory):
        past = past_window(example1_trajectory)
        p_hat = example1_trajectory[1].window(12, 5)
        reference = SignalSequence([0.5, 0.5, 0.2, 0.2, 0.2])
        cfg = example1_config()
        dpc = solve(build_dpc_qp(example1_blocks, *past, reference, p_hat, cfg))
        mpc_problem, _, _ = build_mpc_qp(example1_model(), *past, reference, p_hat, cfg)
        mpc = solve(mpc_problem)
        np.testing.assert_allclose(example1_blocks.Uf @ dpc.x, mpc.x, atol=1e-4)
        assert dpc.objective == pytest.approx(mpc.objective, rel=1e-5, abs=1e-8)

    def test_row_space_keeps_the_plan(self, example1_blocks, example1_trajectory):
        past = past_window(example1_trajectory)
        p_hat = example1_trajectory[1].window(12, 5)
        reference = SignalSequence([0.5, 0.5, 0.2, 0.2, 0.2])
        free = solve(build_dpc_qp(example1_blocks, *past, reference, p_hat, example1_config()))
        problem = build_dpc_qp(example1_blocks, *past, reference, p_hat, example1_config(g_space='row-space'))
        restricted = solve(problem)
        assert problem.m_eq > 32
        assert restricted.optimal
        np.testing.assert_allclose(example1_blocks.Uf @ restricted.x, example1_blocks.Uf @ free.x, atol=1e-5)
        np.testing.assert_allclose(example1_blocks.Yf @ restricted.x, example1_blocks.Yf @ free.x, atol=1e-5)

    def test_row_space_g_is_minimum_norm(self, example1_blocks, example1_trajectory):
        past = past_window(example1_trajectory)
        p_hat = example1_trajectory[1].window(12, 5)
        cfg = example1_config(g_space=GSpace.ROW_SPACE)
        g = solve(build_dpc_qp(example1_blocks, *past, SignalSequence(np.full(5, 0.3)), p_hat, cfg)).x
        Aeq, beq = assemble_equality(example1_blocks, *past, None, p_hat)
        M = np.vstack([Aeq, example1_blocks.Uf])
        g_min = np.linalg.pinv(M, rcond=1e-10) @ np.concatenate([beq, example1_blocks.Uf @ g])
        np.testing.assert_allclose(g, g_min, atol=1e-6)

    def test_restriction_without_null_directions(self):
        Aeq, beq = np.eye(2), np.array([1.0, 2.0])
        A, b = restrict_to_row_space(Aeq, beq, np.zeros((1, 2)))
        assert A is Aeq and b is beq


    def test_wrong_horizon(self, example1_blocks, example1_trajectory):
        past = past_window(example1_trajectory)
        p_hat = example1_trajectory[1].window(12, 4)
        with pytest.raises(DimensionError):
            build_dpc_qp(example1_blocks, *past, SignalSequence(np.zeros(4)), p_hat, example1_config(N_p=4))


class TestControllers:
    def test_step_shifts_buffer(self, example1_blocks):
        cfg = example1_config()
        init_p = example1_scheduling(2, start=-1)
        controller = DpcController(example1_blocks, cfg, SignalSequence(np.zeros(2)), init_p, SignalSequence(np.zeros(2)))
        future = example1_scheduling(5, start=1)
        action = controller.step([0.0], future[0], SignalSequence(np.full(5, 0.5)), future)
        assert controller.k == 1
        newest_u, newest_p, newest_y = controller.newest
        np.testing.assert_array_equal(newest_u, action.u)
        np.testing.assert_array_equal(newest_p, future[0])
        assert newest_y[0] == 0.0
        assert abs(action.u[0]) <= 5.0
        assert action.u_plan.shape == (5, 1)

    def test_short_initial_records(self):
        cfg = example1_config(n_ell=3)
        one = SignalSequence(np.zeros(2))
        with pytest.raises(InitializationError):
            MpcController(example1_model(), cfg, one, example1_scheduling(2), one)

    def test_past_window_shorter_than_lag(self):
        cfg = example1_config(n_ell=1)
        one = SignalSequence(np.zeros(1))
        with pytest.raises(DimensionError):
            MpcController(example1_model(), cfg, one, example1_scheduling(1), one)

    def test_reference_length_checked(self):
        cfg = example1_config()
        zeros = SignalSequence(np.zeros(2))
        controller = MpcController(example1_model(), cfg, zeros, example1_scheduling(2), zeros)
        with pytest.raises(DimensionError):
            controller.step([0.0], [0.5, 0.25], SignalSequence(np.zeros(3)), example1_scheduling(5))

    def test_clipping_a_plan_is_logged(self):
        class OvershootingController(MpcController):
            def _extract_plan(self, x):
                u_plan, y_plan = super()._extract_plan(x)
                return u_plan + 10.0, y_plan

        cfg = example1_config()
        zeros = SignalSequence(np.zeros(2))
        init_p = example1_scheduling(2, start=-1)
        future = example1_scheduling(5, start=1)
        reference = SignalSequence(np.full(5, 0.5))
        controller = OvershootingController(example1_model(), cfg, zeros, init_p, zeros)
        with capture_logs() as logs:
            action = controller.step([0.0], future[0], reference, future)
        assert action.u[0] == 5.0
        clipped = [entry for entry in logs if entry['event'] == 'input_clipped']
        assert len(clipped) == 1
        assert clipped[0]['log_level'] == 'warning'
        assert clipped[0]['excess'] > 1.0

    def test_feasible_plan_is_not_reported_as_clipped(self):
        zeros = SignalSequence(np.zeros(2))
        future = example1_scheduling(5, start=1)
        controller = MpcController(example1_model(), example1_config(), zeros, example1_scheduling(2, start=-1), zeros)
        with capture_logs() as logs:
            controller.step([0.0], future[0], SignalSequence(np.full(5, 0.5)), future)
        assert 'input_clipped' not in [entry['event'] for entry in logs]

