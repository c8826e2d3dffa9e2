import numpy as np
import pytest

from src.bench.experiment_config import load_experiment_config
from src.control import (
    Box,
    DpcConfig,
    DpcController,
    IoPlant,
    MpcController,
    PendulumSimulator,
    StepRecord,
    TrajectoryLog,
    closed_loop,
    compare_logs,
    read_log,
    tracking_metrics,
    write_log
)
from src.coordinator.experiment_coordinator import ExperimentCoordinator
from src.errors import DimensionError, InfeasibleControlError
from src.plantlab import PendulumPlant, example1_model, example1_scheduling, simulate_io
from src.signals import SignalSequence
from src.utils.logger import Logger
from src.utils.monitor import SolveMonitor


def quiet_coordinator(experiment, **overrides):
    config = load_experiment_config(experiment, overrides=overrides)
    logger = Logger(log_level='WARNING', enable_console=False, enable_file=False)
    return ExperimentCoordinator(config, logger=logger)


class TestPlants:
    def test_io_plant_follows_recursion(self):
        model = example1_model()
        zeros = SignalSequence(np.zeros(2))
        init_p = example1_scheduling(2, start=-1)
        scheduling = example1_scheduling(6)
        plant = IoPlant(model, scheduling, zeros, init_p, zeros)
        u = [0.3, -0.2, 0.5, 0.1, 0.0, 0.4]
        measured = []
        for u_k in u:
            y_k, p_k = plant.measure()
            assert plant.measure()[0] is y_k
            np.testing.assert_array_equal(p_k, scheduling[plant.k])
            measured.append(y_k[0])
            plant.actuate(np.array([u_k]))
        # y_k depends on inputs up to u_{k-1}
        expected = simulate_io(model, SignalSequence(u), scheduling, zeros, zeros, init_p)
        np.testing.assert_allclose(measured, expected.values[:, 0], atol=1e-14)
        assert measured[0] == 0.0

    def test_future_scheduling_holds_last_value(self):
        zeros = SignalSequence(np.zeros(2))
        scheduling = example1_scheduling(3)
        plant = IoPlant(example1_model(), scheduling, zeros, example1_scheduling(2), zeros)
        window = plant.future_scheduling(5)
        np.testing.assert_array_equal(window.values[3:], np.tile(scheduling[2], (2, 1)))

    def test_pendulum_measurement(self):
        simulator = PendulumSimulator(PendulumPlant().with_state(-0.9))
        y, p = simulator.measure()
        assert y[0] == -0.9
        assert p[0] == pytest.approx(np.sin(0.9) / 0.9)
        assert simulator.future_scheduling(5) is None
        simulator.actuate(np.array([0.1]))
        assert simulator.state()['theta'] != -0.9

class TestSamplingTime:
    def test_pendulum_uses_configured_sampling_time(self):
        default = quiet_coordinator('example2')
        faster = quiet_coordinator('example2', sampling_time=0.05)
        assert faster.plant.T_s == 0.05
        assert faster.make_plant().T_s == 0.05
        assert faster.recipe()['sampling_time'] == 0.05
        assert default.recipe() != faster.recipe()

    def test_sampling_time_changes_recorded_trajectory(self):
        y_default = quiet_coordinator('example2').dictionary().y.values
        y_faster = quiet_coordinator('example2', sampling_time=0.05).dictionary().y.values
        assert y_default.shape == y_faster.shape
        assert np.max(np.abs(y_default - y_faster)) > 1e-3



class TestTrajectoryLog:
    def test_times_must_increase(self):
        log = TrajectoryLog('dpc', np.eye(1), np.eye(1), Box.symmetric(1.0), Box.symmetric(1.0))
        record = StepRecord(1, 0.0, np.zeros(1), np.zeros(1), np.zeros(1), np.zeros(0), 'optimal', 1.0, 0.0)
        log.append(record)
        with pytest.raises(DimensionError):
            log.append(record)

    def test_metrics(self):
        log = TrajectoryLog('mpc', np.array([[2.0]]), np.array([[0.5]]), Box.symmetric(1.0), Box.symmetric(0.5))
        for k, (y, u) in enumerate([(0.2, 0.5), (0.7, -1.0)]):
            log.append(StepRecord(k + 1, float(k), np.zeros(1), np.array([y]), np.array([u]), np.zeros(0),
                                  'optimal', 0.0, 0.0))
        metrics = tracking_metrics(log)
        assert metrics.rmse == pytest.approx(np.sqrt((0.04 + 0.49) / 2))
        assert metrics.max_violation_y == pytest.approx(0.2)
        assert metrics.max_violation_u == 0.0
        assert metrics.total_cost == pytest.approx(2 * 0.04 + 0.5 * 0.25 + 2 * 0.49 + 0.5 * 1.0)


class TestInfeasibility:
    def test_partial_log_attached(self):
        # the last initial input already drives y_0 out of the output box
        model = example1_model()
        cfg = DpcConfig(
            N_p=5, n_ell=2, Q=[[1.0]], R=[[0.01]],
            u_box=Box.symmetric(5.0), y_box=Box.symmetric(0.01)
        )
        zeros = SignalSequence(np.zeros(2))
        init_u = SignalSequence([0.0, 1.0])
        init_p = example1_scheduling(2, start=-1)
        plant = IoPlant(model, example1_scheduling(20), init_u, init_p, zeros)
        controller = MpcController(model, cfg, init_u, init_p, zeros)
        with pytest.raises(InfeasibleControlError) as info:
            closed_loop(plant, controller, SignalSequence(np.zeros(10)), 10)
        assert info.value.step == 0
        assert isinstance(info.value.log, TrajectoryLog)
        assert len(info.value.log) == 0


class TestZeroReference:
    @pytest.fixture
    def cfg(self):
        return DpcConfig(
            N_p=5, n_ell=2, Q=[[1.0]], R=[[0.01]],
            u_box=Box.symmetric(1.0), y_box=Box.symmetric(1.0)
        )

    def _run(self, controller):
        zeros = SignalSequence(np.zeros(2))
        plant = IoPlant(example1_model(), example1_scheduling(12), zeros, example1_scheduling(2, start=-1), zeros)
        return closed_loop(plant, controller, SignalSequence(np.zeros(12)), 8)

    def test_mpc_stays_at_rest(self, cfg):
        zeros = SignalSequence(np.zeros(2))
        controller = MpcController(example1_model(), cfg, zeros, example1_scheduling(2, start=-1), zeros)
        log = self._run(controller)
        np.testing.assert_allclose(log.column('u'), 0.0, atol=1e-12)
        np.testing.assert_allclose(log.column('y'), 0.0, atol=1e-12)

    def test_dpc_stays_at_rest(self, cfg, example1_blocks):
        zeros = SignalSequence(np.zeros(2))
        controller = DpcController(example1_blocks, cfg, zeros, example1_scheduling(2, start=-1), zeros)
        log = self._run(controller)
        np.testing.assert_allclose(log.column('u'), 0.0, atol=1e-12)
        np.testing.assert_allclose(log.column('y'), 0.0, atol=1e-12)


@pytest.mark.slow
class TestExample1:
    @pytest.fixture(scope='class')
    def logs(self):
        coordinator = quiet_coordinator('example1')
        dictionary = coordinator.dictionary()
        reference = coordinator.config.reference()
        monitor = SolveMonitor()
        logs = {}
        for name in ('dpc', 'mpc'):
            controller = coordinator.make_controller(name, dictionary)
            logs[name] = closed_loop(coordinator.make_plant(), controller, reference, 100, monitor)
        return logs

    def test_controllers_agree(self, logs):
        gaps = compare_logs(logs['dpc'], logs['mpc'])
        assert gaps['steps'] == 100
        assert gaps['max_y_gap'] <= 1e-4
        assert gaps['max_u_gap'] <= 1e-3

    def test_constraints_hold(self, logs):
        for log in logs.values():
            metrics = tracking_metrics(log)
            assert metrics.max_violation_u == 0.0
            assert metrics.max_violation_y <= 1e-6

    def test_all_solves_optimal(self, logs):
        for log in logs.values():
            assert set(log.statuses) == {'optimal'}

    def test_tracks_first_level(self, logs):
        y = logs['mpc'].column('y')[:, 0]
        assert abs(y[19] - 0.5) < 0.05

    def test_log_reload(self, logs, tmp_path):
        path = tmp_path / 'dpc_log.csv'
        write_log(logs['dpc'], path)
        loaded = read_log(path, 'dpc')
        np.testing.assert_array_equal(loaded.column('y'), logs['dpc'].column('y'))
        assert loaded.statuses == logs['dpc'].statuses
        assert np.all(np.isnan(loaded.column('solve_ms')))


@pytest.mark.slow
class TestExample2:
    @pytest.fixture(scope='class')
    def coordinator(self):
        return quiet_coordinator('example2')

    @pytest.fixture(scope='class')
    def logs(self, coordinator):
        dictionary = coordinator.dictionary()
        reference = coordinator.config.reference()
        return {
            name: closed_loop(coordinator.make_plant(), coordinator.make_controller(name, dictionary), reference, 212)
            for name in ('dpc', 'mpc')
        }

    def test_starts_from_initial_angle(self, logs):
        assert logs['dpc'].records[0].y[0] == -0.9
        assert len(logs['dpc']) == 212

    def test_input_bounds(self, logs):
        for log in logs.values():
            assert tracking_metrics(log).max_violation_u == 0.0
            assert np.all(np.abs(log.column('u')) <= 0.25)

    def test_settles_on_every_level(self, logs, coordinator):
        period = coordinator.config.reference_period
        error = logs['dpc'].column('y')[:, 0] - logs['dpc'].column('r')[:, 0]
        for start in range(0, 212, period):
            window = error[start + period - 10:start + period]
            assert np.max(np.abs(window)) < 0.05, start

    def test_cost_close_to_model_based(self, logs):
        dpc_cost = tracking_metrics(logs['dpc']).total_cost
        mpc_cost = tracking_metrics(logs['mpc']).total_cost
        assert dpc_cost <= 1.1 * mpc_cost

