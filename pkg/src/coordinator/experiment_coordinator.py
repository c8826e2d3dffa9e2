import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union
import numpy as np
import pandas as pd
from ..bench.experiment_config import ExperimentConfig
from ..config import Config
from ..bench.plots import plot_comparison, plot_dictionary, plot_trajectory
from ..bench.report import format_metrics
from ..control import (
    BaseController,
    Box,
    DpcConfig,
    DpcController,
    IoPlant,
    MpcController,
    PendulumSimulator,
    TrackingMetrics,
    TrajectoryLog,
    closed_loop,
    compare_logs,
    tracking_metrics,
    write_log,
    write_states
)
from ..errors import DataFormatError, ExcitationInsufficientError, InfeasibleControlError
from ..plantlab import (
    DataDictionary,
    InputSpec,
    LpvModelSource,
    PendulumPlant,
    PendulumSource,
    dictionary_recipe,
    example1_model,
    example1_scheduling,
    generate_dictionary,
    hold_input,
    make_input,
    pendulum_io_model,
    pendulum_model_scheduling,
    pendulum_scheduling,
    read_dictionary,
    simulate_io,
    write_dictionary
)
from ..plantlab.dictionary import DataSource
from ..plantlab.dictionary_io import split_signal_columns
from ..plantlab.pendulum import SCHEDULING_SET
from ..predictor import build_blocks, predict
from ..qpcore import dump_problem
from ..signals import PeCertificate, SignalSequence, certify_excitation, min_dictionary_length
from ..utils.cache_manager import DictionaryCache
from ..utils.csv_io import read_frame, write_frame
from ..utils.logger import Logger
from ..utils.monitor import SolveMonitor

PathLike = Union[str, Path]
CONTROLLERS = ('dpc', 'mpc')
WINDOW_WARMUP = 20


@dataclass
class RunResult:
    logs: Dict[str, TrajectoryLog]
    metrics: Dict[str, TrackingMetrics]
    comparison: Optional[Dict[str, float]]
    health: Dict[str, Any]
    files: List[Path] = field(default_factory=list)


class ExperimentCoordinator:
    """Coordinates dictionary generation, prediction checks and closed-loop runs of one experiment."""

    def __init__(
        self,
        config: ExperimentConfig,
        logger: Optional[Logger] = None,
        cache: Optional[DictionaryCache] = None,
        monitor: Optional[SolveMonitor] = None
    ):
        self.config = config
        self.logger = logger or Logger(Config.LOG_DIR, Config.LOG_LEVEL, enable_file=Config.LOG_TO_FILE)
        self.cache = cache
        self.monitor = monitor or SolveMonitor(self.logger)
        self.plant = PendulumPlant(T_s=config.sampling_time)

    # systems

    @property
    def is_pendulum(self) -> bool:
        return self.config.plant == 'pendulum'

    @property
    def n_p(self) -> int:
        return 1 if self.is_pendulum else example1_model().n_p

    def source(self) -> DataSource:
        if self.is_pendulum:
            return PendulumSource(self.plant, self.config.substeps)
        return LpvModelSource(example1_model(), example1_scheduling, label='example1')

    def scheduling_set(self) -> Box:
        if self.is_pendulum:
            return Box([SCHEDULING_SET[0]], [SCHEDULING_SET[1]])
        bounds = example1_model().scheduling_set
        return Box(bounds[:, 0], bounds[:, 1])

    def dpc_config(self) -> DpcConfig:
        return self.config.dpc_config(p_set=self.scheduling_set())

    def min_length(self) -> int:
        return min_dictionary_length(1, self.n_p, self.source().n_x, self.config.horizon)

    def validate(self) -> None:
        """Reject dictionary lengths below the excitation bound before any data is generated."""
        required = self.min_length()
        if self.config.n_d < required:
            source = self.source()
            raise ExcitationInsufficientError(
                f"N_d={self.config.n_d} is below the minimum dictionary length {required} "
                f"for horizon {self.config.horizon}",
                order=source.n_x + self.config.horizon,
                rank=None,
                required=(self.n_p + 1) * (source.n_x + self.config.horizon)
            )

    # dictionaries

    def recipe(self) -> Dict[str, Any]:
        c = self.config
        return dictionary_recipe(self.source(), c.input_spec(), c.n_d, c.seed, c.horizon)

    def dictionary(self) -> DataDictionary:
        """Certified dictionary for this configuration, from the cache when available."""
        self.validate()
        recipe = self.recipe()
        if self.cache is not None:
            cached = self.cache.get(recipe)
            if cached is not None and cached.certificate is not None and cached.certificate.passed:
                return cached
        c = self.config
        dictionary = generate_dictionary(self.source(), c.input_spec(), c.n_d, c.seed, c.horizon)
        if self.cache is not None:
            self.cache.set(recipe, dictionary)
        return dictionary

    def generate(self, out_dir: PathLike) -> Tuple[DataDictionary, Path]:
        out_dir = Path(out_dir)
        dictionary = self.dictionary()
        certificate = dictionary.certificate
        self.logger.log_certificate(
            certificate.order, certificate.rank, certificate.required, certificate.passed, certificate.n_samples
        )
        csv_path = out_dir / 'dictionary.csv'
        write_dictionary(dictionary, csv_path)
        plot_dictionary(dictionary, out_dir / 'dictionary.svg', title=f'{self.config.experiment} data dictionary')
        return dictionary, csv_path

    def check_pe(self, dictionary_path: Optional[PathLike] = None) -> Dict[str, PeCertificate]:
        """Certificates at orders ``n_x + N_p`` and ``n_x + n_ell + N_p``."""
        c = self.config
        dictionary = None
        if dictionary_path is not None:
            dictionary = read_dictionary(dictionary_path)
        elif self.cache is not None:
            dictionary = self.cache.get(self.recipe())
        if dictionary is None:
            dictionary = generate_dictionary(
                self.source(), c.input_spec(), c.n_d, c.seed, c.horizon, strict=False
            )
        orders = {
            'n_x + N_p': dictionary.n_x + c.horizon,
            'n_x + n_ell + N_p': dictionary.n_x + c.n_ell + c.horizon
        }
        certificates = {label: certify_excitation(dictionary.u_aux, order) for label, order in orders.items()}
        for certificate in certificates.values():
            self.logger.log_certificate(
                certificate.order, certificate.rank, certificate.required, certificate.passed, certificate.n_samples
            )
        return certificates

    # data-driven simulation

    def _random_window(self) -> Tuple[SignalSequence, SignalSequence, SignalSequence]:
        length = WINDOW_WARMUP + self.config.n_ell + self.config.horizon
        spec = InputSpec('uniform', self.config.input_amplitude)
        u, p, y = self.source().record(make_input(spec, length, self.config.seed + 1))
        start = WINDOW_WARMUP
        window = self.config.n_ell + self.config.horizon
        return u.window(start, window), p.window(start, window), y.window(start, window)

    def _file_window(self, path: PathLike) -> Tuple[SignalSequence, SignalSequence, SignalSequence]:
        path = str(path)
        u, p, y = split_signal_columns(read_frame(path), path)
        expected = self.config.n_ell + self.config.horizon
        if len(u) != expected:
            raise DataFormatError(path, len(u) + 1, '*', f"expected {expected} window rows, got {len(u)}")
        return u, p, y

    def simulate(
        self,
        out_dir: PathLike,
        windows_path: Optional[PathLike] = None,
        dictionary_path: Optional[PathLike] = None
    ) -> Tuple[pd.DataFrame, float]:
        """Predict the future outputs of one window and compare with the true system.

        Returns the prediction table and the largest absolute error.
        """
        n_ell, L = self.config.n_ell, self.config.horizon
        dictionary = read_dictionary(dictionary_path) if dictionary_path else self.dictionary()
        blocks = build_blocks(dictionary, n_ell, L)
        u, p, y = self._file_window(windows_path) if windows_path else self._random_window()
        past = (u.window(0, n_ell), p.window(0, n_ell), y.window(0, n_ell))
        fut_u, fut_p = u.window(n_ell, L), p.window(n_ell, L)

        solution = predict(blocks, past[0], past[1], past[2], fut_u, fut_p)
        y_hat = solution.predicted_y.values
        if self.is_pendulum:
            y_oracle = y.window(n_ell, L).values
        else:
            y_oracle = simulate_io(example1_model(), fut_u, fut_p, past[0], past[2], past[1]).values
        error = np.abs(y_hat - y_oracle)

        frame = pd.DataFrame({'k': np.arange(1, L + 1)})
        for j in range(fut_u.n_s):
            frame[f'u_{j + 1}'] = fut_u.values[:, j]
        for j in range(fut_p.n_s):
            frame[f'p_{j + 1}'] = fut_p.values[:, j]
        for j in range(y_hat.shape[1]):
            suffix = '' if y_hat.shape[1] == 1 else f'_{j + 1}'
            frame[f'y_hat{suffix}'] = y_hat[:, j]
            frame[f'y_oracle{suffix}'] = y_oracle[:, j]
            frame[f'abs_error{suffix}'] = error[:, j]
        write_frame(frame, Path(out_dir) / 'prediction.csv')
        max_error = float(np.max(error))
        self.logger.info("prediction_checked", horizon=L, residual=solution.residual, max_error=max_error)
        return frame, max_error

    # closed loop

    def initial_records(self) -> Tuple[SignalSequence, SignalSequence, SignalSequence]:
        n_ell = self.config.n_ell
        if self.is_pendulum:
            theta0 = self.config.theta0
            return (
                SignalSequence(np.full(n_ell, hold_input(self.plant, theta0))),
                SignalSequence(np.full(n_ell, pendulum_scheduling(theta0))),
                SignalSequence(np.full(n_ell, theta0))
            )
        return (
            SignalSequence(np.zeros(n_ell)),
            example1_scheduling(n_ell, start=1 - n_ell),
            SignalSequence(np.zeros(n_ell))
        )

    def make_plant(self):
        if self.is_pendulum:
            return PendulumSimulator(self.plant.with_state(self.config.theta0), self.config.substeps)
        init_u, init_p, init_y = self.initial_records()
        scheduling = example1_scheduling(self.config.steps + self.config.horizon, start=1)
        return IoPlant(example1_model(), scheduling, init_u, init_p, init_y, T_s=self.config.sampling_time)

    def make_controller(self, name: str, dictionary: Optional[DataDictionary] = None) -> BaseController:
        cfg = self.dpc_config()
        init_u, init_p, init_y = self.initial_records()
        if name == 'dpc':
            dictionary = dictionary if dictionary is not None else self.dictionary()
            blocks = build_blocks(dictionary, cfg.n_ell, cfg.N_p)
            return DpcController(blocks, cfg, init_u, init_p, init_y)
        if self.is_pendulum:
            return MpcController(
                pendulum_io_model(self.plant), cfg, init_u, init_p, init_y,
                scheduling_lift=pendulum_model_scheduling
            )
        return MpcController(example1_model(), cfg, init_u, init_p, init_y)

    def run(
        self,
        out_dir: PathLike,
        controllers: Tuple[str, ...] = CONTROLLERS,
        record_timing: bool = False,
        debug_qp: bool = False,
        dictionary_path: Optional[PathLike] = None
    ) -> RunResult:
        """Closed loops of the selected controllers on identical plants and references.

        Raises:
            InfeasibleControlError: after the partial log of the failing
                controller has been written.
        """
        out_dir = Path(out_dir)
        dictionary = None
        if 'dpc' in controllers:
            dictionary = read_dictionary(dictionary_path) if dictionary_path else self.dictionary()
        reference = self.config.reference()
        logs: Dict[str, TrajectoryLog] = {}
        files: List[Path] = []

        for name in controllers:
            controller = self.make_controller(name, dictionary)
            started = time.perf_counter()
            try:
                log = closed_loop(self.make_plant(), controller, reference, self.config.steps, self.monitor)
            except InfeasibleControlError as error:
                if error.log is not None:
                    write_log(error.log, out_dir / f'{name}_log.csv', record_timing)
                if debug_qp and controller.last_problem is not None:
                    dump_problem(controller.last_problem, out_dir / f'{name}_qp_step{error.step}')
                raise
            self.logger.log_performance(
                'closed_loop', time.perf_counter() - started, {'controller': name, 'steps': len(log)}
            )
            if debug_qp and controller.last_problem is not None:
                files.append(dump_problem(controller.last_problem, out_dir / f'{name}_qp_last'))
            logs[name] = log
            files.append(out_dir / f'{name}_log.csv')
            write_log(log, files[-1], record_timing)
            if self.is_pendulum:
                files.append(out_dir / f'{name}_states.csv')
                write_states(log, files[-1])
            files.append(plot_trajectory(log, out_dir / f'{name}.svg', f'{self.config.experiment}: {name}'))

        comparison = None
        if len(logs) == 2:
            comparison = compare_logs(*logs.values())
            files.append(plot_comparison(logs, out_dir / 'comparison.svg', self.config.experiment))

        metrics = {name: tracking_metrics(log) for name, log in logs.items()}
        health = self.monitor.get_health_status()
        self.logger.log_system_health({'status': health['status'], 'alerts': len(health['alerts']), **health['metrics']})
        report = format_metrics(self.config.experiment, self.config.seed, metrics, comparison, health)
        files.append(out_dir / 'metrics.txt')
        files[-1].write_text(report, encoding='utf-8')
        return RunResult(logs, metrics, comparison, health, files)
