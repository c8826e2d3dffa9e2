"""Command-line front end: ``generate``, ``simulate``, ``run`` and ``check-pe``."""
import argparse
import sys
import time
from pathlib import Path
from typing import List, Optional
from ..config import Config
from ..coordinator.experiment_coordinator import ExperimentCoordinator
from ..errors import (
    ConfigError,
    DataFormatError,
    DimensionError,
    ExcitationInsufficientError,
    InconsistentTrajectoryError,
    InfeasibleControlError,
    InvalidDepthError,
    UncertifiedDictionaryError
)
from ..utils.cache_manager import DictionaryCache
from ..utils.logger import Logger
from .experiment_config import ExperimentConfig, load_experiment_config
from .report import format_certificates

EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_CONFIG = 2
EXIT_EXCITATION = 3
EXIT_INCONSISTENT = 4
EXIT_INFEASIBLE = 5

EXIT_CODES = (
    (ConfigError, EXIT_CONFIG),
    (DataFormatError, EXIT_CONFIG),
    (InvalidDepthError, EXIT_CONFIG),
    (DimensionError, EXIT_CONFIG),
    (ExcitationInsufficientError, EXIT_EXCITATION),
    (UncertifiedDictionaryError, EXIT_EXCITATION),
    (InconsistentTrajectoryError, EXIT_INCONSISTENT),
    (InfeasibleControlError, EXIT_INFEASIBLE),
)

CONTROLLER_CHOICES = {
    'dpc': ('dpc',),
    'dpc-only': ('dpc',),
    'mpc': ('mpc',),
    'both': ('dpc', 'mpc'),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--experiment', choices=['example1', 'example2', 'custom'],
                        help='experiment preset (default: example1)')
    common.add_argument('--seed', type=int, help='excitation seed')
    common.add_argument('--nd', type=int, help='dictionary length N_d')
    common.add_argument('--np', type=int, dest='horizon', help='prediction horizon N_p')
    common.add_argument('--nell', type=int, help='past window length n_ell')
    common.add_argument('--config', type=Path, help='INI experiment file')
    common.add_argument('--out', type=Path, help='output directory (default: $DPC_OUTPUT_ROOT/<experiment>)')
    common.add_argument('--dictionary', type=Path, help='dictionary CSV to use instead of generating one')
    common.add_argument('--no-cache', action='store_true', help='do not read or write the dictionary cache')
    common.add_argument('--log-level', default=Config.LOG_LEVEL, help='log level of stderr events')

    parser = argparse.ArgumentParser(
        prog='dpc-bench',
        description='Data-driven and model-based LPV predictive control experiments.'
    )
    verbs = parser.add_subparsers(dest='verb', required=True)

    verbs.add_parser('generate', parents=[common], help='record and certify a data dictionary')

    simulate = verbs.add_parser('simulate', parents=[common], help='data-driven prediction of one window')
    simulate.add_argument('--windows', type=Path,
                          help='window CSV in dictionary format: n_ell past rows then N_p future rows')

    run = verbs.add_parser('run', parents=[common], help='closed-loop DPC and MPC runs')
    run.add_argument('--controller', choices=sorted(CONTROLLER_CHOICES), default='both')
    run.add_argument('--steps', type=int, help='closed-loop steps')
    run.add_argument('--record-timing', action='store_true',
                     help='write wall-clock solve times into the trajectory CSV')
    run.add_argument('--debug-qp', action='store_true', help='archive the last QP of each controller')

    verbs.add_parser('check-pe', parents=[common], help='persistency-of-excitation report')
    return parser


def resolve_config(args: argparse.Namespace) -> ExperimentConfig:
    overrides = {
        'seed': args.seed,
        'n_d': args.nd,
        'horizon': args.horizon,
        'n_ell': args.nell,
        'steps': getattr(args, 'steps', None),
        'output_dir': str(args.out) if args.out is not None else None,
    }
    return load_experiment_config(args.experiment, args.config, overrides)


def _generate(coordinator: ExperimentCoordinator, out_dir: Path) -> int:
    dictionary, csv_path = coordinator.generate(out_dir)
    print(f"dictionary: {csv_path} ({dictionary.n_d} samples)")
    print(f"certificate: {dictionary.certificate.summary()}")
    return EXIT_OK


def _simulate(coordinator: ExperimentCoordinator, args: argparse.Namespace, out_dir: Path) -> int:
    _, max_error = coordinator.simulate(out_dir, args.windows, args.dictionary)
    print(f"prediction: {out_dir / 'prediction.csv'}")
    print(f"max |y_hat - y_oracle|: {max_error:.3e}")
    return EXIT_OK


def _run(coordinator: ExperimentCoordinator, args: argparse.Namespace, out_dir: Path) -> int:
    result = coordinator.run(
        out_dir,
        controllers=CONTROLLER_CHOICES[args.controller],
        record_timing=args.record_timing,
        debug_qp=args.debug_qp,
        dictionary_path=args.dictionary
    )
    print((out_dir / 'metrics.txt').read_text(encoding='utf-8'), end='')
    for path in result.files:
        print(f"wrote {path}")
    return EXIT_OK


def _check_pe(coordinator: ExperimentCoordinator, args: argparse.Namespace) -> int:
    certificates = coordinator.check_pe(args.dictionary)
    print(format_certificates(certificates, coordinator.min_length()), end='')
    first = next(iter(certificates.values()))
    return EXIT_OK if first.passed else EXIT_EXCITATION


def exit_code_for(error: Exception) -> int:
    for error_type, code in EXIT_CODES:
        if isinstance(error, error_type):
            return code
    return EXIT_UNEXPECTED


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logger = Logger(Config.LOG_DIR, args.log_level, enable_file=Config.LOG_TO_FILE)
    logger.rotate_logs()
    started = time.perf_counter()
    experiment, seed = args.experiment or 'example1', args.seed
    try:
        config = resolve_config(args)
        experiment, seed = config.experiment, config.seed
        cache = None if args.no_cache else DictionaryCache(Config.CACHE_DIR, logger)
        coordinator = ExperimentCoordinator(config, logger, cache)
        out_dir = config.output_path(Config.OUTPUT_ROOT)
        if args.verb == 'generate':
            code = _generate(coordinator, out_dir)
        elif args.verb == 'simulate':
            code = _simulate(coordinator, args, out_dir)
        elif args.verb == 'run':
            code = _run(coordinator, args, out_dir)
        else:
            code = _check_pe(coordinator, args)
    except Exception as e:
        code = exit_code_for(e)
        if code == EXIT_UNEXPECTED:
            logger.log_error(e, {'verb': args.verb, 'experiment': experiment})
        print(f"error: {e}", file=sys.stderr)
        logger.log_experiment(args.verb, experiment, seed, False, time.perf_counter() - started, str(e))
        return code
    logger.log_experiment(args.verb, experiment, seed, code == EXIT_OK, time.perf_counter() - started)
    return code
