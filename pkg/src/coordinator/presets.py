"""Default settings of the two benchmark experiments.

Keys are the fields of ``ExperimentConfig``; a config file or CLI flags
override individual entries.
"""
from typing import Any, Dict
from ..config import Config
from ..errors import ConfigError

EXAMPLE1: Dict[str, Any] = {
    'experiment': 'example1',
    'plant': 'lpv-io',
    'seed': Config.DEFAULT_SEED,
    'n_d': 48,
    'input_kind': 'uniform',
    'input_amplitude': 1.0,
    'input_harmonics': 8,
    'horizon': 5,
    'n_ell': 2,
    'q': 10.0,
    'r': 0.001,
    'u_min': -5.0,
    'u_max': 5.0,
    'y_min': -1.0,
    'y_max': 1.0,
    'sched_policy': 'known-future',
    'g_space': 'free',
    'reg': 0.0,
    'qp_tol': Config.QP_TOL,
    'qp_max_iter': Config.QP_MAX_ITER,
    'reference_levels': [0.5, -0.5, 0.3, -0.3, 0.0],
    'reference_period': 20,
    'steps': 100,
    'theta0': 0.0,
    'substeps': Config.PLANT_SUBSTEPS,
    'sampling_time': 1.0,
    'output_dir': None
}

# disc from theta(0) = -0.9 rad, 75 ms sampling, 4 s per reference level
EXAMPLE2: Dict[str, Any] = {
    **EXAMPLE1,
    'experiment': 'example2',
    'plant': 'pendulum',
    'n_d': 34,
    'input_kind': 'multisine',
    'input_amplitude': 0.25,
    'q': 0.1,
    'r': 0.05,
    'u_min': -0.25,
    'u_max': 0.25,
    'sched_policy': 'frozen',
    'g_space': 'row-space',
    'reg': 1e-5,
    'reference_levels': [0.5, -0.5, 0.75, 0.0],
    'reference_period': 53,
    'steps': 212,
    'theta0': -0.9,
    'sampling_time': 0.075
}

CUSTOM: Dict[str, Any] = {**EXAMPLE1, 'experiment': 'custom'}

PRESETS: Dict[str, Dict[str, Any]] = {
    'example1': EXAMPLE1,
    'example2': EXAMPLE2,
    'custom': CUSTOM
}


def get_preset(experiment: str) -> Dict[str, Any]:
    try:
        preset = PRESETS[experiment]
    except KeyError as e:
        raise ConfigError(f"unknown experiment '{experiment}', expected one of {sorted(PRESETS)}") from e
    return {key: list(value) if isinstance(value, list) else value for key, value in preset.items()}
