from .settings import Box, DpcConfig, GSpace, SchedulingPolicy
from .scheduling import resolve_schedule
from .base_controller import BaseController, ControlAction
from .dpc_controller import DpcController, build_dpc_qp, restrict_to_row_space
from .mpc_controller import MpcController, build_mpc_qp, prediction_maps
from .closed_loop import (
    IoPlant,
    PendulumSimulator,
    StepRecord,
    TrajectoryLog,
    closed_loop,
    open_loop_check
)
from .metrics import TrackingMetrics, tracking_metrics, compare_logs
from .log_io import read_log, write_log, write_states

__all__ = [
    'Box',
    'DpcConfig',
    'GSpace',
    'SchedulingPolicy',
    'resolve_schedule',
    'BaseController',
    'ControlAction',
    'DpcController',
    'build_dpc_qp',
    'restrict_to_row_space',
    'MpcController',
    'build_mpc_qp',
    'prediction_maps',
    'IoPlant',
    'PendulumSimulator',
    'StepRecord',
    'TrajectoryLog',
    'closed_loop',
    'open_loop_check',
    'TrackingMetrics',
    'tracking_metrics',
    'compare_logs',
    'read_log',
    'write_log',
    'write_states'
]
