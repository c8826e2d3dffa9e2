from dataclasses import dataclass
from typing import Dict
import numpy as np
from ..errors import DimensionError
from .closed_loop import TrajectoryLog


@dataclass(frozen=True)
class TrackingMetrics:
    rmse: float
    max_violation_u: float
    max_violation_y: float
    total_cost: float

    def as_dict(self) -> Dict[str, float]:
        return {
            'rmse': self.rmse,
            'max_violation_u': self.max_violation_u,
            'max_violation_y': self.max_violation_y,
            'total_cost': self.total_cost
        }


def tracking_metrics(log: TrajectoryLog) -> TrackingMetrics:
    """Tracking error, worst constraint excursions and accumulated stage cost of a run."""
    if not len(log):
        raise DimensionError("cannot score an empty trajectory log")
    y = log.column('y')
    r = log.column('r')
    u = log.column('u')
    e = y - r
    stage = np.einsum('ki,ij,kj->k', e, log.Q, e) + np.einsum('ki,ij,kj->k', u, log.R, u)
    return TrackingMetrics(
        rmse=float(np.sqrt(np.mean(e ** 2))),
        max_violation_u=log.u_box.violation(u),
        max_violation_y=log.y_box.violation(y),
        total_cost=float(np.sum(stage))
    )


def compare_logs(a: TrajectoryLog, b: TrajectoryLog) -> Dict[str, float]:
    """Largest output and input differences over the common steps of two runs."""
    steps = min(len(a), len(b))
    if steps == 0:
        raise DimensionError("cannot compare empty trajectory logs")
    y_gap = np.abs(a.column('y')[:steps] - b.column('y')[:steps])
    u_gap = np.abs(a.column('u')[:steps] - b.column('u')[:steps])
    return {'steps': steps, 'max_y_gap': float(np.max(y_gap)), 'max_u_gap': float(np.max(u_gap))}
