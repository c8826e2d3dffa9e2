"""Trajectory log CSV: ``k,t,r,y,u,p_1..p_np,status,solve_ms,objective``.

Multi-channel references, outputs and inputs are numbered ``r_1, r_2, ...``.
"""
from typing import List, Optional
import numpy as np
import pandas as pd
from ..errors import DataFormatError
from ..utils.csv_io import PathLike, read_frame, write_frame
from .closed_loop import StepRecord, TrajectoryLog
from .settings import Box

STATE_COLUMNS = ['k', 't', 'theta', 'omega']


def _names(prefix: str, count: int, numbered: bool = False) -> List[str]:
    if count == 1 and not numbered:
        return [prefix]
    return [f"{prefix}_{i}" for i in range(1, count + 1)]


def log_columns(n_y: int, n_u: int, n_p: int) -> List[str]:
    return (
        ['k', 't']
        + _names('r', n_y)
        + _names('y', n_y)
        + _names('u', n_u)
        + _names('p', n_p, numbered=True)
        + ['status', 'solve_ms', 'objective']
    )


def log_frame(log: TrajectoryLog, record_timing: bool = False) -> pd.DataFrame:
    """Tabulate ``log``; ``solve_ms`` is ``nan`` unless ``record_timing``."""
    n_y, n_u = log.Q.shape[0], log.R.shape[0]
    n_p = log.records[0].p.size if log.records else 0
    rows = []
    for record in log.records:
        rows.append(
            [record.k, record.t]
            + list(record.r) + list(record.y) + list(record.u) + list(record.p)
            + [record.status, record.solve_ms if record_timing else np.nan, record.objective]
        )
    frame = pd.DataFrame(rows, columns=log_columns(n_y, n_u, n_p))
    frame['k'] = frame['k'].astype(int)
    return frame


def write_log(log: TrajectoryLog, path: PathLike, record_timing: bool = False) -> None:
    write_frame(log_frame(log, record_timing), path)


def read_log(
    path: PathLike,
    controller: str = '',
    Q: Optional[np.ndarray] = None,
    R: Optional[np.ndarray] = None,
    u_box: Optional[Box] = None,
    y_box: Optional[Box] = None
) -> TrajectoryLog:
    """Load a trajectory CSV; weights default to identity and boxes to unbounded."""
    path = str(path)
    frame = read_frame(path, text_columns=['status'])
    header = list(frame.columns)
    n_y = sum(1 for c in header if c == 'y' or c.startswith('y_'))
    n_u = sum(1 for c in header if c == 'u' or c.startswith('u_'))
    n_p = sum(1 for c in header if c.startswith('p_'))
    if header != log_columns(n_y, n_u, n_p):
        raise DataFormatError(path, 1, '*', f"unexpected header {header}")

    Q = np.eye(n_y) if Q is None else np.atleast_2d(Q)
    R = np.eye(n_u) if R is None else np.atleast_2d(R)
    u_box = u_box or Box(np.full(n_u, -np.inf), np.full(n_u, np.inf))
    y_box = y_box or Box(np.full(n_y, -np.inf), np.full(n_y, np.inf))
    log = TrajectoryLog(controller, Q, R, u_box, y_box)

    r_cols, y_cols = _names('r', n_y), _names('y', n_y)
    u_cols, p_cols = _names('u', n_u), _names('p', n_p, numbered=True)
    for row in frame.itertuples(index=False):
        values = row._asdict()
        log.append(StepRecord(
            k=int(values['k']),
            t=float(values['t']),
            r=np.array([values[c] for c in r_cols]),
            y=np.array([values[c] for c in y_cols]),
            u=np.array([values[c] for c in u_cols]),
            p=np.array([values[c] for c in p_cols], dtype=float),
            status=values['status'],
            solve_ms=float(values['solve_ms']),
            objective=float(values['objective'])
        ))
    return log


def write_states(log: TrajectoryLog, path: PathLike) -> None:
    """Plant state per step (``theta``, ``omega``) for runs on the disc simulator."""
    rows = [
        [record.k, record.t, record.state.get('theta', np.nan), record.state.get('omega', np.nan)]
        for record in log.records
    ]
    frame = pd.DataFrame(rows, columns=STATE_COLUMNS)
    frame['k'] = frame['k'].astype(int)
    write_frame(frame, path)
