from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence, Union
import numpy as np
from ..config import Config
from ..errors import ConfigError

PSD_TOL = 1e-12


class SchedulingPolicy(str, Enum):
    KNOWN_FUTURE = 'known-future'
    FROZEN = 'frozen'


class GSpace(str, Enum):
    """Admissible trajectory coefficients: any solution of the equalities, or
    only those in the row space of the past, scheduling and future-input rows."""
    FREE = 'free'
    ROW_SPACE = 'row-space'


@dataclass(frozen=True, eq=False)
class Box:
    """Per-channel interval set ``lower <= v <= upper``; bounds may be infinite."""
    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lower = np.array(self.lower, dtype=float).reshape(-1)
        upper = np.array(self.upper, dtype=float).reshape(-1)
        if lower.shape != upper.shape:
            raise ConfigError(f"box bounds disagree in size: {lower.size} vs {upper.size}")
        if np.any(np.isnan(lower)) or np.any(np.isnan(upper)) or np.any(lower > upper):
            raise ConfigError(f"empty box [{lower.tolist()}, {upper.tolist()}]")
        lower.setflags(write=False)
        upper.setflags(write=False)
        object.__setattr__(self, 'lower', lower)
        object.__setattr__(self, 'upper', upper)

    @classmethod
    def symmetric(cls, bound: Union[float, Sequence[float]], size: int = 1) -> "Box":
        bound = np.broadcast_to(np.asarray(bound, dtype=float), (size,))
        return cls(-bound, bound)

    @property
    def size(self) -> int:
        return self.lower.size

    def tile(self, steps: int):
        """Bounds repeated for ``steps`` consecutive samples."""
        return np.tile(self.lower, steps), np.tile(self.upper, steps)

    def violation(self, values: np.ndarray) -> float:
        """Largest excursion of ``values`` (rows are samples) outside the box; 0 if inside."""
        values = np.asarray(values, dtype=float).reshape(-1, self.size)
        excess = np.maximum(values - self.upper, 0.0) + np.maximum(self.lower - values, 0.0)
        return float(np.max(excess, initial=0.0))

    def clip(self, values: np.ndarray) -> np.ndarray:
        return np.clip(values, self.lower, self.upper)


def _weight(name: str, value) -> np.ndarray:
    matrix = np.atleast_2d(np.asarray(value, dtype=float))
    if matrix.shape[0] != matrix.shape[1]:
        raise ConfigError(f"{name} must be square, got shape {matrix.shape}")
    if not np.allclose(matrix, matrix.T, rtol=0.0, atol=PSD_TOL * max(1.0, np.max(np.abs(matrix)))):
        raise ConfigError(f"{name} must be symmetric")
    if np.min(np.linalg.eigvalsh(matrix)) < -PSD_TOL * max(1.0, np.max(np.abs(matrix))):
        raise ConfigError(f"{name} must be positive semidefinite")
    matrix.setflags(write=False)
    return matrix


@dataclass(frozen=True, eq=False)
class DpcConfig:
    """Receding-horizon problem settings shared by the data-driven and model-based controllers.

    The control horizon equals the prediction horizon ``N_p``.
    """
    N_p: int
    n_ell: int
    Q: np.ndarray
    R: np.ndarray
    u_box: Box
    y_box: Box
    p_set: Optional[Box] = None
    sched_policy: SchedulingPolicy = SchedulingPolicy.KNOWN_FUTURE
    g_space: GSpace = GSpace.FREE
    reg: float = 0.0
    tol: float = Config.QP_TOL
    max_iter: int = Config.QP_MAX_ITER

    def __post_init__(self):
        if int(self.N_p) < 1 or int(self.n_ell) < 1:
            raise ConfigError(f"N_p and n_ell must be at least 1, got {self.N_p}, {self.n_ell}")
        Q = _weight('Q', self.Q)
        R = _weight('R', self.R)
        if Q.shape[0] != self.y_box.size:
            raise ConfigError(f"Q is {Q.shape[0]}x{Q.shape[0]} but the output box has {self.y_box.size} channels")
        if R.shape[0] != self.u_box.size:
            raise ConfigError(f"R is {R.shape[0]}x{R.shape[0]} but the input box has {self.u_box.size} channels")
        if self.reg < 0.0 or self.tol <= 0.0 or self.max_iter < 1:
            raise ConfigError("reg must be >= 0, tol > 0 and max_iter >= 1")
        object.__setattr__(self, 'N_p', int(self.N_p))
        object.__setattr__(self, 'n_ell', int(self.n_ell))
        object.__setattr__(self, 'Q', Q)
        object.__setattr__(self, 'R', R)
        object.__setattr__(self, 'sched_policy', SchedulingPolicy(self.sched_policy))
        object.__setattr__(self, 'g_space', GSpace(self.g_space))

    @property
    def N_c(self) -> int:
        return self.N_p

    @property
    def n_u(self) -> int:
        return self.R.shape[0]

    @property
    def n_y(self) -> int:
        return self.Q.shape[0]

    def stage_cost(self, y: np.ndarray, r: np.ndarray, u: np.ndarray) -> float:
        e = np.asarray(y, dtype=float) - np.asarray(r, dtype=float)
        u = np.asarray(u, dtype=float)
        return float(e @ self.Q @ e + u @ self.R @ u)
