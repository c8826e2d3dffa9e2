from dataclasses import dataclass
from typing import Optional
import numpy as np
from scipy.linalg import lstsq
from ..config import Config
from ..errors import InconsistentTrajectoryError
from ..signals import SignalSequence
from .blocks import PredictorBlocks, assemble_equality


@dataclass(frozen=True, eq=False)
class PredictorSolution:
    g: np.ndarray
    residual: float
    predicted_y: Optional[SignalSequence] = None


def minimum_norm_solve(A: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Minimum-norm least-squares solution via complete orthogonal factorization."""
    x, _, _, _ = lstsq(A, b, cond=Config.LSTSQ_RCOND, lapack_driver='gelsy')
    return x


def solve_g(
    A: np.ndarray,
    b: np.ndarray,
    reg: float = 0.0,
    tol: Optional[float] = None
) -> PredictorSolution:
    """Solve ``A g = b`` for the minimum-norm ``g``.

    With ``reg > 0`` minimizes ``|A g - b|^2 + reg |g|^2`` instead.

    Raises:
        InconsistentTrajectoryError: if ``|A g - b| > tol``; the default
            tolerance is ``CONSISTENCY_TOL * (1 + |b|)``.
    """
    if reg > 0.0:
        n = A.shape[1]
        A_aug = np.vstack([A, np.sqrt(reg) * np.eye(n)])
        b_aug = np.concatenate([b, np.zeros(n)])
        g = minimum_norm_solve(A_aug, b_aug)
    else:
        g = minimum_norm_solve(A, b)
    residual = float(np.linalg.norm(A @ g - b))
    if tol is None:
        tol = Config.CONSISTENCY_TOL * (1.0 + float(np.linalg.norm(b)))
    if residual > tol:
        raise InconsistentTrajectoryError(residual, tol)
    return PredictorSolution(g=g, residual=residual)


def predict(
    blocks: PredictorBlocks,
    past_u: SignalSequence,
    past_p: SignalSequence,
    past_y: SignalSequence,
    fut_u: SignalSequence,
    fut_p: SignalSequence,
    reg: float = 0.0
) -> PredictorSolution:
    """Data-driven prediction of the ``L`` future outputs, ``y_hat = Yf g``."""
    A, b = assemble_equality(blocks, past_u, past_p, past_y, fut_u, fut_p)
    solution = solve_g(A, b, reg)
    y_hat = (blocks.Yf @ solution.g).reshape(blocks.L, blocks.n_y)
    return PredictorSolution(g=solution.g, residual=solution.residual, predicted_y=SignalSequence(y_hat))


def dd_simulate(
    blocks: PredictorBlocks,
    past_u: SignalSequence,
    past_p: SignalSequence,
    past_y: SignalSequence,
    fut_u: SignalSequence,
    fut_p: SignalSequence,
    reg: float = 0.0
) -> SignalSequence:
    return predict(blocks, past_u, past_p, past_y, fut_u, fut_p, reg).predicted_y
