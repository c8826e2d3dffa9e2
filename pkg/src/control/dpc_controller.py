"""Data-driven predictive control over the trajectory coefficients ``g``."""
from typing import Tuple
import numpy as np
from scipy.linalg import null_space
from ..config import Config
from ..errors import DimensionError
from ..predictor import PredictorBlocks, assemble_equality
from ..qpcore import QpProblem
from ..signals import SignalSequence
from .base_controller import BaseController, Window
from .settings import DpcConfig, GSpace


def horizon_weights(cfg: DpcConfig) -> Tuple[np.ndarray, np.ndarray]:
    """Block-diagonal output and input weights over the horizon."""
    eye = np.eye(cfg.N_p)
    return np.kron(eye, cfg.Q), np.kron(eye, cfg.R)


def restrict_to_row_space(Aeq: np.ndarray, beq: np.ndarray, Uf: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Append ``N'g = 0`` for an orthonormal basis ``N`` of the null space of ``[Aeq; Uf]``."""
    N = null_space(np.vstack([Aeq, Uf]), rcond=Config.LSTSQ_RCOND)
    if N.shape[1] == 0:
        return Aeq, beq
    return np.vstack([Aeq, N.T]), np.concatenate([beq, np.zeros(N.shape[1])])


def build_dpc_qp(
    blocks: PredictorBlocks,
    past_u: SignalSequence,
    past_p: SignalSequence,
    past_y: SignalSequence,
    ref_window: SignalSequence,
    p_hat: SignalSequence,
    cfg: DpcConfig
) -> QpProblem:
    """Horizon program in ``g`` with ``u_hat = Uf g`` and ``y_hat = Yf g``.

    Cost ``sum_i |y_hat_i - r_i|_Q^2 + |u_hat_i|_R^2 + reg |g|^2``; the
    equalities pin the past window and the scheduling; boxes bound every
    predicted input and output.

    With ``g_space=row-space`` the equalities also remove the directions of
    ``g`` invisible to both the equality rows and ``Uf``, so ``y_hat`` is the
    minimum-norm prediction for the planned inputs.
    """
    if blocks.L != cfg.N_p or blocks.n_ell != cfg.n_ell:
        raise DimensionError(
            f"blocks built for n_ell={blocks.n_ell}, L={blocks.L}; controller needs "
            f"n_ell={cfg.n_ell}, N_p={cfg.N_p}"
        )
    if len(ref_window) != cfg.N_p or ref_window.n_s != blocks.n_y:
        raise DimensionError(f"reference window must be {cfg.N_p} x {blocks.n_y}")
    if cfg.u_box.size != blocks.n_u or cfg.y_box.size != blocks.n_y:
        raise DimensionError("constraint boxes do not match the dictionary channels")

    Q_bar, R_bar = horizon_weights(cfg)
    r = ref_window.col()
    Yf, Uf = blocks.Yf, blocks.Uf
    H = Yf.T @ Q_bar @ Yf + Uf.T @ R_bar @ Uf + cfg.reg * np.eye(blocks.n_cols)
    P = H + H.T

    Aeq, beq = assemble_equality(blocks, past_u, past_p, past_y, None, p_hat)
    if cfg.g_space is GSpace.ROW_SPACE:
        Aeq, beq = restrict_to_row_space(Aeq, beq, Uf)
    u_lo, u_hi = cfg.u_box.tile(cfg.N_p)
    y_lo, y_hi = cfg.y_box.tile(cfg.N_p)
    return QpProblem(
        P=P,
        q=-2.0 * Yf.T @ Q_bar @ r,
        c0=float(r @ Q_bar @ r),
        Aeq=Aeq,
        beq=beq,
        Ain=np.vstack([Uf, Yf]),
        lb=np.concatenate([u_lo, y_lo]),
        ub=np.concatenate([u_hi, y_hi])
    )


class DpcController(BaseController):
    name = 'dpc'

    def __init__(
        self,
        blocks: PredictorBlocks,
        cfg: DpcConfig,
        init_u: SignalSequence,
        init_p: SignalSequence,
        init_y: SignalSequence
    ):
        super().__init__(cfg, init_u, init_p, init_y)
        if init_p.n_s != blocks.n_p:
            raise DimensionError(f"initial scheduling has {init_p.n_s} channels, dictionary {blocks.n_p}")
        self.blocks = blocks

    def _build_problem(self, past: Window, r_window: SignalSequence, p_hat: SignalSequence) -> QpProblem:
        past_u, past_p, past_y = past
        return build_dpc_qp(self.blocks, past_u, past_p, past_y, r_window, p_hat, self.cfg)

    def _extract_plan(self, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        shape_u = (self.cfg.N_p, self.blocks.n_u)
        shape_y = (self.cfg.N_p, self.blocks.n_y)
        return (self.blocks.Uf @ x).reshape(shape_u), (self.blocks.Yf @ x).reshape(shape_y)
