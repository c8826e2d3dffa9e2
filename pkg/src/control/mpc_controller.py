"""Model-based baseline: condensed prediction by unrolling the IO recursion."""
from typing import Callable, Optional, Tuple
import numpy as np
from ..errors import DimensionError
from ..plantlab import LpvIoModel, simulate_io
from ..qpcore import QpProblem
from ..signals import SignalSequence
from .base_controller import BaseController, Window
from .dpc_controller import horizon_weights
from .settings import DpcConfig

SchedulingLift = Callable[[SignalSequence], SignalSequence]


def prediction_maps(
    model: LpvIoModel,
    past_u: SignalSequence,
    past_p: SignalSequence,
    past_y: SignalSequence,
    p_hat: SignalSequence
) -> Tuple[np.ndarray, np.ndarray]:
    """Affine maps with ``col(y_hat) = Phi + Gamma col(u_hat)`` for scheduling ``p_hat``.

    ``Phi`` is the free response of the past window, column ``j`` of ``Gamma``
    the response to a unit pulse in input entry ``j``.
    """
    N = len(p_hat)
    n_u, n_y = model.n_u, model.n_y
    zeros_u = SignalSequence(np.zeros((N, n_u)))
    Phi = simulate_io(model, zeros_u, p_hat, past_u, past_y, past_p).col()

    rest_u = SignalSequence(np.zeros((len(past_u), n_u)))
    rest_y = SignalSequence(np.zeros((len(past_y), n_y)))
    Gamma = np.zeros((N * n_y, N * n_u))
    for j in range(N * n_u):
        pulse = np.zeros(N * n_u)
        pulse[j] = 1.0
        response = simulate_io(
            model, SignalSequence(pulse.reshape(N, n_u)), p_hat, rest_u, rest_y, past_p
        )
        Gamma[:, j] = response.col()
    return Phi, Gamma


def build_mpc_qp(
    model: LpvIoModel,
    past_u: SignalSequence,
    past_p: SignalSequence,
    past_y: SignalSequence,
    ref_window: SignalSequence,
    p_hat: SignalSequence,
    cfg: DpcConfig
) -> Tuple[QpProblem, np.ndarray, np.ndarray]:
    """Condensed program in ``u_hat``; also returns ``(Phi, Gamma)``."""
    if len(ref_window) != cfg.N_p or ref_window.n_s != model.n_y or len(p_hat) != cfg.N_p:
        raise DimensionError(f"reference and scheduling windows must have {cfg.N_p} samples")
    if cfg.u_box.size != model.n_u or cfg.y_box.size != model.n_y:
        raise DimensionError("constraint boxes do not match the model channels")
    Phi, Gamma = prediction_maps(model, past_u, past_p, past_y, p_hat)
    Q_bar, R_bar = horizon_weights(cfg)
    e = Phi - ref_window.col()
    H = Gamma.T @ Q_bar @ Gamma + R_bar
    u_lo, u_hi = cfg.u_box.tile(cfg.N_p)
    y_lo, y_hi = cfg.y_box.tile(cfg.N_p)
    problem = QpProblem(
        P=H + H.T,
        q=2.0 * Gamma.T @ Q_bar @ e,
        c0=float(e @ Q_bar @ e),
        Ain=np.vstack([np.eye(cfg.N_p * model.n_u), Gamma]),
        lb=np.concatenate([u_lo, y_lo - Phi]),
        ub=np.concatenate([u_hi, y_hi - Phi])
    )
    return problem, Phi, Gamma


class MpcController(BaseController):
    """Receding-horizon control with the exact LPV-IO model as predictor.

    ``scheduling_lift`` maps the measured scheduling vector to the model's
    scheduling vector (identity by default).
    """

    name = 'mpc'

    def __init__(
        self,
        model: LpvIoModel,
        cfg: DpcConfig,
        init_u: SignalSequence,
        init_p: SignalSequence,
        init_y: SignalSequence,
        scheduling_lift: Optional[SchedulingLift] = None
    ):
        super().__init__(cfg, init_u, init_p, init_y)
        if cfg.n_ell < model.lag:
            raise DimensionError(f"past window n_ell={cfg.n_ell} shorter than model lag {model.lag}")
        self.model = model
        self.scheduling_lift = scheduling_lift
        self._maps: Optional[Tuple[np.ndarray, np.ndarray]] = None

    def _lift(self, p: SignalSequence) -> SignalSequence:
        return p if self.scheduling_lift is None else self.scheduling_lift(p)

    def _build_problem(self, past: Window, r_window: SignalSequence, p_hat: SignalSequence) -> QpProblem:
        past_u, past_p, past_y = past
        problem, Phi, Gamma = build_mpc_qp(
            self.model, past_u, self._lift(past_p), past_y, r_window, self._lift(p_hat), self.cfg
        )
        self._maps = (Phi, Gamma)
        return problem

    def _extract_plan(self, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        Phi, Gamma = self._maps
        y_hat = Phi + Gamma @ x
        return x.reshape(self.cfg.N_p, self.model.n_u), y_hat.reshape(self.cfg.N_p, self.model.n_y)
