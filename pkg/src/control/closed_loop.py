"""Plant adapters and the receding-horizon loop."""
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Protocol, Tuple
import numpy as np
import structlog
from ..config import Config
from ..errors import DimensionError, DpcError, InitializationError
from ..plantlab import LpvIoModel, PendulumPlant, pendulum_scheduling, simulate_io
from ..signals import SignalSequence
from ..utils.monitor import SolveMonitor
from .base_controller import BaseController
from .settings import Box

logger = structlog.get_logger(__name__)


class ClosedLoopPlant(Protocol):
    T_s: float

    def measure(self) -> Tuple[np.ndarray, np.ndarray]: ...

    def future_scheduling(self, length: int) -> Optional[SignalSequence]: ...

    def actuate(self, u: np.ndarray) -> None: ...

    def state(self) -> Dict[str, float]: ...


def _held_window(seq: SignalSequence, start: int, length: int) -> SignalSequence:
    """``length`` samples from ``start``; past the end the last sample is held."""
    index = np.minimum(np.arange(start, start + length), len(seq) - 1)
    return SignalSequence(seq.values[index])


class IoPlant:
    """LPV-IO recursion driven by an exogenous scheduling trajectory known in advance.

    ``scheduling[0]`` is the value at the first closed-loop step; the init
    records are the samples just before it.
    """

    def __init__(
        self,
        model: LpvIoModel,
        scheduling: SignalSequence,
        init_u: SignalSequence,
        init_p: SignalSequence,
        init_y: SignalSequence,
        T_s: float = 1.0
    ):
        if scheduling.n_s != model.n_p:
            raise DimensionError(f"scheduling has {scheduling.n_s} channels, model n_p={model.n_p}")
        if min(len(init_u), len(init_p), len(init_y)) < model.lag:
            raise InitializationError(f"plant needs {model.lag} initial records")
        self.model = model
        self.scheduling = scheduling
        self.T_s = T_s
        self.k = 0
        self._u = list(init_u.values)
        self._p = list(init_p.values)
        self._y = list(init_y.values)
        self._pending: Optional[Tuple[np.ndarray, np.ndarray]] = None

    def _recent(self, records: List[np.ndarray], channels: int) -> SignalSequence:
        lag = max(self.model.lag, 1)
        recent = records[-lag:]
        return SignalSequence(np.array(recent).reshape(len(recent), channels))

    def measure(self) -> Tuple[np.ndarray, np.ndarray]:
        if self._pending is None:
            p_k = _held_window(self.scheduling, self.k, 1)
            y_k = simulate_io(
                self.model,
                SignalSequence(np.zeros((1, self.model.n_u))),
                p_k,
                self._recent(self._u, self.model.n_u),
                self._recent(self._y, self.model.n_y),
                self._recent(self._p, self.model.n_p)
            )
            self._pending = (y_k.values[0].copy(), p_k.values[0].copy())
        return self._pending

    def future_scheduling(self, length: int) -> SignalSequence:
        return _held_window(self.scheduling, self.k, length)

    def actuate(self, u: np.ndarray) -> None:
        y_k, p_k = self.measure()
        self._u.append(np.asarray(u, dtype=float).reshape(self.model.n_u))
        self._p.append(p_k)
        self._y.append(y_k)
        self._pending = None
        self.k += 1

    def state(self) -> Dict[str, float]:
        return {}


class PendulumSimulator:
    """RK4 disc under zero-order hold; the scheduling ``sinc(theta)`` is measured, not known ahead."""

    def __init__(self, plant: PendulumPlant, substeps: int = Config.PLANT_SUBSTEPS):
        self.plant = plant
        self.substeps = substeps
        self.T_s = plant.T_s

    def measure(self) -> Tuple[np.ndarray, np.ndarray]:
        theta = self.plant.theta
        return np.array([theta]), np.array([pendulum_scheduling(theta)])

    def future_scheduling(self, length: int) -> None:
        return None

    def actuate(self, u: np.ndarray) -> None:
        self.plant = self.plant.advance(float(np.asarray(u).reshape(-1)[0]), self.substeps)

    def state(self) -> Dict[str, float]:
        return {'theta': self.plant.theta, 'omega': self.plant.omega}


@dataclass(frozen=True, eq=False)
class StepRecord:
    k: int
    t: float
    r: np.ndarray
    y: np.ndarray
    u: np.ndarray
    p: np.ndarray
    status: str
    solve_ms: float
    objective: float
    state: Dict[str, float] = field(default_factory=dict)


@dataclass(eq=False)
class TrajectoryLog:
    """Append-only per-step record of one closed-loop run."""
    controller: str
    Q: np.ndarray
    R: np.ndarray
    u_box: Box
    y_box: Box
    records: List[StepRecord] = field(default_factory=list)

    def append(self, record: StepRecord) -> None:
        if self.records and record.t <= self.records[-1].t:
            raise DimensionError("trajectory log times must increase")
        self.records.append(record)

    def __len__(self) -> int:
        return len(self.records)

    def column(self, name: str) -> np.ndarray:
        """Stacked field ``name`` with one row per step."""
        return np.array([getattr(record, name) for record in self.records])

    @property
    def statuses(self) -> List[str]:
        return [record.status for record in self.records]


def closed_loop(
    plant: ClosedLoopPlant,
    controller: BaseController,
    reference: SignalSequence,
    steps: int,
    monitor: Optional[SolveMonitor] = None
) -> TrajectoryLog:
    """Run ``steps`` iterations of measure, control, actuate.

    ``reference[k]`` is the set-point at step ``k``; beyond the end of the
    reference its last value is held.

    Raises:
        DpcError: any controller or plant error; ``error.log`` holds the
            records up to the failing step.
    """
    cfg = controller.cfg
    log = TrajectoryLog(controller.name, cfg.Q, cfg.R, cfg.u_box, cfg.y_box)
    for k in range(steps):
        try:
            y_k, p_k = plant.measure()
            r_window = _held_window(reference, k, cfg.N_p)
            action = controller.step(y_k, p_k, r_window, plant.future_scheduling(cfg.N_p))
            state = plant.state()
            plant.actuate(action.u)
        except DpcError as error:
            error.log = log
            logger.error("closed_loop_aborted", controller=controller.name, step=k, error=str(error))
            raise
        if monitor is not None:
            monitor.record_solve(controller.name, action.status.value, action.solve_ms, action.iterations)
        log.append(StepRecord(
            k=k + 1,
            t=k * plant.T_s,
            r=r_window.values[0].copy(),
            y=y_k.copy(),
            u=action.u.copy(),
            p=p_k.copy(),
            status=action.status.value,
            solve_ms=action.solve_ms,
            objective=action.objective,
            state=state
        ))
    logger.info("closed_loop_finished", controller=controller.name, steps=len(log))
    return log


def open_loop_check(
    model: LpvIoModel,
    past: Tuple[SignalSequence, SignalSequence, SignalSequence],
    p_hat: SignalSequence,
    u_plan: np.ndarray,
    y_plan: np.ndarray
) -> float:
    """Largest gap between a predicted output plan and the exact plant driven by ``u_plan``."""
    past_u, past_p, past_y = past
    u_seq = SignalSequence(np.asarray(u_plan, dtype=float).reshape(len(p_hat), model.n_u))
    y_true = simulate_io(model, u_seq, p_hat, past_u, past_y, past_p)
    return float(np.max(np.abs(y_true.values - np.asarray(y_plan).reshape(y_true.values.shape))))
