import time
from abc import ABC, abstractmethod
from collections import deque
from dataclasses import dataclass
from typing import Optional, Tuple
import numpy as np
import structlog
from ..errors import DimensionError, InfeasibleControlError, InitializationError
from ..qpcore import QpProblem, QpStatus, solve
from ..signals import SignalSequence
from .scheduling import resolve_schedule
from .settings import DpcConfig

logger = structlog.get_logger(__name__)

Window = Tuple[SignalSequence, SignalSequence, SignalSequence]


@dataclass(frozen=True, eq=False)
class ControlAction:
    """Outcome of one receding-horizon step.

    ``u_plan`` and ``y_plan`` are the open-loop optimal sequences over the
    horizon, one row per sample; ``u`` is ``u_plan[0]`` clipped to the input box.
    """
    u: np.ndarray
    status: QpStatus
    objective: float
    solve_ms: float
    iterations: int
    u_plan: np.ndarray
    y_plan: np.ndarray
    problem: Optional[QpProblem] = None


class BaseController(ABC):
    """Receding-horizon controller with a rolling buffer of the last ``n_ell`` records.

    At step ``k`` the buffer holds ``(u, p, y)`` for ``k - n_ell, ..., k - 1``.
    ``step`` receives ``y_k`` and ``p_k``, solves the horizon program and
    appends ``(u_k, p_k, y_k)``.
    """

    name = 'base'

    def __init__(
        self,
        cfg: DpcConfig,
        init_u: SignalSequence,
        init_p: SignalSequence,
        init_y: SignalSequence
    ):
        self.cfg = cfg
        self.k = 0
        if min(len(init_u), len(init_p), len(init_y)) < cfg.n_ell:
            raise InitializationError(f"{self.name}: initial records shorter than n_ell={cfg.n_ell}")
        if init_u.n_s != cfg.n_u or init_y.n_s != cfg.n_y:
            raise DimensionError(f"{self.name}: initial records do not match n_u={cfg.n_u}, n_y={cfg.n_y}")
        self.n_p = init_p.n_s
        self.last_problem: Optional[QpProblem] = None
        self._buffer: deque = deque(maxlen=cfg.n_ell)
        for j in range(cfg.n_ell):
            self._buffer.append((
                init_u.values[len(init_u) - cfg.n_ell + j].copy(),
                init_p.values[len(init_p) - cfg.n_ell + j].copy(),
                init_y.values[len(init_y) - cfg.n_ell + j].copy()
            ))

    @property
    def past_window(self) -> Window:
        u, p, y = zip(*self._buffer)
        n = len(self._buffer)
        return (
            SignalSequence(np.array(u).reshape(n, self.cfg.n_u)),
            SignalSequence(np.array(p).reshape(n, self.n_p)),
            SignalSequence(np.array(y).reshape(n, self.cfg.n_y))
        )

    @property
    def newest(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        return self._buffer[-1]

    @abstractmethod
    def _build_problem(
        self,
        past: Window,
        r_window: SignalSequence,
        p_hat: SignalSequence
    ) -> QpProblem:
        """Horizon program for the current past window."""

    @abstractmethod
    def _extract_plan(self, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """``(u_plan, y_plan)`` from the QP decision vector."""

    def step(
        self,
        y_now: np.ndarray,
        p_now: np.ndarray,
        r_window: SignalSequence,
        p_future: Optional[SignalSequence] = None
    ) -> ControlAction:
        """Compute ``u_k`` and shift the past buffer.

        Raises:
            InfeasibleControlError: the horizon program has no feasible point.
        """
        y_now = np.asarray(y_now, dtype=float).reshape(self.cfg.n_y)
        p_now = np.asarray(p_now, dtype=float).reshape(self.n_p)
        if len(r_window) != self.cfg.N_p or r_window.n_s != self.cfg.n_y:
            raise DimensionError(f"reference window must be {self.cfg.N_p} x {self.cfg.n_y}")
        p_hat = resolve_schedule(self.cfg.sched_policy, p_now, p_future, self.cfg.N_p)
        if self.cfg.p_set is not None and self.cfg.p_set.violation(p_hat.values) > 0.0:
            logger.warning("scheduling_outside_set", controller=self.name, step=self.k)
        problem = self._build_problem(self.past_window, r_window, p_hat)
        self.last_problem = problem

        started = time.perf_counter()
        solution = solve(problem, tol=self.cfg.tol, max_iter=self.cfg.max_iter)
        solve_ms = (time.perf_counter() - started) * 1000.0
        logger.debug(
            "qp_solved",
            controller=self.name,
            step=self.k,
            status=solution.status.value,
            iterations=solution.iterations,
            solve_ms=round(solve_ms, 3)
        )

        if solution.status is QpStatus.INFEASIBLE:
            logger.error("control_infeasible", controller=self.name, step=self.k)
            raise InfeasibleControlError(self.k, self.name)
        if solution.status is not QpStatus.OPTIMAL:
            logger.warning(
                "degraded_solve",
                controller=self.name,
                step=self.k,
                status=solution.status.value,
                kkt=solution.kkt.max()
            )

        u_plan, y_plan = self._extract_plan(solution.x)
        u_now = self.cfg.u_box.clip(u_plan[0])
        excess = float(np.max(np.abs(u_now - u_plan[0]), initial=0.0))
        if excess > self.cfg.tol * (1.0 + float(np.max(np.abs(u_plan[0]), initial=0.0))):
            logger.warning("input_clipped", controller=self.name, step=self.k, excess=excess)
        self._buffer.append((u_now.copy(), p_now.copy(), y_now.copy()))
        self.k += 1
        return ControlAction(
            u=u_now,
            status=solution.status,
            objective=solution.objective,
            solve_ms=solve_ms,
            iterations=solution.iterations,
            u_plan=u_plan,
            y_plan=y_plan,
            problem=problem
        )
