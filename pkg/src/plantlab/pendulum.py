"""DC motor with unbalanced disc: RK4 simulation and its gain-scheduled IO model."""
from dataclasses import dataclass, replace
from typing import Tuple
import numpy as np
from numpy.polynomial import polynomial as P
from ..config import Config
from ..errors import DivergenceError, ConfigError
from ..signals import SignalSequence
from .lpv_model import LpvIoModel, monomial_lift, monomial_bounds

SCHEDULING_SET = (-0.22, 1.0)
MODEL_DEGREE = 4


@dataclass(frozen=True)
class PendulumPlant:
    """Unbalanced disc ``theta'' = -(m g l / J) sin(theta) - theta' / tau + (K_m / tau) u``.

    Defaults are the physical parameters of the laboratory setup; ``l`` is
    in metres (0.42 mm).
    """
    m: float = 0.07
    g: float = 9.8
    l: float = 0.42e-3
    J: float = 2.2e-4
    tau: float = 0.5971
    K_m: float = 15.3145
    T_s: float = 0.075
    theta: float = 0.0
    omega: float = 0.0

    def __post_init__(self):
        for name in ('m', 'g', 'l', 'J', 'tau', 'K_m', 'T_s'):
            if not getattr(self, name) > 0.0:
                raise ConfigError(f"pendulum parameter {name} must be strictly positive")

    @property
    def gravity_gain(self) -> float:
        return self.m * self.g * self.l / self.J

    @property
    def state(self) -> Tuple[float, float]:
        return self.theta, self.omega

    def dynamics(self, theta: float, omega: float, u: float) -> Tuple[float, float]:
        """Time derivative ``(theta', omega')``."""
        omega_dot = (
            -self.gravity_gain * np.sin(theta)
            - omega / self.tau
            + self.K_m / self.tau * u
        )
        return omega, omega_dot

    def with_state(self, theta: float, omega: float = 0.0) -> "PendulumPlant":
        return replace(self, theta=float(theta), omega=float(omega))

    def advance(self, u: float, substeps: int = Config.PLANT_SUBSTEPS) -> "PendulumPlant":
        """Hold ``u`` over one sampling period using ``substeps`` RK4 steps."""
        plant = self
        dt = self.T_s / substeps
        for _ in range(substeps):
            plant = rk4_step(plant, u, dt)
        return plant


def rk4_step(plant: PendulumPlant, u: float, dt: float) -> PendulumPlant:
    """One classical Runge-Kutta step with ``u`` held constant.

    Raises:
        DivergenceError: if the new state is not finite.
    """
    if not dt > 0.0:
        raise ConfigError(f"step size must be positive, got {dt}")
    if not np.isfinite(u):
        raise DivergenceError(f"non-finite input {u}")
    x = np.array([plant.theta, plant.omega])

    def f(state: np.ndarray) -> np.ndarray:
        return np.array(plant.dynamics(state[0], state[1], u))

    k1 = f(x)
    k2 = f(x + 0.5 * dt * k1)
    k3 = f(x + 0.5 * dt * k2)
    k4 = f(x + dt * k3)
    x_next = x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    if not np.all(np.isfinite(x_next)):
        raise DivergenceError(f"pendulum state diverged: {x_next.tolist()}")
    return plant.with_state(x_next[0], x_next[1])


def pendulum_scheduling(theta: float) -> float:
    """``sin(theta) / theta`` with value 1 at 0."""
    # np.sinc is the normalized sinc
    return float(np.sinc(theta / np.pi))


def hold_input(plant: PendulumPlant, theta: float) -> float:
    """Constant input keeping the disc at rest at ``theta``."""
    return plant.tau * plant.gravity_gain * np.sin(theta) / plant.K_m


def _frozen_io_coefficients(plant: PendulumPlant, p: float) -> Tuple[float, float, float, float]:
    # RK4 propagation of the frozen linear form theta'' = -c p theta - theta'/tau + K_m/tau u
    A = np.array([[0.0, 1.0], [-plant.gravity_gain * p, -1.0 / plant.tau]])
    B = np.array([0.0, plant.K_m / plant.tau])
    hA = plant.T_s * A
    Ad = np.eye(2)
    S = np.zeros((2, 2))
    term = np.eye(2)
    for j in range(1, 5):
        S += term / float(np.prod(np.arange(1, j + 1)))
        term = term @ hA
        Ad += term / float(np.prod(np.arange(1, j + 1)))
    Bd = plant.T_s * S @ B
    a1 = -np.trace(Ad)
    a2 = np.linalg.det(Ad)
    b1 = Bd[0]
    b2 = Ad[0, 1] * Bd[1] - Ad[1, 1] * Bd[0]
    return a1, a2, b1, b2


def pendulum_io_model(plant: PendulumPlant = PendulumPlant()) -> LpvIoModel:
    """Gain-scheduled IO model over ``[p, p^2, p^3, p^4]``.

    Each coefficient is a polynomial of degree at most four in the frozen
    scheduling value, recovered exactly by interpolation on five nodes.
    """
    nodes = np.linspace(-1.0, 1.0, MODEL_DEGREE + 1)
    samples = np.array([_frozen_io_coefficients(plant, p) for p in nodes])
    coeffs = P.polyfit(nodes, samples, MODEL_DEGREE)
    a = np.stack([coeffs[:, 0], coeffs[:, 1]])
    b = np.stack([coeffs[:, 2], coeffs[:, 3]])
    return LpvIoModel.siso(
        a_coeffs=a,
        b_coeffs=b,
        scheduling_set=monomial_bounds(*SCHEDULING_SET, MODEL_DEGREE)
    )


def pendulum_model_scheduling(p: SignalSequence) -> SignalSequence:
    """Map measured ``p = sinc(theta)`` to the IO model's scheduling vector."""
    return monomial_lift(p.values[:, 0], MODEL_DEGREE)
