"""Affine-in-scheduling input/output recursions and the academic example system."""
from dataclasses import dataclass
from typing import Optional, Sequence
import numpy as np
import structlog
from ..errors import DimensionError, InitializationError
from ..signals import SignalSequence, require_equal_length

logger = structlog.get_logger(__name__)


@dataclass(frozen=True, eq=False)
class LpvIoModel:
    """LPV input/output model

        y_k = -sum_i a_i(p_{k-i}) y_{k-i} + sum_i b_i(p_{k-i}) u_{k-i}

    with affine coefficient functions ``a_i(p) = a[i,0] + sum_j a[i,j] p_j``.

    Attributes:
        a: output coefficients, shape ``(n_a, n_p + 1, n_y, n_y)``
        b: input coefficients, shape ``(n_b, n_p + 1, n_y, n_u)``
        scheduling_set: optional per-channel bounds, shape ``(n_p, 2)``
    """
    a: np.ndarray
    b: np.ndarray
    scheduling_set: Optional[np.ndarray] = None

    def __post_init__(self):
        a = np.array(self.a, dtype=float)
        b = np.array(self.b, dtype=float)
        if a.ndim != 4 or b.ndim != 4:
            raise DimensionError("coefficient arrays must be 4-D (lag, 1 + n_p, rows, cols)")
        if a.shape[1] != b.shape[1]:
            raise DimensionError(
                f"output and input coefficients disagree on n_p: {a.shape[1] - 1} vs {b.shape[1] - 1}"
            )
        if a.shape[2] != a.shape[3] or a.shape[2] != b.shape[2]:
            raise DimensionError(f"inconsistent coefficient blocks {a.shape} / {b.shape}")
        if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
            raise DimensionError("model coefficients must be finite")
        a.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, 'a', a)
        object.__setattr__(self, 'b', b)

        if self.scheduling_set is not None:
            bounds = np.array(self.scheduling_set, dtype=float).reshape(-1, 2)
            if bounds.shape[0] != self.n_p or np.any(bounds[:, 0] > bounds[:, 1]):
                raise DimensionError(f"scheduling set {bounds.tolist()} invalid for n_p={self.n_p}")
            bounds.setflags(write=False)
            object.__setattr__(self, 'scheduling_set', bounds)

    @classmethod
    def siso(
        cls,
        a_coeffs: Sequence[Sequence[float]],
        b_coeffs: Sequence[Sequence[float]],
        scheduling_set: Optional[Sequence[Sequence[float]]] = None
    ) -> "LpvIoModel":
        """Scalar model from rows ``[c_{i,0}, c_{i,1}, ..., c_{i,n_p}]`` per lag."""
        a = np.asarray(a_coeffs, dtype=float)
        b = np.asarray(b_coeffs, dtype=float)
        return cls(a[:, :, None, None], b[:, :, None, None], scheduling_set)

    @property
    def n_a(self) -> int:
        return self.a.shape[0]

    @property
    def n_b(self) -> int:
        return self.b.shape[0]

    @property
    def n_p(self) -> int:
        return self.a.shape[1] - 1

    @property
    def n_y(self) -> int:
        return self.a.shape[2]

    @property
    def n_u(self) -> int:
        return self.b.shape[3]

    @property
    def lag(self) -> int:
        return max(self.n_a, self.n_b)

    def order(self) -> int:
        """State dimension of an observable realization (SISO: the lag)."""
        return self.lag * self.n_y

    def a_at(self, i: int, p: np.ndarray) -> np.ndarray:
        """Evaluate ``a_i(p)`` for one-based lag ``i``."""
        return self.a[i - 1, 0] + np.tensordot(p, self.a[i - 1, 1:], axes=1)

    def b_at(self, i: int, p: np.ndarray) -> np.ndarray:
        return self.b[i - 1, 0] + np.tensordot(p, self.b[i - 1, 1:], axes=1)

    def outside_set(self, p: SignalSequence) -> int:
        """Number of samples of ``p`` outside the declared scheduling set."""
        if self.scheduling_set is None or self.n_p == 0:
            return 0
        lo, hi = self.scheduling_set[:, 0], self.scheduling_set[:, 1]
        slack = 1e-12
        outside = np.any((p.values < lo - slack) | (p.values > hi + slack), axis=1)
        return int(np.sum(outside))


def simulate_io(
    model: LpvIoModel,
    u: SignalSequence,
    p: SignalSequence,
    init_u: SignalSequence,
    init_y: SignalSequence,
    init_p: Optional[SignalSequence] = None
) -> SignalSequence:
    """Run the recursion forward over ``len(u)`` samples.

    The last ``model.lag`` samples of the init windows supply the lagged
    values before the first step. ``init_p`` defaults to zeros, which only
    matters when the init windows are nonzero.
    """
    N = require_equal_length(u, p)
    n = model.lag
    if u.n_s != model.n_u or p.n_s != model.n_p:
        raise DimensionError(
            f"model expects n_u={model.n_u}, n_p={model.n_p}; got {u.n_s}, {p.n_s}"
        )
    if init_u.n_s != model.n_u or init_y.n_s != model.n_y:
        raise DimensionError("initial windows do not match model dimensions")
    if init_p is None:
        init_p = SignalSequence(np.zeros((max(n, 1), model.n_p)))
    elif init_p.n_s != model.n_p:
        raise DimensionError(f"initial scheduling has {init_p.n_s} channels, model n_p={model.n_p}")
    for name, window in (('init_u', init_u), ('init_y', init_y), ('init_p', init_p)):
        if len(window) < n:
            raise InitializationError(f"{name} has {len(window)} samples, lag is {n}")

    outside = model.outside_set(p)
    if outside:
        logger.warning("scheduling_outside_set", samples=outside, total=N)

    U = np.vstack([init_u.values[len(init_u) - n:], u.values])
    P = np.vstack([init_p.values[len(init_p) - n:], p.values])
    Y = np.zeros((n + N, model.n_y))
    Y[:n] = init_y.values[len(init_y) - n:]

    for k in range(n, n + N):
        y_k = np.zeros(model.n_y)
        for i in range(1, model.n_a + 1):
            y_k -= model.a_at(i, P[k - i]) @ Y[k - i]
        for i in range(1, model.n_b + 1):
            y_k += model.b_at(i, P[k - i]) @ U[k - i]
        Y[k] = y_k
    return SignalSequence(Y[n:])


def monomial_lift(base: np.ndarray, degree: int) -> SignalSequence:
    """Scheduling vector ``[p, p^2, ..., p^degree]`` per sample."""
    base = np.asarray(base, dtype=float).reshape(-1)
    powers = np.arange(1, degree + 1)
    return SignalSequence(base[:, None] ** powers[None, :])


def monomial_bounds(lower: float, upper: float, degree: int) -> np.ndarray:
    """Per-power bounds of ``[p, ..., p^degree]`` for ``p`` in ``[lower, upper]``."""
    candidates = [lower, upper] + ([0.0] if lower < 0.0 < upper else [])
    bounds = []
    for power in range(1, degree + 1):
        values = [c ** power for c in candidates]
        bounds.append([min(values), max(values)])
    return np.array(bounds)


def example1_model() -> LpvIoModel:
    """Second-order academic system scheduled by ``[p, p^2]`` on ``[0, 1]^2``."""
    return LpvIoModel.siso(
        a_coeffs=[[1.0, -0.5, -0.1], [0.5, -0.7, -0.1]],
        b_coeffs=[[0.5, -0.4, 0.01], [0.2, -0.3, -0.2]],
        scheduling_set=[[0.0, 1.0], [0.0, 1.0]]
    )


def example1_base_scheduling(k: np.ndarray) -> np.ndarray:
    return 0.5 * np.sin(0.35 * np.pi * np.asarray(k, dtype=float)) + 0.5


def example1_scheduling(N: int, start: int = 1) -> SignalSequence:
    """Scheduling vector ``[p_k, p_k^2]`` for ``k = start, ..., start + N - 1``."""
    if N < 1:
        raise DimensionError(f"N must be positive, got {N}")
    k = np.arange(start, start + N)
    return monomial_lift(example1_base_scheduling(k), 2)
