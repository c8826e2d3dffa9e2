from typing import Optional
import numpy as np
from ..errors import DimensionError
from ..signals import SignalSequence
from .settings import SchedulingPolicy


def resolve_schedule(
    policy: SchedulingPolicy,
    p_now: np.ndarray,
    p_future: Optional[SignalSequence],
    L: int
) -> SignalSequence:
    """Scheduling window ``p_hat = (p_k, ..., p_{k+L-1})`` used by the predictor.

    ``frozen`` holds the current value over the horizon. ``known-future``
    takes the first ``L`` samples of ``p_future``, which starts at ``p_k``.
    """
    p_now = np.asarray(p_now, dtype=float).reshape(-1)
    if SchedulingPolicy(policy) is SchedulingPolicy.FROZEN:
        return SignalSequence(np.tile(p_now, (L, 1)))
    if p_future is None or len(p_future) < L:
        available = 0 if p_future is None else len(p_future)
        raise DimensionError(f"known-future scheduling needs {L} samples, got {available}")
    if p_future.n_s != p_now.size:
        raise DimensionError(f"future scheduling has {p_future.n_s} channels, expected {p_now.size}")
    return p_future.window(0, L)
