from dataclasses import dataclass
from typing import Sequence, Union
import numpy as np
from ..errors import DimensionError

ArrayLike = Union[np.ndarray, Sequence[float], Sequence[Sequence[float]]]


@dataclass(frozen=True, eq=False)
class SignalSequence:
    """Finite, uniformly sampled sequence of real vectors.

    ``values`` has shape ``(N, n_s)``; row ``k`` is the sample at time ``k + 1``.
    A one-dimensional input is read as a scalar signal. ``n_s == 0`` is allowed
    and stands for an absent scheduling signal.

    The stored array is a private read-only copy.
    """
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=float, copy=True)
        if values.ndim == 1:
            values = values.reshape(-1, 1)
        if values.ndim != 2:
            raise DimensionError(f"expected a 1-D or 2-D array, got shape {values.shape}")
        if values.shape[0] < 1:
            raise DimensionError("a signal sequence needs at least one sample")
        if not np.all(np.isfinite(values)):
            raise DimensionError("signal sequence contains non-finite entries")
        values.setflags(write=False)
        object.__setattr__(self, 'values', values)

    @classmethod
    def empty_channels(cls, length: int) -> "SignalSequence":
        """Sequence of ``length`` samples with no channels."""
        return cls(np.zeros((length, 0)))

    @property
    def n_s(self) -> int:
        return self.values.shape[1]

    def __len__(self) -> int:
        return self.values.shape[0]

    def __getitem__(self, k: int) -> np.ndarray:
        return self.values[k]

    def col(self) -> np.ndarray:
        """Stacked column vector ``[s_1; s_2; ...; s_N]``."""
        return self.values.reshape(-1).copy()

    def window(self, start: int, length: int) -> "SignalSequence":
        """Sub-sequence of ``length`` samples starting at zero-based ``start``."""
        if start < 0 or length < 1 or start + length > len(self):
            raise DimensionError(
                f"window [{start}, {start + length}) outside sequence of length {len(self)}"
            )
        return SignalSequence(self.values[start:start + length])

    def concat(self, other: "SignalSequence") -> "SignalSequence":
        if other.n_s != self.n_s:
            raise DimensionError(f"cannot append {other.n_s}-channel sequence to {self.n_s}")
        return SignalSequence(np.vstack([self.values, other.values]))

    def __repr__(self) -> str:
        return f"SignalSequence(N={len(self)}, n_s={self.n_s})"


def as_sequence(data: Union[SignalSequence, ArrayLike]) -> SignalSequence:
    if isinstance(data, SignalSequence):
        return data
    return SignalSequence(np.asarray(data, dtype=float))


def require_equal_length(*sequences: SignalSequence) -> int:
    lengths = {len(seq) for seq in sequences}
    if len(lengths) != 1:
        raise DimensionError(f"sequence lengths differ: {sorted(lengths)}")
    return lengths.pop()
