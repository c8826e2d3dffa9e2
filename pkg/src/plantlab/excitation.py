from dataclasses import dataclass, asdict
from typing import Any, Dict, Literal
import numpy as np
from ..errors import ConfigError

ExcitationKind = Literal['uniform', 'multisine']


@dataclass(frozen=True)
class InputSpec:
    """Recipe for a seeded excitation signal.

    ``uniform`` draws i.i.d. samples on ``[-amplitude, amplitude]``;
    ``multisine`` sums ``harmonics`` random-phase cosines at multiples of
    the fundamental ``1 / (N * T_s)`` and scales the peak to ``amplitude``.
    """
    kind: ExcitationKind = 'uniform'
    amplitude: float = 1.0
    harmonics: int = 8

    def __post_init__(self):
        if self.kind not in ('uniform', 'multisine'):
            raise ConfigError(f"unknown excitation kind '{self.kind}'")
        if self.amplitude < 0.0:
            raise ConfigError(f"excitation amplitude must be nonnegative, got {self.amplitude}")
        if self.harmonics < 1:
            raise ConfigError(f"multisine needs at least one harmonic, got {self.harmonics}")

    def as_dict(self) -> Dict[str, Any]:
        return asdict(self)


def uniform_input(n: int, amplitude: float, rng: np.random.Generator) -> np.ndarray:
    return rng.uniform(-amplitude, amplitude, size=n)


def multisine_input(n: int, amplitude: float, harmonics: int, rng: np.random.Generator) -> np.ndarray:
    phases = rng.uniform(0.0, 2.0 * np.pi, size=harmonics)
    k = np.arange(n)[:, None]
    h = np.arange(1, harmonics + 1)[None, :]
    signal = np.cos(2.0 * np.pi * h * k / n + phases[None, :]).sum(axis=1)
    peak = np.max(np.abs(signal))
    if peak == 0.0:
        return signal
    return amplitude * signal / peak


def make_input(spec: InputSpec, n: int, seed: int) -> np.ndarray:
    """Excitation of length ``n`` drawn from ``numpy.random.default_rng(seed)``."""
    rng = np.random.default_rng(seed)
    if spec.kind == 'uniform':
        return uniform_input(n, spec.amplitude, rng)
    return multisine_input(n, spec.amplitude, spec.harmonics, rng)
