from dataclasses import dataclass, asdict
from typing import Any, Dict, Optional, Tuple
import numpy as np
from scipy.linalg import svdvals
from ..config import Config
from .hankel import hankel
from .sequence import SignalSequence


@dataclass(frozen=True)
class PeCertificate:
    """Outcome of a persistency-of-excitation test on one sequence."""
    order: int
    rank: int
    required: int
    passed: bool
    n_samples: int
    min_length: int

    def as_dict(self) -> Dict[str, Any]:
        return asdict(self)

    def summary(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return (
            f"order {self.order}: rank {self.rank}/{self.required} {verdict} "
            f"(N={self.n_samples}, minimum length {self.min_length})"
        )


def persistency_of_excitation(
    seq: SignalSequence,
    L: int,
    rank_tol: Optional[float] = None
) -> Tuple[bool, int]:
    """Test whether ``seq`` is persistently exciting of order ``L``.

    Singular values of ``hankel(seq, L)`` above ``rank_tol * sigma_max`` are
    counted; the default ``rank_tol`` is ``RANK_TOL_FACTOR * max(rows, cols)``.

    Returns:
        ``(is_pe, rank)`` with ``is_pe`` true iff ``rank == n_s * L``.
    """
    entries = hankel(seq, L).entries
    required = seq.n_s * L
    if entries.size == 0:
        return required == 0, 0
    if rank_tol is None:
        rank_tol = Config.RANK_TOL_FACTOR * max(entries.shape)
    sigma = svdvals(entries)
    if sigma[0] == 0.0:
        return required == 0, 0
    rank = int(np.sum(sigma > rank_tol * sigma[0]))
    return rank == required, rank


def certify_excitation(seq: SignalSequence, order: int) -> PeCertificate:
    """Full certificate; orders beyond the sequence length fail with rank 0."""
    required = seq.n_s * order
    min_length = (seq.n_s + 1) * order - 1
    if order > len(seq):
        return PeCertificate(order, 0, required, False, len(seq), min_length)
    passed, rank = persistency_of_excitation(seq, order)
    return PeCertificate(order, rank, required, passed, len(seq), min_length)


def min_dictionary_length(n_u: int, n_p: int, n_x: int, N_p: int) -> int:
    """Shortest dictionary that can be persistently exciting for horizon ``N_p``."""
    return ((n_p + 1) * n_u + 1) * (n_x + N_p) - 1
