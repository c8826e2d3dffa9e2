"""Hankel matrices and the Kronecker constructions built on them."""
from dataclasses import dataclass
from typing import Tuple
import numpy as np
from scipy.linalg import block_diag
from ..errors import InvalidDepthError, DimensionError
from .sequence import SignalSequence, require_equal_length


@dataclass(frozen=True, eq=False)
class HankelMatrix:
    """Block Hankel matrix of depth ``depth`` built from an ``n_s``-channel sequence.

    Column ``j`` stacks samples ``s_j ... s_{j+depth-1}``.
    """
    entries: np.ndarray
    depth: int
    n_s: int

    def __post_init__(self):
        if self.entries.shape[0] != self.depth * self.n_s:
            raise DimensionError(
                f"{self.entries.shape[0]} rows do not match depth {self.depth} x {self.n_s} channels"
            )
        self.entries.setflags(write=False)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.entries.shape

    @property
    def n_cols(self) -> int:
        return self.entries.shape[1]

    def block(self, i: int, j: int) -> np.ndarray:
        """Block row ``i``, column ``j`` (zero-based)."""
        return self.entries[i * self.n_s:(i + 1) * self.n_s, j]


def hankel(seq: SignalSequence, L: int) -> HankelMatrix:
    """Hankel matrix of depth ``L``: shape ``(n_s * L, N - L + 1)``.

    Raises:
        InvalidDepthError: if ``L < 1`` or ``L > N``.
    """
    N = len(seq)
    if L < 1 or L > N:
        raise InvalidDepthError(f"Hankel depth {L} invalid for sequence of length {N}")
    n_cols = N - L + 1
    values = seq.values
    entries = np.vstack([values[i:i + n_cols].T for i in range(L)])
    return HankelMatrix(np.ascontiguousarray(entries), L, seq.n_s)


def hankel_split(seq: SignalSequence, n_ell: int, L: int) -> Tuple[HankelMatrix, HankelMatrix]:
    """Split ``hankel(seq, n_ell + L)`` into its first ``n_ell`` and last ``L`` block rows."""
    if n_ell < 1 or L < 1 or n_ell + L > len(seq):
        raise InvalidDepthError(
            f"split n_ell={n_ell}, L={L} invalid for sequence of length {len(seq)}"
        )
    full = hankel(seq, n_ell + L)
    cut = n_ell * seq.n_s
    past = HankelMatrix(full.entries[:cut].copy(), n_ell, seq.n_s)
    future = HankelMatrix(full.entries[cut:].copy(), L, seq.n_s)
    return past, future


def kron_lift(p: SignalSequence, s: SignalSequence) -> SignalSequence:
    """Per-sample Kronecker product ``p_k ⊗ s_k``."""
    N = require_equal_length(p, s)
    lifted = np.einsum('ki,kj->kij', p.values, s.values).reshape(N, p.n_s * s.n_s)
    return SignalSequence(lifted)


def blockdiag_kron(p: SignalSequence, n: int) -> np.ndarray:
    """Block-diagonal operator with ``p_k ⊗ I_n`` as k-th block.

    Shape ``(n_p * n * N, n * N)``; ``blockdiag_kron(p, n) @ s.col()`` equals
    ``kron_lift(p, s).col()`` for any ``n``-channel ``s`` of the same length.
    """
    if n < 1:
        raise DimensionError(f"block size must be positive, got {n}")
    N = len(p)
    if p.n_s == 0:
        return np.zeros((0, N * n))
    identity = np.eye(n)
    blocks = [np.kron(p_k.reshape(-1, 1), identity) for p_k in p.values]
    return block_diag(*blocks)


def aux_io(s: SignalSequence, p: SignalSequence) -> SignalSequence:
    """Auxiliary signal ``[s_k; p_k ⊗ s_k]``, used for both inputs and outputs."""
    lifted = kron_lift(p, s)
    return SignalSequence(np.hstack([s.values, lifted.values]))
