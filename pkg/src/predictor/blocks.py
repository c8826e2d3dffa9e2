"""Past/future Hankel blocks of the lifted dictionary and the equality stack over g."""
from dataclasses import dataclass
from typing import Optional, Tuple
import numpy as np
import structlog
from ..errors import DimensionError, InvalidDepthError, UncertifiedDictionaryError
from ..plantlab.dictionary import DataDictionary
from ..signals import SignalSequence, hankel_split, blockdiag_kron, certify_excitation, persistency_of_excitation

logger = structlog.get_logger(__name__)


@dataclass(frozen=True, eq=False)
class PredictorBlocks:
    """Hankel blocks of ``u``, ``p⊗u``, ``y``, ``p⊗y`` split after ``n_ell`` rows.

    ``Up``/``Upp``/``Yp``/``Ypp`` hold the past ``n_ell`` samples,
    ``Uf``/``Ufp``/``Yf``/``Yfp`` the future ``L`` samples; all share
    ``n_cols = N_d - (n_ell + L) + 1`` columns.
    """
    n_ell: int
    L: int
    n_u: int
    n_p: int
    n_y: int
    Up: np.ndarray
    Upp: np.ndarray
    Yp: np.ndarray
    Ypp: np.ndarray
    Uf: np.ndarray
    Ufp: np.ndarray
    Yf: np.ndarray
    Yfp: np.ndarray

    def __post_init__(self):
        blocks = (self.Up, self.Upp, self.Yp, self.Ypp, self.Uf, self.Ufp, self.Yf, self.Yfp)
        if len({block.shape[1] for block in blocks}) != 1:
            raise DimensionError("predictor blocks disagree on column count")
        for block in blocks:
            block.setflags(write=False)

    @property
    def n_cols(self) -> int:
        return self.Up.shape[1]

    def equality_rows(self, with_future_inputs: bool = True) -> int:
        rows = self.n_ell * (self.n_u + self.n_p * self.n_u + self.n_y + self.n_p * self.n_y)
        rows += self.L * (self.n_p * self.n_u + self.n_p * self.n_y)
        if with_future_inputs:
            rows += self.L * self.n_u
        return rows


def build_blocks(dictionary: DataDictionary, n_ell: int, L: int, strict: bool = True) -> PredictorBlocks:
    """Split the lifted dictionary for a past window ``n_ell`` and horizon ``L``.

    The stored certificate must pass. When it was issued for an order below
    ``n_x + L`` the auxiliary input is re-certified at ``n_x + L``. The data
    must also span every trajectory of depth ``n_ell + L`` (see
    ``trajectory_span``). With ``strict=False`` failures of either check are
    only logged.

    Raises:
        UncertifiedDictionaryError: certificate absent or failing.
        InvalidDepthError: ``n_ell + L`` exceeds the dictionary length.
    """
    if n_ell < 1 or L < 1 or n_ell + L > dictionary.n_d:
        raise InvalidDepthError(
            f"n_ell={n_ell}, L={L} do not fit a dictionary of {dictionary.n_d} samples"
        )
    certificate = dictionary.certificate
    if certificate is None or not certificate.passed:
        raise UncertifiedDictionaryError("dictionary has no passing excitation certificate")
    order = dictionary.n_x + L
    if certificate.order < order:
        recheck = certify_excitation(dictionary.u_aux, order)
        if not recheck.passed:
            if strict:
                raise UncertifiedDictionaryError(
                    f"dictionary not persistently exciting for horizon {L}: {recheck.summary()}"
                )
            logger.warning("dictionary_uncertified_for_horizon", horizon=L, rank=recheck.rank,
                           required=recheck.required)

    rank, required = trajectory_span(dictionary, n_ell + L)
    if rank < required:
        message = (
            f"dictionary spans {rank} of {required} trajectory directions at depth {n_ell + L}; "
            f"record more than {dictionary.n_d} samples"
        )
        if strict:
            raise UncertifiedDictionaryError(message)
        logger.warning("dictionary_span_deficient", depth=n_ell + L, rank=rank, required=required)

    Up, Uf = hankel_split(dictionary.u, n_ell, L)
    Upp, Ufp = hankel_split(dictionary.u_p, n_ell, L)
    Yp, Yf = hankel_split(dictionary.y, n_ell, L)
    Ypp, Yfp = hankel_split(dictionary.y_p, n_ell, L)
    return PredictorBlocks(
        n_ell=n_ell,
        L=L,
        n_u=dictionary.n_u,
        n_p=dictionary.n_p,
        n_y=dictionary.n_y,
        Up=Up.entries,
        Upp=Upp.entries,
        Yp=Yp.entries,
        Ypp=Ypp.entries,
        Uf=Uf.entries,
        Ufp=Ufp.entries,
        Yf=Yf.entries,
        Yfp=Yfp.entries
    )

def trajectory_span(dictionary: DataDictionary, depth: int) -> Tuple[int, int]:
    """Rank of the depth-``depth`` Hankel matrix of ``[u, p⊗u, y, p⊗y]`` and the
    rank every trajectory of that depth needs.

    With ``p⊗y`` counted as an input of the lifted system the trajectories
    span ``n_x + depth * (n_u + n_p n_u + n_p n_y)`` directions.
    """
    stacked = SignalSequence(np.hstack([dictionary.u_aux.values, dictionary.y_aux.values]))
    n_w = dictionary.u_aux.n_s + dictionary.y_p.n_s
    required = dictionary.n_x + depth * n_w
    _, rank = persistency_of_excitation(stacked, depth)
    return rank, required



def _check_window(name: str, seq: SignalSequence, length: int, channels: int) -> None:
    if len(seq) != length or seq.n_s != channels:
        raise DimensionError(
            f"{name}: expected {length} samples x {channels} channels, got {len(seq)} x {seq.n_s}"
        )


def assemble_equality(
    blocks: PredictorBlocks,
    past_u: SignalSequence,
    past_p: SignalSequence,
    past_y: SignalSequence,
    fut_u: Optional[SignalSequence],
    fut_p: SignalSequence
) -> Tuple[np.ndarray, np.ndarray]:
    """Equality system ``A g = b`` pinning the past window and the scheduling.

    Row groups, top to bottom: ``Up``, ``Upp - P̄u Up``, ``Yp``,
    ``Ypp - P̄y Yp``, ``Uf``, ``Ufp - P̂u Uf``, ``Yfp - P̂y Yf``. Future
    outputs are left free. With ``fut_u=None`` the ``Uf`` group is omitted
    and the future inputs stay free as well.
    """
    n_ell, L = blocks.n_ell, blocks.L
    _check_window('past_u', past_u, n_ell, blocks.n_u)
    _check_window('past_p', past_p, n_ell, blocks.n_p)
    _check_window('past_y', past_y, n_ell, blocks.n_y)
    _check_window('fut_p', fut_p, L, blocks.n_p)
    if fut_u is not None:
        _check_window('fut_u', fut_u, L, blocks.n_u)

    past_kron_u = blockdiag_kron(past_p, blocks.n_u)
    past_kron_y = blockdiag_kron(past_p, blocks.n_y)
    fut_kron_u = blockdiag_kron(fut_p, blocks.n_u)
    fut_kron_y = blockdiag_kron(fut_p, blocks.n_y)

    rows = [
        (blocks.Up, past_u.col()),
        (blocks.Upp - past_kron_u @ blocks.Up, np.zeros(blocks.Upp.shape[0])),
        (blocks.Yp, past_y.col()),
        (blocks.Ypp - past_kron_y @ blocks.Yp, np.zeros(blocks.Ypp.shape[0])),
    ]
    if fut_u is not None:
        rows.append((blocks.Uf, fut_u.col()))
    rows += [
        (blocks.Ufp - fut_kron_u @ blocks.Uf, np.zeros(blocks.Ufp.shape[0])),
        (blocks.Yfp - fut_kron_y @ blocks.Yf, np.zeros(blocks.Yfp.shape[0])),
    ]
    A = np.vstack([matrix for matrix, _ in rows])
    b = np.concatenate([rhs for _, rhs in rows])
    return A, b
