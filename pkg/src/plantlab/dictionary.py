"""Recorded (u, p, y) trajectories and their generation from a source system."""
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Optional, Protocol, Tuple
import numpy as np
import structlog
from ..config import Config
from ..errors import DimensionError, ExcitationInsufficientError
from ..signals import (
    SignalSequence,
    PeCertificate,
    aux_io,
    kron_lift,
    certify_excitation,
    require_equal_length
)
from .excitation import InputSpec, make_input
from .lpv_model import LpvIoModel, simulate_io
from .pendulum import PendulumPlant, pendulum_scheduling

logger = structlog.get_logger(__name__)

Recording = Tuple[SignalSequence, SignalSequence, SignalSequence]


@dataclass(frozen=True, eq=False)
class DataDictionary:
    """One recorded trajectory plus its lifted signals and excitation certificate."""
    u: SignalSequence
    p: SignalSequence
    y: SignalSequence
    n_x: int
    u_p: SignalSequence
    y_p: SignalSequence
    u_aux: SignalSequence
    y_aux: SignalSequence
    certificate: Optional[PeCertificate] = None
    recipe: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        require_equal_length(self.u, self.p, self.y, self.u_p, self.y_p, self.u_aux, self.y_aux)

    @classmethod
    def from_signals(
        cls,
        u: SignalSequence,
        p: SignalSequence,
        y: SignalSequence,
        n_x: int,
        order: Optional[int] = None,
        recipe: Optional[Dict[str, Any]] = None
    ) -> "DataDictionary":
        """Build lifted signals and certify the auxiliary input at ``order``."""
        require_equal_length(u, p, y)
        u_aux = aux_io(u, p)
        certificate = certify_excitation(u_aux, order) if order is not None else None
        return cls(
            u=u,
            p=p,
            y=y,
            n_x=n_x,
            u_p=kron_lift(p, u),
            y_p=kron_lift(p, y),
            u_aux=u_aux,
            y_aux=aux_io(y, p),
            certificate=certificate,
            recipe=dict(recipe or {})
        )

    @property
    def n_d(self) -> int:
        return len(self.u)

    @property
    def n_u(self) -> int:
        return self.u.n_s

    @property
    def n_p(self) -> int:
        return self.p.n_s

    @property
    def n_y(self) -> int:
        return self.y.n_s

    def lifted_consistent(self) -> bool:
        """True when stored lifted signals equal a fresh recomputation bit for bit."""
        checks = (
            (self.u_p, kron_lift(self.p, self.u)),
            (self.y_p, kron_lift(self.p, self.y)),
            (self.u_aux, aux_io(self.u, self.p)),
            (self.y_aux, aux_io(self.y, self.p))
        )
        return all(np.array_equal(stored.values, fresh.values) for stored, fresh in checks)


class DataSource(Protocol):
    name: str
    n_x: int

    def record(self, u: np.ndarray) -> Recording: ...

    def describe(self) -> Dict[str, Any]: ...


class LpvModelSource:
    """LPV-IO model driven by an exogenous scheduling trajectory, started from rest."""

    name = 'lpv-io'

    def __init__(
        self,
        model: LpvIoModel,
        scheduling: Callable[[int], SignalSequence],
        label: str = 'custom'
    ):
        self.model = model
        self.scheduling = scheduling
        self.label = label
        self.n_x = model.order()

    def record(self, u: np.ndarray) -> Recording:
        u_seq = SignalSequence(np.asarray(u, dtype=float).reshape(len(u), self.model.n_u))
        p_seq = self.scheduling(len(u_seq))
        if p_seq.n_s != self.model.n_p:
            raise DimensionError(
                f"scheduling provides {p_seq.n_s} channels, model needs {self.model.n_p}"
            )
        lag = max(self.model.lag, 1)
        zeros_u = SignalSequence(np.zeros((lag, self.model.n_u)))
        zeros_y = SignalSequence(np.zeros((lag, self.model.n_y)))
        zeros_p = SignalSequence(np.zeros((lag, self.model.n_p)))
        y_seq = simulate_io(self.model, u_seq, p_seq, zeros_u, zeros_y, zeros_p)
        return u_seq, p_seq, y_seq

    def describe(self) -> Dict[str, Any]:
        return {'source': self.name, 'model': self.label}


class PendulumSource:
    """Unbalanced disc from rest; ``p_k = sinc(y_k)`` is measured before ``u_k`` acts."""

    name = 'pendulum'
    n_x = 2

    def __init__(self, plant: PendulumPlant = PendulumPlant(), substeps: int = Config.PLANT_SUBSTEPS):
        self.plant = plant
        self.substeps = substeps

    def record(self, u: np.ndarray) -> Recording:
        plant = self.plant
        u = np.asarray(u, dtype=float).reshape(-1)
        ys = np.zeros(len(u))
        ps = np.zeros(len(u))
        for k, u_k in enumerate(u):
            ys[k] = plant.theta
            ps[k] = pendulum_scheduling(plant.theta)
            plant = plant.advance(u_k, self.substeps)
        return SignalSequence(u), SignalSequence(ps), SignalSequence(ys)

    def describe(self) -> Dict[str, Any]:
        return {
            'source': self.name,
            'sampling_time': self.plant.T_s,
            'substeps': self.substeps,
            'theta0': self.plant.theta
        }


def dictionary_recipe(
    source: DataSource,
    input_spec: InputSpec,
    n_d: int,
    seed: int,
    horizon: int
) -> Dict[str, Any]:
    """Everything that determines a generated dictionary; used as its cache key."""
    return {
        **source.describe(),
        **{f'input_{key}': value for key, value in input_spec.as_dict().items()},
        'n_d': n_d,
        'seed': seed,
        'horizon': horizon,
        'n_x': source.n_x
    }


def generate_dictionary(
    source: DataSource,
    input_spec: InputSpec,
    n_d: int,
    seed: int,
    horizon: int,
    strict: bool = True
) -> DataDictionary:
    """Excite ``source`` for ``n_d`` samples and certify the recording.

    The auxiliary input ``[u; p ⊗ u]`` must be persistently exciting of order
    ``n_x + horizon``. With ``strict=False`` a failing certificate is
    attached to the returned dictionary instead of raising.

    Raises:
        ExcitationInsufficientError: the certificate fails; names the achieved rank.
        DivergenceError: the source plant blew up.
    """
    u = make_input(input_spec, n_d, seed)
    u_seq, p_seq, y_seq = source.record(u)
    order = source.n_x + horizon
    recipe = dictionary_recipe(source, input_spec, n_d, seed, horizon)
    dictionary = DataDictionary.from_signals(u_seq, p_seq, y_seq, source.n_x, order, recipe)
    certificate = dictionary.certificate
    logger.info(
        "dictionary_generated",
        source=source.name,
        n_d=n_d,
        seed=seed,
        order=order,
        rank=certificate.rank,
        required=certificate.required
    )
    if strict and not certificate.passed:
        raise ExcitationInsufficientError(
            f"auxiliary input not persistently exciting: {certificate.summary()}",
            order=certificate.order,
            rank=certificate.rank,
            required=certificate.required
        )
    return dictionary
