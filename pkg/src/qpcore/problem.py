from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional
import numpy as np
from ..errors import DimensionError

SYMMETRY_TOL = 1e-12


class QpStatus(str, Enum):
    OPTIMAL = 'optimal'
    INFEASIBLE = 'infeasible'
    MAX_ITERATIONS = 'max-iterations'


@dataclass(frozen=True, eq=False)
class QpProblem:
    """Dense convex QP

        minimize    1/2 x'Px + q'x + c0
        subject to  Aeq x = beq,  lb <= Ain x <= ub

    Missing constraint groups are stored with zero rows; bounds may be infinite.
    """
    P: np.ndarray
    q: np.ndarray
    c0: float = 0.0
    Aeq: Optional[np.ndarray] = None
    beq: Optional[np.ndarray] = None
    Ain: Optional[np.ndarray] = None
    lb: Optional[np.ndarray] = None
    ub: Optional[np.ndarray] = None

    def __post_init__(self):
        P = np.atleast_2d(np.array(self.P, dtype=float))
        q = np.array(self.q, dtype=float).reshape(-1)
        n = q.size
        if P.shape != (n, n):
            raise DimensionError(f"P has shape {P.shape}, expected ({n}, {n})")
        if np.max(np.abs(P - P.T), initial=0.0) > SYMMETRY_TOL * max(1.0, np.max(np.abs(P), initial=0.0)):
            raise DimensionError("P is not symmetric")

        Aeq = np.zeros((0, n)) if self.Aeq is None else np.array(self.Aeq, dtype=float).reshape(-1, n)
        beq = np.zeros(0) if self.beq is None else np.array(self.beq, dtype=float).reshape(-1)
        if beq.size != Aeq.shape[0]:
            raise DimensionError(f"beq has {beq.size} entries for {Aeq.shape[0]} equality rows")

        Ain = np.zeros((0, n)) if self.Ain is None else np.array(self.Ain, dtype=float).reshape(-1, n)
        m = Ain.shape[0]
        lb = np.full(m, -np.inf) if self.lb is None else np.array(self.lb, dtype=float).reshape(-1)
        ub = np.full(m, np.inf) if self.ub is None else np.array(self.ub, dtype=float).reshape(-1)
        if lb.size != m or ub.size != m:
            raise DimensionError(f"bounds have {lb.size}/{ub.size} entries for {m} inequality rows")
        if np.any(lb > ub):
            raise DimensionError("lower bound exceeds upper bound")

        for name, value in (('P', P), ('q', q), ('Aeq', Aeq), ('beq', beq), ('Ain', Ain)):
            if not np.all(np.isfinite(value)):
                raise DimensionError(f"{name} contains non-finite entries")
            value.setflags(write=False)
        lb.setflags(write=False)
        ub.setflags(write=False)

        object.__setattr__(self, 'P', P)
        object.__setattr__(self, 'q', q)
        object.__setattr__(self, 'c0', float(self.c0))
        object.__setattr__(self, 'Aeq', Aeq)
        object.__setattr__(self, 'beq', beq)
        object.__setattr__(self, 'Ain', Ain)
        object.__setattr__(self, 'lb', lb)
        object.__setattr__(self, 'ub', ub)

    @property
    def n(self) -> int:
        return self.q.size

    @property
    def m_eq(self) -> int:
        return self.Aeq.shape[0]

    @property
    def m_in(self) -> int:
        return self.Ain.shape[0]

    def objective(self, x: np.ndarray) -> float:
        return float(0.5 * x @ self.P @ x + self.q @ x + self.c0)


@dataclass(frozen=True)
class KktResiduals:
    """Scaled KKT residual norms; each is divided by one plus the size of its terms."""
    stationarity: float
    primal_eq: float
    primal_ineq: float
    complementarity: float

    def max(self) -> float:
        return max(self.stationarity, self.primal_eq, self.primal_ineq, self.complementarity)

    def within(self, tol: float) -> bool:
        return self.max() <= tol


@dataclass(frozen=True, eq=False)
class QpSolution:
    """Primal point, multipliers and certificate.

    ``lam`` follows the sign convention: positive when the upper bound of
    the row is active, negative when the lower bound is.
    """
    x: np.ndarray
    objective: float
    status: QpStatus
    kkt: KktResiduals
    iterations: int
    nu: np.ndarray
    lam: np.ndarray
    merit_history: List[float] = field(default_factory=list)

    @property
    def optimal(self) -> bool:
        return self.status is QpStatus.OPTIMAL
