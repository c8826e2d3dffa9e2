from typing import Optional
import numpy as np
from ..errors import DimensionError
from .problem import QpProblem, KktResiduals


def _inf_norm(v: np.ndarray) -> float:
    return float(np.max(np.abs(v), initial=0.0))


def kkt_residuals(
    prob: QpProblem,
    x: np.ndarray,
    nu: Optional[np.ndarray] = None,
    lam: Optional[np.ndarray] = None
) -> KktResiduals:
    """KKT residuals of ``(x, nu, lam)``; missing multipliers count as zero.

    stationarity    Px + q + Aeq'nu + Ain'lam
    primal_eq       Aeq x - beq
    primal_ineq     positive part of the bound violation of Ain x
    complementarity lam+ * (ub - Ain x) and lam- * (Ain x - lb)
    """
    x = np.asarray(x, dtype=float).reshape(-1)
    nu = np.zeros(prob.m_eq) if nu is None else np.asarray(nu, dtype=float).reshape(-1)
    lam = np.zeros(prob.m_in) if lam is None else np.asarray(lam, dtype=float).reshape(-1)
    if x.size != prob.n or nu.size != prob.m_eq or lam.size != prob.m_in:
        raise DimensionError("primal/dual vector sizes do not match the problem")

    Px = prob.P @ x
    eq_term = prob.Aeq.T @ nu
    in_term = prob.Ain.T @ lam
    stationarity = _inf_norm(Px + prob.q + eq_term + in_term) / (
        1.0 + max(_inf_norm(Px), _inf_norm(prob.q), _inf_norm(eq_term), _inf_norm(in_term))
    )

    Ax_eq = prob.Aeq @ x
    primal_eq = _inf_norm(Ax_eq - prob.beq) / (1.0 + max(_inf_norm(Ax_eq), _inf_norm(prob.beq)))

    Ax = prob.Ain @ x
    finite_lb = prob.lb[np.isfinite(prob.lb)]
    finite_ub = prob.ub[np.isfinite(prob.ub)]
    bound_scale = max(_inf_norm(Ax), _inf_norm(finite_lb), _inf_norm(finite_ub))
    violation = np.maximum(Ax - prob.ub, 0.0) + np.maximum(prob.lb - Ax, 0.0)
    primal_ineq = _inf_norm(violation) / (1.0 + bound_scale)

    lam_up = np.maximum(lam, 0.0)
    lam_lo = np.maximum(-lam, 0.0)
    with np.errstate(invalid='ignore'):
        gap_up = np.where(lam_up > 0.0, lam_up * (prob.ub - Ax), 0.0)
        gap_lo = np.where(lam_lo > 0.0, lam_lo * (Ax - prob.lb), 0.0)
    complementarity = max(_inf_norm(gap_up), _inf_norm(gap_lo)) / (
        1.0 + _inf_norm(lam) * max(1.0, bound_scale)
    )
    return KktResiduals(stationarity, primal_eq, primal_ineq, complementarity)
