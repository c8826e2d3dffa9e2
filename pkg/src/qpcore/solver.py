"""Dense QP solver: null-space elimination of equalities, then OSQP on the reduced box problem.

The reduced problem

    minimize 1/2 z'P̃z + q̃'z   subject to  l̃ <= Ã z <= ũ

is handed to OSQP and advanced in warm-started chunks of ``check_every``
iterations. After every chunk the active set read off the OSQP duals is
polished by an exact equality-constrained KKT solve, and a point is accepted
only when the KKT residuals of the original problem meet ``tol``.
"""
from dataclasses import dataclass
from typing import List, Optional, Tuple
import numpy as np
import osqp
import structlog
from scipy import sparse
from scipy.linalg import qr
from ..config import Config
from ..predictor.solver import minimum_norm_solve
from .kkt import kkt_residuals
from .problem import QpProblem, QpSolution, QpStatus

logger = structlog.get_logger(__name__)

CONSTANT_ROW_TOL = 1e-9

INFEASIBLE_STATUS = "primal infeasible"
UNBOUNDED_STATUS = "dual infeasible"
CONVERGED_STATUS = "solved"


@dataclass
class _Reduced:
    x0: np.ndarray
    Z: np.ndarray
    P: np.ndarray
    q: np.ndarray
    rows: np.ndarray
    A: np.ndarray
    lower: np.ndarray
    upper: np.ndarray


def _inf_norm(v: np.ndarray) -> float:
    return float(np.max(np.abs(v), initial=0.0))


def eliminate_equalities(prob: QpProblem) -> Tuple[np.ndarray, np.ndarray, bool]:
    """Particular solution ``x0`` and orthonormal null basis ``Z`` of ``Aeq``.

    Returns ``(x0, Z, consistent)``; every ``x0 + Z z`` satisfies the
    equalities when ``consistent`` is true.
    """
    n = prob.n
    if prob.m_eq == 0:
        return np.zeros(n), np.eye(n), True
    x0 = minimum_norm_solve(prob.Aeq, prob.beq)
    residual = float(np.linalg.norm(prob.Aeq @ x0 - prob.beq))
    consistent = residual <= Config.CONSISTENCY_TOL * (1.0 + float(np.linalg.norm(prob.beq)))

    Q, R, _ = qr(prob.Aeq.T, pivoting=True)
    diag = np.abs(np.diag(R))
    if diag.size == 0 or diag[0] == 0.0:
        rank = 0
    else:
        rank = int(np.sum(diag > Config.LSTSQ_RCOND * diag[0]))
    return x0, Q[:, rank:], consistent


def _equality_multipliers(prob: QpProblem, x: np.ndarray, lam: np.ndarray) -> np.ndarray:
    if prob.m_eq == 0:
        return np.zeros(0)
    rhs = -(prob.P @ x + prob.q + prob.Ain.T @ lam)
    return minimum_norm_solve(prob.Aeq.T, rhs)


def _finish(
    prob: QpProblem,
    x: np.ndarray,
    lam: np.ndarray,
    status: QpStatus,
    iterations: int,
    history: List[float]
) -> QpSolution:
    nu = _equality_multipliers(prob, x, lam)
    return QpSolution(
        x=x,
        objective=prob.objective(x),
        status=status,
        kkt=kkt_residuals(prob, x, nu, lam),
        iterations=iterations,
        nu=nu,
        lam=lam,
        merit_history=history
    )


def _certified(prob: QpProblem, x: np.ndarray, lam: np.ndarray, tol: float) -> Optional[QpSolution]:
    nu = _equality_multipliers(prob, x, lam)
    residuals = kkt_residuals(prob, x, nu, lam)
    if not residuals.within(tol):
        return None
    return QpSolution(x, prob.objective(x), QpStatus.OPTIMAL, residuals, 0, nu, lam)


def _reduce(prob: QpProblem, x0: np.ndarray, Z: np.ndarray, tol: float) -> Tuple[Optional[_Reduced], bool]:
    """Project onto the equality manifold; rows of Ain that do not depend on z are
    checked once and dropped. Returns ``(reduced, feasible)``."""
    A_full = prob.Ain @ Z
    offset = prob.Ain @ x0
    lower = prob.lb - offset
    upper = prob.ub - offset

    keep = []
    for i in range(prob.m_in):
        if _inf_norm(A_full[i]) > CONSTANT_ROW_TOL * max(1.0, _inf_norm(prob.Ain[i])):
            keep.append(i)
            continue
        slack = tol * (1.0 + max(abs(offset[i]), _finite_abs(prob.lb[i]), _finite_abs(prob.ub[i])))
        if lower[i] > slack or upper[i] < -slack:
            return None, False
    rows = np.array(keep, dtype=int)
    return _Reduced(
        x0=x0,
        Z=Z,
        P=Z.T @ prob.P @ Z,
        q=Z.T @ (prob.P @ x0 + prob.q),
        rows=rows,
        A=A_full[rows],
        lower=lower[rows],
        upper=upper[rows]
    ), True


def _finite_abs(value: float) -> float:
    return abs(value) if np.isfinite(value) else 0.0


def _expand(prob: QpProblem, red: _Reduced, z: np.ndarray, y: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    x = red.x0 + red.Z @ z
    lam = np.zeros(prob.m_in)
    lam[red.rows] = y
    return x, lam


def _polish(
    prob: QpProblem,
    red: _Reduced,
    lower_active: np.ndarray,
    upper_active: np.ndarray,
    tol: float
) -> Optional[QpSolution]:
    """Solve the KKT system with the guessed active bounds held as equalities."""
    upper_active = upper_active & ~lower_active
    nz = red.P.shape[0]
    A_lo = red.A[lower_active]
    A_up = red.A[upper_active]
    n_lo, n_up = A_lo.shape[0], A_up.shape[0]
    size = nz + n_lo + n_up
    kkt = np.zeros((size, size))
    kkt[:nz, :nz] = red.P
    kkt[:nz, nz:nz + n_lo] = A_lo.T
    kkt[:nz, nz + n_lo:] = A_up.T
    kkt[nz:nz + n_lo, :nz] = A_lo
    kkt[nz + n_lo:, :nz] = A_up
    rhs = np.concatenate([-red.q, red.lower[lower_active], red.upper[upper_active]])
    if size == 0:
        solution = np.zeros(0)
    else:
        solution = minimum_norm_solve(kkt, rhs)
    y = np.zeros(red.A.shape[0])
    y[lower_active] = solution[nz:nz + n_lo]
    y[upper_active] = solution[nz + n_lo:]
    x, lam = _expand(prob, red, solution[:nz], y)
    return _certified(prob, x, lam, tol)


def solve(
    prob: QpProblem,
    tol: float = Config.QP_TOL,
    max_iter: int = Config.QP_MAX_ITER,
    rho: float = Config.QP_RHO,
    sigma: float = Config.QP_SIGMA,
    alpha: float = Config.QP_ALPHA,
    check_every: int = Config.QP_CHECK_EVERY
) -> QpSolution:
    """Solve ``prob`` to scaled KKT tolerance ``tol``.

    Status is ``optimal`` only when the returned point, with its
    multipliers, meets ``tol`` on every KKT residual of the original
    problem. Inconsistent equalities or a certificate of infeasible bounds
    give ``infeasible``; running out of iterations returns the iterate with
    the smallest merit as ``max-iterations``.
    """
    x0, Z, consistent = eliminate_equalities(prob)
    if not consistent:
        logger.debug("qp_equalities_inconsistent")
        return _finish(prob, x0, np.zeros(prob.m_in), QpStatus.INFEASIBLE, 0, [])

    red, feasible = _reduce(prob, x0, Z, tol)
    if not feasible:
        logger.debug("qp_constant_row_infeasible")
        return _finish(prob, x0, np.zeros(prob.m_in), QpStatus.INFEASIBLE, 0, [])

    m = red.A.shape[0]
    nz = red.P.shape[0]
    none_active = np.zeros(m, dtype=bool)
    candidate = _polish(prob, red, none_active, none_active, tol)
    if candidate is not None:
        return candidate
    if m == 0:
        # unbounded below on the equality manifold
        z = minimum_norm_solve(red.P, -red.q) if nz else np.zeros(0)
        x, lam = _expand(prob, red, z, np.zeros(0))
        return _finish(prob, x, lam, QpStatus.MAX_ITERATIONS, 0, [])
    if nz == 0:
        # equalities fix x and it violates a bound
        return _finish(prob, x0, np.zeros(prob.m_in), QpStatus.INFEASIBLE, 0, [])

    solver = _setup_osqp(red, tol, rho, sigma, alpha, min(check_every, max_iter))
    best_z, best_y, best_merit = np.zeros(nz), np.zeros(m), np.inf
    history: List[float] = []
    iterations = 0

    while iterations < max_iter:
        chunk = min(check_every, max_iter - iterations)
        solver.update_settings(max_iter=chunk, check_termination=chunk)
        res = solver.solve()
        status = res.info.status
        iterations += max(int(res.info.iter), 1)

        if status == INFEASIBLE_STATUS:
            logger.debug("qp_primal_infeasible", iteration=iterations, status=status)
            x, lam = _expand(prob, red, best_z, best_y)
            return _finish(prob, x, lam, QpStatus.INFEASIBLE, iterations, history)
        if status == UNBOUNDED_STATUS:
            logger.debug("qp_unbounded", iteration=iterations, status=status)
            break
        if res.x is None or not np.all(np.isfinite(res.x)):
            logger.debug("qp_osqp_failed", iteration=iterations, status=status)
            break

        z = np.asarray(res.x, dtype=float)
        y = np.asarray(res.y, dtype=float)
        merit = _merit(red, z, y)
        if merit < best_merit:
            best_z, best_y, best_merit = z.copy(), y.copy(), merit
            history.append(merit)

        # OSQP duals: negative on an active lower bound, positive on an active upper bound
        Az = red.A @ z
        w = np.clip(Az, red.lower, red.upper)
        lower_active = w - red.lower < -y / rho
        upper_active = red.upper - w < y / rho
        candidate = _polish(prob, red, lower_active, upper_active, tol)
        if candidate is None:
            threshold = np.sqrt(tol) * (1.0 + _inf_norm(y))
            candidate = _polish(prob, red, y < -threshold, y > threshold, tol)
        if candidate is None:
            x, lam = _expand(prob, red, z, y)
            candidate = _certified(prob, x, lam, tol)
        if candidate is not None:
            return _with_progress(candidate, iterations, history)
        if status == CONVERGED_STATUS:
            # converged to OSQP tolerance without meeting tol on the original problem
            logger.debug("qp_uncertified", iteration=iterations, merit=merit)
            break

    logger.debug("qp_max_iterations", max_iter=max_iter, iterations=iterations, merit=best_merit)
    x, lam = _expand(prob, red, best_z, best_y)
    return _finish(prob, x, lam, QpStatus.MAX_ITERATIONS, iterations, history)


def _setup_osqp(red: _Reduced, tol: float, rho: float, sigma: float, alpha: float, chunk: int) -> osqp.OSQP:
    settings = {
        "warm_start": True,
        "adaptive_rho": False,
        "polish": True,
        "eps_abs": tol,
        "eps_rel": tol,
        "eps_prim_inf": Config.QP_INFEASIBILITY_TOL,
        "eps_dual_inf": Config.QP_INFEASIBILITY_TOL,
        "rho": rho,
        "sigma": sigma,
        "alpha": alpha,
        "max_iter": chunk,
        "check_termination": chunk,
        "verbose": False
    }
    P = sparse.triu(sparse.csc_matrix(0.5 * (red.P + red.P.T)), format='csc')
    solver = osqp.OSQP()
    solver.setup(P=P, q=red.q, A=sparse.csc_matrix(red.A), l=red.lower, u=red.upper, **settings)
    return solver


def _merit(red: _Reduced, z: np.ndarray, y: np.ndarray) -> float:
    """Largest relative primal or dual residual of the reduced problem."""
    Az = red.A @ z
    w = np.clip(Az, red.lower, red.upper)
    r_prim = _inf_norm(Az - w) / (1.0 + max(_inf_norm(Az), _inf_norm(w)))
    Pz = red.P @ z
    Aty = red.A.T @ y
    r_dual = _inf_norm(Pz + red.q + Aty) / (1.0 + max(_inf_norm(Pz), _inf_norm(red.q), _inf_norm(Aty)))
    return max(r_prim, r_dual)



def _with_progress(solution: QpSolution, iterations: int, history: List[float]) -> QpSolution:
    return QpSolution(
        x=solution.x,
        objective=solution.objective,
        status=solution.status,
        kkt=solution.kkt,
        iterations=iterations,
        nu=solution.nu,
        lam=solution.lam,
        merit_history=history
    )
