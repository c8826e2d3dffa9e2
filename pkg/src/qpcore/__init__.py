from .problem import QpProblem, QpSolution, QpStatus, KktResiduals
from .kkt import kkt_residuals
from .solver import solve, eliminate_equalities
from .archive import dump_problem, load_problem

__all__ = [
    'QpProblem',
    'QpSolution',
    'QpStatus',
    'KktResiduals',
    'kkt_residuals',
    'solve',
    'eliminate_equalities',
    'dump_problem',
    'load_problem'
]
