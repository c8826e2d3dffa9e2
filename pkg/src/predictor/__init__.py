from .blocks import PredictorBlocks, build_blocks, assemble_equality, trajectory_span
from .solver import PredictorSolution, minimum_norm_solve, solve_g, predict, dd_simulate

__all__ = [
    'PredictorBlocks',
    'build_blocks',
    'trajectory_span',
    'assemble_equality',
    'PredictorSolution',
    'minimum_norm_solve',
    'solve_g',
    'predict',
    'dd_simulate'
]
