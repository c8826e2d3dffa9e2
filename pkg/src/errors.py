"""Exception hierarchy shared by every package module.

The command-line front end maps each concrete class to an exit code, so
library code raises these and never calls ``sys.exit`` itself.
"""
from typing import Any, Optional


class DpcError(Exception):
    """Base class for all errors raised by this package.

    ``log`` holds the partial trajectory log when a closed-loop run aborts.
    """
    log: Any = None


class InvalidDepthError(DpcError, ValueError):
    """A Hankel depth or past/future split does not fit the sequence."""


class DimensionError(DpcError, ValueError):
    """Signal or matrix dimensions disagree."""


class InitializationError(DpcError, ValueError):
    """An initial window is shorter than the recursion lag."""


class ConfigError(DpcError, ValueError):
    """Invalid settings or experiment configuration."""


class DivergenceError(DpcError, RuntimeError):
    """A plant integration produced a non-finite state."""


class ExcitationInsufficientError(DpcError):
    """A recorded input is not persistently exciting of the required order."""

    def __init__(
        self,
        message: str,
        order: Optional[int] = None,
        rank: Optional[int] = None,
        required: Optional[int] = None
    ):
        super().__init__(message)
        self.order = order
        self.rank = rank
        self.required = required


class UncertifiedDictionaryError(DpcError):
    """A data dictionary lacks a passing excitation certificate."""


class InconsistentTrajectoryError(DpcError):
    """Requested windows are not a trajectory of the recorded system."""

    def __init__(self, residual: float, tol: float):
        super().__init__(
            f"equality residual {residual:.3e} exceeds consistency tolerance {tol:.3e}"
        )
        self.residual = residual
        self.tol = tol


class InfeasibleControlError(DpcError):
    """The receding-horizon program had no feasible point."""

    def __init__(self, step: int, controller: str, log: Any = None):
        super().__init__(f"{controller}: control program infeasible at step {step}")
        self.step = step
        self.controller = controller
        self.log = log


class DataFormatError(DpcError):
    """A CSV or metadata file could not be parsed."""

    def __init__(self, path: str, line: int, column: str, message: str):
        super().__init__(f"{path}:{line}: column '{column}': {message}")
        self.path = path
        self.line = line
        self.column = column
