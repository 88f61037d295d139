"""Exception types raised across the package."""

from __future__ import annotations


class RicciCoreError(Exception):
    """Base class for every error raised by riccicore."""


class GraphParseError(RicciCoreError, ValueError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class EmptyGraphError(RicciCoreError, ValueError):
    pass


class UndefinedWalkError(RicciCoreError, ValueError):
    """Lazy walk requested from an isolated node with alpha < 1."""


class DisconnectedSupportError(RicciCoreError, ValueError):
    """Two measures whose supports are not mutually reachable."""


class ContractViolation(RicciCoreError, ValueError):
    pass


class NumericInstabilityError(RicciCoreError, ArithmeticError):
    def __init__(self, message: str, quotients: tuple[float, ...] = ()):
        super().__init__(message)
        self.quotients = quotients


class StepTooLargeError(RicciCoreError, ArithmeticError):
    def __init__(self, edge: int, weight: float, iteration: int | None = None):
        where = "" if iteration is None else f" at iteration {iteration}"
        super().__init__(f"edge {edge} weight became {weight!r}{where}; step size too large")
        self.edge = edge
        self.weight = weight
        self.iteration = iteration


class ConfigError(RicciCoreError, ValueError):
    pass


class ConvergenceError(RicciCoreError, ArithmeticError):
    pass


class CurvatureError(RicciCoreError):
    """Per-edge failure inside a curvature field, annotated with the edge id."""

    def __init__(self, edge: int, cause: Exception):
        super().__init__(f"edge {edge}: {cause}")
        self.edge = edge
        self.cause = cause
