"""Exception hierarchy shared by all modules."""


class HscmError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(HscmError, ValueError):
    """An argument is outside the mathematical domain of an operation."""


class QuadratureError(HscmError, RuntimeError):
    """Adaptive quadrature failed to reach the requested tolerance."""


class NumericalInstabilityError(HscmError, RuntimeError):
    """Two independent routes to the same quantity disagree beyond tolerance."""


class ConvergenceError(HscmError, RuntimeError):
    """An iterative solver did not converge within its iteration budget."""


class SizeGuardError(HscmError, ValueError):
    """A quadratic-cost operation was requested above its size guard."""


class InsufficientTailError(HscmError, ValueError):
    """Not enough usable tail data for a tail-exponent fit."""


class EdgeListParseError(HscmError, ValueError):
    """An edge-list file could not be parsed."""

    def __init__(self, path, line_number, message):
        self.path = path
        self.line_number = line_number
        super().__init__(f"{path}:{line_number}: {message}")
