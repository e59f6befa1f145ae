"""Exception hierarchy shared by every module."""


class LameSpiralError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(LameSpiralError, ValueError):
    """An argument lies outside the domain of the requested operation."""


class NumericalError(LameSpiralError, ArithmeticError):
    """Base class for numerical failures (CLI exit status 2)."""


class ConvergenceError(NumericalError):
    """An iterative procedure did not reach its tolerance within its budget."""


class IntegrandError(NumericalError):
    """An integrand returned NaN or infinity at a quadrature node."""


class ConsistencyError(NumericalError):
    """Two routes to the same quantity disagreed beyond the allowed margin."""


class SimulationError(NumericalError):
    """A trajectory broke one of its audited invariants or its step underflowed."""
