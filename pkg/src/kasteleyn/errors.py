"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes: ParameterError and DomainError give 2,
ConvergenceError and ContourError give 3.
"""


class KasteleynError(Exception):
    """Base class for library errors."""


class DomainError(KasteleynError, ValueError):
    """Input lies outside the domain of a function (cut, parity, index)."""


class ParameterError(KasteleynError, ValueError):
    """Model or run parameter outside its admissible range."""


class GateError(DomainError):
    """A hypothesis gate of an asymptotic formula failed."""

    def __init__(self, gate, message):
        super().__init__(message)
        self.gate = gate


class ConvergenceError(KasteleynError, ArithmeticError):
    """Iterative refinement did not reach its tolerance."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class ContourError(ConvergenceError):
    """A quadrature contour runs too close to a singularity."""
