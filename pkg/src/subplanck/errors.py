"""Exception types raised by the numerical layers."""


class SubplanckError(Exception):
    """Base class for all package errors."""


class ParameterError(SubplanckError, ValueError):
    """A state, reservoir, or grid parameter violates its admissible range."""


class RealnessError(SubplanckError, ArithmeticError):
    """An analytically real quantity came back with a large imaginary residue.

    This is a transcription-bug detector: the chessboard series and the
    assembled Wigner values are real by construction, so a residue above
    tolerance means a coefficient was mistyped, not that the input is bad.
    """


class TruncationError(SubplanckError, ArithmeticError):
    """Fock-space truncation is inadequate for the requested construction."""


class QuadratureError(SubplanckError, ArithmeticError):
    """Reference quadrature failed to reach the requested tolerance."""


class StepControlError(SubplanckError, ArithmeticError):
    """The density-matrix integrator could not satisfy its step-halving test."""


class NoCrossingError(SubplanckError, ArithmeticError):
    """A root scan found no sign change over its search interval."""


class TruncationWarning(UserWarning):
    """Displaced support is close to the truncation edge; values may degrade."""
