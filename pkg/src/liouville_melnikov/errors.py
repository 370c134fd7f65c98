"""Exception hierarchy."""


class MelnikovError(Exception):
    """Base class for errors raised by this package."""


class ParameterError(MelnikovError, ValueError):
    """A parameter lies outside the range where a construction is valid."""


class DomainError(MelnikovError, ValueError):
    """The conformal factor ``f + g`` is not positive where it is evaluated."""


class NonFiniteError(MelnikovError, FloatingPointError):
    """A quadrature or integration sample came out NaN or infinite."""


class ConvergenceError(MelnikovError, RuntimeError):
    """An iterative refinement ran out of budget before meeting its tolerance."""
