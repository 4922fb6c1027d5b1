"""Exception hierarchy shared by all lommel modules."""


class LommelError(Exception):
    """Base class for every error raised by this package."""


class DomainError(LommelError, ValueError):
    """Parameters or arguments outside the region where a function is defined."""


class NonConvergence(LommelError, ArithmeticError):
    """A series did not meet its truncation rule within the term cap."""


class QuadratureFailure(LommelError, ArithmeticError):
    """Adaptive quadrature could not reach its tolerance."""


class ConvergenceFailure(LommelError, ArithmeticError):
    """Root refinement failed inside a bracket."""


class PoleHit(LommelError, ZeroDivisionError):
    """Evaluation point coincides with a tabulated zero of a denominator."""


class WindowMismatch(LommelError, ValueError):
    """Two zero tables do not describe the same window or parameter."""


class MissingZeroTable(LommelError, ValueError):
    """A zero table required to bound a window was not supplied or is empty."""
