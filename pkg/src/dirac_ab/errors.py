"""Exception types raised across the package."""


class DiracABError(Exception):
    """Base class for all package errors."""


class PoleError(DiracABError, ValueError):
    """A Gamma function or Kummer series was evaluated at a pole."""


class ConvergenceError(DiracABError, ArithmeticError):
    """A series did not converge within its term cap."""


class ClassificationError(DiracABError, ValueError):
    """A formula was applied to a state of the wrong regularity class."""


class NonRealEnergy(DiracABError, ValueError):
    """The squared energy of a level is negative."""


class ChannelError(DiracABError, ValueError):
    """A partial-wave channel is forbidden by the selection rules."""


class DegenerateEnergyError(DiracABError, ZeroDivisionError):
    """E + M vanishes, so the lower spinor component is undefined."""


class IntegrabilityError(DiracABError, ValueError):
    """The radial profile is not square-integrable with measure r dr."""


class SingularSystemError(DiracABError, ArithmeticError):
    """The shell matching system has a vanishing determinant."""


class NoRootError(DiracABError, RuntimeError):
    """Fewer quantization roots were found than requested."""


class GridError(DiracABError, ValueError):
    """A radial grid violates its invariants."""


class DivisionError(DiracABError, ZeroDivisionError):
    """m + alpha vanishes in the lowest-order shell coefficients."""
