"""Exception hierarchy shared by all spincat modules."""


class SpincatError(Exception):
    """Base class for every error raised by this package."""


class DomainError(SpincatError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class DegenerateSuperpositionError(DomainError):
    """Two coherent components cancel so the superposition has (near) zero norm."""


class NoSqueezingError(DomainError):
    """Squeezing is identically zero (a single atom), so no maximiser exists."""


class DimensionError(SpincatError, ValueError):
    """Matrix or vector dimensions do not agree with the number of atoms."""


class ResolutionError(SpincatError, ValueError):
    """A quadrature grid is too coarse for the requested band limit."""


class GridMismatchError(SpincatError, ValueError):
    """Two sphere fields live on different grids."""


class PreconditionError(SpincatError, ValueError):
    """Input lacks the structure an operation relies on."""


class NumericalError(SpincatError, RuntimeError):
    """A numerical procedure failed to reach its accuracy target."""


class StiffnessError(NumericalError):
    """Adaptive step size collapsed below the representable resolution.

    Attributes
    ----------
    t : float
        Time reached when the integrator gave up.
    smallest_step : float
        Smallest step size attempted.
    """

    def __init__(self, message, t=float("nan"), smallest_step=float("nan")):
        super().__init__(message)
        self.t = t
        self.smallest_step = smallest_step


class InsufficientHorizonError(NumericalError):
    """A time trace ends before the sought crossing has happened."""


class ConfigError(SpincatError, ValueError):
    """Invalid command-line or config-file settings."""
