"""Exception types raised across the package.

Most inherit from ValueError so callers can use either the specific type or
the builtin family.
"""


class WavechoError(Exception):
    """Base class for all package errors."""


class InvalidCodeError(WavechoError, ValueError):
    """Malformed four-digit network code."""


class EmptyNetworkError(WavechoError, ValueError):
    """Requested a reservoir with zero units."""


class UnsupportedTopologyError(WavechoError, ValueError):
    """Field count outside the supported {1, 4} set."""


class ShapeError(WavechoError, ValueError):
    """Array dimensions do not agree."""


class ConfigurationError(WavechoError, ValueError):
    """Inconsistent or unknown configuration values."""


class DegenerateSpectrumError(WavechoError, ValueError):
    """Matrix spectral radius is (numerically) zero; cannot rescale."""


class NumericInputError(WavechoError, ValueError):
    """Non-finite values fed into a numeric routine."""


class InvalidRegularizerError(WavechoError, ValueError):
    """Ridge parameter must be positive."""


class DowndateSingularityError(WavechoError, ArithmeticError):
    """Removing a sample would make the inverse Gram matrix singular.

    The caller should rebuild the readout from a batch solve.
    """


class InconsistentSpectrumError(WavechoError, ValueError):
    """Fourier coefficients violate conjugate symmetry for a real signal."""


class InsufficientDataError(WavechoError, ValueError):
    """Gauge series too short for the requested protocol."""


class DivergenceError(WavechoError, ArithmeticError):
    """Free-running prediction left the plausible elevation range."""


class InvalidSeaStateError(WavechoError, ValueError):
    """Nonpositive significant wave height or peak period."""


class ResolutionError(WavechoError, ValueError):
    """Run duration too short to resolve the wave spectrum."""


class DryingError(WavechoError, ArithmeticError):
    """Water depth reached zero; the solver does not handle dry beds."""


class SolverInstabilityError(WavechoError, ArithmeticError):
    """Flume time step collapsed or state became non-finite."""
