"""Exception types shared across the package."""


class FlywheelError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(FlywheelError, ValueError):
    """Invalid argument values (bad counts, length mismatches, bad bounds)."""


class DomainError(FlywheelError, ValueError):
    """Curve parameter outside the valid range [0, S]."""


class GeometryError(FlywheelError, ValueError):
    """Profile geometry is unusable, e.g. radius not monotone along the curve."""


class NumericalError(FlywheelError, RuntimeError):
    """A numerical procedure failed (singular system, non-converged quadrature)."""


class ConfigError(FlywheelError, ValueError):
    """Configuration file is malformed or contains invalid values."""
