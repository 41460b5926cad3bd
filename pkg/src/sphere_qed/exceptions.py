"""Exception hierarchy shared by the numerical modules and the CLI."""


class SphereQEDError(Exception):
    """Base class for all package errors."""


class ConfigError(SphereQEDError, ValueError):
    """Invalid user input (bad parameters, malformed configuration)."""


class NumericalError(SphereQEDError, ArithmeticError):
    """A computation could not be completed to the requested accuracy."""


class OrderOverflowError(NumericalError):
    """Requested multipole order exceeds ``N_MAX_ORDER``."""


class SeriesConvergenceError(NumericalError):
    """A multipole series did not converge before the order cap."""


class QuadratureError(NumericalError):
    """Adaptive quadrature failed to reach its tolerance."""


class BondDimensionError(NumericalError):
    """MPS truncation could not meet the error budget within the bond cap."""
