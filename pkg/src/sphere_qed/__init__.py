"""Spectral densities, thermal baths and emitter dynamics near a dispersive sphere."""
from .exceptions import (
    BondDimensionError,
    ConfigError,
    NumericalError,
    OrderOverflowError,
    QuadratureError,
    SeriesConvergenceError,
    SphereQEDError,
)
from .materials import Debye, Drude, NormalizationContext, Vacuum, characteristic_density, permittivity
from .spectral import DensityKind, Orientation, SphereEmitterGeometry, evaluate_series, sweep
from .thermal import SphereBaths, ThermalConfig

__version__ = "0.1.0"

__all__ = [
    "BondDimensionError", "ConfigError", "NumericalError", "OrderOverflowError",
    "QuadratureError", "SeriesConvergenceError", "SphereQEDError",
    "Debye", "Drude", "NormalizationContext", "Vacuum", "characteristic_density", "permittivity",
    "DensityKind", "Orientation", "SphereEmitterGeometry", "evaluate_series", "sweep",
    "SphereBaths", "ThermalConfig", "__version__",
]
