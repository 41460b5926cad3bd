"""
Dispersive permittivity models and spectral-density normalization.

Frequencies passed to :func:`permittivity` are angular frequencies in the
same unit as the model parameters (rad/s for SI-built models). Everything
downstream of this module works with frequencies reduced by the reference
frequency ``omega_ref = c k_r``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy import constants

from .exceptions import ConfigError

SPEED_OF_LIGHT = constants.c
HBAR = constants.hbar
EPSILON_0 = constants.epsilon_0


@dataclass(frozen=True)
class Drude:
    """``eps = 1 - wp**2 / (w**2 + i nu w)``."""

    plasma_frequency: float
    relaxation_frequency: float = 0.0

    def __post_init__(self):
        if not self.plasma_frequency > 0:
            raise ConfigError("plasma_frequency must be positive")
        if not self.relaxation_frequency >= 0:
            raise ConfigError("relaxation_frequency must be non-negative")


@dataclass(frozen=True)
class Debye:
    """``eps = 1 + chi0 / (1 - i tau w)``."""

    static_susceptibility: float
    relaxation_time: float = 0.0

    def __post_init__(self):
        if not self.static_susceptibility > 0:
            raise ConfigError("static_susceptibility must be positive")
        if not self.relaxation_time >= 0:
            raise ConfigError("relaxation_time must be non-negative")


@dataclass(frozen=True)
class Vacuum:
    """``eps = 1``. Degenerate material used for consistency checks.

    ``reference_frequency`` plays the role of the plasma frequency for
    normalization purposes.
    """

    reference_frequency: float = 1.0


MaterialModel = Union[Drude, Debye, Vacuum]


def permittivity(model: MaterialModel, omega):
    """Relative permittivity at angular frequency ``omega > 0``.

    Accepts a scalar or an array; returns the matching complex type.
    """
    w = np.asarray(omega, dtype=float)
    if np.any(~(w > 0)):
        raise ValueError("permittivity requires omega > 0")
    if isinstance(model, Drude):
        wp, nu = model.plasma_frequency, model.relaxation_frequency
        eps = 1.0 - wp**2 / (w**2 + 1j * nu * w)
    elif isinstance(model, Debye):
        eps = 1.0 + model.static_susceptibility / (1.0 - 1j * model.relaxation_time * w)
    elif isinstance(model, Vacuum):
        eps = np.ones_like(w, dtype=complex)
    else:
        raise TypeError(f"unknown material model {model!r}")
    return complex(eps) if eps.ndim == 0 else eps


def reference_wavenumber(model: MaterialModel, a: float) -> float:
    """``k_p = wp/c`` for Drude, ``k_c = 1/(a sqrt(chi0))`` for Debye."""
    if not a > 0:
        raise ConfigError("sphere radius must be positive")
    if isinstance(model, Drude):
        return model.plasma_frequency / SPEED_OF_LIGHT
    if isinstance(model, Debye):
        return 1.0 / (a * math.sqrt(model.static_susceptibility))
    if isinstance(model, Vacuum):
        return model.reference_frequency / SPEED_OF_LIGHT
    raise TypeError(f"unknown material model {model!r}")


def reference_frequency(model: MaterialModel, a: float) -> float:
    return SPEED_OF_LIGHT * reference_wavenumber(model, a)


@dataclass(frozen=True)
class NormalizationContext:
    reference_wavenumber: float
    characteristic_density: float
    dipole_moment: float
    sphere_radius: float

    @property
    def reference_frequency(self) -> float:
        return SPEED_OF_LIGHT * self.reference_wavenumber

    @property
    def size_parameter(self) -> float:
        """``k_r a``."""
        return self.reference_wavenumber * self.sphere_radius

    @property
    def coupling_strength(self) -> float:
        """``eta = J0 / omega_ref`` (dimensionless)."""
        return self.characteristic_density / self.reference_frequency


def characteristic_density(model: MaterialModel, mu: float, a: float) -> NormalizationContext:
    """Normalization ``J0 = k_r (mu k_r)**2 / (6 pi**2 hbar eps0)`` in rad/s."""
    if not mu > 0:
        raise ConfigError("dipole moment must be positive")
    kr = reference_wavenumber(model, a)
    j0 = kr * (mu * kr) ** 2 / (6.0 * math.pi**2 * HBAR * EPSILON_0)
    return NormalizationContext(kr, j0, mu, a)


def reduced_permittivity(model: MaterialModel, a: float, omega_reduced):
    """Permittivity at ``omega = omega_reduced * omega_ref``."""
    return permittivity(model, np.asarray(omega_reduced, dtype=float) * reference_frequency(model, a))
