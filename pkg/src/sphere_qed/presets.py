"""Builders that turn reduced dimensionless parameters into SI model objects.

Only dimensionless combinations matter for the reduced densities, so the
absolute radius is a free choice; it defaults to 50 nm.
"""
from __future__ import annotations

import math

from .exceptions import ConfigError
from .materials import SPEED_OF_LIGHT, Debye, Drude, Vacuum
from .spectral import Orientation, SphereEmitterGeometry

DEFAULT_RADIUS = 50e-9
DEFAULT_DIPOLE = 1e-29


def _geometry(a, d_over_a, orientation, dipole_moment):
    if not d_over_a > 1:
        raise ConfigError("d/a must exceed 1")
    return SphereEmitterGeometry(a, d_over_a * a, Orientation(orientation), dipole_moment)


def drude_sphere(
    kpa: float = 1.0,
    nu_over_wp: float = 0.01,
    d_over_a: float = 1.75,
    orientation: str = "tangential",
    radius: float = DEFAULT_RADIUS,
    dipole_moment: float = DEFAULT_DIPOLE,
):
    """Drude sphere with ``k_p a = kpa`` and ``nu/omega_p = nu_over_wp``."""
    if not kpa > 0:
        raise ConfigError("k_p a must be positive")
    if not nu_over_wp >= 0:
        raise ConfigError("nu/omega_p must be non-negative")
    wp = kpa * SPEED_OF_LIGHT / radius
    return _geometry(radius, d_over_a, orientation, dipole_moment), Drude(wp, nu_over_wp * wp)


def debye_sphere(
    chi0: float = 15.0,
    tau_wc: float = 0.01 / math.sqrt(15.0),
    d_over_a: float = 1.5,
    orientation: str = "tangential",
    radius: float = DEFAULT_RADIUS,
    dipole_moment: float = DEFAULT_DIPOLE,
):
    """Debye sphere; ``tau_wc`` is the relaxation time in units of ``1/omega_c``."""
    if not chi0 > 0:
        raise ConfigError("chi0 must be positive")
    if not tau_wc >= 0:
        raise ConfigError("tau omega_c must be non-negative")
    wc = SPEED_OF_LIGHT / (radius * math.sqrt(chi0))
    return _geometry(radius, d_over_a, orientation, dipole_moment), Debye(chi0, tau_wc / wc)


def vacuum_sphere(
    kra: float = 1.0,
    d_over_a: float = 1.75,
    orientation: str = "tangential",
    radius: float = DEFAULT_RADIUS,
    dipole_moment: float = DEFAULT_DIPOLE,
):
    """Sphere with ``eps = 1``; ``kra`` fixes the reference size ``k_r a``."""
    if not kra > 0:
        raise ConfigError("k_r a must be positive")
    return (
        _geometry(radius, d_over_a, orientation, dipole_moment),
        Vacuum(kra * SPEED_OF_LIGHT / radius),
    )
