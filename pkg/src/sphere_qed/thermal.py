"""
Temperature-dressed and effective spectral densities, and bath correlation
functions computed two independent ways.

Frequencies are reduced by ``omega_ref``, inverse temperatures are the
products ``beta * hbar * omega_ref`` and densities are in ``J0`` units.
A *base density* is any callable mapping an array of positive reduced
frequencies to the physical (one-sided) density there.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .exceptions import ConfigError
from .materials import Debye, Drude, MaterialModel, characteristic_density
from .quadrature import integrate
from .resonances import (
    DEBYE_DEFAULT_E_MODES,
    DEBYE_DEFAULT_H_MODES,
    dielectric_resonance,
    plasmonic_resonance,
)
from .spectral import SphereEmitterGeometry, evaluate_series

Density = Callable[[np.ndarray], np.ndarray]

ZERO_TEMPERATURE_BETA = 1e6
DEFAULT_CUTOFF = 3.0
LAURENT_THRESHOLD = 1e-4
SLOPE_STEP = 1e-5


@dataclass(frozen=True)
class ThermalConfig:
    """Inverse temperatures of the medium (``beta_M``) and scattering (``beta_S``) baths."""

    beta_M: float
    beta_S: float
    cutoff: float = DEFAULT_CUTOFF

    def __post_init__(self):
        for name in ("beta_M", "beta_S"):
            b = getattr(self, name)
            if not (math.isfinite(b) and b > 0):
                raise ConfigError(f"{name} must be finite and positive (use {ZERO_TEMPERATURE_BETA:g} for T = 0)")
        if not (math.isfinite(self.cutoff) and self.cutoff > 0):
            raise ConfigError("cutoff must be finite and positive")

    @classmethod
    def zero_temperature(cls, cutoff: float = DEFAULT_CUTOFF) -> "ThermalConfig":
        return cls(ZERO_TEMPERATURE_BETA, ZERO_TEMPERATURE_BETA, cutoff)


def _as_array(omega):
    return np.atleast_1d(np.asarray(omega, dtype=float))


def _restore(values: np.ndarray, omega):
    return float(values[0]) if np.ndim(omega) == 0 else values


def low_frequency_slope(base: Density, h: float = SLOPE_STEP) -> float:
    """``J'(0)`` by Richardson extrapolation of ``J(w)/w`` (assumes ``J`` odd-analytic at 0)."""
    v = np.asarray(base(np.array([h, 2 * h])), dtype=float)
    return float((4 * v[0] / h - v[1] / (2 * h)) / 3)


def j_extended(base: Density, omega):
    """Odd extension ``sign(w) J(|w|)``."""
    w = _as_array(omega)
    out = np.zeros_like(w)
    nz = w != 0
    if nz.any():
        out[nz] = np.sign(w[nz]) * np.asarray(base(np.abs(w[nz])), dtype=float)
    return _restore(out, omega)


def _occupation_weight(x: np.ndarray) -> np.ndarray:
    """``(1 + coth(x/2)) / 2`` for ``x != 0``, i.e. ``1 + n(x)`` for ``x > 0`` and ``n(|x|)`` below."""
    out = np.empty_like(x)
    small = np.abs(x) < LAURENT_THRESHOLD
    big = ~small
    with np.errstate(over="ignore"):
        out[big] = 1.0 / -np.expm1(-x[big])
    xs = x[small]
    out[small] = 0.5 * (1.0 + 2.0 / xs + xs / 6.0)
    return out


def j_td(base: Density, omega, beta: float, slope: float | None = None):
    """Temperature-dressed density ``J_ext(w) (1 + coth(beta w / 2)) / 2``.

    At ``w = 0`` the finite limit ``J'(0) / beta`` is returned; ``slope``
    supplies ``J'(0)`` when known, otherwise it is extrapolated numerically.
    """
    if not beta > 0:
        raise ValueError("beta must be positive")
    w = _as_array(omega)
    out = np.zeros_like(w)
    nz = w != 0
    if nz.any():
        # for w < 0 both factors are negative: J(|w|) n(beta |w|)
        out[nz] = _as_array(j_extended(base, w[nz])) * _occupation_weight(beta * w[nz])
    if (~nz).any():
        s = low_frequency_slope(base) if slope is None else slope
        out[~nz] = s / beta
    return _restore(out, omega)


def j_eff(medium: Density, scattering: Density, omega, cfg: ThermalConfig):
    """Effective density: sum of the medium and scattering densities dressed at their own temperatures."""
    return _restore(
        _as_array(j_td(medium, omega, cfg.beta_M)) + _as_array(j_td(scattering, omega, cfg.beta_S)),
        omega,
    )


def j_eff_equal_temperature(total: Density, omega, beta: float):
    """Closed form for ``beta_M = beta_S``: ``sign(w) (1 + coth(beta w/2)) Gamma(|w|) / (4 pi)``.

    ``total`` returns ``Gamma / (2 pi)`` in ``J0`` units, so this is an
    independent path through the Green-function series.
    """
    return j_td(total, omega, beta)


def coth_half(x):
    """``coth(x/2)`` with the Laurent form near zero."""
    x = _as_array(x)
    if np.any(x == 0):
        raise ValueError("coth(x/2) is singular at x = 0")
    out = np.empty_like(x)
    small = np.abs(x) < LAURENT_THRESHOLD
    out[small] = 2.0 / x[small] + x[small] / 6.0
    out[~small] = 1.0 / np.tanh(0.5 * x[~small])
    return out


def theta_factor(phase, x):
    """Thermal kernel ``coth(x/2) cos(phase) - i sin(phase)`` with ``x = beta hbar omega``."""
    p = np.asarray(phase, dtype=float)
    c = coth_half(x).reshape(np.shape(x)) if np.ndim(x) else coth_half(x)[0]
    out = c * np.cos(p) - 1j * np.sin(p)
    return complex(out) if np.ndim(out) == 0 else out


def _times(t):
    tt = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(tt < 0):
        raise ValueError("correlation times must be non-negative")
    return tt


def correlation_direct(
    base: Density,
    beta: float,
    cutoff: float,
    t,
    points: Sequence[float] = (),
    atol: float = 1e-9,
):
    """One-sided thermal correlation ``int_0^cutoff J(w) Theta(w t; beta w) dw``."""
    tt = _times(t)

    def integrand(w):
        jw = np.asarray(base(w), dtype=float)
        c = jw * coth_half(beta * w)
        phase = np.outer(w, tt)
        return c[:, None] * np.cos(phase) - 1j * jw[:, None] * np.sin(phase)

    res = integrate(integrand, 0.0, cutoff, points=points, atol=atol)
    val = np.asarray(res.value)
    return complex(val[0]) if np.ndim(t) == 0 else val


def correlation_fourier(
    effective: Density,
    cutoff: float,
    t,
    points: Sequence[float] = (),
    atol: float = 1e-9,
):
    """Two-sided transform ``int_{-cutoff}^{cutoff} J_eff(w) exp(-i w t) dw``.

    ``effective`` must accept frequencies of either sign.
    """
    tt = _times(t)

    def integrand(w):
        je = np.asarray(effective(w), dtype=float)
        return je[:, None] * np.exp(-1j * np.outer(w, tt))

    pts = sorted(set(points) | {-p for p in points} | {0.0})
    res = integrate(integrand, -cutoff, cutoff, points=pts, atol=atol)
    val = np.asarray(res.value)
    return complex(val[0]) if np.ndim(t) == 0 else val


@dataclass(frozen=True)
class EffectiveDensityTable:
    grid: np.ndarray
    values: np.ndarray
    medium_td: np.ndarray
    scattering_td: np.ndarray
    vacuum_td: np.ndarray
    config: ThermalConfig

    def __post_init__(self):
        if np.any(np.abs(self.grid) > self.config.cutoff * (1 + 1e-12)):
            raise ValueError("grid exceeds the cutoff")


class SphereBaths:
    """Medium and scattering densities of one sphere-emitter configuration.

    The last batch of series evaluations is memoized so that asking for the
    medium and scattering densities on the same frequencies costs one
    series evaluation.
    """

    def __init__(self, geometry: SphereEmitterGeometry, material: MaterialModel):
        self.geometry = geometry
        self.material = material
        self.normalization = characteristic_density(material, geometry.dipole_moment, geometry.radius)
        self._last: tuple[bytes, object] | None = None
        self._slopes: dict[str, float] = {}

    def _series(self, w):
        w = np.ascontiguousarray(np.asarray(w, dtype=float))
        key = w.tobytes()
        last = self._last
        if last is not None and last[0] == key:
            return last[1]
        res = evaluate_series(self.geometry, self.material, w)
        self._last = (key, res)
        return res

    def medium(self, w) -> np.ndarray:
        return self._series(w).medium

    def scattering(self, w) -> np.ndarray:
        return self._series(w).scattering

    def total(self, w) -> np.ndarray:
        """``Gamma / (2 pi J0)``."""
        return self._series(w).total

    @staticmethod
    def vacuum(w) -> np.ndarray:
        return np.asarray(w, dtype=float) ** 3

    def slope(self, which: str) -> float:
        if which not in self._slopes:
            self._slopes[which] = low_frequency_slope(getattr(self, which))
        return self._slopes[which]

    def resonance_frequencies(self) -> list[float]:
        """Predicted resonance positions, used as quadrature breakpoints."""
        kra = self.normalization.size_parameter
        if isinstance(self.material, Drude):
            return [plasmonic_resonance(n, kra) for n in range(1, 9)]
        if isinstance(self.material, Debye):
            modes = [("H", n, l) for n, l in DEBYE_DEFAULT_H_MODES] + [("E", n, l) for n, l in DEBYE_DEFAULT_E_MODES]
            return sorted(dielectric_resonance(f, n, l, kra) for f, n, l in modes)
        return []

    def effective(self, cfg: ThermalConfig) -> Density:
        """``J_eff`` as a callable over frequencies of either sign."""
        sm, ss = self.slope("medium"), self.slope("scattering")

        def jeff(w):
            return _as_array(j_td(self.medium, w, cfg.beta_M, sm)) + _as_array(
                j_td(self.scattering, w, cfg.beta_S, ss)
            )

        return jeff

    def effective_table(self, cfg: ThermalConfig, grid) -> EffectiveDensityTable:
        g = _as_array(grid)
        pos = np.unique(np.abs(g[g != 0]))
        if pos.size:
            self._series(pos)  # one series pass covers both signs
        jm = _as_array(j_td(self._cached(pos, "medium"), g, cfg.beta_M, self.slope("medium")))
        js = _as_array(j_td(self._cached(pos, "scattering"), g, cfg.beta_S, self.slope("scattering")))
        jv = _as_array(j_td(self.vacuum, g, cfg.beta_S, 0.0))
        return EffectiveDensityTable(g, jm + js, jm, js, jv, cfg)

    def _cached(self, pos: np.ndarray, which: str) -> Density:
        values = getattr(self._series(pos), which)

        def lookup(w):
            w = np.asarray(w, dtype=float)
            idx = np.searchsorted(pos, w)
            if not np.all(pos[np.minimum(idx, pos.size - 1)] == w):
                return getattr(self, which)(w)
            return values[idx]

        return lookup
