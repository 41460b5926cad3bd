"""
Medium-assisted, scattering-assisted and total spectral densities of an
emitter outside a homogeneous sphere.

Frequencies are reduced, ``w = omega / omega_ref``, and densities are
returned in units of the characteristic density ``J0``. The three series
(medium, scattering, and the Green-function rate ``Gamma / 2 pi``) are
summed independently from shared Mie coefficients; their sum rule
``J_M + J_S = Gamma / 2 pi`` is therefore a genuine cross-check.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import ConfigError, SeriesConvergenceError
from .materials import MaterialModel, NormalizationContext, characteristic_density, reduced_permittivity
from .mie import log_mie, wiscombe_order
from .special import N_MAX_ORDER, log_riccati

SERIES_RTOL = 1e-12
_CHUNK = 8192


class Orientation(str, enum.Enum):
    TANGENTIAL = "tangential"
    RADIAL = "radial"


class DensityKind(str, enum.Enum):
    MEDIUM = "medium"
    SCATTERING = "scattering"
    VACUUM = "vacuum"
    TOTAL = "total"


@dataclass(frozen=True)
class SphereEmitterGeometry:
    """Sphere radius ``a`` and emitter distance ``d`` from the centre, in metres."""

    radius: float
    distance: float
    orientation: Orientation = Orientation.TANGENTIAL
    dipole_moment: float = 1e-29

    def __post_init__(self):
        object.__setattr__(self, "orientation", Orientation(self.orientation))
        if not self.radius > 0:
            raise ConfigError("sphere radius must be positive")
        if not self.distance > self.radius:
            raise ConfigError("emitter must lie strictly outside the sphere (d > a)")
        if not self.dipole_moment > 0:
            raise ConfigError("dipole moment must be positive")

    @property
    def distance_ratio(self) -> float:
        return self.distance / self.radius


@dataclass(frozen=True)
class SeriesResult:
    """Per-point values of the three series and the order at which each converged."""

    omega: np.ndarray
    medium: np.ndarray
    scattering: np.ndarray
    total: np.ndarray
    order: np.ndarray
    failed: np.ndarray


def _converged_order(terms: np.ndarray, total: np.ndarray) -> np.ndarray:
    """First order after which three consecutive terms are negligible.

    ``terms`` has shape ``(N, P)`` for orders 1..N; returns 0 where the
    criterion is never met.
    """
    small = np.abs(terms) <= SERIES_RTOL * np.abs(total) + 1e-300
    run = small[:-2] & small[1:-1] & small[2:]
    hit = run.any(axis=0)
    first = np.argmax(run, axis=0) + 1  # order n of the first negligible term
    return np.where(hit, first + 2, 0)


def _series_terms(w, ka, kd, eps, orientation: Orientation, n_max: int):
    lm = log_mie(ka, eps, n_max)
    t = log_riccati(kd, n_max)
    n = np.arange(n_max + 1, dtype=float)[:, None]
    log_x = np.log(kd.astype(complex))[None, :]
    la, lb = lm.log_A, lm.log_B
    with np.errstate(over="ignore", under="ignore", invalid="ignore"):
        if orientation is Orientation.TANGENTIAL:
            c = 0.75 * (2 * n + 1)
            jx = np.exp(t.log_j)
            ahx = np.exp(la + t.log_h)
            dpx = np.exp(t.log_dpsi - log_x)
            log_dzx = t.log_dzeta - log_x
            bdzx = np.exp(lb + log_dzx)
            s = c * (np.abs(jx + ahx) ** 2 + np.abs(dpx + bdzx) ** 2)
            m = -c * (
                np.exp(lb + 2 * log_dzx.real).real
                + np.abs(bdzx) ** 2
                + np.exp(la + 2 * t.log_h.real).real
                + np.abs(ahx) ** 2
            )
            g = c * (np.exp(lb + 2 * log_dzx) + np.exp(la + 2 * t.log_h)).real
        else:
            c = 1.5 * n * (n + 1) * (2 * n + 1)
            log_hx = t.log_h - log_x
            jx = np.exp(t.log_j - log_x)
            bhx = np.exp(lb + log_hx)
            s = c * np.abs(jx + bhx) ** 2
            m = -c * (np.exp(lb + 2 * log_hx.real).real + np.abs(bhx) ** 2)
            g = c * np.exp(lb + 2 * log_hx).real
    return s[1:], m[1:], g[1:]


def _reduced_inputs(geometry: SphereEmitterGeometry, material: MaterialModel, w: np.ndarray):
    norm = characteristic_density(material, geometry.dipole_moment, geometry.radius)
    kra = norm.size_parameter
    ka = w * kra
    kd = ka * geometry.distance_ratio
    eps = reduced_permittivity(material, geometry.radius, w)
    return ka, kd, np.atleast_1d(eps)


def starting_order(kd_max: float, distance_ratio: float) -> int:
    """First truncation guess: far-field Wiscombe estimate or near-field decay ``(a/d)**(2n)``."""
    near = int(np.ceil(8.5 / np.log10(distance_ratio))) + 3
    return min(N_MAX_ORDER, max(wiscombe_order(kd_max), near))


def evaluate_series(
    geometry: SphereEmitterGeometry,
    material: MaterialModel,
    omega,
    strict: bool = True,
) -> SeriesResult:
    """Evaluate ``J_M``, ``J_S`` and ``Gamma/2pi`` (all in ``J0`` units) on reduced frequencies.

    Truncation is adaptive per point: the order starts from a Wiscombe
    estimate at ``k d`` and doubles until each series has three consecutive
    terms below ``1e-12`` of its partial sum, up to ``N_MAX_ORDER``.
    """
    w = np.atleast_1d(np.asarray(omega, dtype=float))
    if np.any(~(w > 0)):
        raise ValueError("spectral densities require omega > 0")
    npts = w.size
    medium = np.full(npts, np.nan)
    scattering = np.full(npts, np.nan)
    total = np.full(npts, np.nan)
    order = np.zeros(npts, dtype=int)
    if npts == 0:
        return SeriesResult(w, medium, scattering, total, order, np.zeros(0, dtype=bool))
    ka, kd, eps = _reduced_inputs(geometry, material, w)
    failed = np.zeros(npts, dtype=bool)
    for lo in range(0, npts, _CHUNK):
        pending = np.arange(lo, min(lo + _CHUNK, npts))
        n_max = starting_order(float(kd[pending].max()), geometry.distance_ratio)
        while pending.size:
            s, m, g = _series_terms(
                w[pending], ka[pending], kd[pending], eps[pending], geometry.orientation, n_max
            )
            ssum, msum, gsum = s.sum(0), m.sum(0), 1.0 + g.sum(0)
            orders = np.stack(
                [_converged_order(s, ssum), _converged_order(m, msum), _converged_order(g, gsum)]
            )
            ok = np.all(orders > 0, axis=0)
            done = pending[ok]
            w3 = w[done] ** 3
            scattering[done] = w3 * ssum[ok]
            medium[done] = w3 * msum[ok]
            total[done] = w3 * gsum[ok]
            order[done] = orders[:, ok].max(axis=0)
            pending = pending[~ok]
            if pending.size == 0 or n_max >= N_MAX_ORDER:
                break
            n_max = min(N_MAX_ORDER, 2 * n_max)
        failed[pending] = True
    pending = np.flatnonzero(failed)
    if strict and pending.size:
        raise SeriesConvergenceError(
            f"multipole series did not converge by order {N_MAX_ORDER} at "
            f"omega/omega_ref = {w[pending][:5].tolist()}"
        )
    return SeriesResult(w, medium, scattering, total, order, failed)


def _scalar_or_array(values: np.ndarray, omega):
    return float(values[0]) if np.ndim(omega) == 0 else values


def j_scattering(geometry: SphereEmitterGeometry, material: MaterialModel, omega):
    """Scattering-assisted density ``J_S / J0`` at reduced frequency ``omega``."""
    return _scalar_or_array(evaluate_series(geometry, material, omega).scattering, omega)


def j_medium(geometry: SphereEmitterGeometry, material: MaterialModel, omega):
    """Medium-assisted density ``J_M / J0`` at reduced frequency ``omega``."""
    return _scalar_or_array(evaluate_series(geometry, material, omega).medium, omega)


def gamma_total(geometry: SphereEmitterGeometry, material: MaterialModel, omega):
    """``Gamma / (2 pi J0)`` from the Green-function series."""
    return _scalar_or_array(evaluate_series(geometry, material, omega).total, omega)


def j_vacuum(norm: NormalizationContext, omega):
    """Free-space density in rad/s at angular frequency ``omega`` in rad/s."""
    w = np.asarray(omega, dtype=float)
    if np.any(w < 0):
        raise ValueError("omega must be non-negative")
    out = norm.characteristic_density * (w / norm.reference_frequency) ** 3
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class SpectralDensityTable:
    kind: DensityKind
    grid: np.ndarray
    values: np.ndarray
    geometry: SphereEmitterGeometry
    material: MaterialModel
    truncation_order: np.ndarray
    failures: tuple = field(default=())

    def __post_init__(self):
        if self.grid.size > 1 and np.any(np.diff(self.grid) <= 0):
            raise ValueError("grid must be strictly increasing")

    def __len__(self) -> int:
        return self.grid.size


def sweep(kind, geometry: SphereEmitterGeometry, material: MaterialModel, grid, strict: bool = False):
    """Tabulate one density family on a reduced-frequency grid.

    Points whose series fail to converge are recorded in ``failures`` and
    carry NaN values, unless ``strict`` is set.
    """
    kind = DensityKind(kind)
    grid = np.asarray(grid, dtype=float).ravel()
    if grid.size > 1 and np.any(np.diff(grid) <= 0):
        raise ValueError("grid must be strictly increasing")
    if kind is DensityKind.VACUUM:
        return SpectralDensityTable(kind, grid, grid**3, geometry, material, np.zeros(grid.size, dtype=int))
    res = evaluate_series(geometry, material, grid, strict=strict)
    values = {
        DensityKind.MEDIUM: res.medium,
        DensityKind.SCATTERING: res.scattering,
        DensityKind.TOTAL: res.total,
    }[kind]
    failures = tuple(float(x) for x in grid[res.failed])
    return SpectralDensityTable(kind, grid, values, geometry, material, res.order, failures)
