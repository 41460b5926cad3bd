"""
Born-Markov damping rate and Lamb shift of the emitter.

Both are linear in the effective density, so each is also reported per
bath. The Lamb shift is the principal value
``S(w) = P int_{-W}^{W} J_eff(w') / (w - w') dw'`` over the cutoff window.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .quadrature import integrate
from .thermal import Density, SphereBaths, ThermalConfig, j_td


@dataclass(frozen=True)
class DampingRate:
    total: float
    medium: float
    scattering: float


@dataclass(frozen=True)
class MarkovReport:
    omega: np.ndarray
    gamma: np.ndarray
    gamma_M: np.ndarray
    gamma_S: np.ndarray
    shift: np.ndarray
    shift_M: np.ndarray
    shift_S: np.ndarray
    cutoff: float


def damping_rate(medium: Density, scattering: Density, omega: float, cfg: ThermalConfig) -> DampingRate:
    """``gamma = 2 pi J_eff(w)`` split into its medium and scattering parts."""
    _check_window(omega, cfg.cutoff, closed=True)
    gm = 2 * math.pi * float(j_td(medium, omega, cfg.beta_M))
    gs = 2 * math.pi * float(j_td(scattering, omega, cfg.beta_S))
    return DampingRate(gm + gs, gm, gs)


def _check_window(omega: float, cutoff: float, closed: bool):
    inside = abs(omega) <= cutoff if closed else abs(omega) < cutoff
    if not inside:
        raise ValueError(f"omega = {omega} outside the cutoff window of half-width {cutoff}")


def lamb_shift(
    effective: Density,
    omega: float,
    cutoff: float,
    points: Sequence[float] = (),
    atol: float = 1e-10,
) -> float:
    """Principal-value shift by singularity subtraction.

    ``int [J(w') - J(w)] / (w - w') dw' + J(w) ln|(w + W) / (w - W)|``;
    the subtracted integrand is regular at ``w' = w``, which is kept as a
    panel boundary so no node lands on it.
    """
    _check_window(omega, cutoff, closed=False)
    j0 = float(np.asarray(effective(np.array([omega])))[0])

    def integrand(w):
        return (np.asarray(effective(w), dtype=float) - j0) / (omega - w)

    pts = sorted(set(points) | {-p for p in points} | {0.0, omega})
    res = integrate(integrand, -cutoff, cutoff, points=pts, atol=atol)
    return float(res.value) + j0 * math.log(abs((omega + cutoff) / (omega - cutoff)))


def markov_report(baths: SphereBaths, cfg: ThermalConfig, omegas) -> MarkovReport:
    """Damping rates and Lamb shifts, per bath and total, on a list of frequencies."""
    w = np.atleast_1d(np.asarray(omegas, dtype=float))
    sm, ss = baths.slope("medium"), baths.slope("scattering")

    def medium_td(x):
        return np.atleast_1d(j_td(baths.medium, x, cfg.beta_M, sm))

    def scattering_td(x):
        return np.atleast_1d(j_td(baths.scattering, x, cfg.beta_S, ss))

    pts = baths.resonance_frequencies()
    gm = np.array([2 * math.pi * medium_td(np.array([x]))[0] for x in w])
    gs = np.array([2 * math.pi * scattering_td(np.array([x]))[0] for x in w])
    lm = np.array([lamb_shift(medium_td, x, cfg.cutoff, pts) for x in w])
    ls = np.array([lamb_shift(scattering_td, x, cfg.cutoff, pts) for x in w])
    return MarkovReport(w, gm + gs, gm, gs, lm + ls, lm, ls, cfg.cutoff)
