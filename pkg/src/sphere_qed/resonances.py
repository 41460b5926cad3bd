"""
Small-sphere resonance frequencies and 3 dB fractional bandwidths.

The expansions are asymptotic in the sphere size: they are meaningful for
``k_r a`` of order one or smaller (the plasmonic case ``k_p a = 1`` and the
dielectric case ``k_c a = 1/sqrt(chi0)`` are the intended regime).

Frequencies are reduced by the reference frequency of the material
(``omega_p`` for Drude, ``omega_c = c/(a sqrt(chi0))`` for Debye).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .exceptions import NumericalError
from .special import bessel_zero

PLASMONIC = "plasmonic"
DIELECTRIC_H = "dielectric_H"
DIELECTRIC_E = "dielectric_E"

_PLASMONIC_NAMES = {1: "dipole", 2: "quadrupole", 3: "octupole", 4: "hexadecapole", 5: "dotriacontapole"}
_H_NAMES = {1: "magnetic dipole", 2: "magnetic quadrupole", 3: "magnetic octupole",
            4: "magnetic hexadecapole", 5: "magnetic dotriacontapole"}
_E_NAMES = {1: "toroidal dipole", 2: "toroidal quadrupole", 3: "toroidal octupole",
            4: "toroidal hexadecapole"}


def log_double_factorial(n: int) -> float:
    """``log(n!!)`` for odd or even ``n >= -1``."""
    if n <= 0:
        return 0.0
    if n % 2:
        k = (n + 1) // 2
        # (2k-1)!! = (2k)! / (2^k k!)
        return math.lgamma(2 * k + 1) - k * math.log(2) - math.lgamma(k + 1)
    k = n // 2
    return k * math.log(2) + math.lgamma(k + 1)


@dataclass(frozen=True)
class Bandwidth:
    total: float
    material: float
    radiative: float


@dataclass(frozen=True)
class ResonanceDescriptor:
    family: str
    n: int
    ell: int
    frequency: float
    bandwidth: Bandwidth
    label: str = ""

    @property
    def fractional_bandwidth(self) -> float:
        return self.bandwidth.total

    @property
    def loss_split(self) -> tuple[float, float]:
        return self.bandwidth.material, self.bandwidth.radiative


def plasmonic_resonance(n: int, kpa: float) -> float:
    """``omega_n / omega_p`` of the n-th plasmonic mode of a Drude sphere."""
    if n < 1 or not kpa > 0:
        raise ValueError("need n >= 1 and k_p a > 0")
    corr = (n + 1) / ((3 + 2 * n) * (4 * n * n - 1)) * kpa**2
    return math.sqrt(n / (2 * n + 1)) * (1.0 - corr)


def plasmonic_fbw(n: int, kpa: float, nu_over_wp: float) -> Bandwidth:
    if nu_over_wp < 0:
        raise ValueError("nu must be non-negative")
    wn = plasmonic_resonance(n, kpa)
    material = nu_over_wp / wn
    log_rad = (
        math.log((n + 1) * (2 * n + 1) / n)
        - 2 * log_double_factorial(2 * n + 1)
        + (2 * n + 1) * math.log(kpa * wn)
    )
    radiative = math.exp(log_rad)
    return Bandwidth(material + radiative, material, radiative)


def dielectric_resonance(family: str, n: int, ell: int, kca: float) -> float:
    """``omega / omega_c`` of an H-type (magnetic) or E-type (electric) dielectric mode.

    The size correction lowers the frequency below the Bessel-zero limit,
    consistent with the exact Mie absorption peaks.
    """
    family = _family(family)
    if n < 1 or ell < 1:
        raise ValueError("need n >= 1 and ell >= 1")
    if family == DIELECTRIC_H:
        return bessel_zero(n - 1, ell) * (1.0 - 0.5 * (2 * n + 1) / (2 * n - 1) * kca**2)
    return bessel_zero(n, ell) * (1.0 - 0.5 * (n + 2) / n * kca**2)


def dielectric_fbw(family: str, n: int, ell: int, kca: float, tau_wc: float) -> Bandwidth:
    family = _family(family)
    if tau_wc < 0:
        raise ValueError("tau must be non-negative")
    w = dielectric_resonance(family, n, ell, kca)
    material = tau_wc * w
    aw_c = kca * w  # a omega / c
    ldf = log_double_factorial(2 * n - 1)
    if family == DIELECTRIC_H:
        z = bessel_zero(n - 1, ell)
        log_rad = math.log(2) - 2 * (math.log(z) + ldf) + (2 * n + 1) * math.log(aw_c)
    else:
        z = bessel_zero(n, ell)
        log_rad = math.log(2) - 2 * (math.log(n * z) + ldf) + (2 * n + 3) * math.log(aw_c)
    radiative = math.exp(log_rad)
    return Bandwidth(material + radiative, material, radiative)


def _family(family: str) -> str:
    key = {"H": DIELECTRIC_H, "E": DIELECTRIC_E, DIELECTRIC_H: DIELECTRIC_H, DIELECTRIC_E: DIELECTRIC_E}
    try:
        return key[family]
    except KeyError:
        raise ValueError(f"unknown dielectric family {family!r}") from None


def plasmonic_modes(orders: Sequence[int], kpa: float, nu_over_wp: float) -> list[ResonanceDescriptor]:
    return [
        ResonanceDescriptor(
            PLASMONIC, n, 0, plasmonic_resonance(n, kpa), plasmonic_fbw(n, kpa, nu_over_wp),
            f"electric {_PLASMONIC_NAMES.get(n, f'n={n}')}",
        )
        for n in orders
    ]


def dielectric_modes(
    modes: Sequence[tuple[str, int, int]], kca: float, tau_wc: float
) -> list[ResonanceDescriptor]:
    out = []
    for family, n, ell in modes:
        fam = _family(family)
        names = _H_NAMES if fam == DIELECTRIC_H else _E_NAMES
        label = names.get(n, f"n={n}") + ("" if ell == 1 else f" (ell={ell})")
        out.append(
            ResonanceDescriptor(
                fam, n, ell, dielectric_resonance(fam, n, ell, kca),
                dielectric_fbw(fam, n, ell, kca, tau_wc), label,
            )
        )
    return out


# Default mode sets labelled in resonance tables
DRUDE_DEFAULT_ORDERS = (1, 2, 3, 4, 5)
DEBYE_DEFAULT_H_MODES = ((1, 1), (2, 1), (3, 1), (1, 2), (4, 1), (2, 2), (5, 1))
DEBYE_DEFAULT_E_MODES = ((1, 1), (2, 1), (3, 1), (1, 2), (4, 1))


@dataclass(frozen=True)
class PeakMatch:
    prediction: ResonanceDescriptor
    peak_frequency: float
    peak_value: float
    offset_in_bandwidths: float


class NoPeakError(NumericalError):
    """No local maximum of the table lies in the search window."""


def local_maxima(grid: np.ndarray, values: np.ndarray) -> list[tuple[float, float]]:
    """Three-point local maxima refined by parabolic interpolation."""
    out = []
    v = np.asarray(values, dtype=float)
    for i in range(1, v.size - 1):
        if v[i] > v[i - 1] and v[i] >= v[i + 1]:
            x0, x1, x2 = grid[i - 1], grid[i], grid[i + 1]
            y0, y1, y2 = v[i - 1], v[i], v[i + 1]
            denom = (x0 - x1) * (x0 - x2) * (x1 - x2)
            A = (x2 * (y1 - y0) + x1 * (y0 - y2) + x0 * (y2 - y1)) / denom
            B = (x2 * x2 * (y0 - y1) + x1 * x1 * (y2 - y0) + x0 * x0 * (y1 - y2)) / denom
            if A < 0:
                xp = -B / (2 * A)
                if x0 <= xp <= x2:
                    C = y1 - A * x1 * x1 - B * x1
                    out.append((xp, A * xp * xp + B * xp + C))
                    continue
            out.append((x1, y1))
    return out


def peak_alignment(table, predictions: Sequence[ResonanceDescriptor], window: float = 3.0):
    """Match each prediction to the nearest local maximum of ``table``.

    The search window spans ``window`` predicted bandwidths either side of
    the predicted frequency. Returns ``(matches, errors)`` where ``errors``
    maps the index of each unmatched prediction to a :class:`NoPeakError`.
    """
    grid = np.asarray(table.grid, dtype=float)
    peaks = local_maxima(grid, np.asarray(table.values, dtype=float))
    matches: list[PeakMatch] = []
    errors: dict[int, NoPeakError] = {}
    for i, pred in enumerate(predictions):
        width = pred.fractional_bandwidth * pred.frequency
        cand = [(abs(x - pred.frequency), x, y) for x, y in peaks if abs(x - pred.frequency) <= window * width]
        if not cand:
            errors[i] = NoPeakError(f"no local maximum within {window} bandwidths of {pred.label or pred.frequency}")
            continue
        _, x, y = min(cand)
        matches.append(PeakMatch(pred, x, y, abs(x - pred.frequency) / width))
    return matches, errors
