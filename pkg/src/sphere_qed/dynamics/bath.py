"""Discretization of the effective density into a finite set of bosonic modes."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..exceptions import ConfigError, NumericalError
from ..thermal import Density

RULES = ("midpoint", "gauss")


@dataclass(frozen=True)
class DiscretizedBath:
    """Mode frequencies and couplings in ``omega_ref`` units, sorted by frequency."""

    frequencies: np.ndarray
    couplings: np.ndarray
    n_plus: int
    n_minus: int
    cutoff: float
    rule: str

    def __post_init__(self):
        if self.frequencies.shape != self.couplings.shape:
            raise ValueError("frequencies and couplings differ in length")
        if self.frequencies.size != self.n_plus + self.n_minus:
            raise ValueError("mode count does not match n_plus + n_minus")
        if self.frequencies.size > 1 and np.any(np.diff(self.frequencies) <= 0):
            raise ValueError("mode frequencies must be strictly increasing")
        if np.any(self.couplings < 0):
            raise ValueError("couplings must be non-negative")

    def __len__(self) -> int:
        return self.frequencies.size

    @property
    def total_weight(self) -> float:
        """``sum g_k^2``, the discrete counterpart of ``eta * int J_eff``."""
        return float(np.sum(self.couplings**2))


def _half_line_nodes(n: int, lo: float, hi: float, rule: str):
    if rule == "midpoint":
        h = (hi - lo) / n
        return lo + (np.arange(n) + 0.5) * h, np.full(n, h)
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (hi - lo) * x + 0.5 * (hi + lo), 0.5 * (hi - lo) * w


def discretize(
    effective: Density,
    cutoff: float,
    n_plus: int,
    n_minus: int,
    eta: float,
    rule: str = "midpoint",
) -> DiscretizedBath:
    """Split ``[-cutoff, 0]`` and ``[0, cutoff]`` into ``n_minus`` and ``n_plus`` modes.

    ``g_k = sqrt(eta * J_eff(w_k) * dw_k)`` where ``dw_k`` is the panel width
    (midpoint) or the Gauss-Legendre weight.
    """
    if rule not in RULES:
        raise ConfigError(f"unknown discretization rule {rule!r}; expected one of {RULES}")
    if n_plus < 1 or n_minus < 0:
        raise ConfigError("need at least one positive-frequency mode and n_minus >= 0")
    if not (cutoff > 0 and eta > 0):
        raise ConfigError("cutoff and eta must be positive")
    wp, dp = _half_line_nodes(n_plus, 0.0, cutoff, rule)
    if n_minus:
        wn, dn = _half_line_nodes(n_minus, -cutoff, 0.0, rule)
    else:
        wn, dn = np.empty(0), np.empty(0)
    w = np.concatenate([wn, wp])
    dw = np.concatenate([dn, dp])
    j = np.asarray(effective(w), dtype=float)
    if not np.all(np.isfinite(j)):
        raise NumericalError("effective density is not finite on the discretization nodes")
    g = np.sqrt(eta * np.clip(j, 0.0, None) * dw)
    return DiscretizedBath(w, g, n_plus, n_minus, cutoff, rule)


def single_mode_bath(frequency: float, coupling: float) -> DiscretizedBath:
    """One mode, mainly for tests of the propagators."""
    return DiscretizedBath(np.array([float(frequency)]), np.array([float(coupling)]), 1, 0, abs(frequency), "explicit")


def explicit_bath(frequencies, couplings) -> DiscretizedBath:
    w = np.asarray(frequencies, dtype=float)
    g = np.asarray(couplings, dtype=float)
    order = np.argsort(w)
    w, g = w[order], g[order]
    n_minus = int(np.sum(w < 0))
    cut = float(np.max(np.abs(w))) if w.size else 0.0
    return DiscretizedBath(w, g, w.size - n_minus, n_minus, cut, "explicit")
