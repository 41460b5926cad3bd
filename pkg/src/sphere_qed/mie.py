"""
Mie coefficients of a homogeneous sphere.

The coefficients follow the sign convention in which ``A_n`` multiplies
``h_n^(1)`` in the transverse-electric channel and ``B_n`` multiplies
``zeta_n'`` in the transverse-magnetic channel, so that ``1 + 2 A_n`` and
``1 + 2 B_n`` are the per-channel S-matrix elements and absorption is
``-(Re A_n + |A_n|**2) >= 0``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import NumericalError, OrderOverflowError
from .materials import SPEED_OF_LIGHT, MaterialModel, permittivity
from .special import N_MAX_ORDER, LogRiccati, log_riccati


@dataclass(frozen=True)
class MieCoefficients:
    order: int
    A: complex
    B: complex
    size_parameter: float


def wiscombe_order(x: float) -> int:
    x = abs(x)
    return min(N_MAX_ORDER, int(math.ceil(x + 4.0 * x ** (1.0 / 3.0) + 10)))


def interior_index(eps):
    """Refractive index ``sqrt(eps)`` on the branch with ``Im >= 0``."""
    m = np.sqrt(np.asarray(eps, dtype=complex))
    return np.where(m.imag < 0, -m, m)


def log_sub(a1, a2):
    """``log(exp(a1) - exp(a2))`` for complex logs, without overflow."""
    a1 = np.asarray(a1, dtype=complex)
    a2 = np.asarray(a2, dtype=complex)
    swap = a2.real > a1.real
    hi = np.where(swap, a2, a1)
    lo = np.where(swap, a1, a2)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = hi + np.log1p(-np.exp(lo - hi))
    out = np.where(swap, out + 1j * math.pi, out)
    both_zero = np.isneginf(hi.real)
    return np.where(both_zero, complex(-np.inf, 0.0), out)


@dataclass(frozen=True)
class LogMie:
    """``log A_n``, ``log B_n`` for ``n = 0..n_max`` (row 0 is unused)."""

    log_A: np.ndarray
    log_B: np.ndarray


def log_mie(x, eps, n_max: int) -> LogMie:
    """Vectorized log-domain Mie coefficients.

    ``x`` is the (real, positive) size parameter ``k a`` and ``eps`` the
    relative permittivity, both arrays of the same shape.
    """
    if n_max > N_MAX_ORDER:
        raise OrderOverflowError(f"order {n_max} exceeds N_MAX_ORDER={N_MAX_ORDER}")
    x = np.atleast_1d(np.asarray(x, dtype=float))
    eps = np.broadcast_to(np.asarray(eps, dtype=complex), x.shape).copy()
    m = interior_index(eps)
    y = m * x
    tx: LogRiccati = log_riccati(x, n_max)
    ty: LogRiccati = log_riccati(y, n_max)
    log_eps = np.log(eps)
    # A_n = [j(x) psi'(y) - j(y) psi'(x)] / [j(y) zeta'(x) - h(x) psi'(y)]
    num_a = log_sub(tx.log_j + ty.log_dpsi, ty.log_j + tx.log_dpsi)
    den_a = log_sub(ty.log_j + tx.log_dzeta, tx.log_h + ty.log_dpsi)
    # B_n carries eps on the interior terms
    num_b = log_sub(tx.log_j + ty.log_dpsi, log_eps + ty.log_j + tx.log_dpsi)
    den_b = log_sub(log_eps + ty.log_j + tx.log_dzeta, tx.log_h + ty.log_dpsi)
    if np.any(np.isneginf(den_a[1:].real)) or np.any(np.isneginf(den_b[1:].real)):
        raise NumericalError("vanishing Mie denominator")
    log_a = num_a - den_a
    log_b = num_b - den_b
    log_a[0] = -np.inf
    log_b[0] = -np.inf
    return LogMie(log_a, log_b)


def mie_coefficients(model: MaterialModel, omega: float, a: float, n_max: int | None = None):
    """Mie coefficients ``A_n, B_n`` for ``n = 1..n_max``.

    ``omega`` in rad/s and ``a`` in metres; ``n_max`` defaults to a
    Wiscombe-type estimate from the size parameter.
    """
    if not omega > 0 or not a > 0:
        raise ValueError("omega and a must be positive")
    x = omega * a / SPEED_OF_LIGHT
    if n_max is None:
        n_max = wiscombe_order(x)
    if not 1 <= n_max <= N_MAX_ORDER:
        raise OrderOverflowError(f"n_max={n_max} outside [1, {N_MAX_ORDER}]")
    eps = permittivity(model, omega)
    lm = log_mie(np.array([x]), np.array([eps]), n_max)
    out = []
    for n in range(1, n_max + 1):
        out.append(
            MieCoefficients(n, complex(np.exp(lm.log_A[n, 0])), complex(np.exp(lm.log_B[n, 0])), x)
        )
    return out
