"""
Spherical Bessel, Hankel and Riccati-Bessel functions of complex argument.

All sequences are built in the log domain: ``log j_n(z)`` and ``log h_n(z)``
are accumulated from order-to-order ratios, so that products such as
``A_n h_n(z)**2`` can be formed without intermediate overflow even when
``h_n`` alone would exceed the double range. The public scalar functions
exponentiate and refuse to return non-finite values.

Ratios ``j_n/j_{n-1}`` come from Miller's backward recurrence (stable for
every order); ``h_n/h_{n-1}`` comes from forward recurrence, which is stable
because ``h_n`` is the dominant solution.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.optimize import brentq

from .exceptions import NumericalError, OrderOverflowError

N_MAX_ORDER = 128

_LOG_MINUS_I = -0.5j * math.pi
_TINY = 1e-300


def _check_order(n: int) -> None:
    if n < 0:
        raise ValueError(f"order must be non-negative, got {n}")
    if n > N_MAX_ORDER:
        raise OrderOverflowError(f"order {n} exceeds N_MAX_ORDER={N_MAX_ORDER}")


def _as_complex_array(z) -> np.ndarray:
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    if not np.all(np.isfinite(z)):
        raise ValueError("non-finite argument")
    return z


def _log_sin(z: np.ndarray) -> np.ndarray:
    # np.sin overflows for |Im z| > ~700; switch to the exponential form there.
    out = np.empty_like(z)
    small = np.abs(z.imag) < 30.0
    with np.errstate(divide="ignore"):
        out[small] = np.log(np.sin(z[small]))
    big = ~small
    if np.any(big):
        zb = z[big]
        up = zb.imag > 0
        with np.errstate(over="ignore", invalid="ignore"):
            w = np.where(up, np.exp(2j * zb), np.exp(-2j * zb))
        out[big] = np.where(
            up,
            -1j * zb + np.log((w - 1.0) / 2j),
            1j * zb + np.log((1.0 - w) / 2j),
        )
    return out


def _log_cos(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    small = np.abs(z.imag) < 30.0
    with np.errstate(divide="ignore"):
        out[small] = np.log(np.cos(z[small]))
    big = ~small
    if np.any(big):
        zb = z[big]
        up = zb.imag > 0
        with np.errstate(over="ignore", invalid="ignore"):
            w = np.where(up, np.exp(2j * zb), np.exp(-2j * zb))
        out[big] = np.where(
            up, -1j * zb + np.log((1.0 + w) / 2), 1j * zb + np.log((1.0 + w) / 2)
        )
    return out


@dataclass(frozen=True)
class LogRiccati:
    """Log-domain tables for orders ``0..n_max`` at an array of arguments.

    Every array has shape ``(n_max + 1, len(z))``. Entries are complex
    logarithms; ``-inf`` real part encodes an exact zero.
    """

    z: np.ndarray
    log_j: np.ndarray
    log_h: np.ndarray
    log_dpsi: np.ndarray
    log_dzeta: np.ndarray

    @property
    def n_max(self) -> int:
        return self.log_j.shape[0] - 1


def _miller_start(n_max: int, zabs: float) -> int:
    return int(max(n_max, zabs) + 4.0 * zabs ** (1.0 / 3.0) + 25)


def log_riccati(z, n_max: int) -> LogRiccati:
    """Tabulate ``log j_n``, ``log h_n``, ``log psi_n'``, ``log zeta_n'``.

    ``z`` must be nonzero; the ``z -> 0`` limits are handled by the scalar
    wrappers.
    """
    if n_max > N_MAX_ORDER:
        raise OrderOverflowError(f"order {n_max} exceeds N_MAX_ORDER={N_MAX_ORDER}")
    z = _as_complex_array(z)
    if np.any(z == 0):
        raise ValueError("log_riccati requires nonzero arguments")
    npts = z.size
    log_z = np.log(z)

    # ratios rho[n] = j_n / j_{n-1}, n >= 1, by backward recurrence
    start = _miller_start(n_max, float(np.max(np.abs(z))))
    rho = np.empty((n_max + 2, npts), dtype=complex)
    r = z / (2 * start + 3)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        for k in range(start, 0, -1):
            den = (2 * k + 1) - z * r
            den[den == 0] = _TINY  # Lentz guard: argument sits on a zero of j_k
            r = z / den
            if k <= n_max + 1:
                rho[k] = r

    # forward ratios sigma[n] = h_n / h_{n-1}
    sigma = np.empty((n_max + 1, npts), dtype=complex)
    s = 1.0 / z - 1j
    if n_max >= 1:
        sigma[1] = s
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        for k in range(1, n_max):
            s[s == 0] = _TINY
            s = (2 * k + 1) / z - 1.0 / s
            sigma[k + 1] = s

    log_j = np.empty((n_max + 1, npts), dtype=complex)
    log_h = np.empty((n_max + 1, npts), dtype=complex)
    log_dpsi = np.empty((n_max + 1, npts), dtype=complex)
    log_dzeta = np.empty((n_max + 1, npts), dtype=complex)

    log_j[0] = _log_sin(z) - log_z
    log_h[0] = _LOG_MINUS_I + 1j * z - log_z
    log_dpsi[0] = _log_cos(z)
    log_dzeta[0] = 1j * z
    if n_max >= 1:
        k = np.arange(1, n_max + 1, dtype=float)[:, None]
        with np.errstate(divide="ignore", invalid="ignore"):
            np.cumsum(np.log(rho[1 : n_max + 1]), axis=0, out=log_j[1:])
            log_j[1:] += log_j[0]
            np.cumsum(np.log(sigma[1:]), axis=0, out=log_h[1:])
            log_h[1:] += log_h[0]
            # psi_n' = z j_{n-1} - n j_n = j_{n-1} (z - n rho_n)
            log_dpsi[1:] = log_j[:-1] + np.log(z - k * rho[1 : n_max + 1])
            log_dzeta[1:] = log_h[:-1] + np.log(z - k * sigma[1:])
    return LogRiccati(z, log_j, log_h, log_dpsi, log_dzeta)


def _from_log(log_value, what: str) -> complex:
    with np.errstate(over="ignore"):
        value = complex(np.exp(log_value))
    if not cmath.isfinite(value):
        raise NumericalError(f"{what} is not representable in double precision")
    return value


def _scalar_table(n: int, z) -> LogRiccati:
    _check_order(n)
    return log_riccati(np.array([complex(z)]), n)


def spherical_j(n: int, z) -> complex:
    """Spherical Bessel function ``j_n(z)``."""
    _check_order(n)
    z = complex(z)
    if not cmath.isfinite(z):
        raise ValueError("non-finite argument")
    if z == 0:
        return 1.0 + 0j if n == 0 else 0j
    t = _scalar_table(n, z)
    return _from_log(t.log_j[n, 0], f"j_{n}({z})")


def spherical_h1(n: int, z) -> complex:
    """Spherical Hankel function of the first kind ``h_n^(1)(z)``."""
    _check_order(n)
    z = complex(z)
    if not cmath.isfinite(z):
        raise ValueError("non-finite argument")
    if z == 0:
        raise ValueError("h_n^(1) has a pole at z = 0")
    t = _scalar_table(n, z)
    return _from_log(t.log_h[n, 0], f"h_{n}({z})")


def riccati_psi(n: int, z) -> complex:
    """``psi_n(z) = z j_n(z)``."""
    z = complex(z)
    return z * spherical_j(n, z)


def riccati_zeta(n: int, z) -> complex:
    """``zeta_n(z) = z h_n^(1)(z)``."""
    z = complex(z)
    return z * spherical_h1(n, z)


def riccati_psi_prime(n: int, z) -> complex:
    _check_order(n)
    z = complex(z)
    if not cmath.isfinite(z):
        raise ValueError("non-finite argument")
    if z == 0:
        return 1.0 + 0j if n == 0 else 0j
    t = _scalar_table(n, z)
    return _from_log(t.log_dpsi[n, 0], f"psi_{n}'({z})")


def riccati_zeta_prime(n: int, z) -> complex:
    _check_order(n)
    z = complex(z)
    if not cmath.isfinite(z):
        raise ValueError("non-finite argument")
    if z == 0:
        raise ValueError("zeta_n' has a pole at z = 0")
    t = _scalar_table(n, z)
    return _from_log(t.log_dzeta[n, 0], f"zeta_{n}'({z})")


def _jn_real(n: int, x: float) -> float:
    return spherical_j(n, x).real


@lru_cache(maxsize=None)
def bessel_zero(n: int, ell: int) -> float:
    """``ell``-th positive zero of ``j_n``.

    Zeros of ``j_n`` interlace those of ``j_{n-1}``, so the bracket
    ``(z_{n-1,ell}, z_{n-1,ell+1})`` contains exactly one root.
    """
    if n < 0 or ell < 1:
        raise ValueError("need n >= 0 and ell >= 1")
    if n == 0:
        return ell * math.pi
    lo = bessel_zero(n - 1, ell)
    hi = bessel_zero(n - 1, ell + 1)
    flo = _jn_real(n, lo)
    if flo == 0.0:
        return lo
    if flo * _jn_real(n, hi) > 0:
        raise NumericalError(f"bracket failure for zero ({n}, {ell})")
    return brentq(lambda x: _jn_real(n, x), lo, hi, xtol=1e-14, rtol=4 * np.finfo(float).eps)
