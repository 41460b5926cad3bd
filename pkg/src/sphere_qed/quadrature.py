"""
Batched adaptive Gauss-Kronrod (7/15) quadrature.

Each refinement round evaluates the integrand once on the nodes of every
unfinished panel, so integrands that are cheap per point only when called
on large arrays (the multipole series) are used efficiently. The integrand
may return extra trailing axes; the error test uses the largest component.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from .exceptions import QuadratureError

_XK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

# full 15-point rule on [-1, 1]
_NODES = np.concatenate([-_XK[:-1], _XK[::-1]])
_W15 = np.concatenate([_WK[:-1], _WK[::-1]])
_W7 = np.zeros(15)
_W7[[1, 3, 5, 7, 9, 11, 13]] = np.concatenate([_WG[:-1], _WG[::-1]])


@dataclass(frozen=True)
class QuadResult:
    value: np.ndarray | complex | float
    error: float
    panels: int
    evaluations: int


def _panel_rules(f, lo, hi):
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    x = (mid[:, None] + half[:, None] * _NODES[None, :]).ravel()
    fx = np.asarray(f(x))
    fx = fx.reshape((lo.size, 15) + fx.shape[1:])
    hk = half.reshape((-1,) + (1,) * (fx.ndim - 2))
    kron = np.einsum("pn...,n->p...", fx, _W15) * hk
    gauss = np.einsum("pn...,n->p...", fx, _W7) * hk
    err = np.abs(kron - gauss).reshape(lo.size, -1).max(axis=1)
    return kron, err, x.size


def integrate(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    points: Iterable[float] = (),
    atol: float = 1e-9,
    rtol: float = 0.0,
    max_panels: int = 50_000,
) -> QuadResult:
    """Integrate ``f`` over ``[a, b]``, splitting first at ``points`` inside the interval.

    Global strategy: while the summed ``|K15 - G7|`` estimate exceeds
    ``max(atol, rtol * |integral|)``, bisect the worst panels (all of them
    at once, enough to bring the unsplit remainder under half the target).
    """
    if not (np.isfinite(a) and np.isfinite(b)) or not b > a:
        raise ValueError("need finite a < b")
    cuts = np.unique(np.concatenate([[a, b], [p for p in points if a < p < b]]))
    lo, hi = cuts[:-1], cuts[1:]
    val, err, evals = _panel_rules(f, lo, hi)
    min_width = 64 * np.finfo(float).eps * max(abs(a), abs(b), 1.0)
    while True:
        total = val.sum(axis=0)
        tol = max(atol, rtol * float(np.abs(total).max(initial=0.0)))
        err_total = float(err.sum())
        if err_total <= tol:
            break
        splittable = (hi - lo) > min_width
        order = np.argsort(-np.where(splittable, err, -1.0))
        remaining = err_total - np.cumsum(err[order])
        count = int(np.searchsorted(-remaining, -0.5 * tol)) + 1
        pick = order[:count]
        pick = pick[splittable[pick]]
        if pick.size == 0:
            raise QuadratureError(
                f"quadrature error estimate {err_total:.3g} above tolerance {tol:.3g} "
                "and no panel can be split further"
            )
        if lo.size + pick.size > max_panels:
            raise QuadratureError(f"adaptive quadrature exceeded {max_panels} panels on [{a}, {b}]")
        mid = 0.5 * (lo[pick] + hi[pick])
        new_lo = np.concatenate([lo[pick], mid])
        new_hi = np.concatenate([mid, hi[pick]])
        nval, nerr, n = _panel_rules(f, new_lo, new_hi)
        evals += n
        keep = np.ones(lo.size, dtype=bool)
        keep[pick] = False
        lo = np.concatenate([lo[keep], new_lo])
        hi = np.concatenate([hi[keep], new_hi])
        val = np.concatenate([val[keep], nval])
        err = np.concatenate([err[keep], nerr])
    value = total if np.ndim(total) else total[()]
    return QuadResult(value, err_total, int(lo.size), evals)
