"""Even trigonometric kernels.

The three kernels are entire functions of u:

    vc(u) = cos(sqrt(u))            (cosh for u < 0)
    vs(u) = sin(sqrt(u))/sqrt(u)    (sinh ratio for u < 0, 1 at 0)
    vg(u) = (1 - cos(sqrt(u)))/u    (1/2 at 0)

With u the branch square times the squared block length, one real formula
covers the circular, flat and hyperbolic versions of every rotation,
including null directions where the squared length vanishes.

Near u = 0 a degree-8 Taylor polynomial avoids cancellation; elsewhere
closed forms are used (vg through half-angle squares, which is stable for
small u, unlike the literal 1 - cos difference).
"""

from __future__ import annotations

import math

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import DomainError

_TAYLOR_CUTOFF = 1e-4

_VC_COEF = np.array([(-1.0) ** k / math.factorial(2 * k) for k in range(9)])
_VS_COEF = np.array([(-1.0) ** k / math.factorial(2 * k + 1) for k in range(9)])
_VG_COEF = np.array([(-1.0) ** k / math.factorial(2 * k + 2) for k in range(9)])


def _prepare(u, name):
    arr = np.asarray(u, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name}: input must be finite")
    return arr


def _piecewise(arr, coef, closed_pos, closed_neg):
    out = np.empty_like(arr)
    small = np.abs(arr) < _TAYLOR_CUTOFF
    if np.any(small):
        out[small] = npoly.polyval(arr[small], coef)
    pos = ~small & (arr > 0)
    if np.any(pos):
        out[pos] = closed_pos(np.sqrt(arr[pos]))
    neg = ~small & (arr < 0)
    if np.any(neg):
        out[neg] = closed_neg(np.sqrt(-arr[neg]))
    return out


def vc(u):
    """cos(sqrt(u)), continued through u <= 0 as cosh(sqrt(-u))."""
    arr = _prepare(u, "vc")
    out = _piecewise(arr, _VC_COEF, np.cos, np.cosh)
    return out if arr.ndim else float(out)


def vs(u):
    """sin(sqrt(u))/sqrt(u), continued through u <= 0; vs(0) = 1."""
    arr = _prepare(u, "vs")
    out = _piecewise(
        arr,
        _VS_COEF,
        lambda r: np.sin(r) / r,
        lambda r: np.sinh(r) / r,
    )
    return out if arr.ndim else float(out)


def vg(u):
    """(1 - cos(sqrt(u)))/u, continued through u <= 0; vg(0) = 1/2."""
    arr = _prepare(u, "vg")

    def pos(r):
        s = np.sin(r / 2.0)
        return 2.0 * s * s / (r * r)

    def neg(r):
        s = np.sinh(r / 2.0)
        return 2.0 * s * s / (r * r)

    out = _piecewise(arr, _VG_COEF, pos, neg)
    return out if arr.ndim else float(out)
