"""Numerically stable special functions for the filter construction.

All modified-Bessel work is done in scaled form e^-beta * I_n(beta); the
unscaled I_n overflows for the beta values reached by tight thresholds.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import special as _sp

# scipy's Amos-based ive is reliable well past 1e8 but returns NaN for
# beta around 2e9 and above; beyond the cutoff a seeded recurrence is used.
_IVE_DIRECT_MAX = 1.0e8

_INV_E = math.exp(-1.0)


def bessel_i_scaled(n, beta: float):
    """Scaled modified Bessel function of the first kind, e^-beta * I_n(beta).

    Args:
        n: order (non-negative integer, scalar or array).
        beta: positive argument.

    Returns:
        float or ndarray matching the shape of n.
    """
    if beta <= 0:
        raise ValueError("beta must be positive")
    n_arr = np.asarray(n)
    if np.any(n_arr < 0):
        raise ValueError("order must be non-negative")
    if beta <= _IVE_DIRECT_MAX:
        out = _sp.ive(n_arr, beta)
        return float(out) if np.isscalar(n) or n_arr.ndim == 0 else out
    seq = bessel_i_scaled_sequence(int(n_arr.max()), beta)
    out = seq[n_arr]
    return float(out) if np.isscalar(n) or n_arr.ndim == 0 else out


def bessel_i_scaled_sequence(nmax: int, beta: float) -> np.ndarray:
    """All orders 0..nmax of e^-beta * I_n(beta) as one array.

    For beta above the scipy cutoff, orders 0 and 1 are seeded with the
    large-argument asymptotic series and the rest filled by the upward
    recurrence i_{n+1} = i_{n-1} - (2n/beta) i_n.  Relative error grows
    like exp(nmax^2 / beta); the filter construction keeps nmax^2/beta
    bounded by a small constant, so this stays near machine precision.
    """
    if beta <= 0:
        raise ValueError("beta must be positive")
    if nmax < 0:
        raise ValueError("nmax must be non-negative")
    if beta <= _IVE_DIRECT_MAX:
        return _sp.ive(np.arange(nmax + 1), beta)
    out = np.empty(nmax + 1)
    out[0] = _ive_asymptotic(0, beta)
    if nmax == 0:
        return out
    out[1] = _ive_asymptotic(1, beta)
    prev, cur = out[0], out[1]
    inv = 2.0 / beta
    for n in range(1, nmax):
        prev, cur = cur, prev - inv * n * cur
        if cur <= 1e-306:
            out[n + 1:] = 0.0
            return out
        out[n + 1] = cur
    return out


def _ive_asymptotic(order: int, beta: float) -> float:
    # Hankel expansion of e^-z I_n(z); converges fast since beta >> order^2
    mu = 4.0 * order * order
    term = tot = 1.0
    for k in range(1, 30):
        term *= -(mu - (2 * k - 1) ** 2) / (k * 8.0 * beta)
        tot += term
        if abs(term) < 1e-18:
            break
    return tot / math.sqrt(2.0 * math.pi * beta)


def lambert_w0(x: float) -> float:
    """Principal branch of the Lambert-W function, w * e^w = x for x >= -1/e.

    Halley iteration from a branch-aware initial guess, with the
    branch-point series taking over near x = -1/e.  Stops at relative
    residual 1e-12.
    """
    if x < -_INV_E:
        if x > -_INV_E - 1e-15:
            x = -_INV_E
        else:
            raise ValueError("lambert_w0 requires x >= -1/e")
    if x == 0.0:
        return 0.0
    p2 = 2.0 * (math.e * x + 1.0)
    if p2 < 0.0:
        p2 = 0.0
    if p2 < 1e-5:
        # series around the branch point w(-1/e) = -1
        p = math.sqrt(p2)
        return -1.0 + p - p2 / 3.0 + (11.0 / 72.0) * p * p2 - (43.0 / 540.0) * p2 * p2
    if x < -0.2:
        w = -1.0 + math.sqrt(p2) - p2 / 3.0
    elif x < math.e:
        w = math.log1p(x)
    else:
        lx = math.log(x)
        w = lx - math.log(lx)
    for _ in range(100):
        ew = math.exp(w)
        f = w * ew - x
        if abs(f) <= 1e-13 * abs(x):
            break
        wp1 = w + 1.0
        w -= f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1))
    return w


def f_threshold(beta: float, eps: float) -> float:
    """Solution t > beta of (e*beta/t)^t * e^-beta = eps.

    Closed form (ln(1/eps) - beta) / W((1/e)((1/beta) ln(1/eps) - 1)).
    """
    if beta <= 0:
        raise ValueError("beta must be positive")
    if not 0.0 < eps < 1.0:
        raise ValueError("eps must lie in (0, 1); for eps >= 1 use t = beta")
    log_inv = -math.log(eps)
    u = log_inv / beta - 1.0
    if abs(u) < 1e-13:
        return math.e * beta
    return (log_inv - beta) / lambert_w0(u / math.e)


def harmonic_half(d: int) -> float:
    """Harmonic number at half-integer order, H_{d + 1/2}.

    Forward recurrence from H_{1/2} = 2 - 2 ln 2.
    """
    if d < 0:
        raise ValueError("d must be non-negative")
    if d == 0:
        return 2.0 - 2.0 * math.log(2.0)
    ks = np.arange(1, d + 1, dtype=float)
    return 2.0 - 2.0 * math.log(2.0) + math.fsum(1.0 / (ks + 0.5))


def erf(x):
    """Error function (vectorized)."""
    if np.isscalar(x):
        return math.erf(x)
    return _sp.erf(np.asarray(x, dtype=float))
