"""Wall-wall interaction potential of a dislocation pile-up.

A vertical wall of equispaced edge dislocations interacts with a parallel
wall through the purely repulsive pair potential

    V(s) = s*coth(s) - log(2*sinh(s))
         = 2|s|/(exp(2|s|) - 1) - log(1 - exp(-2|s|)),

which is even, decreasing on (0, infinity), integrable with
integral(0, inf) V = pi^2/6, and has a strictly positive Fourier transform.
This module provides the potential, its first two derivatives, its tail
integrals (expressed through the dilogarithm), the signed antiderivative
used for exact cell integrals of step densities, the second tail moment
that drives the finite-size correction of the first-order energy, and the
closed-form Fourier transform.

All functions accept scalars or numpy arrays and are pure; the only cache
(second tail moment) is guarded by ``functools.lru_cache`` and therefore
safe under concurrent use.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from scipy.integrate import quad

# integral of V over (0, inf); V is even so the full-line integral is twice this
HALF_MASS = math.pi**2 / 6.0

SQRT_HALF_MASS = math.sqrt(HALF_MASS)

# switch between the coth/log and exponential closed forms of V: the first
# cancels catastrophically for large s, the second underflows gracefully
_FORM_SWITCH = 1.0

# beyond this point every tail quantity underflows double precision
_TAIL_CUTOFF = 360.0


def _as_array(x):
    arr = np.asarray(x, dtype=float)
    return arr, arr.ndim == 0


def _restore(arr, scalar):
    return float(arr) if scalar else arr


def interaction(s, order: int = 0):
    """Evaluate the wall interaction potential or one of its derivatives.

    order 0 returns V(s), order 1 the odd derivative V'(s) = -s/sinh(s)^2,
    order 2 the even second derivative V''(s) = (2s*cosh(s) - sinh(s))/sinh(s)^3.
    The potential is singular at s = 0 (logarithmically for order 0); a zero
    argument raises ``ValueError``.
    """
    if order not in (0, 1, 2):
        raise ValueError(f"order must be 0, 1 or 2, got {order!r}")
    s_arr, scalar = _as_array(s)
    if np.any(s_arr == 0.0):
        raise ValueError("interaction potential is singular at s = 0")

    m = np.abs(s_arr)
    small = m <= _FORM_SWITCH
    out = np.empty_like(m)

    if order == 0:
        ms = m[small]
        out[small] = ms / np.tanh(ms) - np.log(2.0 * np.sinh(ms))
        ml = m[~small]
        q = np.exp(-2.0 * ml)
        out[~small] = 2.0 * ml * q / (1.0 - q) - np.log1p(-q)
    elif order == 1:
        ss = s_arr[small]
        out[small] = -ss / np.sinh(ss) ** 2
        sl = s_arr[~small]
        q = np.exp(-2.0 * np.abs(sl))
        out[~small] = -4.0 * sl * q / (1.0 - q) ** 2
    else:
        # evaluate on |s| so the even symmetry is exact in floating point
        ms = m[small]
        sh = np.sinh(ms)
        out[small] = (2.0 * ms * np.cosh(ms) - sh) / sh**3
        ml = m[~small]
        q = np.exp(-2.0 * ml)
        out[~small] = 4.0 * q * (2.0 * ml * (1.0 + q) - (1.0 - q)) / (1.0 - q) ** 3

    return _restore(out, scalar)


def _dilog_series(z):
    """Power series sum_k z^k / k^2 for 0 <= z <= 1/2, truncated below 1e-16."""
    out = np.zeros_like(z)
    term = np.array(z, copy=True)
    k = 1
    while True:
        out += term / k**2
        if not np.any(np.abs(term) > 1e-16 * k**2) or k > 80:
            break
        k += 1
        term *= z
    return out


def dilog(z):
    """Dilogarithm Li2 on [0, 1].

    Direct series for z <= 1/2, the reflection identity
    Li2(z) = pi^2/6 - log(z)*log(1-z) - Li2(1-z) for z > 1/2; absolute
    error below 1e-12 on the whole interval.
    """
    z_arr, scalar = _as_array(z)
    if np.any((z_arr < 0.0) | (z_arr > 1.0)):
        raise ValueError("dilog is only provided on [0, 1]")
    out = np.empty_like(z_arr)
    small = z_arr <= 0.5
    out[small] = _dilog_series(z_arr[small])
    large = ~small
    if np.any(large):
        zl = z_arr[large]
        res = np.full_like(zl, HALF_MASS)
        interior = zl < 1.0
        zi = zl[interior]
        res[interior] = (
            HALF_MASS - np.log(zi) * np.log1p(-zi) - _dilog_series(1.0 - zi)
        )
        out[large] = res
    return _restore(out, scalar)


def tail_integral(y):
    """Tail integral W(y) = integral(y, inf) V = Li2(e^{-2y}) - y*log(1 - e^{-2y}).

    Defined for y >= 0, strictly decreasing, W(0) = pi^2/6, exponentially
    small for large y.
    """
    y_arr, scalar = _as_array(y)
    if np.any(y_arr < 0.0):
        raise ValueError("tail integral requires y >= 0")
    out = np.empty_like(y_arr)
    zero = y_arr == 0.0
    out[zero] = HALF_MASS
    pos = ~zero
    if np.any(pos):
        yp = y_arr[pos]
        q = np.exp(-2.0 * yp)
        out[pos] = dilog(q) - yp * np.log1p(-q)
    return _restore(out, scalar)


def cumulative(t):
    """Signed antiderivative Phi(t) = integral(0, t) V = sign(t)*(a - W(|t|)).

    Odd and increasing with limits +-pi^2/6; integral(p, q) V equals
    Phi(q) - Phi(p) for any p < q, which is what turns convolutions of V
    with step densities into closed-form expressions.
    """
    t_arr, scalar = _as_array(t)
    out = np.sign(t_arr) * (HALF_MASS - tail_integral(np.abs(t_arr)))
    return _restore(out, scalar)


@lru_cache(maxsize=None)
def _second_tail_moment_cached(key: float) -> float:
    if key >= _TAIL_CUTOFF:
        return 0.0
    value, _ = quad(
        lambda t: tail_integral(t), key, np.inf, epsabs=1e-10, epsrel=1e-12, limit=200
    )
    return value


def second_tail_moment(x) -> float:
    """Second tail moment W2(x) = integral(0, inf) V(y + x) * y dy.

    Computed as integral(x, inf) W (integration by parts; the boundary term
    vanishes by the exponential decay of V) with adaptive quadrature at
    tolerance 1e-10, memoised on x rounded to 1e-12.  Non-negative and
    decreasing; W2(0) is the first moment of V.
    """
    x = float(x)
    if x < 0.0:
        raise ValueError("second tail moment requires x >= 0")
    return _second_tail_moment_cached(round(x, 12))


def first_moment() -> float:
    """First moment integral(0, inf) y V(y) dy, computed once by quadrature."""
    return second_tail_moment(0.0)


# Taylor coefficients of the Fourier transform around omega = 0 in powers of
# u = pi^2 * omega; the closed form is 0/0 there.
_FT_C0 = math.pi**2 / 3.0
_FT_C2 = -2.0 * math.pi**2 / 45.0
_FT_C4 = 2.0 * math.pi**2 / 315.0
_FT_C6 = -19.0 * math.pi**2 / 25200.0

_FT_SERIES_SWITCH = 1e-4


def fourier(omega):
    """Fourier transform of V (convention V^(w) = integral V(x) e^{-2 pi i x w} dx).

    Closed form [cosh(pi^2 w) - pi^2 w / sinh(pi^2 w)] / [2 w sinh(pi^2 w)],
    even and strictly positive, with value 2a = pi^2/3 at w = 0 where the
    closed form is replaced by its Taylor expansion.
    """
    w_arr, scalar = _as_array(omega)
    w = np.abs(w_arr)
    out = np.empty_like(w)
    small = w < _FT_SERIES_SWITCH
    if np.any(small):
        u2 = (math.pi**2 * w[small]) ** 2
        out[small] = _FT_C0 + u2 * (_FT_C2 + u2 * (_FT_C4 + u2 * _FT_C6))
    large = ~small
    if np.any(large):
        wl = w[large]
        u = math.pi**2 * wl
        q = np.exp(-2.0 * u)
        em = -np.expm1(-2.0 * u)  # 1 - q without cancellation near the switch
        coth_u = 1.0 + 2.0 * q / em
        u_over_sinh2 = 4.0 * u * q / em**2
        out[large] = (coth_u - u_over_sinh2) / (2.0 * wl)
    return _restore(out, scalar)


def normalized_tail(x):
    """Tail integral scaled by the inverse square-root mass: W(x)/sqrt(a).

    Non-negative, non-increasing and integrable on (0, inf); this is both the
    linear weight of the first-order energy and the right-hand side of the
    boundary-layer equation.
    """
    x_arr, scalar = _as_array(x)
    out = tail_integral(x_arr) / SQRT_HALF_MASS
    return _restore(out, scalar)
