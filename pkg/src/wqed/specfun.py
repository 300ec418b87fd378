"""Sine, cosine, and exponential integrals for the field kernels.

The closed-form photon fields are combinations of the principal-branch
exponential integral E1 evaluated just off the imaginary axis, and of the
sine and cosine integrals on the real line.  The decaying pieces of the
kernels only ever need the product e^z E1(z), whose factors separately
overflow and underflow once Re z reaches a few hundred (here it can reach a
few thousand), so that scaled product is computed directly and is the
workhorse of this module.

Two evaluation branches are used, switching at |z| = 6: the ascending power
series near the origin, and a modified Lentz continued fraction farther
out.  The series loses roughly e^|z| * eps to cancellation, which is why
the switch sits at 6 and not further out; the continued fraction needs only
a few dozen terms there and computes the scaled product without any
exponential.  All functions accept scalars or numpy arrays.
"""

from __future__ import annotations

import numpy as np

# Euler-Mascheroni constant to 20 significant digits.
EULER_GAMMA = 0.57721566490153286061

HALF_PI = np.pi / 2.0

# Switch radius between the ascending series and the continued fraction.
_SERIES_RADIUS = 6.0
_SERIES_MAX_TERMS = 120
_CF_MAX_ITER = 5000
_CF_EPS = 1e-15
_CF_TINY = 1e-300


def _as_complex_array(z):
    arr = np.asarray(z, dtype=np.complex128)
    scalar = arr.ndim == 0
    return np.atleast_1d(arr), scalar


def _e1_series(z):
    """Ascending series of E1 for small |z|, principal branch."""
    total = np.zeros_like(z)
    term = np.ones_like(z)
    for k in range(1, _SERIES_MAX_TERMS + 1):
        # term_k = (-1)^{k+1} z^k / (k * k!), built recursively.
        term = term * (-z) / k
        total = total - term / k
        if np.all(np.abs(term) < 1e-20 * (1.0 + np.abs(total))):
            break
    return -EULER_GAMMA - np.log(z) + total


def _e1s_continued_fraction(z):
    """Modified Lentz evaluation of e^z E1(z) for |z| above the switch.

    The Lentz recurrence walks the standard continued fraction
    e^z E1(z) = 1/(z+1-) 1/(z+3-) 4/(z+5-) 9/(z+7-) ..., which converges
    for every z off the negative real axis and involves no exponentials.
    """
    b = z + 1.0
    # Zero denominators get nudged per the usual Lentz prescription.
    b = np.where(b == 0, _CF_TINY, b)
    c = np.full_like(z, 1.0 / _CF_TINY)
    d = 1.0 / b
    h = d.copy()
    active = np.ones(z.shape, dtype=bool)
    for i in range(1, _CF_MAX_ITER + 1):
        a = -float(i * i)
        b = b + 2.0
        d_new = a * d[active] + b[active]
        d_new = np.where(d_new == 0, _CF_TINY, d_new)
        c_new = b[active] + a / c[active]
        c_new = np.where(c_new == 0, _CF_TINY, c_new)
        d_new = 1.0 / d_new
        delta = c_new * d_new
        h[active] = h[active] * delta
        d[active] = d_new
        c[active] = c_new
        still = np.abs(delta - 1.0) >= _CF_EPS
        if not still.any():
            active[active] = False
            break
        active[active] = still
    if active.any():
        raise RuntimeError(
            "continued fraction for e^z E1(z) failed to converge "
            f"within {_CF_MAX_ITER} terms (worst |z| = "
            f"{np.abs(z[active]).min():.3g})"
        )
    return h


def _validate_off_cut(z):
    if np.any(z == 0):
        raise ValueError("E1 is singular at z = 0")
    on_cut = (z.imag == 0) & (z.real < 0)
    if np.any(on_cut):
        raise ValueError("E1 branch cut: argument on the negative real axis")
    if not np.all(np.isfinite(z)):
        raise ValueError("E1 argument must be finite")


def e1_scaled(z):
    """Scaled exponential integral e^z E1(z), principal branch.

    This combination stays of order 1/z for large |z| in any direction,
    which is what the decaying field kernels need: their E1 arguments can
    have real parts of several thousand where E1 alone underflows.

    Parameters
    ----------
    z : complex scalar or array_like
        Arguments anywhere off the negative real axis (the branch cut)
        and nonzero.

    Returns
    -------
    complex scalar or ndarray
    """
    arr, scalar = _as_complex_array(z)
    _validate_off_cut(arr)
    flat = arr.ravel()
    out = np.empty_like(flat)
    small = np.abs(flat) <= _SERIES_RADIUS
    if small.any():
        zs = flat[small]
        out[small] = np.exp(zs) * _e1_series(zs)
    if (~small).any():
        out[~small] = _e1s_continued_fraction(flat[~small])
    out = out.reshape(arr.shape)
    return out[0] if scalar else out


def exp_integral_e1(z):
    """Principal-branch exponential integral E1(z) for complex z.

    Valid off the negative real axis.  For arguments with large negative
    real part the result overflows together with e^{-z}; use
    ``e1_scaled`` in that regime, which is how the field kernels consume
    E1 internally.

    Parameters
    ----------
    z : complex scalar or array_like

    Returns
    -------
    complex scalar or ndarray
    """
    arr, scalar = _as_complex_array(z)
    _validate_off_cut(arr)
    flat = arr.ravel()
    out = np.empty_like(flat)
    small = np.abs(flat) <= _SERIES_RADIUS
    if small.any():
        out[small] = _e1_series(flat[small])
    if (~small).any():
        zl = flat[~small]
        out[~small] = np.exp(-zl) * _e1s_continued_fraction(zl)
    out = out.reshape(arr.shape)
    return out[0] if scalar else out


def _si_ci_series(x):
    """Ascending series of (Si(x), Cin-part) for 0 < x <= switch radius.

    Returns Si(x) and the sum gamma + ln x + sum_k (-1)^k x^{2k}/(2k (2k)!)
    which equals Ci(x).
    """
    x2 = x * x
    si = np.array(x, copy=True)
    term_si = np.array(x, copy=True)
    ci_sum = np.zeros_like(x)
    term_ci = np.ones_like(x)
    for k in range(1, _SERIES_MAX_TERMS + 1):
        two_k = 2 * k
        # Even terms feed Ci, odd terms feed Si; both built recursively.
        term_ci = -term_ci * x2 / ((two_k - 1) * two_k)
        ci_sum = ci_sum + term_ci / two_k
        term_si = -term_si * x2 / (two_k * (two_k + 1))
        si = si + term_si / (two_k + 1)
        if np.all(np.abs(term_si) < 1e-20) and np.all(np.abs(term_ci) < 1e-20):
            break
    ci = EULER_GAMMA + np.log(x) + ci_sum
    return si, ci


def _si_ci_large(x):
    """Si and Ci for x above the switch radius via E1 on the imaginary axis.

    Uses E1(ix) = -Ci(x) + i (Si(x) - pi/2), evaluated through the scaled
    continued fraction; the unwinding factor e^{-ix} has unit modulus so
    nothing can overflow.
    """
    z = 1j * x
    e1 = np.exp(-z) * _e1s_continued_fraction(z.astype(np.complex128))
    ci = -e1.real
    si = e1.imag + HALF_PI
    return si, ci


def sine_integral(x):
    """Sine integral Si(x) = int_0^x sin(u)/u du for real x, any sign.

    Parameters
    ----------
    x : float scalar or array_like

    Returns
    -------
    float scalar or ndarray
    """
    arr = np.asarray(x, dtype=np.float64)
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)
    if not np.all(np.isfinite(arr)):
        raise ValueError("sine_integral argument must be finite")
    mag = np.abs(arr)
    out = np.zeros_like(mag)
    small = (mag > 0) & (mag <= _SERIES_RADIUS)
    if small.any():
        out[small] = _si_ci_series(mag[small])[0]
    large = mag > _SERIES_RADIUS
    if large.any():
        out[large] = _si_ci_large(mag[large])[0]
    out = np.sign(arr) * out
    return out[0] if scalar else out


def si_lower(x):
    """Shifted sine integral si(x) = Si(x) - pi/2.

    This is the variant appearing in the steady-state field formulas; it
    tends to 0 as x -> +inf and to -pi as x -> -inf, and satisfies
    si(x) + si(-x) = -pi identically.
    """
    return sine_integral(x) - HALF_PI


def cosine_integral(x):
    """Cosine integral Ci(x) = -int_x^inf cos(u)/u du for real x > 0.

    Negative or zero arguments raise: the field formulas only ever take
    Ci of the absolute value of a coordinate, and keeping the domain
    strict catches sign mistakes upstream.

    Parameters
    ----------
    x : float scalar or array_like, strictly positive

    Returns
    -------
    float scalar or ndarray
    """
    arr = np.asarray(x, dtype=np.float64)
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)
    if not np.all(np.isfinite(arr)):
        raise ValueError("cosine_integral argument must be finite")
    if np.any(arr <= 0):
        raise ValueError("cosine_integral requires strictly positive arguments")
    out = np.empty_like(arr)
    small = arr <= _SERIES_RADIUS
    if small.any():
        out[small] = _si_ci_series(arr[small])[1]
    if (~small).any():
        out[~small] = _si_ci_large(arr[~small])[1]
    return out[0] if scalar else out
