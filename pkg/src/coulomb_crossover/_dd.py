"""Vectorised double-double arithmetic for cancellation-prone series.

A real double-double is a pair ``(hi, lo)`` of float arrays with
``|lo| <= ulp(hi)/2``; a complex one is a pair of real double-doubles.
Only the handful of operations needed by the Kummer series is provided.
"""

import numpy as np

_SPLITTER = 134217729.0  # 2**27 + 1


def two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def quick_two_sum(a, b):
    s = a + b
    return s, b - (s - a)


def _split(a):
    t = _SPLITTER * a
    hi = t - (t - a)
    return hi, a - hi


def two_prod(a, b):
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


def add(x, y):
    s, e = two_sum(x[0], y[0])
    t, f = two_sum(x[1], y[1])
    e = e + t
    s, e = quick_two_sum(s, e)
    e = e + f
    return quick_two_sum(s, e)


def neg(x):
    return -x[0], -x[1]


def mul(x, y):
    p, e = two_prod(x[0], y[0])
    e = e + (x[0] * y[1] + x[1] * y[0])
    return quick_two_sum(p, e)


def div(x, y):
    q1 = x[0] / y[0]
    r = add(x, neg(mul((q1, 0.0 * q1), y)))
    q2 = r[0] / y[0]
    r = add(r, neg(mul((q2, 0.0 * q2), y)))
    q3 = r[0] / y[0]
    s = quick_two_sum(q1, q2)
    return add(s, (q3, 0.0 * q3))


def cmul(x, y):
    """Product of complex double-doubles ``x = (re, im)``."""
    re = add(mul(x[0], y[0]), neg(mul(x[1], y[1])))
    im = add(mul(x[0], y[1]), mul(x[1], y[0]))
    return re, im


def cdiv(x, y):
    den = add(mul(y[0], y[0]), mul(y[1], y[1]))
    re = add(mul(x[0], y[0]), mul(x[1], y[1]))
    im = add(mul(x[1], y[0]), neg(mul(x[0], y[1])))
    return div(re, den), div(im, den)


def cadd(x, y):
    return add(x[0], y[0]), add(x[1], y[1])


def from_complex(z):
    z = np.asarray(z, dtype=complex)
    zero = np.zeros(z.shape)
    return (z.real.copy(), zero), (z.imag.copy(), zero.copy())


def to_complex(x):
    return (x[0][0] + x[0][1]) + 1j * (x[1][0] + x[1][1])
