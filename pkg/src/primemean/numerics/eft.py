"""Error-free transformations and emulated directed rounding.

Every function here accepts Python floats or numpy float64 arrays.  The
directed operations return the correctly rounded-down / rounded-up result
of the exact operation, derived from the sign of the exact rounding error
of the round-to-nearest result; no rounding-mode control is needed.

Dekker's product is only error-free away from underflow and from the
splitter's overflow; outside ``[2**-960, 2**960]`` the directed products
and quotients fall back to stepping one ulp outward from the
round-to-nearest result, which is still an enclosure.
"""

from __future__ import annotations

import numpy as np

_SPLITTER = 134217729.0  # 2**27 + 1

_INF = float("inf")
_TINY = 2.0**-960
_HUGE = 2.0**960


def _step(x, direction: float):
    out = np.nextafter(x, direction)
    return float(out) if np.ndim(out) == 0 else out


def next_down(x):
    return _step(x, -_INF)


def next_up(x):
    return _step(x, _INF)


def two_sum(a, b):
    """``(s, e)`` with ``s = fl(a + b)`` and ``s + e == a + b`` exactly."""
    s = a + b
    bb = s - a
    e = (a - (s - bb)) + (b - bb)
    return s, e


def quick_two_sum(a, b):
    """Like :func:`two_sum` but requires ``|a| >= |b|``."""
    s = a + b
    return s, b - (s - a)


def split(a):
    c = _SPLITTER * a
    hi = c - (c - a)
    return hi, a - hi


def two_prod(a, b):
    """``(p, e)`` with ``p = fl(a * b)`` and ``p + e == a * b`` exactly (Dekker)."""
    p = a * b
    ah, al = split(a)
    bh, bl = split(b)
    e = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return p, e


def _select(cond, when_true, when_false):
    if np.ndim(cond) == 0:
        return when_true if cond else when_false
    return np.where(cond, when_true, when_false)


def _round(value, err, direction):
    # value + err is exact; err has the sign of (exact - value)
    if direction < 0:
        return _select(err < 0, next_down(value), value)
    return _select(err > 0, next_up(value), value)


def add_down(a, b):
    s, e = two_sum(a, b)
    return _round(s, e, -1)


def add_up(a, b):
    s, e = two_sum(a, b)
    return _round(s, e, 1)


def sub_down(a, b):
    return add_down(a, -b)


def sub_up(a, b):
    return add_up(a, -b)


def _guarded(value, err, direction, unsafe, exact_zero):
    out = _round(value, err, direction)
    if not np.any(unsafe):
        return out
    stepped = next_down(value) if direction < 0 else next_up(value)
    stepped = _select(exact_zero, value, stepped)
    return _select(unsafe, stepped, out)


def _mul(a, b, direction):
    with np.errstate(over="ignore", invalid="ignore"):
        p, e = two_prod(a, b)
    unsafe = (abs(p) < _TINY) | (abs(a) > _HUGE) | (abs(b) > _HUGE)
    return _guarded(p, e, direction, unsafe, (a == 0) | (b == 0))


def mul_down(a, b):
    return _mul(a, b, -1)


def mul_up(a, b):
    return _mul(a, b, 1)


def _div(a, b, direction):
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        q = a / b
        p, e = two_prod(q, b)
        r = (a - p) - e  # exact remainder a - q*b
    # sign of (a/b - q) = sign(r) * sign(b)
    unsafe = (abs(a) < _TINY) | (abs(q) < _TINY) | (abs(q) > _HUGE) | (abs(b) > _HUGE)
    return _guarded(q, r * np.sign(b), direction, unsafe, a == 0)


def div_down(a, b):
    return _div(a, b, -1)


def div_up(a, b):
    return _div(a, b, 1)
