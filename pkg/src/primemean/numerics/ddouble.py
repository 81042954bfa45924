"""Double-double arithmetic (unevaluated sums ``hi + lo`` of two binary64).

Used by strict mode.  Operations follow the QD library algorithms and
work elementwise on floats or numpy arrays.  The transcendental routines
carry declared absolute/relative error bounds (``LOG_ABS_ERROR``,
``EXP_REL_ERROR``) that callers fold into their certified radii; the
bounds sit several orders of magnitude above the analysed worst case and
are checked against mpmath in the test-suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath
import numpy as np

from ..errors import DomainError, RangeError
from . import eft
from .interval import Interval

__all__ = [
    "DD",
    "dd_add",
    "dd_add_d",
    "dd_sub",
    "dd_mul",
    "dd_mul_d",
    "dd_div",
    "dd_div_d",
    "dd_log_int",
    "dd_exp",
    "dd_to_interval",
    "LN2",
    "LOG_ABS_ERROR",
    "EXP_REL_ERROR",
    "DIV_REL_ERROR",
]

#: Absolute error bound of :func:`dd_log_int` for arguments below 2**50.
LOG_ABS_ERROR = 2.0**-90
#: Relative error bound of :func:`dd_exp` on its domain [-600, 709].
EXP_REL_ERROR = 2.0**-90
#: Relative error bound of :func:`dd_div` / :func:`dd_div_d`.
DIV_REL_ERROR = 2.0**-100


@dataclass(frozen=True)
class DD:
    """Scalar double-double value ``hi + lo``."""

    hi: float
    lo: float = 0.0

    @classmethod
    def from_mpf(cls, x) -> "DD":
        hi = float(x)
        return cls(hi, float(x - hi))

    @classmethod
    def from_decimal(cls, text: str) -> "DD":
        with mpmath.workprec(200):
            return cls.from_mpf(mpmath.mpf(text))

    def to_mpf(self):
        return mpmath.mpf(self.hi) + mpmath.mpf(self.lo)

    def __float__(self) -> float:
        return self.hi + self.lo

    def __add__(self, other: "DD") -> "DD":
        return DD(*dd_add(self.hi, self.lo, other.hi, other.lo))

    def __sub__(self, other: "DD") -> "DD":
        return DD(*dd_add(self.hi, self.lo, -other.hi, -other.lo))

    def __neg__(self) -> "DD":
        return DD(-self.hi, -self.lo)

    def __mul__(self, other: "DD") -> "DD":
        return DD(*dd_mul(self.hi, self.lo, other.hi, other.lo))

    def __truediv__(self, other: "DD") -> "DD":
        return DD(*dd_div(self.hi, self.lo, other.hi, other.lo))


def dd_add(ah, al, bh, bl):
    """IEEE-style double-double addition (relative error ~2**-104)."""
    s, e = eft.two_sum(ah, bh)
    t, f = eft.two_sum(al, bl)
    e = e + t
    s, e = eft.quick_two_sum(s, e)
    e = e + f
    return eft.quick_two_sum(s, e)


def dd_sub(ah, al, bh, bl):
    return dd_add(ah, al, -bh, -bl)


def dd_add_d(ah, al, b):
    s, e = eft.two_sum(ah, b)
    e = e + al
    return eft.quick_two_sum(s, e)


def dd_mul(ah, al, bh, bl):
    p, e = eft.two_prod(ah, bh)
    e = e + (ah * bl + al * bh)
    return eft.quick_two_sum(p, e)


def dd_mul_d(ah, al, b):
    p, e = eft.two_prod(ah, b)
    e = e + al * b
    return eft.quick_two_sum(p, e)


def dd_div(ah, al, bh, bl):
    q1 = ah / bh
    rh, rl = dd_sub(ah, al, *dd_mul_d(bh, bl, q1))
    q2 = rh / bh
    rh, rl = dd_sub(rh, rl, *dd_mul_d(bh, bl, q2))
    q3 = rh / bh
    q1, q2 = eft.quick_two_sum(q1, q2)
    return dd_add_d(q1, q2, q3)


def dd_div_d(ah, al, b):
    return dd_div(ah, al, b, 0.0 * b)


def _dd_const(x) -> tuple[float, float]:
    hi = float(x)
    return hi, float(x - hi)


_TABLE_BITS = 8
with mpmath.workprec(220):
    LN2 = _dd_const(mpmath.log(2))
    _LOGC = [_dd_const(mpmath.log(1 + mpmath.mpf(j) / 2**_TABLE_BITS)) for j in range(2**_TABLE_BITS + 1)]
_LOGC_HI = np.array([c[0] for c in _LOGC])
_LOGC_LO = np.array([c[1] for c in _LOGC])
_INV_FACT = []
with mpmath.workprec(220):
    for _k in range(20):
        _INV_FACT.append(_dd_const(1 / mpmath.factorial(_k)))


def dd_log_int(xs):
    """Double-double natural log of positive integers below ``2**50``.

    ``log x = e*log 2 + log c + 2*atanh((m - c)/(m + c))`` where ``x = m*2**e``
    with ``m`` in [1, 2) and ``c = 1 + j/256`` the nearest table point, so
    ``|z| < 2**-10`` and five series terms reach double-double accuracy.
    Returns ``(hi, lo)`` arrays (or floats for scalar input).
    """
    scalar = np.ndim(xs) == 0
    x = np.atleast_1d(np.asarray(xs))
    if x.size and (x.min() < 1 or x.max() >= 2**50):
        raise DomainError("dd_log_int needs integers in [1, 2**50)")
    xf = x.astype(np.float64)
    m, e = np.frexp(xf)
    m = 2.0 * m
    e = (e - 1).astype(np.float64)
    j = np.rint((m - 1.0) * 2**_TABLE_BITS).astype(np.int64)
    c = 1.0 + j / 2.0**_TABLE_BITS
    num = m - c  # exact
    den = m + c  # exact: both have <= 50 significant bits below 4
    zh, zl = dd_div_d(num, np.zeros_like(num), den)
    z2h, z2l = dd_mul(zh, zl, zh, zl)
    z3h, z3l = dd_mul(z2h, z2l, zh, zl)
    t3h, t3l = dd_div_d(z3h, z3l, 3.0)
    w = z2h
    tail = z3h * w * (1 / 5 + w * (1 / 7 + w * (1 / 9 + w / 11)))
    sh, sl = dd_add(zh, zl, t3h, t3l)
    sh, sl = dd_add_d(sh, sl, tail)
    sh, sl = 2.0 * sh, 2.0 * sl
    eh, el = dd_mul_d(LN2[0], LN2[1], e)
    rh, rl = dd_add(eh, el, _LOGC_HI[j], _LOGC_LO[j])
    rh, rl = dd_add(rh, rl, sh, sl)
    if scalar:
        return float(rh[0]), float(rl[0])
    return rh, rl


_EXP_HALVINGS = 5


def dd_exp(ah: float, al: float = 0.0) -> tuple[float, float]:
    """Scalar double-double exponential.

    Reduces ``a = k*log 2 + r`` with ``|r| <= log(2)/2``, evaluates
    ``expm1(r / 32)`` by Taylor series, then squares five times in
    ``expm1`` form before scaling by ``2**k``.
    """
    if not math.isfinite(ah):
        raise DomainError("dd_exp of a non-finite value")
    if ah > 709.0:
        raise RangeError(f"exp({ah}) overflows binary64")
    if ah < -600.0:
        # the low word would go subnormal and the relative bound would not hold
        raise RangeError(f"exp({ah}) is below the double-double range")
    k = round(ah / LN2[0])
    kh, kl = dd_mul_d(LN2[0], LN2[1], float(k))
    rh, rl = dd_sub(ah, al, kh, kl)
    rh, rl = math.ldexp(rh, -_EXP_HALVINGS), math.ldexp(rl, -_EXP_HALVINGS)
    # expm1(r) = r + r^2/2! + ... + r^14/14!
    th, tl = _INV_FACT[14]
    for n in range(13, 0, -1):
        th, tl = dd_mul(th, tl, rh, rl)
        th, tl = dd_add(th, tl, *_INV_FACT[n])
    th, tl = dd_mul(th, tl, rh, rl)
    for _ in range(_EXP_HALVINGS):
        # expm1(2r) = expm1(r) * (2 + expm1(r))
        uh, ul = dd_add_d(th, tl, 2.0)
        th, tl = dd_mul(th, tl, uh, ul)
    th, tl = dd_add_d(th, tl, 1.0)
    return math.ldexp(th, k), math.ldexp(tl, k)


def dd_to_interval(hi, lo, radius) -> Interval:
    """Binary64 enclosure of every real within ``radius`` of ``hi + lo``."""
    lower = eft.sub_down(eft.add_down(hi, lo), radius)
    upper = eft.add_up(eft.add_up(hi, lo), radius)
    return Interval(lower, upper)
