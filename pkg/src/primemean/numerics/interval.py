"""Closed binary64 intervals with certified containment.

:class:`Interval` endpoints may be scalars or equally shaped numpy arrays;
the array form is what the sweeps use to certify millions of values at
once.  Arithmetic uses emulated directed rounding (:mod:`.eft`), so every
result encloses the exact result of the operation on any enclosed reals.

``log``/``exp`` come from the platform libm / numpy, assumed faithfully
rounded (error < 1 ulp); results are widened by 2 ulps on each side.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from decimal import ROUND_DOWN, ROUND_HALF_EVEN, Decimal
from fractions import Fraction
from numbers import Real
from typing import Union

import numpy as np

from ..errors import DomainError, RangeError
from . import eft

__all__ = [
    "Interval",
    "Status",
    "INDETERMINATE",
    "CertifiedDecimal",
    "interval_log",
    "interval_log_array",
    "log_midpoint_radius",
    "interval_exp",
    "interval_expm1",
    "certified_floor",
    "certified_round",
    "certified_truncate",
    "LOG_WIDEN_ULPS",
]

#: ulps added on each side of a libm log/exp result.
LOG_WIDEN_ULPS = 2


class Status(enum.Enum):
    CERTIFIED = "certified"
    INDETERMINATE = "indeterminate"


INDETERMINATE = Status.INDETERMINATE

Number = Union[int, float, Fraction]


def _is_array(*xs) -> bool:
    return any(isinstance(x, np.ndarray) for x in xs)


def _scalar(x):
    return float(x) if np.ndim(x) == 0 else x


@dataclass(frozen=True, eq=False)
class Interval:
    """``[lo, hi]`` enclosing a real value (or an array of them)."""

    lo: float
    hi: float

    def __post_init__(self) -> None:
        lo, hi = self.lo, self.hi
        if _is_array(lo, hi):
            lo = np.asarray(lo, dtype=np.float64)
            hi = np.asarray(hi, dtype=np.float64)
        else:
            lo, hi = float(lo), float(hi)
        if np.any(np.isinf(lo)) or np.any(np.isinf(hi)):
            raise RangeError(f"interval endpoint overflows: [{self.lo!r}, {self.hi!r}]")
        if not (np.all(lo <= hi)):  # also rejects nan
            raise ValueError(f"invalid interval [{self.lo!r}, {self.hi!r}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    # -- construction -------------------------------------------------
    @classmethod
    def point(cls, x: float) -> "Interval":
        return cls(x, x)

    @classmethod
    def from_exact(cls, value: Number | str | Decimal) -> "Interval":
        """Tightest binary64 enclosure of an exact rational (``"1.62"``, ``Fraction(1, 10)``, big ints)."""
        if isinstance(value, str):
            value = Decimal(value)
        q = Fraction(value)
        f = float(q)
        lo = f if Fraction(f) <= q else eft.next_down(f)
        hi = f if Fraction(f) >= q else eft.next_up(f)
        return cls(lo, hi)

    @staticmethod
    def coerce(x) -> "Interval":
        if isinstance(x, Interval):
            return x
        if isinstance(x, np.ndarray):
            return Interval(x, x)
        if isinstance(x, (Fraction, Decimal)):
            return Interval.from_exact(x)
        if isinstance(x, int) and abs(x) > 2**53:
            return Interval.from_exact(x)
        if isinstance(x, Real):
            return Interval(float(x), float(x))
        return NotImplemented

    # -- views ---------------------------------------------------------
    @property
    def width(self):
        return eft.sub_up(self.hi, self.lo)

    @property
    def mid(self):
        return 0.5 * self.lo + 0.5 * self.hi

    @property
    def is_array(self) -> bool:
        return isinstance(self.lo, np.ndarray)

    def __len__(self) -> int:
        if not self.is_array:
            raise TypeError("scalar interval has no len()")
        return len(self.lo)

    def __getitem__(self, key) -> "Interval":
        return Interval(_scalar(self.lo[key]), _scalar(self.hi[key]))

    def __contains__(self, value) -> bool:
        # Python compares float with int / Fraction exactly; mpmath mpf likewise.
        return bool(np.all(self.lo <= value)) and bool(np.all(value <= self.hi))

    def contains(self, other: "Interval") -> bool:
        return bool(np.all(self.lo <= other.lo) and np.all(other.hi <= self.hi))

    def strictly_below(self, other) -> bool:
        other = Interval.coerce(other)
        return bool(np.all(self.hi < other.lo))

    def strictly_above(self, other) -> bool:
        other = Interval.coerce(other)
        return bool(np.all(self.lo > other.hi))

    def hull(self, other: "Interval") -> "Interval":
        return Interval(np.minimum(self.lo, other.lo), np.maximum(self.hi, other.hi))

    def __repr__(self) -> str:
        if self.is_array:
            return f"Interval(<{self.lo.size} values>)"
        return f"Interval({self.lo!r}, {self.hi!r})"

    # -- arithmetic ----------------------------------------------------
    def __neg__(self) -> "Interval":
        return Interval(-self.hi, -self.lo)

    def __add__(self, other) -> "Interval":
        other = Interval.coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Interval(eft.add_down(self.lo, other.lo), eft.add_up(self.hi, other.hi))

    __radd__ = __add__

    def __sub__(self, other) -> "Interval":
        other = Interval.coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Interval(eft.sub_down(self.lo, other.hi), eft.sub_up(self.hi, other.lo))

    def __rsub__(self, other) -> "Interval":
        other = Interval.coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __mul__(self, other) -> "Interval":
        other = Interval.coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b, c, d = self.lo, self.hi, other.lo, other.hi
        if _is_array(a, b, c, d) or not (a >= 0 and c >= 0):
            lows = [eft.mul_down(x, y) for x, y in ((a, c), (a, d), (b, c), (b, d))]
            highs = [eft.mul_up(x, y) for x, y in ((a, c), (a, d), (b, c), (b, d))]
            return Interval(_scalar(np.minimum.reduce(lows)), _scalar(np.maximum.reduce(highs)))
        return Interval(eft.mul_down(a, c), eft.mul_up(b, d))

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Interval":
        other = Interval.coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if bool(np.any((other.lo <= 0) & (other.hi >= 0))):
            raise DomainError("division by an interval containing 0")
        a, b, c, d = self.lo, self.hi, other.lo, other.hi
        lows = [eft.div_down(x, y) for x, y in ((a, c), (a, d), (b, c), (b, d))]
        highs = [eft.div_up(x, y) for x, y in ((a, c), (a, d), (b, c), (b, d))]
        return Interval(_scalar(np.minimum.reduce(lows)), _scalar(np.maximum.reduce(highs)))

    def __rtruediv__(self, other) -> "Interval":
        other = Interval.coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def square(self) -> "Interval":
        if bool(np.all(self.lo >= 0)):
            return Interval(eft.mul_down(self.lo, self.lo), eft.mul_up(self.hi, self.hi))
        return self * self

    def __abs__(self) -> "Interval":
        lo = np.where(self.lo >= 0, self.lo, np.where(self.hi <= 0, -self.hi, 0.0))
        hi = np.maximum(np.abs(self.lo), np.abs(self.hi))
        return Interval(_scalar(lo), _scalar(hi))


def _widen(lo, hi, ulps: int = LOG_WIDEN_ULPS):
    return (
        eft.sub_down(lo, ulps * np.spacing(np.abs(lo))),
        eft.add_up(hi, ulps * np.spacing(np.abs(hi))),
    )


def interval_log(x: int) -> Interval:
    """Enclosure of the natural log of a positive integer (width <= 4 ulps)."""
    if x < 1:
        raise DomainError(f"log of {x}")
    y = math.log(x)
    r = LOG_WIDEN_ULPS * math.ulp(y)
    return Interval(y - r, y + r)


def log_midpoint_radius(xs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """``(y, r)`` with ``log x`` in ``[y - r, y + r]`` for each integer ``x`` (< 2**53)."""
    xs = np.asarray(xs)
    if xs.size and xs.min() < 1:
        raise DomainError("log of a non-positive integer")
    y = np.log(xs.astype(np.float64))
    return y, LOG_WIDEN_ULPS * np.spacing(y)


def interval_log_array(xs: np.ndarray) -> Interval:
    """Vectorized :func:`interval_log`."""
    y, r = log_midpoint_radius(xs)
    return Interval(y - r, y + r)


def interval_exp(iv: Interval) -> Interval:
    """Enclosure of ``exp`` over ``iv``."""
    if iv.is_array:
        with np.errstate(over="ignore"):
            lo, hi = np.exp(iv.lo), np.exp(iv.hi)
        if not np.all(np.isfinite(hi)):
            raise RangeError("exp overflow")
    else:
        try:
            lo, hi = math.exp(iv.lo), math.exp(iv.hi)
        except OverflowError as exc:
            raise RangeError(f"exp({iv.hi}) overflows") from exc
    lo, hi = _widen(lo, hi)
    if not bool(np.all(np.isfinite(hi))):
        raise RangeError("exp overflow")
    return Interval(_scalar(np.maximum(lo, 0.0)), _scalar(hi))


def interval_expm1(iv: Interval) -> Interval:
    """Enclosure of ``exp(x) - 1`` over ``iv``, accurate near 0."""
    with np.errstate(over="ignore"):
        lo, hi = np.expm1(iv.lo), np.expm1(iv.hi)
    if not np.all(np.isfinite(hi)):
        raise RangeError("expm1 overflow")
    lo, hi = _widen(lo, hi)
    return Interval(_scalar(np.maximum(lo, -1.0)), _scalar(hi))


def certified_floor(iv: Interval) -> int | Status:
    """``m`` when every point of ``iv`` has floor ``m``, else :data:`INDETERMINATE`."""
    if iv.lo < 0:
        raise DomainError("certified_floor expects a non-negative interval")
    m = math.floor(iv.lo)
    return m if math.floor(iv.hi) == m else INDETERMINATE


@dataclass(frozen=True)
class CertifiedDecimal:
    """Decimal rendering of an interval at fixed places.

    ``digits`` is the common rendering when certified; otherwise it renders
    the low endpoint and ``upper_digits`` the high one.
    """

    digits: str
    places: int
    status: Status
    upper_digits: str | None = None

    @property
    def certified(self) -> bool:
        return self.status is Status.CERTIFIED

    def __str__(self) -> str:
        if self.certified:
            return self.digits
        return f"{self.digits}~{self.upper_digits}?"


def _render(iv: Interval, places: int, rounding: str) -> CertifiedDecimal:
    if not 0 <= places <= 17:
        raise ValueError("places must be in [0, 17]")
    quantum = Decimal(1).scaleb(-places)
    lo = Decimal(iv.lo).quantize(quantum, rounding=rounding)
    hi = Decimal(iv.hi).quantize(quantum, rounding=rounding)
    # Decimal(float) is exact, so equal endpoint renderings certify the whole interval.
    if lo == hi:
        return CertifiedDecimal(f"{lo:f}", places, Status.CERTIFIED)
    return CertifiedDecimal(f"{lo:f}", places, Status.INDETERMINATE, f"{hi:f}")


def certified_round(iv: Interval, places: int) -> CertifiedDecimal:
    """Round-half-even rendering, certified when both endpoints agree."""
    return _render(iv, places, ROUND_HALF_EVEN)


def certified_truncate(iv: Interval, places: int) -> CertifiedDecimal:
    """Truncated rendering (toward zero), certified when both endpoints agree."""
    return _render(iv, places, ROUND_DOWN)
