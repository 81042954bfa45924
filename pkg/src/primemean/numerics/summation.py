"""Certified summation.

Two routes:

* :class:`CompensatedSum` is the streaming, one-term-at-a-time accumulator
  (Neumaier compensation plus an error radius).
* :class:`ExactPrefixSums` gives exact prefix sums of a float array whose
  entries are multiples of ``2**-53`` (every ``log p`` and its ulp-radius
  qualifies), by carrying fixed-point integers.  The sweeps use it; the two
  routes are cross-checked in the test-suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import eft
from .interval import Interval

__all__ = ["CompensatedSum", "accumulate_term", "as_interval", "merge", "ExactPrefixSums"]


@dataclass(frozen=True)
class CompensatedSum:
    """Running sum ``principal + compensation`` with certified ``error_radius``.

    The exact sum of every added term lies within
    ``principal + compensation +/- error_radius``.
    """

    principal: float = 0.0
    compensation: float = 0.0
    error_radius: float = 0.0
    count: int = 0

    def add(self, term: Interval) -> "CompensatedSum":
        return accumulate_term(self, term)


def _midpoint_radius(term: Interval) -> tuple[float, float]:
    lo, hi = term.lo, term.hi
    if lo == hi:
        return lo, 0.0
    m = 0.5 * lo + 0.5 * hi
    return m, max(eft.sub_up(hi, m), eft.sub_up(m, lo))


def accumulate_term(acc: CompensatedSum, term: Interval) -> CompensatedSum:
    """Add ``term`` to ``acc``: TwoSum on the midpoint, radius absorbs the rest."""
    m, r = _midpoint_radius(term)
    total, residue = eft.two_sum(acc.principal, m)  # exact
    compensation, lost = eft.two_sum(acc.compensation, residue)
    grow = abs(lost)
    radius = acc.error_radius
    if r:
        radius = eft.add_up(radius, r)
    if grow:
        radius = eft.add_up(radius, grow)
    return CompensatedSum(total, compensation, radius, acc.count + 1)


def as_interval(acc: CompensatedSum) -> Interval:
    """Outward-rounded ``[p + c - radius, p + c + radius]``."""
    lo = eft.sub_down(eft.add_down(acc.principal, acc.compensation), acc.error_radius)
    hi = eft.add_up(eft.add_up(acc.principal, acc.compensation), acc.error_radius)
    return Interval(lo, hi)


def merge(a: CompensatedSum, b: CompensatedSum) -> CompensatedSum:
    """Combine two partial sums (of disjoint term sets); order-independent in the containment sense."""
    total, residue = eft.two_sum(a.principal, b.principal)
    comp, lost = eft.two_sum(a.compensation, b.compensation)
    comp, lost2 = eft.two_sum(comp, residue)
    radius = eft.add_up(a.error_radius, b.error_radius)
    for extra in (abs(lost), abs(lost2)):
        if extra:
            radius = eft.add_up(radius, extra)
    return CompensatedSum(total, comp, radius, a.count + b.count)


_FRAC_BITS = 53
_LIMB_BITS = 26
_LIMB_MASK = (1 << _LIMB_BITS) - 1
# keeps each limb's running sum below 2**53 so it converts to float exactly
_MAX_CHUNK = 1 << 20


def _int_to_interval(value: int, scale_bits: int) -> tuple[float, float]:
    """Enclose ``value * 2**-scale_bits`` (value an exact Python int)."""
    f = float(value)  # correctly rounded
    lo = f if f <= value else eft.next_down(f)
    hi = f if f >= value else eft.next_up(f)
    return math.ldexp(lo, -scale_bits), math.ldexp(hi, -scale_bits)


class ExactPrefixSums:
    """Exact running sums over consecutive float chunks.

    Every value fed in must be a non-negative multiple of ``2**-53`` below
    32; :meth:`push` checks this.  Sums are held as Python ints in
    units of ``2**-53`` between chunks, and as two int64 limbs inside one.
    """

    def __init__(self) -> None:
        self.total = 0  # units of 2**-53
        self.count = 0

    @staticmethod
    def _to_units(values: np.ndarray) -> np.ndarray:
        scaled = np.ldexp(values, _FRAC_BITS)
        units = scaled.astype(np.int64)
        if values.size and (np.any(values < 0) or np.any(values >= 32) or np.any(units != scaled)):
            raise ValueError("values must be multiples of 2**-53 in [0, 32)")
        return units

    def push(self, values: np.ndarray) -> Interval:
        """Append ``values``; return enclosures of every new prefix sum."""
        values = np.asarray(values, dtype=np.float64)
        if values.size > _MAX_CHUNK:
            parts = [self.push(values[i : i + _MAX_CHUNK]) for i in range(0, values.size, _MAX_CHUNK)]
            return Interval(np.concatenate([p.lo for p in parts]), np.concatenate([p.hi for p in parts]))
        units = self._to_units(values)
        high = np.cumsum(units >> _LIMB_BITS)
        low = np.cumsum(units & _LIMB_MASK)
        base_lo, base_hi = _int_to_interval(self.total, _FRAC_BITS)
        # high * 2**-27 and low * 2**-53 are exact binary64 values (< 2**53 units each).
        hpart = np.ldexp(high.astype(np.float64), _LIMB_BITS - _FRAC_BITS)
        lpart = np.ldexp(low.astype(np.float64), -_FRAC_BITS)
        lo = eft.add_down(eft.add_down(np.full(units.shape, base_lo), hpart), lpart)
        hi = eft.add_up(eft.add_up(np.full(units.shape, base_hi), hpart), lpart)
        if units.size:
            self.total += (int(high[-1]) << _LIMB_BITS) + int(low[-1])
            self.count += units.size
        return Interval(lo, hi)

    def value(self) -> Interval:
        lo, hi = _int_to_interval(self.total, _FRAC_BITS)
        return Interval(lo, hi)
