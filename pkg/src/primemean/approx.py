"""Asymptotic approximations ``p_n / s_n ~ exp(1 + sum_j k_j / log^j p_n)``.

The coefficients ``k_j`` (OEIS A233824: 1, 3, 13, 71, ...) come from the
recurrence ``k_j = j * j! - sum_{i<j} i! * k_{j-i}``.  Order 0 is the
limit ``e``; order 2 is the two-term correction ``1/log p + 3/log^2 p``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError
from .mean_stream import iter_snapshot_blocks
from .numerics import Interval, interval_exp, interval_log
from .numerics import eft
from .numerics.ddouble import EXP_REL_ERROR, dd_add_d, dd_div, dd_exp, dd_log_int, dd_mul, dd_to_interval

__all__ = [
    "PanaitopolCoeffs",
    "ApproxSpec",
    "ApproxErrorReport",
    "panaitopol_coefficients",
    "approx_exponent",
    "approx_ratio",
    "approx_ratio_strict",
    "approx_error_scan",
]

_ANCHOR = (1, 3, 13)


@dataclass(frozen=True)
class PanaitopolCoeffs:
    terms: tuple[int, ...]

    def __post_init__(self) -> None:
        head = self.terms[: len(_ANCHOR)]
        if head != _ANCHOR[: len(head)]:
            raise ValueError(f"coefficients {head} do not start 1, 3, 13")
        if any(b <= a for a, b in zip(self.terms, self.terms[1:])):
            raise ValueError("coefficients must be strictly increasing")

    def __len__(self) -> int:
        return len(self.terms)

    def __getitem__(self, j: int) -> int:
        return self.terms[j]


@lru_cache(maxsize=None)
def _coefficients(m: int) -> tuple[int, ...]:
    k: list[int] = []
    for j in range(1, m + 1):
        k.append(j * math.factorial(j) - sum(math.factorial(i) * k[j - i - 1] for i in range(1, j)))
    return tuple(k)


def panaitopol_coefficients(m: int) -> PanaitopolCoeffs:
    """First ``m`` coefficients, exact integers."""
    if m < 1:
        raise ValueError("m must be >= 1")
    return PanaitopolCoeffs(_coefficients(m))


# Refuse to import if the recurrence does not reproduce the published anchor terms.
if _coefficients(3) != _ANCHOR:  # pragma: no cover
    raise RuntimeError(f"Panaitopol recurrence gave {_coefficients(3)}, expected {_ANCHOR}")


@dataclass(frozen=True)
class ApproxSpec:
    """Number of ``1/log^j p`` terms kept (0 = e, 2 = two-term correction)."""

    order: int = 2

    def __post_init__(self) -> None:
        if self.order < 0:
            raise ValueError("order must be >= 0")

    @property
    def coefficients(self) -> tuple[int, ...]:
        return panaitopol_coefficients(self.order).terms if self.order else ()


def approx_exponent(log_p: Interval, spec: ApproxSpec) -> Interval:
    """``1 + sum k_j / log^j p`` for an enclosure of ``log p`` (Horner form)."""
    coeffs = spec.coefficients
    if not coeffs:
        return Interval.point(1.0)
    a = 1.0 / log_p
    acc = Interval.coerce(coeffs[-1]) * a
    for k in reversed(coeffs[:-1]):
        acc = (acc + k) * a
    return acc + 1.0


def approx_ratio(p: int, spec: ApproxSpec) -> Interval:
    """Certified ``exp(1 + sum_{j<=order} k_j / log^j p)``."""
    if p < 2:
        raise DomainError("p must be >= 2")
    return interval_exp(approx_exponent(interval_log(p), spec))


def approx_ratio_strict(p: int, spec: ApproxSpec) -> Interval:
    """Double-double evaluation of :func:`approx_ratio`, for certifying many digits."""
    if p < 2:
        raise DomainError("p must be >= 2")
    lh, ll = dd_log_int(p)
    ah, al = dd_div(1.0, 0.0, lh, ll)
    th, tl = 0.0, 0.0
    for k in reversed(spec.coefficients):
        th, tl = dd_mul(*dd_add_d(th, tl, float(k)), ah, al)
    eh, el = dd_add_d(th, tl, 1.0)
    # 1/log p <= 1.45 carries relative error <= 2**-88; the j-th term at most (j + 1) times that.
    slack = sum(k * (j + 2) * 1.45 ** (j + 1) for j, k in enumerate(spec.coefficients))
    e_rad = eft.mul_up(float(slack) + 1.0, 2.0**-86)
    sh, sl = dd_exp(eh, el)
    s_rad = eft.mul_up(abs(sh), eft.add_up(EXP_REL_ERROR, eft.mul_up(4.0, e_rad)))
    return dd_to_interval(sh, sl, s_rad)


@dataclass(frozen=True)
class ApproxErrorReport:
    """Certified max of ``|approx / ratio - 1|`` over primes in ``(floor_p, limit]``."""

    order: int
    floor_p: int
    limit: int
    primes_checked: int
    max_rel_error: Interval | None
    argmax_prime: int | None

    @property
    def empty(self) -> bool:
        return self.primes_checked == 0


def approx_error_scan(limit: int, spec: ApproxSpec, floor_p: int, segment_size: int | None = None) -> ApproxErrorReport:
    """Sweep every prime ``p`` with ``floor_p < p <= limit``.

    The relative error is ``|approx / ratio - 1|`` with the certified ratio
    interval as denominator.  The returned maximum interval encloses the
    true maximum; ``argmax_prime`` is where its upper end is attained.
    """
    if floor_p >= limit:
        return ApproxErrorReport(spec.order, floor_p, limit, 0, None, None)
    best_lo = best_hi = -math.inf
    arg = None
    checked = 0
    for sb in iter_snapshot_blocks(limit, segment_size):
        if sb.p[-1] <= floor_p:
            continue
        if sb.p[0] <= floor_p:
            sb = sb.select(sb.p > floor_p)
        ratio = interval_exp(sb.log_ratio)
        approx = interval_exp(approx_exponent(sb.log_p, spec))
        rel = abs(approx / ratio - 1.0)
        checked += len(sb)
        k = int(np.argmax(rel.hi))
        best_lo = max(best_lo, float(rel.lo.max()))
        if rel.hi[k] > best_hi:
            best_hi = float(rel.hi[k])
            arg = int(sb.p[k])
    if not checked:
        return ApproxErrorReport(spec.order, floor_p, limit, 0, None, None)
    return ApproxErrorReport(spec.order, floor_p, limit, checked, Interval(best_lo, best_hi), arg)
