"""Exact-integer sequence engines and OEIS b-file emission.

* A002110 -- primorials ``p_n#``;
* A062049 -- ``floor(s_n)``, certified from the interval path with an exact
  big-integer fallback (``m**n <= p_n# < (m+1)**n``);
* A233824 -- Panaitopol coefficients (delegated to :mod:`.approx`).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .approx import panaitopol_coefficients
from .errors import CapacityError, ConfigurationError
from .mean_stream import iter_snapshot_blocks, strict_snapshots
from .numerics import INDETERMINATE, certified_floor, interval_exp
from .sieve import nth_prime_upper_bound, small_primes

__all__ = [
    "EXACT_CAPACITY",
    "SequenceId",
    "FloorWitness",
    "FloorResult",
    "primorial",
    "exact_floor_witness",
    "exact_floor",
    "a062049",
    "a062049_certified",
    "sequence_values",
    "emit_bfile",
    "parse_bfile",
]

#: Largest n for which exact primorial arithmetic is attempted.
EXACT_CAPACITY = 10**5


class SequenceId(str, enum.Enum):
    A062049 = "A062049"
    A002110 = "A002110"
    A233824 = "A233824"


def first_primes(n: int) -> list[int]:
    primes = small_primes(nth_prime_upper_bound(n))
    return primes[:n].tolist()


def product_tree(xs: list[int]) -> int:
    # balanced product tree; far faster than a left fold for big results
    while len(xs) > 1:
        pairs = [xs[i] * xs[i + 1] for i in range(0, len(xs) - 1, 2)]
        if len(xs) % 2:
            pairs.append(xs[-1])
        xs = pairs
    return xs[0] if xs else 1


def _check_capacity(n: int, capacity: int) -> None:
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > capacity:
        raise CapacityError(f"n = {n} exceeds the exact-arithmetic capacity {capacity}")


def primorial(n: int, capacity: int = EXACT_CAPACITY) -> int:
    """Exact product of the first ``n`` primes."""
    _check_capacity(n, capacity)
    return product_tree(first_primes(n))


def _primorials(lo: int, hi: int) -> Iterator[tuple[int, int]]:
    value = primorial(lo, capacity=hi) if lo > 1 else 2
    yield lo, value
    primes = first_primes(hi)
    for n in range(lo + 1, hi + 1):
        value *= primes[n - 1]
        yield n, value


@dataclass(frozen=True)
class FloorWitness:
    """Outcome of ``m**n <= p_n# < (m+1)**n``."""

    n: int
    m: int
    lower: bool
    upper: bool

    @property
    def holds(self) -> bool:
        return self.lower and self.upper


def exact_floor_witness(n: int, m: int, capacity: int = EXACT_CAPACITY, *, primorial_value: int | None = None) -> FloorWitness:
    """Decide ``floor(s_n) == m`` by exact big-integer comparison."""
    _check_capacity(n, capacity)
    if m < 1:
        raise ValueError("m must be >= 1")
    value = primorial(n, capacity) if primorial_value is None else primorial_value
    return FloorWitness(n, m, m**n <= value, value < (m + 1) ** n)


def exact_floor(n: int, capacity: int = EXACT_CAPACITY, *, primorial_value: int | None = None) -> int:
    """``floor(s_n)`` from exact arithmetic; a log estimate picks the candidate."""
    _check_capacity(n, capacity)
    value = primorial(n, capacity) if primorial_value is None else primorial_value
    m = max(1, math.floor(math.exp(math.log(value) / n)))
    while m**n > value:
        m -= 1
    while (m + 1) ** n <= value:
        m += 1
    return m


@dataclass(frozen=True)
class FloorResult:
    n: int
    value: int
    method: str  # "binary64" | "strict" | "exact"


def a062049_certified(lo: int, hi: int, capacity: int = EXACT_CAPACITY) -> list[FloorResult]:
    """Certified ``floor(s_n)`` for ``lo <= n <= hi``, recording how each was settled."""
    if lo < 1 or lo > hi:
        raise ConfigurationError(f"bad index range [{lo}, {hi}]")
    results: dict[int, FloorResult] = {}
    unsettled: list[tuple[int, int]] = []
    for sb in iter_snapshot_blocks(nth_prime_upper_bound(hi)):
        if sb.n[-1] < lo:
            continue
        sb = sb.select((sb.n >= lo) & (sb.n <= hi))
        s = interval_exp(sb.log_s)
        flo, fhi = np.floor(s.lo), np.floor(s.hi)
        for n, p, a, b in zip(sb.n.tolist(), sb.p.tolist(), flo.tolist(), fhi.tolist()):
            if a == b:
                results[n] = FloorResult(n, int(a), "binary64")
            else:
                unsettled.append((n, p))
        if sb.n.size and sb.n[-1] >= hi:
            break
    for snap in strict_snapshots(unsettled):
        m = certified_floor(snap.s)
        if m is INDETERMINATE:
            results[snap.n] = FloorResult(snap.n, exact_floor(snap.n, capacity), "exact")
        else:
            results[snap.n] = FloorResult(snap.n, m, "strict")
    return [results[n] for n in range(lo, hi + 1)]


def a062049(n: int, capacity: int = EXACT_CAPACITY) -> int:
    """``floor`` of the geometric mean of the first ``n`` primes."""
    return a062049_certified(n, n, capacity)[0].value


def sequence_values(seq: SequenceId | str, lo: int, hi: int, capacity: int = EXACT_CAPACITY) -> list[int]:
    seq = SequenceId(seq)
    if lo < 1 or lo > hi:
        raise ConfigurationError(f"bad index range [{lo}, {hi}]")
    if seq is SequenceId.A062049:
        return [r.value for r in a062049_certified(lo, hi, capacity)]
    if seq is SequenceId.A002110:
        _check_capacity(hi, capacity)
        return [v for _, v in _primorials(lo, hi)]
    return list(panaitopol_coefficients(hi).terms[lo - 1 :])


def emit_bfile(seq: SequenceId | str, lo: int, hi: int, capacity: int = EXACT_CAPACITY) -> str:
    """OEIS b-file text: one ``"n a(n)"`` line per index, no header."""
    values = sequence_values(seq, lo, hi, capacity)
    return "".join(f"{n} {v}\n" for n, v in zip(range(lo, hi + 1), values))


def parse_bfile(text: str) -> list[tuple[int, int]]:
    """Inverse of :func:`emit_bfile`; ``#`` comment lines are skipped."""
    out = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        n, v = line.split()
        out.append((int(n), int(v)))
    return out
