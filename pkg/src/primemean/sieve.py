"""Segmented sieve of Eratosthenes over odd numbers.

Primes are produced in ascending order either one event at a time
(:func:`stream_primes`) or as contiguous numpy blocks (:func:`iter_blocks`),
which is what the numeric sweeps consume.  Both views are pull-based and
hold O(segment) memory.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, NamedTuple

import numpy as np

from .errors import CapacityError, ConfigurationError, EmptyRangeError

__all__ = [
    "DEFAULT_SEGMENT_SIZE",
    "MAX_LIMIT",
    "PrimeEvent",
    "PrimeBlock",
    "SieveConfig",
    "iter_blocks",
    "stream_primes",
    "small_primes",
    "nth_prime",
    "prime_count",
    "memory_budget",
    "nth_prime_upper_bound",
]

#: Integers spanned by one segment (10**6 odd candidates).
DEFAULT_SEGMENT_SIZE = 2_000_000
#: Largest supported sieve limit.
MAX_LIMIT = 2**40
#: Rough peak bytes per integer in a segment, counting the downstream float arrays.
BYTES_PER_NUMBER = 8
_DEFAULT_BUDGET = 512 * 2**20
_BUDGET_ENV = "PRIMEMEAN_MEMORY_BUDGET"


class PrimeEvent(NamedTuple):
    """The ``index``-th prime, ``prime`` (so ``index == pi(prime)``)."""

    index: int
    prime: int


def memory_budget() -> int:
    """Per-segment memory budget in bytes, from ``PRIMEMEAN_MEMORY_BUDGET``."""
    raw = os.environ.get(_BUDGET_ENV)
    if raw is None:
        return _DEFAULT_BUDGET
    try:
        value = int(raw)
    except ValueError:
        raise ConfigurationError(f"{_BUDGET_ENV} must be an integer byte count, got {raw!r}")
    if value <= 0:
        raise ConfigurationError(f"{_BUDGET_ENV} must be positive")
    return value


@dataclass(frozen=True)
class SieveConfig:
    """Inclusive prime limit and the number of integers sieved per segment."""

    limit: int
    segment_size: int = DEFAULT_SEGMENT_SIZE

    def __post_init__(self) -> None:
        if self.limit < 2:
            raise EmptyRangeError(f"no primes up to {self.limit}")
        if self.limit > MAX_LIMIT:
            raise CapacityError(f"limit {self.limit} exceeds supported maximum {MAX_LIMIT}")
        if self.segment_size < 2:
            raise ConfigurationError("segment_size must be at least 2")
        budget = memory_budget()
        if self.segment_size * BYTES_PER_NUMBER > budget:
            raise ConfigurationError(
                f"segment_size {self.segment_size} needs ~{self.segment_size * BYTES_PER_NUMBER} bytes, "
                f"over the {budget}-byte budget"
            )

    @classmethod
    def for_limit(cls, limit: int) -> "SieveConfig":
        """Default segment size, shrunk to fit the memory budget if needed."""
        size = min(DEFAULT_SEGMENT_SIZE, max(2, memory_budget() // BYTES_PER_NUMBER))
        return cls(limit=limit, segment_size=size)


@dataclass(frozen=True)
class PrimeBlock:
    """Consecutive primes ``primes[k]`` carrying index ``first_index + k``."""

    first_index: int
    primes: np.ndarray

    def __len__(self) -> int:
        return len(self.primes)

    @property
    def indices(self) -> np.ndarray:
        return np.arange(self.first_index, self.first_index + len(self.primes), dtype=np.int64)

    @property
    def last_index(self) -> int:
        return self.first_index + len(self.primes) - 1


@lru_cache(maxsize=8)
def _base_sieve(limit: int) -> np.ndarray:
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    out = np.flatnonzero(flags).astype(np.int64)
    out.setflags(write=False)
    return out


def small_primes(limit: int) -> np.ndarray:
    """All primes ``<= limit`` by a plain (unsegmented) sieve; for small limits."""
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    return _base_sieve(int(limit))


def iter_blocks(config: SieveConfig) -> Iterator[PrimeBlock]:
    """Yield the primes ``<= config.limit`` as ascending, non-empty blocks."""
    limit = config.limit
    base = small_primes(math.isqrt(limit))[1:]  # odd base primes
    span = max(2, config.segment_size - config.segment_size % 2)
    next_index = 1

    low = 3
    pending: np.ndarray | None = np.array([2], dtype=np.int64)
    while low <= limit:
        high = min(low + span, limit + 1)  # exclusive
        count = (high - low + 1) // 2  # odd numbers low, low+2, ... < high
        mask = np.ones(count, dtype=bool)
        active = base[: np.searchsorted(base, math.isqrt(high - 1), side="right")]
        if active.size:
            starts = np.maximum(active * active, -(-low // active) * active)
            starts += np.where(starts % 2 == 0, active, 0)
            offsets = ((starts - low) // 2).tolist()
            for off, p in zip(offsets, active.tolist()):
                if off < count:
                    mask[off::p] = False
        seg = low + 2 * np.flatnonzero(mask).astype(np.int64)
        if pending is not None:
            seg = np.concatenate([pending, seg])
            pending = None
        if seg.size:
            yield PrimeBlock(next_index, seg)
            next_index += seg.size
        low = high if high % 2 else high + 1
    if pending is not None:
        yield PrimeBlock(next_index, pending)


def stream_primes(config: SieveConfig) -> Iterator[PrimeEvent]:
    """Yield ``PrimeEvent(n, p_n)`` for every prime ``p_n <= config.limit``."""
    for block in iter_blocks(config):
        for k, p in enumerate(block.primes.tolist()):
            yield PrimeEvent(block.first_index + k, p)


def nth_prime_upper_bound(n: int) -> int:
    # Rosser: p_n < n (log n + log log n) for n >= 6.
    if n < 6:
        return 13
    ln = math.log(n)
    return int(n * (ln + math.log(ln))) + 1


def nth_prime(n: int, capacity: int = MAX_LIMIT) -> int:
    """Return the ``n``-th prime (``nth_prime(1) == 2``)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    bound = nth_prime_upper_bound(n)
    if bound > capacity:
        raise CapacityError(f"p_{n} may exceed the sieve capacity {capacity}")
    for block in iter_blocks(SieveConfig.for_limit(bound)):
        if block.last_index >= n:
            return int(block.primes[n - block.first_index])
    raise AssertionError("Rosser bound violated")  # pragma: no cover


def prime_count(x: int, capacity: int = MAX_LIMIT) -> int:
    """Return pi(x), the number of primes ``<= x``."""
    if x < 0:
        raise ValueError("x must be >= 0")
    if x > capacity:
        raise CapacityError(f"x = {x} exceeds the sieve capacity {capacity}")
    if x < 2:
        return 0
    total = 0
    for block in iter_blocks(SieveConfig.for_limit(x)):
        total += len(block)
    return total
