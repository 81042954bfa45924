"""Certified running geometric mean of the first n primes.

``theta(p_n) = sum(log p_k)`` is accumulated along the prime stream; a
snapshot at index ``n`` derives ``log s_n = theta / n``, ``s_n`` and the
ratio ``p_n / s_n`` as intervals.

Three paths produce snapshots:

* :class:`MeanState` + :func:`accumulate` -- event-at-a-time, compensated sum;
* :func:`iter_snapshot_blocks` -- whole sieve blocks, exact fixed-point
  prefix sums of the binary64 logs (the sweep workhorse);
* :func:`strict_thetas` / :func:`strict_snapshot` -- double-double logs,
  used when binary64 intervals are too wide to certify a result.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import chain
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import CapacityError, SequencingError
from .numerics import (
    CompensatedSum,
    ExactPrefixSums,
    Interval,
    accumulate_term,
    as_interval,
    interval_exp,
    interval_log,
)
from .numerics import eft
from .numerics.ddouble import (
    DIV_REL_ERROR,
    EXP_REL_ERROR,
    LOG_ABS_ERROR,
    dd_add,
    dd_div,
    dd_div_d,
    dd_exp,
    dd_log_int,
    dd_to_interval,
)
from .numerics.interval import log_midpoint_radius
from .sieve import PrimeEvent, SieveConfig, iter_blocks, nth_prime_upper_bound

__all__ = [
    "MeanState",
    "MeanSnapshot",
    "SnapshotBlock",
    "StrictTheta",
    "accumulate",
    "snapshot",
    "snapshot_from_theta",
    "iter_snapshot_blocks",
    "rows_at_targets",
    "strict_thetas",
    "strict_snapshot",
    "strict_snapshots",
]


@dataclass(frozen=True)
class MeanSnapshot:
    """Certified view of the mean of the first ``n`` primes."""

    n: int
    p_n: int
    theta: Interval
    log_s: Interval
    s: Interval
    ratio: Interval
    log_ratio: Interval
    strict: bool = False


@dataclass(frozen=True)
class MeanState:
    theta: CompensatedSum = field(default_factory=CompensatedSum)
    last: PrimeEvent | None = None

    @property
    def n(self) -> int:
        return self.theta.count


def accumulate(state: MeanState, event: PrimeEvent) -> MeanState:
    """Fold the next prime into the running theta."""
    if event.index != state.theta.count + 1:
        raise SequencingError(f"expected index {state.theta.count + 1}, got {event.index}")
    if state.last is not None and event.prime <= state.last.prime:
        raise SequencingError(f"prime {event.prime} does not follow {state.last.prime}")
    return MeanState(accumulate_term(state.theta, interval_log(event.prime)), event)


def snapshot_from_theta(n: int, p: int, theta: Interval) -> MeanSnapshot:
    log_s = theta / n
    s = interval_exp(log_s)
    log_ratio = interval_log(p) - log_s
    return MeanSnapshot(n, p, theta, log_s, s, Interval.point(p) / s, log_ratio)


def snapshot(state: MeanState) -> MeanSnapshot:
    if state.last is None:
        raise ValueError("snapshot needs at least one prime")
    return snapshot_from_theta(state.last.index, state.last.prime, as_interval(state.theta))


@dataclass(frozen=True)
class SnapshotBlock:
    """Vectorized snapshots for one sieve block: arrays indexed in parallel."""

    n: np.ndarray
    p: np.ndarray
    log_p: Interval
    theta: Interval

    def __len__(self) -> int:
        return len(self.n)

    @property
    def log_s(self) -> Interval:
        return self.theta / self.n.astype(np.float64)

    @property
    def log_ratio(self) -> Interval:
        return self.log_p - self.log_s

    def select(self, mask) -> "SnapshotBlock":
        return SnapshotBlock(self.n[mask], self.p[mask], self.log_p[mask], self.theta[mask])

    def snapshot(self, k: int) -> MeanSnapshot:
        return snapshot_from_theta(int(self.n[k]), int(self.p[k]), self.theta[k])


def iter_snapshot_blocks(limit: int, segment_size: int | None = None) -> Iterator[SnapshotBlock]:
    """Certified theta for every prime up to ``limit``, one block at a time."""
    config = SieveConfig.for_limit(limit) if segment_size is None else SieveConfig(limit, segment_size)
    mids, radii = ExactPrefixSums(), ExactPrefixSums()
    for block in iter_blocks(config):
        y, r = log_midpoint_radius(block.primes)
        total = mids.push(y)
        spread = radii.push(r)
        theta = Interval(eft.sub_down(total.lo, spread.hi), eft.add_up(total.hi, spread.hi))
        yield SnapshotBlock(block.indices, block.primes, Interval(y - r, y + r), theta)


def _smallest_prime_at_least(targets: Sequence[int], limit: int) -> list[tuple[int, int]]:
    """``(n, p_n)`` of the smallest prime >= each target."""
    pending = list(targets)
    found: list[tuple[int, int]] = []
    if not pending:
        return found
    for block in iter_blocks(SieveConfig.for_limit(limit)):
        while pending and pending[0] <= block.primes[-1]:
            k = int(np.searchsorted(block.primes, pending.pop(0)))
            found.append((block.first_index + k, int(block.primes[k])))
        if not pending:
            break
    if pending:
        raise CapacityError(f"no prime in [{pending[0]}, {limit}]")
    return found


def rows_at_targets(limit: int, targets: Sequence[int], strict: bool = False) -> list[MeanSnapshot]:
    """Snapshots at the smallest prime >= each target (Table-1 style rows)."""
    targets = list(targets)
    if targets != sorted(targets):
        raise ValueError("targets must be ascending")
    if targets and targets[-1] > limit:
        raise CapacityError(f"target {targets[-1]} exceeds limit {limit}")
    if not targets:
        return []
    wanted = _smallest_prime_at_least(targets, limit)
    if strict:
        return strict_snapshots(wanted)
    by_index = {n: None for n, _ in wanted}
    last = max(by_index)
    for sb in iter_snapshot_blocks(_max_prime(wanted)):
        lo, hi = int(sb.n[0]), int(sb.n[-1])
        for n in by_index:
            if lo <= n <= hi:
                by_index[n] = sb.snapshot(n - lo)
        if hi >= last:
            break
    return [by_index[n] for n, _ in wanted]


def _max_prime(rows: Iterable[tuple[int, int]]) -> int:
    return max(p for _, p in rows)


@dataclass(frozen=True)
class StrictTheta:
    """theta(p_n) in double-double: within ``radius`` of ``hi + lo``."""

    n: int
    p: int
    hi: float
    lo: float
    radius: float

    def interval(self) -> Interval:
        return dd_to_interval(self.hi, self.lo, self.radius)


class _DDAccumulator:
    """Running double-double sum built from correctly rounded ``fsum`` passes."""

    def __init__(self) -> None:
        self.hi = 0.0
        self.lo = 0.0
        self.radius = 0.0
        self.count = 0

    def add(self, his: list[float], los: list[float]) -> None:
        if not his:
            return
        parts = (his, los, (self.hi, self.lo))
        s1 = math.fsum(chain(*parts))
        s2 = math.fsum(chain(*parts, (-s1,)))
        # fsum is correctly rounded: |exact - s1 - s2| <= ulp(s2) / 2
        self.radius = eft.add_up(self.radius, math.ulp(s2) / 2)
        self.radius = eft.add_up(self.radius, eft.mul_up(float(len(his)), LOG_ABS_ERROR))
        self.hi, self.lo = s1, s2
        self.count += len(his)


def strict_thetas(indices: Iterable[int], limit: int | None = None) -> dict[int, StrictTheta]:
    """Double-double theta(p_n) at each requested index (one pass over the primes)."""
    wanted = sorted(set(int(i) for i in indices))
    if not wanted:
        return {}
    if wanted[0] < 1:
        raise ValueError("indices start at 1")
    bound = limit if limit is not None else nth_prime_upper_bound(wanted[-1])
    acc = _DDAccumulator()
    out: dict[int, StrictTheta] = {}
    pos = 0
    for block in iter_blocks(SieveConfig.for_limit(bound)):
        hi, lo = dd_log_int(block.primes)
        his, los = hi.tolist(), lo.tolist()
        start = 0
        while pos < len(wanted) and wanted[pos] <= block.last_index:
            stop = wanted[pos] - block.first_index + 1
            acc.add(his[start:stop], los[start:stop])
            start = stop
            n = wanted[pos]
            out[n] = StrictTheta(n, int(block.primes[stop - 1]), acc.hi, acc.lo, acc.radius)
            pos += 1
        if pos == len(wanted):
            return out
        acc.add(his[start:], los[start:])
    raise CapacityError(f"index {wanted[pos]} is beyond the primes up to {bound}")


def _rel(value: float, radius: float) -> float:
    return eft.div_up(radius, abs(value)) if value else math.inf


def strict_snapshot(theta: StrictTheta) -> MeanSnapshot:
    """Snapshot evaluated in double-double from a strict theta."""
    n, p = theta.n, theta.p
    qh, ql = dd_div_d(theta.hi, theta.lo, float(n))
    q_rad = eft.add_up(eft.div_up(theta.radius, float(n)), eft.mul_up(abs(qh), DIV_REL_ERROR))
    # exp(q + d) = exp(q) * (1 + O(2|d|)) for |d| < 1
    sh, sl = dd_exp(qh, ql)
    s_rel = eft.add_up(EXP_REL_ERROR, eft.mul_up(4.0, q_rad))
    s_rad = eft.mul_up(abs(sh), s_rel)
    rh, rl = dd_div(float(p), 0.0, sh, sl)
    r_rel = eft.add_up(eft.mul_up(4.0, s_rel), DIV_REL_ERROR)
    r_rad = eft.mul_up(abs(rh), r_rel)
    lph, lpl = dd_log_int(p)
    lrh, lrl = dd_add(lph, lpl, -qh, -ql)
    lr_rad = eft.add_up(eft.add_up(LOG_ABS_ERROR, q_rad), eft.mul_up(abs(lrh), 2.0**-100))
    return MeanSnapshot(
        n,
        p,
        theta.interval(),
        dd_to_interval(qh, ql, q_rad),
        dd_to_interval(sh, sl, s_rad),
        dd_to_interval(rh, rl, r_rad),
        dd_to_interval(lrh, lrl, lr_rad),
        strict=True,
    )


def strict_snapshots(rows: Sequence[tuple[int, int]]) -> list[MeanSnapshot]:
    """Strict snapshots for ``(n, p_n)`` pairs."""
    if not rows:
        return []
    thetas = strict_thetas([n for n, _ in rows], limit=_max_prime(rows))
    return [strict_snapshot(thetas[n]) for n, _ in rows]
