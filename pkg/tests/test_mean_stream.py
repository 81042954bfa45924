import math

import mpmath
import numpy as np
import pytest

from primemean.errors import CapacityError, SequencingError
from primemean.highprec import iter_theta_oracle, theta_oracle
from primemean.mean_stream import (
    MeanState,
    accumulate,
    iter_snapshot_blocks,
    rows_at_targets,
    snapshot,
    snapshot_from_theta,
    strict_snapshots,
    strict_thetas,
)
from primemean.numerics import certified_round, merge, as_interval
from primemean.oeis import primorial
from primemean.sieve import PrimeEvent, SieveConfig, stream_primes

from oracles import iv_contains


def run(limit):
    state = MeanState()
    for event in stream_primes(SieveConfig(limit)):
        state = accumulate(state, event)
    return state


def test_single_prime():
    state = accumulate(MeanState(), PrimeEvent(1, 2))
    snap = snapshot(state)
    assert 2 in snap.s
    assert 1 in snap.ratio
    assert iv_contains(snap.theta, mpmath.log(2))


def test_log_2310():
    state = run(11)
    assert state.n == 5 and state.theta.count == state.last.index
    assert iv_contains(snapshot(state).theta, theta_oracle(5).mid)


def test_index_at_100003():
    assert run(100003).n == 9593


def test_first_row_certified():
    snap = snapshot(run(11))
    assert str(certified_round(snap.s, 6)) == "4.706764"
    assert str(certified_round(snap.ratio, 6)) == "2.337062"


def test_row_1230():
    snap = rows_at_targets(10007, [10007])[0]
    assert (snap.n, snap.p_n) == (1230, 10007)
    assert str(certified_round(snap.s, 6)) == "3143.242209"
    assert str(certified_round(snap.ratio, 6)) == "3.183655"


def test_sequencing_errors():
    state = accumulate(MeanState(), PrimeEvent(1, 2))
    with pytest.raises(SequencingError):
        accumulate(state, PrimeEvent(3, 5))
    with pytest.raises(SequencingError):
        accumulate(state, PrimeEvent(2, 2))
    with pytest.raises(ValueError):
        snapshot(MeanState())


def test_rows_at_targets_examples():
    rows = rows_at_targets(200, [10, 100])
    assert [(r.n, r.p_n) for r in rows] == [(5, 11), (26, 101)]
    assert rows_at_targets(200, []) == []
    with pytest.raises(CapacityError):
        rows_at_targets(50, [100])
    with pytest.raises(CapacityError):
        rows_at_targets(100, [98])  # no prime in [98, 100]
    with pytest.raises(ValueError):
        rows_at_targets(200, [100, 10])


def test_rows_at_1e8():
    (row,) = rows_at_targets(110_000_000, [10**8], strict=True)
    assert (row.n, row.p_n) == (5761456, 100000007)


def test_sweep_against_exact_primorial_n_le_2000():
    limit = 17389  # p_2000
    blocks = list(iter_snapshot_blocks(limit, segment_size=1000))
    assert blocks[-1].n[-1] == 2000
    oracle = {n: th for n, _, th in iter_theta_oracle(range(1, 2001), prec=120)}
    value = 1
    for sb in blocks:
        s = sb.log_s
        for k in range(len(sb)):
            n, p = int(sb.n[k]), int(sb.p[k])
            value *= p
            th = oracle[n]
            assert sb.theta.lo[k] <= th.a and th.b <= sb.theta.hi[k]
            m = math.floor(math.exp(s.mid[k]))
            # s_n^n = p_n#: exact integer ordering against the interval endpoints
            lo_s, hi_s = math.exp(s.lo[k]) * (1 - 1e-15), math.exp(s.hi[k]) * (1 + 1e-15)
            if math.floor(lo_s) == math.floor(hi_s):
                assert m**n <= value < (m + 1) ** n
    assert value == primorial(2000)


def test_ratio_above_one():
    for sb in iter_snapshot_blocks(10**5):
        mask = sb.n >= 2
        assert np.all(sb.log_ratio.lo[mask] > 0)


def test_resumed_run_matches_fresh():
    events = list(stream_primes(SieveConfig(5000)))
    fresh = MeanState()
    for e in events:
        fresh = accumulate(fresh, e)
    for cut in (1, 17, 300, len(events) - 1):
        first = MeanState()
        for e in events[:cut]:
            first = accumulate(first, e)
        # resume: continue the same state
        resumed = first
        for e in events[cut:]:
            resumed = accumulate(resumed, e)
        # split: second half accumulated independently and merged
        second = MeanState(theta=type(first.theta)(count=cut), last=events[cut - 1])
        for e in events[cut:]:
            second = accumulate(second, e)
        tail = type(first.theta)(second.theta.principal, second.theta.compensation, second.theta.error_radius, len(events) - cut)
        merged = merge(first.theta, tail)
        exact = theta_oracle(len(events), prec=120)
        for acc in (resumed.theta, merged, fresh.theta):
            iv = as_interval(acc)
            assert iv.lo <= exact.a and exact.b <= iv.hi
        assert merged.count == fresh.theta.count


def test_streaming_matches_block_sweep():
    state = run(20000)
    snap = snapshot(state)
    last = list(iter_snapshot_blocks(20000))[-1]
    block_snap = last.snapshot(len(last) - 1)
    assert block_snap.n == snap.n
    lo, hi = max(snap.theta.lo, block_snap.theta.lo), min(snap.theta.hi, block_snap.theta.hi)
    assert lo <= hi


def test_strict_thetas_against_oracle():
    idx = [1, 5, 26, 169, 1230, 9593]
    strict = strict_thetas(idx)
    for n, p, th in iter_theta_oracle(idx):
        st = strict[n]
        assert st.p == p
        iv = st.interval()
        assert iv.lo <= th.a and th.b <= iv.hi
        assert iv.hi - iv.lo < 1e-12 * max(1.0, iv.hi)


def test_strict_snapshot_contains_standard_value():
    rows = [(169, 1009), (9593, 100003)]
    for strict, std in zip(strict_snapshots(rows), rows_at_targets(100003, [1009, 100003])):
        assert strict.strict and not std.strict
        assert std.s.contains(strict.s) or (strict.s.lo <= std.s.hi and std.s.lo <= strict.s.hi)
        assert strict.s.hi - strict.s.lo < std.s.hi - std.s.lo
        assert certified_round(strict.ratio, 6).digits == certified_round(std.ratio, 6).digits


def test_snapshot_from_theta_roundtrip():
    th = theta_oracle(5)
    from primemean.numerics import Interval

    snap = snapshot_from_theta(5, 11, Interval(float(th.a), float(th.b)).hull(Interval(float(th.a), float(th.b))))
    assert str(certified_round(snap.s, 6)) == "4.706764"
