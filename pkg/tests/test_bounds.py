import math
from decimal import Decimal

import mpmath
import numpy as np
import pytest

from primemean.bounds import (
    BOUNDS,
    BoundSet,
    Verdict,
    reference_bound_report,
    sandor_check,
    sharpness_scan,
    strict_theorem_log_bounds,
    theorem_bounds,
    theorem_log_bounds,
    verdict,
    verify_theorem_range,
)
from primemean.errors import NotClaimedError
from primemean.highprec import theorem_exponent_oracle
from primemean.mean_stream import rows_at_targets, strict_snapshots
from primemean.numerics import Interval, interval_log
from primemean.sieve import prime_count

from oracles import iv_contains


def test_boundset_constants():
    assert BOUNDS.thm_lower_c == Decimal("1.62") and BOUNDS.thm_upper_c == Decimal("4.83")
    assert BOUNDS.axler_lower_c == Decimal("3.83") and BOUNDS.axler_upper_c == Decimal("2.62")
    assert (BOUNDS.dusart_theta_threshold, BOUNDS.dusart_pi_threshold) == (89967803, 5393)
    assert BOUNDS.axler_threshold == BOUNDS.lemma1_threshold == 10**8
    assert BOUNDS.theorem_threshold == 32059
    # derived constants: 1.62 = 2.62 - 1 and 4.83 = 3.83 + 1
    assert BOUNDS.thm_lower_c == BOUNDS.axler_upper_c - 1
    assert BOUNDS.thm_upper_c == BOUNDS.axler_lower_c + 1


def test_boundset_is_immutable_with_provenance():
    with pytest.raises(AttributeError):
        BOUNDS.thm_lower_c = Decimal("1.5")
    with pytest.raises(TypeError):
        BOUNDS.provenance["thm_lower_c"] = "x"
    for name in ("axler_lower_c", "axler_upper_c", "thm_lower_c", "thm_upper_c", "dusart_theta_threshold",
                 "dusart_pi_threshold", "axler_threshold", "lemma1_threshold", "theorem_threshold"):
        assert BOUNDS.provenance[name]
    assert "Dusart" in BOUNDS.provenance["dusart_theta_threshold"]
    assert "Axler" in BOUNDS.provenance["axler_lower_c"]


def test_theorem_bounds_at_32059():
    lower, upper = theorem_bounds(32059)
    for iv, c in ((lower, "1.62"), (upper, "4.83")):
        assert iv_contains(iv, mpmath.exp(theorem_exponent_oracle(32059, c).mid))
    assert round(lower.mid, 4) == 3.0387
    assert round(upper.mid, 4) == 3.1307
    assert 3.1306 < upper.mid < 3.1307


def test_theorem_bounds_bracket_1e8_row():
    lower, upper = theorem_bounds(100000007)
    assert lower.hi < 2.903984 < upper.lo


def test_theorem_bounds_decrease_towards_e():
    grid = sorted({int(x) for x in np.geomspace(3, 2**49, 200)})
    lows = [theorem_bounds(p)[0].mid for p in grid]
    ups = [theorem_bounds(p)[1].mid for p in grid]
    assert all(b < a for a, b in zip(ups, ups[1:]))
    # the lower exponent 1 + 1/L + 1.62/L^2 is decreasing in L > 0
    assert all(b < a for a, b in zip(lows, lows[1:]))
    assert math.e < lows[-1] < 2.87 and ups[-1] < 2.9


def test_strict_bounds_inside_standard():
    for p in (32059, 10**6 + 3, 100000007):
        std = theorem_log_bounds(interval_log(p))
        strict = strict_theorem_log_bounds(p)
        for a, b, c in zip(std, strict, ("1.62", "4.83")):
            exact = theorem_exponent_oracle(p, c)
            assert b.lo <= exact.a and exact.b <= b.hi
            assert a.lo <= b.hi and b.lo <= a.hi
            assert b.hi - b.lo <= 4 * math.ulp(b.hi)


def test_verdict():
    assert verdict(Interval(0.1, 0.2)) is Verdict.HOLDS
    assert verdict(Interval(-0.2, -0.1)) is Verdict.FAILS
    assert verdict(Interval(-0.1, 0.1)) is Verdict.INDETERMINATE
    assert verdict(Interval(0.0, 0.1)) is Verdict.INDETERMINATE


def test_reference_report_at_11_gates_everything():
    snap = rows_at_targets(20, [11])[0]
    report = reference_bound_report(snap)
    assert report.x == 11
    assert not any(c.applicable for c in report.checks)
    assert not report["dusart_pi"].applicable


def test_reference_report_at_10007():
    snap = rows_at_targets(10007, [10007])[0]
    report = reference_bound_report(snap)
    check = report["dusart_pi"]
    assert check.applicable and check.verdict is Verdict.HOLDS
    assert 1230 > 10007 / (math.log(10007) - 1)
    assert not report["theta_gap"].applicable


def test_reference_report_at_1e8_row():
    (snap,) = strict_snapshots([(5761456, 100000007)])
    report = reference_bound_report(snap)
    assert all(c.applicable for c in report.checks)
    assert report.all_applicable_hold
    gap = report["theta_gap"]
    assert gap.verdict is Verdict.HOLDS and gap.margin.lo > 0
    # independent spot-check of |theta - x| / pi < 1/log^2 x with the strict theta
    theta = mpmath.mpf(snap.theta.mid)
    assert abs(theta - 100000007) / 5761456 < 1 / mpmath.log(100000007) ** 2


def test_log_form_consistency():
    # the theta-based bounds are the pi-based ones widened by 1/log^2 x on each side
    (snap,) = strict_snapshots([(5761456, 100000007)])
    r = reference_bound_report(snap)
    inv2 = (1.0 / interval_log(snap.p_n)).square()
    x_lower = snap.log_ratio - r["log_minus_x_over_pi_lower"].margin  # = 1 + 1/L + 2.62/L^2 shifted
    lhs = r["log_minus_theta_over_pi_lower"].margin
    # lower(theta form) = lower(x form) - 1/L^2 : margins differ by (x - theta)/pi + 1/L^2
    diff = lhs - r["log_minus_x_over_pi_lower"].margin
    shift = (Interval.point(snap.p_n) - snap.theta) / snap.n + inv2
    assert diff.lo <= shift.hi and shift.lo <= diff.hi
    diff_u = r["log_minus_theta_over_pi_upper"].margin - r["log_minus_x_over_pi_upper"].margin
    shift_u = inv2 - (Interval.point(snap.p_n) - snap.theta) / snap.n
    assert diff_u.lo <= shift_u.hi and shift_u.lo <= diff_u.hi
    assert x_lower.hi > 0


def test_verify_empty_range():
    report = verify_theorem_range(5, 5)
    assert report.primes_checked == 0 and report.ok
    assert report.min_lower_margin is None
    with pytest.raises(ValueError):
        verify_theorem_range(6, 5)


def test_verify_partition_and_margins():
    report = verify_theorem_range(32059, 2 * 10**5)
    assert report.ok and report.primes_checked == prime_count(199999) - prime_count(32058)
    assert report.certified_holds == report.primes_checked
    assert report.min_lower_margin.lo > 0 and report.min_upper_margin.lo > 0
    assert report.min_upper_prime == 32059


def test_verify_below_threshold_has_violations():
    report = verify_theorem_range(2, 32059)
    assert report.violations
    assert report.largest_violation.p == max(v.p for v in report.violations)
    n_bad = len(report.violating_primes)
    assert report.certified_holds + n_bad + len(report.indeterminate) == report.primes_checked
    assert report.strict_rechecked >= n_bad


def test_sharpness_scan_confirms_with_oracle():
    result = sharpness_scan()
    lv = result.largest_violation
    assert lv is not None and lv.p < 32059
    assert result.largest_confirmed
    assert all(c.confirmed for c in result.oracle_checks)
    assert len(result.oracle_checks) == len(result.report.violations)


def test_sandor():
    (snap,) = strict_snapshots([(10, 29)])
    assert sandor_check(10, 23, 29, 31, snap) is Verdict.HOLDS
    (snap26,) = strict_snapshots([(26, 101)])
    assert sandor_check(26, 97, 101, 103, snap26) is Verdict.HOLDS
    assert snap26.ratio.lo > math.e
    with pytest.raises(NotClaimedError):
        sandor_check(5, 7, 11, 13, snap)
    with pytest.raises(ValueError):
        sandor_check(10, 23, 31, 37, snap)


def test_sandor_range():
    primes = [2, 3]
    from primemean.sieve import small_primes

    primes = small_primes(20000).tolist()
    rows = [(n, primes[n - 1]) for n in range(10, 2000)]
    for (n, p), snap in zip(rows, strict_snapshots(rows)):
        assert sandor_check(n, primes[n - 2], p, primes[n], snap) is Verdict.HOLDS


def test_custom_boundset():
    loose = BoundSet(thm_lower_c=Decimal("0"), thm_upper_c=Decimal("10"))
    assert verify_theorem_range(1000, 32059, bounds=loose).ok
