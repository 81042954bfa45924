"""Explicit inequalities for ``p_n / s_n`` and the prime-counting estimates behind them.

The headline statement, for ``p_n >= 32059``::

    exp(1 + 1/log p + 1.62/log^2 p) < p_n / s_n < exp(1 + 1/log p + 4.83/log^2 p)

is verified on the log scale, ``log p_n - theta(p_n)/n`` against the two
exponents; exponentiation is monotone, so the verdicts coincide.  A
prime "holds" only when both margins are certified positive.  Anything
else is re-evaluated once in double-double before being reported.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from decimal import Decimal
from types import MappingProxyType
from typing import Mapping

import numpy as np

from .errors import NotClaimedError
from .highprec import ORACLE_PREC, iter_theta_oracle, log_ratio_oracle, theorem_exponent_oracle
from .mean_stream import MeanSnapshot, iter_snapshot_blocks, strict_snapshot, strict_thetas
from .numerics import Interval, interval_exp, interval_log
from .numerics import eft
from .numerics.ddouble import DD, dd_div, dd_log_int, dd_to_interval
from .sieve import prime_count

__all__ = [
    "Verdict",
    "BoundSet",
    "BOUNDS",
    "BoundCheck",
    "BoundCheckReport",
    "Violation",
    "VerificationReport",
    "SharpnessReport",
    "verdict",
    "theorem_log_bounds",
    "theorem_bounds",
    "strict_theorem_log_bounds",
    "reference_bound_report",
    "verify_theorem_range",
    "sharpness_scan",
    "sandor_check",
]


class Verdict(enum.Enum):
    HOLDS = "holds"
    FAILS = "fails"
    INDETERMINATE = "indeterminate"


def verdict(margin: Interval) -> Verdict:
    """Sign of a margin interval (positive means the inequality holds)."""
    if margin.lo > 0:
        return Verdict.HOLDS
    if margin.hi < 0:
        return Verdict.FAILS
    return Verdict.INDETERMINATE


_PROVENANCE = {
    "axler_lower_c": "Axler, Corollaries 3.5/3.6: x/pi(x) > log x - 1 - 1/log x - 3.83/log^2 x for x >= 10^8",
    "axler_upper_c": "Axler, Corollaries 3.5/3.6: x/pi(x) < log x - 1 - 1/log x - 2.62/log^2 x for x >= 10^8",
    "thm_lower_c": "2.62 - 1: Axler upper constant minus the theta-gap allowance 1/log^2 x",
    "thm_upper_c": "3.83 + 1: Axler lower constant plus the theta-gap allowance 1/log^2 x",
    "dusart_theta_threshold": "Dusart, Theorem 5.2: |theta(x) - x| < x/log^3 x for x >= 89967803",
    "dusart_pi_threshold": "Dusart, Theorem 6.9: pi(x) > x/(log x - 1) for x >= 5393",
    "axler_threshold": "range of the Axler bounds used: x >= 10^8",
    "lemma1_threshold": "|theta(x) - x|/pi(x) < 1/log^2 x, from the two Dusart bounds, for x >= 10^8",
    "theorem_threshold": "ratio bounds with 1.62 and 4.83 asserted for p_n >= 32059 (checked by computation below 10^8)",
}


@dataclass(frozen=True)
class BoundSet:
    """Named constants of the inequalities, exact as decimal strings."""

    axler_lower_c: Decimal = Decimal("3.83")
    axler_upper_c: Decimal = Decimal("2.62")
    thm_lower_c: Decimal = Decimal("1.62")
    thm_upper_c: Decimal = Decimal("4.83")
    dusart_theta_threshold: int = 89967803
    dusart_pi_threshold: int = 5393
    axler_threshold: int = 10**8
    lemma1_threshold: int = 10**8
    theorem_threshold: int = 32059
    provenance: Mapping[str, str] = field(default_factory=lambda: MappingProxyType(dict(_PROVENANCE)), compare=False)

    def interval(self, name: str) -> Interval:
        """Tightest binary64 enclosure of constant ``name``."""
        return Interval.from_exact(getattr(self, name))


BOUNDS = BoundSet()


# -- the ratio bounds ------------------------------------------------------


def _exponent(log_p: Interval, c: Interval) -> Interval:
    a = 1.0 / log_p
    return 1.0 + a + c * a.square()


def theorem_log_bounds(log_p: Interval, bounds: BoundSet = BOUNDS) -> tuple[Interval, Interval]:
    """``1 + 1/L + c/L^2`` for the lower and upper constants, ``L`` enclosing ``log p``."""
    return _exponent(log_p, bounds.interval("thm_lower_c")), _exponent(log_p, bounds.interval("thm_upper_c"))


def theorem_bounds(p: int, bounds: BoundSet = BOUNDS) -> tuple[Interval, Interval]:
    """Certified ``exp(1 + 1/log p + c/log^2 p)`` for ``c = 1.62`` and ``c = 4.83``."""
    if p < 2:
        raise ValueError("p must be >= 2")
    lower, upper = theorem_log_bounds(interval_log(p), bounds)
    return interval_exp(lower), interval_exp(upper)


# Absolute error allowance of the double-double exponent: |1/log p| <= 1.45,
# so the log error (<= 2**-90) and rounding contribute far less than this.
_STRICT_EXPONENT_SLACK = 2.0**-80


def strict_theorem_log_bounds(p: int, bounds: BoundSet = BOUNDS) -> tuple[Interval, Interval]:
    """Double-double version of :func:`theorem_log_bounds` at an integer ``p``."""
    lh, ll = dd_log_int(p)
    a = DD(*dd_div(1.0, 0.0, lh, ll))
    a2 = a * a
    out = []
    for c in (bounds.thm_lower_c, bounds.thm_upper_c):
        e = DD(1.0) + a + DD.from_decimal(str(c)) * a2
        out.append(dd_to_interval(e.hi, e.lo, _STRICT_EXPONENT_SLACK))
    return out[0], out[1]


# -- reference inequalities at one point ---------------------------------


@dataclass(frozen=True)
class BoundCheck:
    """One inequality at one point; ``margin > 0`` means it holds."""

    name: str
    applicable: bool
    verdict: Verdict
    margin: Interval
    statement: str


@dataclass(frozen=True)
class BoundCheckReport:
    x: int
    n: int
    checks: tuple[BoundCheck, ...]

    def __getitem__(self, name: str) -> BoundCheck:
        for check in self.checks:
            if check.name == name:
                return check
        raise KeyError(name)

    @property
    def all_applicable_hold(self) -> bool:
        return all(c.verdict is Verdict.HOLDS for c in self.checks if c.applicable)


def reference_bound_report(snap: MeanSnapshot, bounds: BoundSet = BOUNDS) -> BoundCheckReport:
    """Evaluate every prime-counting / theta inequality at ``x = p_n``.

    Uses ``pi(x) = n`` and the snapshot's certified ``theta``.  Checks below
    their stated threshold are still evaluated but marked not applicable.
    """
    x, pi = snap.p_n, snap.n
    lx = interval_log(x)
    inv = 1.0 / lx
    inv2 = inv.square()
    gap = abs(snap.theta - x)
    x_over_pi = Interval.point(x) / pi
    theta_over_pi = snap.theta / pi
    c = bounds.interval
    log_minus_x_pi = lx - x_over_pi
    log_minus_theta_pi = lx - theta_over_pi

    def axler(cname: str) -> Interval:
        return lx - 1.0 - inv - c(cname) * inv2

    rows = [
        ("dusart_theta", bounds.dusart_theta_threshold, Interval.point(x) / (lx * lx * lx) - gap,
         "|theta(x) - x| < x/log^3 x"),
        ("dusart_pi", bounds.dusart_pi_threshold, Interval.point(pi) - Interval.point(x) / (lx - 1.0),
         "pi(x) > x/(log x - 1)"),
        ("axler_lower", bounds.axler_threshold, x_over_pi - axler("axler_lower_c"),
         "x/pi(x) > log x - 1 - 1/log x - 3.83/log^2 x"),
        ("axler_upper", bounds.axler_threshold, axler("axler_upper_c") - x_over_pi,
         "x/pi(x) < log x - 1 - 1/log x - 2.62/log^2 x"),
        ("theta_gap", bounds.lemma1_threshold, inv2 - gap / pi,
         "|theta(x) - x|/pi(x) < 1/log^2 x"),
        ("log_minus_x_over_pi_lower", bounds.axler_threshold,
         log_minus_x_pi - _exponent(lx, c("axler_upper_c")),
         "log x - x/pi(x) > 1 + 1/log x + 2.62/log^2 x"),
        ("log_minus_x_over_pi_upper", bounds.axler_threshold,
         _exponent(lx, c("axler_lower_c")) - log_minus_x_pi,
         "log x - x/pi(x) < 1 + 1/log x + 3.83/log^2 x"),
        ("log_minus_theta_over_pi_lower", bounds.axler_threshold,
         log_minus_theta_pi - _exponent(lx, c("thm_lower_c")),
         "log x - theta(x)/pi(x) > 1 + 1/log x + 1.62/log^2 x"),
        ("log_minus_theta_over_pi_upper", bounds.axler_threshold,
         _exponent(lx, c("thm_upper_c")) - log_minus_theta_pi,
         "log x - theta(x)/pi(x) < 1 + 1/log x + 4.83/log^2 x"),
        ("ratio_lower", bounds.theorem_threshold, log_minus_theta_pi - _exponent(lx, c("thm_lower_c")),
         "p_n/s_n > exp(1 + 1/log p_n + 1.62/log^2 p_n)"),
        ("ratio_upper", bounds.theorem_threshold, _exponent(lx, c("thm_upper_c")) - log_minus_theta_pi,
         "p_n/s_n < exp(1 + 1/log p_n + 4.83/log^2 p_n)"),
    ]
    checks = tuple(
        BoundCheck(name, x >= threshold, verdict(margin), margin, statement)
        for name, threshold, margin, statement in rows
    )
    return BoundCheckReport(x, pi, checks)


# -- range verification -----------------------------------------------------


@dataclass(frozen=True)
class Violation:
    p: int
    n: int
    side: str  # "lower" | "upper"
    margin: Interval


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of checking the ratio bounds at every prime in ``[lo, hi)``.

    ``min_*_margin`` enclose the smallest margin over all checked primes
    (positive means every prime held on that side).
    """

    range: tuple[int, int]
    primes_checked: int
    violations: tuple[Violation, ...]
    indeterminate: tuple[int, ...]
    min_lower_margin: Interval | None
    min_upper_margin: Interval | None
    min_lower_prime: int | None = None
    min_upper_prime: int | None = None
    strict_rechecked: int = 0

    @property
    def violating_primes(self) -> tuple[int, ...]:
        return tuple(sorted({v.p for v in self.violations}))

    @property
    def certified_holds(self) -> int:
        return self.primes_checked - len(self.violating_primes) - len(self.indeterminate)

    @property
    def ok(self) -> bool:
        return not self.violations and not self.indeterminate

    @property
    def largest_violation(self) -> Violation | None:
        return max(self.violations, key=lambda v: v.p) if self.violations else None


class _MinTracker:
    def __init__(self) -> None:
        self.lo = math.inf
        self.hi = math.inf
        self.prime: int | None = None

    def fold(self, lo: np.ndarray, hi: np.ndarray, primes: np.ndarray) -> None:
        if not lo.size:
            return
        k = int(np.argmin(lo))
        if lo[k] < self.lo:
            self.lo = float(lo[k])
            self.prime = int(primes[k])
        self.hi = min(self.hi, float(hi.min()))

    def interval(self) -> Interval | None:
        return None if self.prime is None else Interval(self.lo, self.hi)


def verify_theorem_range(lo: int, hi: int, bounds: BoundSet = BOUNDS, segment_size: int | None = None) -> VerificationReport:
    """Check ``L(p) < log(p_n/s_n) < U(p)`` at every prime ``lo <= p_n < hi``.

    One sequential sweep with binary64 intervals; primes not certified to
    hold on both sides are re-evaluated once in double-double.
    """
    if lo > hi:
        raise ValueError("lo must be <= hi")
    low_min, up_min = _MinTracker(), _MinTracker()
    flagged: list[int] = []
    checked = 0
    if hi - 1 >= 2 and lo < hi:
        for sb in iter_snapshot_blocks(hi - 1, segment_size):
            if sb.p[-1] < lo:
                continue
            if sb.p[0] < lo:
                sb = sb.select(sb.p >= lo)
            d = sb.log_ratio
            lower, upper = theorem_log_bounds(sb.log_p, bounds)
            m_low, m_up = d - lower, upper - d
            good = (m_low.lo > 0) & (m_up.lo > 0)
            low_min.fold(m_low.lo[good], m_low.hi[good], sb.p[good])
            up_min.fold(m_up.lo[good], m_up.hi[good], sb.p[good])
            flagged.extend(sb.n[~good].tolist())
            checked += len(sb)

    violations: list[Violation] = []
    indeterminate: list[int] = []
    if flagged:
        for n, theta in sorted(strict_thetas(flagged).items()):
            snap = strict_snapshot(theta)
            lower, upper = strict_theorem_log_bounds(snap.p_n, bounds)
            margins = {"lower": snap.log_ratio - lower, "upper": upper - snap.log_ratio}
            p_arr = np.array([snap.p_n])
            low_min.fold(np.array([margins["lower"].lo]), np.array([margins["lower"].hi]), p_arr)
            up_min.fold(np.array([margins["upper"].lo]), np.array([margins["upper"].hi]), p_arr)
            verdicts = {side: verdict(m) for side, m in margins.items()}
            for side, v in verdicts.items():
                if v is Verdict.FAILS:
                    violations.append(Violation(snap.p_n, n, side, margins[side]))
            if Verdict.FAILS not in verdicts.values() and Verdict.INDETERMINATE in verdicts.values():
                indeterminate.append(snap.p_n)

    return VerificationReport(
        range=(lo, hi),
        primes_checked=checked,
        violations=tuple(violations),
        indeterminate=tuple(indeterminate),
        min_lower_margin=low_min.interval(),
        min_upper_margin=up_min.interval(),
        min_lower_prime=low_min.prime,
        min_upper_prime=up_min.prime,
        strict_rechecked=len(flagged),
    )


@dataclass(frozen=True)
class OracleCheck:
    """High-precision recomputation of one violation from the exact primorial."""

    violation: Violation
    margin_lo: float
    margin_hi: float

    @property
    def confirmed(self) -> bool:
        return self.margin_hi < 0


@dataclass(frozen=True)
class SharpnessReport:
    """Where the ratio bounds fail below their asserted starting point."""

    below: int
    report: VerificationReport
    oracle_checks: tuple[OracleCheck, ...]

    @property
    def largest_violation(self) -> Violation | None:
        return self.report.largest_violation

    @property
    def largest_confirmed(self) -> bool:
        lv = self.largest_violation
        return lv is not None and any(c.violation == lv and c.confirmed for c in self.oracle_checks)


def sharpness_scan(below: int = BOUNDS.theorem_threshold, bounds: BoundSet = BOUNDS, prec: int = ORACLE_PREC) -> SharpnessReport:
    """Check the ratio bounds on ``[2, below)`` and re-derive each violation independently.

    Violations come out of :func:`verify_theorem_range` already confirmed in
    double-double; each is then recomputed with mpmath interval arithmetic
    from the exact primorial.
    """
    report = verify_theorem_range(2, below, bounds)
    by_index: dict[int, list[Violation]] = {}
    for v in report.violations:
        by_index.setdefault(v.n, []).append(v)
    checks = []
    for n, p, theta in iter_theta_oracle(by_index, prec):
        d = log_ratio_oracle(n, p, theta, prec)
        for v in by_index[n]:
            c = bounds.thm_lower_c if v.side == "lower" else bounds.thm_upper_c
            e = theorem_exponent_oracle(p, c, prec)
            m = d - e if v.side == "lower" else e - d
            checks.append(OracleCheck(v, float(m.a), float(m.b)))
    return SharpnessReport(below, report, tuple(checks))


# -- Sandor's double inequality --------------------------------------------


def sandor_check(n: int, p_prev: int, p_n: int, p_next: int, snap: MeanSnapshot) -> Verdict:
    """``e < p_n/s_n < (p_n/p_{n-1}) * p_{n+1}^(pi(n)/n)`` for ``n >= 10``.

    ``pi(n)`` is the prime count at the index ``n``, not at ``p_n``.
    """
    if n < 10:
        raise NotClaimedError(f"the inequality is only asserted for n >= 10, got n = {n}")
    if snap.n != n or snap.p_n != p_n or not p_prev < p_n < p_next:
        raise ValueError("inconsistent primes / snapshot")
    d = snap.log_ratio
    rhs = interval_log(p_n) - interval_log(p_prev) + Interval.point(prime_count(n)) / n * interval_log(p_next)
    sides = (verdict(d - 1.0), verdict(rhs - d))
    if Verdict.FAILS in sides:
        return Verdict.FAILS
    if Verdict.INDETERMINATE in sides:
        return Verdict.INDETERMINATE
    return Verdict.HOLDS
