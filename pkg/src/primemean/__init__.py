"""Certified geometric mean of the first n primes.

``s_n = (p_1 p_2 ... p_n)^(1/n) = exp(theta(p_n) / n)`` is computed with
interval arithmetic so every printed digit is backed by a proof of
enclosure; see :mod:`primemean.cli` for the command-line front end.
"""

from .approx import ApproxSpec, approx_error_scan, approx_ratio, panaitopol_coefficients
from .bounds import (
    BOUNDS,
    BoundSet,
    Verdict,
    reference_bound_report,
    sandor_check,
    sharpness_scan,
    theorem_bounds,
    verify_theorem_range,
)
from .errors import (
    CapacityError,
    ConfigurationError,
    DomainError,
    EmptyRangeError,
    NotClaimedError,
    PrimeMeanError,
    RangeError,
    SequencingError,
)
from .mean_stream import MeanSnapshot, MeanState, accumulate, rows_at_targets, snapshot, strict_snapshots
from .numerics import Interval, certified_round, certified_truncate
from .oeis import a062049, emit_bfile, primorial
from .sieve import SieveConfig, nth_prime, prime_count, stream_primes

__version__ = "0.1.0"

__all__ = [
    "ApproxSpec",
    "BOUNDS",
    "BoundSet",
    "CapacityError",
    "ConfigurationError",
    "DomainError",
    "EmptyRangeError",
    "Interval",
    "MeanSnapshot",
    "MeanState",
    "NotClaimedError",
    "PrimeMeanError",
    "RangeError",
    "SequencingError",
    "SieveConfig",
    "Verdict",
    "a062049",
    "accumulate",
    "approx_error_scan",
    "approx_ratio",
    "certified_round",
    "certified_truncate",
    "emit_bfile",
    "nth_prime",
    "panaitopol_coefficients",
    "prime_count",
    "primorial",
    "reference_bound_report",
    "rows_at_targets",
    "sandor_check",
    "sharpness_scan",
    "snapshot",
    "stream_primes",
    "strict_snapshots",
    "theorem_bounds",
    "verify_theorem_range",
]
