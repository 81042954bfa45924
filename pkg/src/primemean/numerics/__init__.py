"""Certified real arithmetic: intervals, compensated and exact sums, double-double."""

from .interval import (
    INDETERMINATE,
    CertifiedDecimal,
    Interval,
    Status,
    certified_floor,
    certified_round,
    certified_truncate,
    interval_exp,
    interval_expm1,
    interval_log,
    interval_log_array,
)
from .summation import CompensatedSum, ExactPrefixSums, accumulate_term, as_interval, merge

__all__ = [
    "INDETERMINATE",
    "CertifiedDecimal",
    "CompensatedSum",
    "ExactPrefixSums",
    "Interval",
    "Status",
    "accumulate_term",
    "as_interval",
    "certified_floor",
    "certified_round",
    "certified_truncate",
    "interval_exp",
    "interval_expm1",
    "interval_log",
    "interval_log_array",
    "merge",
]
