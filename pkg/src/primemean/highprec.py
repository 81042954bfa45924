"""Independent high-precision oracles built on mpmath interval arithmetic.

These recompute theta from the exact primorial, so they share nothing
with the binary64 / double-double sweep except the sieve.  Slow; meant
for re-verifying individual indices.
"""

from __future__ import annotations

from contextlib import contextmanager
from decimal import Decimal
from typing import Iterable, Iterator

import mpmath

from .oeis import first_primes, product_tree

__all__ = ["ORACLE_PREC", "theta_oracle", "iter_theta_oracle", "log_ratio_oracle", "theorem_exponent_oracle"]

#: Working precision (bits) for oracle evaluations.
ORACLE_PREC = 192

iv = mpmath.iv


@contextmanager
def _precision(bits: int):
    saved = iv.prec
    iv.prec = bits
    try:
        yield
    finally:
        iv.prec = saved


def _iv_int(value: int):
    # rounds outward when the integer has more bits than the working precision
    return iv.mpf(value)


def theta_oracle(n: int, prec: int = ORACLE_PREC):
    """``theta(p_n) = log(p_n#)`` as an mpmath interval (exact primorial)."""
    with _precision(prec):
        return iv.log(_iv_int(product_tree(first_primes(n))))


def iter_theta_oracle(indices: Iterable[int], prec: int = ORACLE_PREC) -> Iterator[tuple[int, int, object]]:
    """``(n, p_n, theta interval)`` for ascending ``indices``, reusing one running primorial."""
    wanted = sorted(set(indices))
    if not wanted:
        return
    primes = first_primes(wanted[-1])
    value, done = 1, 0
    with _precision(prec):
        for n in wanted:
            value *= product_tree(primes[done:n])
            done = n
            yield n, primes[n - 1], iv.log(_iv_int(value))


def log_ratio_oracle(n: int, p: int, theta, prec: int = ORACLE_PREC):
    """``log p - theta / n`` as an mpmath interval."""
    with _precision(prec):
        return iv.log(iv.mpf(p)) - theta / n


def theorem_exponent_oracle(p: int, c: str | Decimal, prec: int = ORACLE_PREC):
    """``1 + 1/log p + c/log^2 p`` as an mpmath interval."""
    with _precision(prec):
        lp = iv.log(iv.mpf(p))
        return 1 + 1 / lp + iv.mpf(str(c)) / (lp * lp)
