"""Exception hierarchy shared by every primemean module."""


class PrimeMeanError(Exception):
    """Base class for all library errors."""


class ConfigurationError(PrimeMeanError, ValueError):
    """Invalid sieve or command configuration (includes memory-budget overruns)."""


class EmptyRangeError(ConfigurationError):
    """The requested range contains no integers to sieve."""


class CapacityError(PrimeMeanError):
    """A request exceeds the configured sieve or exact-arithmetic capacity."""


class DomainError(PrimeMeanError, ValueError):
    """Argument outside the mathematical domain of a function."""


class RangeError(PrimeMeanError, OverflowError):
    """Result not representable as a finite binary64 value."""


class SequencingError(PrimeMeanError):
    """A prime event arrived out of order."""


class NotClaimedError(PrimeMeanError, ValueError):
    """An inequality was requested outside the range where it is asserted."""
