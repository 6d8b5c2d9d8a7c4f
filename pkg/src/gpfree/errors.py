"""Exception types shared across the package."""

from __future__ import annotations


class GpfreeError(Exception):
    """Base class for every package-specific error."""


class InvariantError(GpfreeError):
    """A structural invariant of a table or derived sequence is violated."""


class BudgetExhaustedError(GpfreeError):
    """The search node budget ran out before the value was certified.

    Carries the best bounds established so far and, when raised while
    building a table, the largest fully verified prefix.
    """

    def __init__(self, k, ell, lower_bound, upper_bound, nodes_used, prefix=None):
        self.k = k
        self.ell = ell
        self.lower_bound = lower_bound
        self.upper_bound = upper_bound
        self.nodes_used = nodes_used
        self.prefix = prefix
        super().__init__(
            "node budget exhausted at ell=%d (k=%d): value bracketed in "
            "[%d, %d] after %d nodes" % (ell, k, lower_bound, upper_bound, nodes_used)
        )


class OracleCapError(GpfreeError):
    """A brute-force oracle refused an input above its exponential-cost cap."""

    def __init__(self, what, size, cap):
        self.what = what
        self.size = size
        self.cap = cap
        super().__init__(
            "%s refused: size %d exceeds cap %d (override the cap only if "
            "you accept the exponential cost)" % (what, size, cap)
        )


class TableInsufficientError(GpfreeError):
    """An operation needs a deeper extremal table than the one supplied."""

    def __init__(self, k, required, available):
        self.k = k
        self.required = required
        self.available = available
        super().__init__(
            "table for k=%d holds ell_max=%d but ell_max>=%d is required"
            % (k, available, required)
        )


class CacheError(GpfreeError):
    """Base class for persistent-table storage errors."""


class CorruptCacheError(CacheError):
    """A cache file failed its checksum, parse, or invariant validation."""


class CacheVersionError(CacheError):
    """A cache file was written by an unsupported format version."""

    def __init__(self, found, supported):
        self.found = found
        self.supported = supported
        super().__init__(
            "cache format version %r not supported (this build reads version %d)"
            % (found, supported)
        )


class WouldTruncateError(CacheError):
    """Refused to replace a cached table with a shallower one."""
