"""Exact computation of the AP-free extremal table r_k.

r_k(ell) is the size of the largest subset of {0, 1, ..., ell-1}
containing no arithmetic progression of k distinct terms (common
difference d >= 1). The table is computed row by row with a
branch-and-bound search and cross-checked by a blind enumeration
oracle; from the finished table the first-attainment sequence
u_m = min { ell : r_k(ell) = m } is read off.

Structure the solver relies on (and validate() enforces):

* r_k(1) = 1 and consecutive rows differ by 0 or 1, so the previous
  row brackets the next one between prev and prev + 1;
* r_k is invariant under translation, hence r_k(w) bounds the
  contribution of any window of w consecutive ground elements — this
  is the branch-and-bound upper bound;
* the reported witness is the lexicographically least maximum subset,
  which makes every output reproducible byte for byte.

k = 2 degenerates: two distinct elements already form a 2-term AP, so
r_2 is constantly 1 and the first-attainment sequence is the single
entry u_1 = 1 (flagged finite downstream).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import backend
from .errors import (
    BudgetExhaustedError,
    InvariantError,
    OracleCapError,
)

DEFAULT_NODE_BUDGET = 20_000_000_000
ORACLE_CAP_DEFAULT = 25
HARD_ENUM_CAP = 62  # enumeration oracles pack subsets into int64 bitmasks


@dataclass(frozen=True)
class APFreeInstance:
    """A single table cell request; validates its arguments."""

    k: int
    ell: int

    def __post_init__(self):
        if self.k < 2:
            raise ValueError("k must be at least 2, got %r" % (self.k,))
        if self.ell < 1:
            raise ValueError("ell must be at least 1, got %r" % (self.ell,))


@dataclass(frozen=True)
class RkTable:
    """Rows 1..ell_max of r_k with one maximum witness per row."""

    k: int
    values: tuple = ()
    witnesses: tuple = ()

    @property
    def ell_max(self) -> int:
        return len(self.values)

    def value(self, ell: int) -> int:
        if not 1 <= ell <= self.ell_max:
            raise ValueError("ell=%d outside table range 1..%d" % (ell, self.ell_max))
        return self.values[ell - 1]

    def witness(self, ell: int) -> tuple:
        if not 1 <= ell <= self.ell_max:
            raise ValueError("ell=%d outside table range 1..%d" % (ell, self.ell_max))
        return self.witnesses[ell - 1]

    def prefix(self, ell_max: int) -> "RkTable":
        if not 1 <= ell_max <= self.ell_max:
            raise ValueError("prefix depth %d outside 1..%d" % (ell_max, self.ell_max))
        return RkTable(self.k, self.values[:ell_max], self.witnesses[:ell_max])

    def validate(self) -> None:
        """Check every structural invariant; raise InvariantError on failure."""
        if self.k < 2:
            raise InvariantError("k=%r below 2" % (self.k,))
        if self.ell_max == 0:
            raise InvariantError("empty table")
        if len(self.witnesses) != len(self.values):
            raise InvariantError("values/witnesses length mismatch")
        if self.values[0] != 1:
            raise InvariantError("r_k(1) must be 1, table holds %r" % (self.values[0],))
        for i in range(1, self.ell_max):
            step = self.values[i] - self.values[i - 1]
            if step not in (0, 1):
                raise InvariantError(
                    "row step r(%d)-r(%d)=%d outside {0,1}" % (i + 1, i, step)
                )
        for ell in range(1, min(self.k - 1, self.ell_max) + 1):
            if self.values[ell - 1] != ell:
                raise InvariantError(
                    "r_%d(%d) must equal %d below the first progression"
                    % (self.k, ell, ell)
                )
        if self.ell_max >= self.k and self.values[self.k - 1] != self.k - 1:
            raise InvariantError("r_%d(%d) must equal %d" % (self.k, self.k, self.k - 1))
        for ell in range(1, self.ell_max + 1):
            wit = self.witnesses[ell - 1]
            if len(wit) != self.values[ell - 1]:
                raise InvariantError("witness size mismatch at ell=%d" % (ell,))
            if list(wit) != sorted(set(wit)):
                raise InvariantError("witness not sorted/distinct at ell=%d" % (ell,))
            if wit and (wit[0] < 0 or wit[-1] >= ell):
                raise InvariantError("witness outside {0..%d} at ell=%d" % (ell - 1, ell))
            if has_k_term_ap(wit, self.k):
                raise InvariantError("witness contains a %d-term AP at ell=%d" % (self.k, ell))


@dataclass(frozen=True)
class GapSequence:
    """First-attainment positions u_m and their consecutive gaps.

    u holds every u_m with u_m <= ell_max, so membership of any
    position <= ell_max in {u_m} is decidable from this object alone.
    finite marks the k = 2 degeneracy, where the sequence provably
    ends at u_1 = 1.
    """

    k: int
    u: tuple
    ell_max: int
    finite: bool = False

    @property
    def gaps(self) -> tuple:
        return tuple(self.u[i + 1] - self.u[i] for i in range(len(self.u) - 1))

    def validate(self) -> None:
        if not self.u:
            raise InvariantError("empty first-attainment sequence")
        if self.u[0] != 1:
            raise InvariantError("u_1 must be 1, got %r" % (self.u[0],))
        for i in range(1, len(self.u)):
            if self.u[i] <= self.u[i - 1]:
                raise InvariantError("u must increase strictly")
        for m, um in enumerate(self.u, start=1):
            if um < m:
                raise InvariantError("u_%d=%d below its index" % (m, um))
        if self.u[-1] > self.ell_max:
            raise InvariantError("u exceeds stated coverage ell_max=%d" % (self.ell_max,))


def has_k_term_ap(elements, k: int) -> bool:
    """True iff the set contains an AP of k distinct terms (d >= 1)."""
    if k < 2:
        raise ValueError("k must be at least 2, got %r" % (k,))
    points = set(elements)
    if any(e < 0 for e in points):
        raise ValueError("elements must be nonnegative integers")
    if len(points) < k:
        return False
    top = max(points)
    for a in sorted(points):
        for d in range(1, (top - a) // (k - 1) + 1):
            if all(a + j * d in points for j in range(1, k)):
                return True
    return False


def _solve_row(k: int, values: tuple, node_budget: int):
    """Solve the next row after `values`; returns (status, best, witness, nodes)."""
    ell = len(values) + 1
    ub = np.zeros(ell + 1, dtype=np.int64)
    for j in range(1, ell):
        ub[j] = values[j - 1]
    prev = values[-1] if values else 0
    ub[ell] = prev + 1
    kern = backend.kernels()
    status, best, membership, nodes = kern.rk_step(
        ell, k, ub, prev - 1, prev + 1, node_budget
    )
    witness = tuple(int(i) for i in range(ell) if membership[i])
    return int(status), int(best), witness, int(nodes)


def rk_table(k: int, ell_max: int, *, node_budget: int | None = None,
             base: RkTable | None = None) -> RkTable:
    """Compute rows 1..ell_max of r_k with lexicographically least witnesses.

    node_budget caps total branch-and-bound nodes across all rows; on
    exhaustion a BudgetExhaustedError carries the verified prefix and
    the bracket for the unfinished row. base, when given, supplies
    already-computed leading rows (e.g. from the cache) to extend.
    """
    APFreeInstance(k, ell_max)
    budget = DEFAULT_NODE_BUDGET if node_budget is None else int(node_budget)
    if budget <= 0:
        raise ValueError("node_budget must be positive")
    values: list = []
    witnesses: list = []
    if base is not None:
        if base.k != k:
            raise ValueError("base table is for k=%d, not k=%d" % (base.k, k))
        values = list(base.values[:ell_max])
        witnesses = list(base.witnesses[:ell_max])
    remaining = budget
    while len(values) < ell_max:
        status, best, witness, nodes = _solve_row(k, tuple(values), remaining)
        remaining -= nodes
        if status != 0:
            prev = values[-1] if values else 0
            prefix = RkTable(k, tuple(values), tuple(witnesses)) if values else None
            raise BudgetExhaustedError(
                k, len(values) + 1,
                lower_bound=max(best, prev),
                upper_bound=prev + 1,
                nodes_used=budget - remaining,
                prefix=prefix,
            )
        values.append(best)
        witnesses.append(witness)
    return RkTable(k, tuple(values), tuple(witnesses))


def rk_exact(k: int, ell: int, *, node_budget: int | None = None):
    """(r_k(ell), lexicographically least maximum witness)."""
    table = rk_table(k, ell, node_budget=node_budget)
    return table.values[-1], table.witnesses[-1]


def _ap_masks(ell: int, k: int) -> np.ndarray:
    masks = []
    for d in range(1, max(0, (ell - 1) // (k - 1)) + 1):
        for a in range(ell - (k - 1) * d):
            m = 0
            for j in range(k):
                m |= 1 << (a + j * d)
            masks.append(m)
    return np.asarray(masks, dtype=np.int64) if masks else np.zeros(0, dtype=np.int64)


def rk_bruteforce_oracle(k: int, ell: int, *, cap: int = ORACLE_CAP_DEFAULT) -> int:
    """r_k(ell) by enumerating all 2**ell subsets. Independent of rk_exact.

    Exponential on purpose; refuses ell above `cap` so nobody trips
    into a multi-hour run without overriding the cap explicitly.
    """
    APFreeInstance(k, ell)
    if ell > cap:
        raise OracleCapError("rk_bruteforce_oracle", ell, cap)
    if ell > HARD_ENUM_CAP:
        raise OracleCapError("rk_bruteforce_oracle (int64 bitmask width)", ell, HARD_ENUM_CAP)
    return int(backend.kernels().rk_oracle_max(ell, _ap_masks(ell, k)))


def min_inverse(table: RkTable) -> GapSequence:
    """First-attainment sequence u_m = min r_k^{-1}(m) read from the table."""
    table.validate()
    u = []
    target = 1
    for ell in range(1, table.ell_max + 1):
        if table.values[ell - 1] == target:
            u.append(ell)
            target += 1
    seq = GapSequence(table.k, tuple(u), table.ell_max, finite=(table.k == 2))
    seq.validate()
    return seq
