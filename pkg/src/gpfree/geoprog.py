"""Largest subsets of {1..n} with no k-term geometric progression of
ratio a power of s, computed two independent ways.

Closed-form route: every positive integer factors uniquely as b * s^i
with s not dividing b, so {1..n} splits into multiplicative chains
{b, b*s, b*s^2, ...}. A geometric progression with ratio s^d lives
inside one chain, and on the exponents it becomes an arithmetic
progression; a chain of length L therefore contributes exactly r_k(L),
giving

    g_k^(s)(n) = sum over s-nondivisible roots b <= n of r_k(len(chain of b)).

Grouping roots by chain length turns the sum into O(log n) exact
interval counts, so g is cheap even for huge n once the r_k table is
deep enough (depth 1 + floor(log_s n) is required and checked).

Oracle route: g_bruteforce / g_multi_ratio_bruteforce enumerate with a
depth-first search that knows nothing about chains or r_k. They exist
to catch the formula lying.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import backend
from .constant import count_nondivisible
from .errors import OracleCapError, TableInsufficientError
from .apfree import HARD_ENUM_CAP, RkTable

G_ORACLE_CAP_DEFAULT = 24


def ilog(s: int, n: int, b: int) -> int:
    """Largest i with b * s^i <= n, exactly (integer arithmetic only)."""
    if s < 2:
        raise ValueError("s must be at least 2, got %r" % (s,))
    if b < 1 or n < 1:
        raise ValueError("n and b must be positive")
    if b > n:
        raise ValueError("b=%d exceeds n=%d (empty chain)" % (b, n))
    i = 0
    x = b
    while x <= n // s:
        x *= s
        i += 1
    return i


def decompose(a: int, s: int) -> tuple:
    """a = b * s^v with s not dividing b; returns (b, v)."""
    if s < 2:
        raise ValueError("s must be at least 2, got %r" % (s,))
    if a < 1:
        raise ValueError("a must be positive, got %r" % (a,))
    v = 0
    while a % s == 0:
        a //= s
        v += 1
    return a, v


@dataclass(frozen=True)
class ChainPartition:
    """Multiplicative chains of {1..n}: roots and their lengths.

    roots holds every b <= n with s not dividing b, ascending;
    lengths[i] is the chain length 1 + ilog(s, n, roots[i]). The
    chains are disjoint and cover {1..n}, so lengths.sum() == n.
    """

    n: int
    s: int
    roots: np.ndarray
    lengths: np.ndarray

    def total(self) -> int:
        return int(self.lengths.sum())

    def chain(self, b: int) -> tuple:
        if b < 1 or b > self.n or b % self.s == 0:
            raise ValueError("b=%d is not an s-nondivisible root <= n" % (b,))
        out = []
        x = b
        while x <= self.n:
            out.append(x)
            x *= self.s
        return tuple(out)


def chain_partition(n: int, s: int) -> ChainPartition:
    if s < 2:
        raise ValueError("s must be at least 2, got %r" % (s,))
    if n < 1:
        raise ValueError("n must be positive, got %r" % (n,))
    allv = np.arange(1, n + 1, dtype=np.int64)
    roots = allv[allv % s != 0]
    lengths = np.zeros(roots.shape[0], dtype=np.int64)
    # length(b) = #{i >= 0 : b * s^i <= n} = #{i : b <= n // s^i}
    t = n
    while t >= 1:
        lengths += roots <= t
        t //= s
    return ChainPartition(n, s, roots, lengths)


def has_k_term_gp(elements, k: int, s: int) -> bool:
    """True iff the set holds a GP of k distinct terms with ratio s^d, d >= 1."""
    if k < 2:
        raise ValueError("k must be at least 2, got %r" % (k,))
    if s < 2:
        raise ValueError("s must be at least 2, got %r" % (s,))
    points = set(elements)
    if any(e < 1 for e in points):
        raise ValueError("elements must be positive integers")
    if len(points) < k:
        return False
    top = max(points)
    for a in sorted(points):
        d = 1
        while a * s ** (d * (k - 1)) <= top:
            ratio = s ** d
            if all(a * ratio ** j in points for j in range(1, k)):
                return True
            d += 1
    return False


@dataclass(frozen=True)
class GResult:
    """One evaluated g value, optionally with its per-chain split and witness."""

    k: int
    s: int
    n: int
    value: int
    per_chain: dict | None = None
    witness: tuple | None = None


def _required_depth(s: int, n: int) -> int:
    return 1 + ilog(s, n, 1)


def g_formula(k: int, s: int, n: int, table: RkTable, *,
              method: str = "grouped", per_chain: bool = False,
              with_witness: bool = False) -> GResult:
    """Evaluate g_k^(s)(n) from the r_k table.

    method="grouped" (default) uses O(log n) interval counts; "direct"
    walks every chain root and is kept as an independently-shaped
    cross-check for moderate n (it materializes all roots in memory).
    """
    if table.k != k:
        raise ValueError("table is for k=%d, not k=%d" % (table.k, k))
    if n < 1:
        raise ValueError("n must be positive, got %r" % (n,))
    depth = _required_depth(s, n)
    if table.ell_max < depth:
        raise TableInsufficientError(k, required=depth, available=table.ell_max)
    if method == "grouped":
        value = 0
        for ell in range(1, depth + 1):
            # roots with chain length ell are the s-nondivisible integers
            # in (n / s^ell, n / s^(ell-1)]
            c = count_nondivisible(n // s ** ell, n // s ** (ell - 1), s) \
                if n // s ** ell < n // s ** (ell - 1) else 0
            value += table.value(ell) * c
    elif method == "direct":
        part = chain_partition(n, s)
        vals = np.asarray(table.values, dtype=np.int64)
        value = int(vals[part.lengths - 1].sum())
    else:
        raise ValueError("method must be 'grouped' or 'direct', got %r" % (method,))
    chains = None
    if per_chain:
        part = chain_partition(n, s)
        chains = {int(b): table.value(int(L))
                  for b, L in zip(part.roots, part.lengths)}
    wit = g_witness(k, s, n, table) if with_witness else None
    return GResult(k, s, n, value, per_chain=chains, witness=wit)


def g_witness(k: int, s: int, n: int, table: RkTable) -> tuple:
    """A maximum GP-free subset of {1..n}: per chain, the table witness
    for the chain's length mapped through i -> b * s^i. Deterministic."""
    if table.k != k:
        raise ValueError("table is for k=%d, not k=%d" % (table.k, k))
    if n < 1:
        raise ValueError("n must be positive, got %r" % (n,))
    depth = _required_depth(s, n)
    if table.ell_max < depth:
        raise TableInsufficientError(k, required=depth, available=table.ell_max)
    part = chain_partition(n, s)
    out = []
    for b, L in zip(part.roots, part.lengths):
        b = int(b)
        for i in table.witness(int(L)):
            out.append(b * s ** i)
    out.sort()
    return tuple(out)


def _gp_pred_csr(n: int, k: int, ratios) -> tuple:
    """Per-element completion masks (CSR) for the avoidance kernel.

    For element e, the masks encode the k-1 smaller terms of every GP
    that e would complete; duplicates across overlapping ratio powers
    (e.g. 4^1 vs 2^2) are emitted once.
    """
    by_elem = [[] for _ in range(n)]
    seen = set()
    for s in sorted(set(int(r) for r in ratios)):
        if s < 2:
            raise ValueError("ratio bases must be at least 2, got %r" % (s,))
        d = 1
        while s ** (d * (k - 1)) <= n:
            ratio = s ** d
            a = 1
            while a * ratio ** (k - 1) <= n:
                prog = tuple(a * ratio ** j for j in range(k))
                if prog not in seen:
                    seen.add(prog)
                    m = 0
                    for t in prog[:-1]:
                        m |= 1 << (t - 1)
                    by_elem[prog[-1] - 1].append(m)
                a += 1
            d += 1
    ptr = np.zeros(n + 1, dtype=np.int64)
    flat = []
    for i in range(n):
        msks = sorted(by_elem[i])
        ptr[i + 1] = ptr[i] + len(msks)
        flat.extend(msks)
    masks = np.asarray(flat, dtype=np.int64) if flat else np.zeros(0, dtype=np.int64)
    return ptr, masks


def _avoid_max(n: int, k: int, ratios, what: str, cap: int) -> int:
    if k < 2:
        raise ValueError("k must be at least 2, got %r" % (k,))
    if n < 1:
        raise ValueError("n must be positive, got %r" % (n,))
    if n > cap:
        raise OracleCapError(what, n, cap)
    if n > HARD_ENUM_CAP:
        raise OracleCapError(what + " (int64 bitmask width)", n, HARD_ENUM_CAP)
    ptr, masks = _gp_pred_csr(n, k, ratios)
    return int(backend.kernels().avoid_max(n, ptr, masks))


def g_bruteforce(k: int, s: int, n: int, *, cap: int = G_ORACLE_CAP_DEFAULT) -> int:
    """g_k^(s)(n) by exhaustive search. Knows nothing about chains."""
    if s < 2:
        raise ValueError("s must be at least 2, got %r" % (s,))
    return _avoid_max(n, k, (s,), "g_bruteforce", cap)


def g_multi_ratio_bruteforce(k: int, ratios, n: int, *,
                             cap: int = G_ORACLE_CAP_DEFAULT) -> int:
    """Largest subset of {1..n} avoiding k-term GPs with ratio any power
    of any base in `ratios`. Exhaustive; no closed form is known here."""
    ratios = tuple(ratios)
    if not ratios:
        raise ValueError("ratios must be a nonempty collection")
    return _avoid_max(n, k, ratios, "g_multi_ratio_bruteforce", cap)


@dataclass(frozen=True)
class ComparisonRow:
    n: int
    g_s: int
    g_s2: int
    relation: str  # g_s vs g_s2: "<", "=", ">"


@dataclass(frozen=True)
class MonotonicityReport:
    """Pointwise comparison of g for two ratio bases s < s2.

    A smaller base packs more progressions into {1..n}, so the data
    supports g^(s)(n) <= g^(s2)(n); the limit series agrees (the
    density constant increases with s). The report tracks that
    relation: first_violation is the least n with g^(s)(n) > g^(s2)(n)
    (None anywhere it held), first_strict the least n where the
    inequality is strict. The rows record the raw comparison either
    way, so a falsifying range speaks for itself."""

    k: int
    s: int
    s2: int
    rows: tuple
    first_strict: int | None
    first_violation: int | None


def monotonicity_experiment(k: int, s: int, s2: int, n_max: int,
                            table_s: RkTable, table_s2: RkTable) -> MonotonicityReport:
    if not 2 <= s < s2:
        raise ValueError("need 2 <= s < s2, got s=%r s2=%r" % (s, s2))
    if n_max < 1:
        raise ValueError("n_max must be positive")
    rows = []
    first_strict = None
    first_violation = None
    for n in range(1, n_max + 1):
        a = g_formula(k, s, n, table_s).value
        b = g_formula(k, s2, n, table_s2).value
        rel = "=" if a == b else ("<" if a < b else ">")
        rows.append(ComparisonRow(n, a, b, rel))
        if rel == "<" and first_strict is None:
            first_strict = n
        if rel == ">" and first_violation is None:
            first_violation = n
    return MonotonicityReport(k, s, s2, tuple(rows), first_strict, first_violation)
