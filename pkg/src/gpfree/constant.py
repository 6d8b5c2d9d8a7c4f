"""Exact-rational evaluation of the limiting density constant.

As n grows, g_k^(s)(n) / n approaches

    theta(k, s) = (s - 1) * sum over m >= 1 of s^(-u_m)

where u_m is the first-attainment sequence of the AP-free table
(u_m = min { ell : r_k(ell) = m }). The heavy lifting happens in
integer arithmetic: partial sums and tail bounds are fractions.Fraction
values, so every enclosure below is exact and floats only ever appear
when rendering.

Tail control: u is strictly increasing, so once u_1..u_M are known,

    (s - 1) * sum_{m > M} s^(-u_m) <= s^(1 - u_{M+1})   (u_{M+1} known)
                                   <= s^(-u_M)          (otherwise)

and for degenerate k = 2 the series is the single term u_1 = 1, so the
value is exactly (s - 1) / s with zero tail.

Digits: since u_{m+1} > u_m, writing theta in base s puts digit s - 1
at exactly the positions u_m and 0 elsewhere, with no carries. A table
of depth ell_max certifies every digit at positions 1..ell_max.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import floor

from .apfree import GapSequence, RkTable, min_inverse
from .errors import TableInsufficientError


def count_nondivisible(x, y, s: int):
    """#{ t integer : x < t <= y, s does not divide t }, exactly.

    x and y may be ints or Fractions. Evaluates
    (floor(y) - floor(x)) - (floor(y/s) - floor(x/s)); no rounding
    anywhere, so the density bound
    | count - (s-1)(y-x)/s | <= s - 1 is checkable with exact
    comparisons.
    """
    if s < 2:
        raise ValueError("s must be at least 2, got %r" % (s,))
    x = Fraction(x)
    y = Fraction(y)
    if not x < y:
        raise ValueError("need x < y, got x=%s y=%s" % (x, y))
    return (floor(y) - floor(x)) - (floor(y / s) - floor(x / s))


@dataclass(frozen=True)
class ThetaApproximation:
    """Exact enclosure theta in [partial, partial + tail_bound]."""

    k: int
    s: int
    terms: int
    partial: Fraction
    tail_bound: Fraction
    finite: bool = False

    @property
    def lo(self) -> Fraction:
        return self.partial

    @property
    def hi(self) -> Fraction:
        return self.partial + self.tail_bound

    def midpoint(self) -> Fraction:
        return self.partial + self.tail_bound / 2

    def width(self) -> Fraction:
        return self.tail_bound


def theta_partial(k: int, s: int, gaps: GapSequence, terms: int) -> ThetaApproximation:
    """Exact partial sum of theta(k, s) over the first `terms` terms,
    with a proven tail bound.

    terms may be at most len(gaps.u): each series term needs its u_m.
    With gaps.finite (k = 2) and all terms consumed the tail is exactly
    zero and the value is (s-1)/s.
    """
    if s < 2:
        raise ValueError("s must be at least 2, got %r" % (s,))
    if gaps.k != k:
        raise ValueError("gap sequence is for k=%d, not k=%d" % (gaps.k, k))
    if terms < 0:
        raise ValueError("terms must be nonnegative, got %r" % (terms,))
    u = gaps.u
    if terms > len(u):
        raise ValueError(
            "terms=%d exceeds the %d certified series terms" % (terms, len(u))
        )
    partial = (s - 1) * sum(
        (Fraction(1, s ** u[m]) for m in range(terms)), Fraction(0)
    )
    if terms < len(u):
        # next exponent known: (s-1) * sum_{m>M} s^-u_m <= s^(1-u_{M+1})
        tail = Fraction(1, s ** (u[terms] - 1))
    elif gaps.finite:
        tail = Fraction(0)
    else:
        # u_{M+1} >= u_M + 1 is all we know
        tail = Fraction(1, s ** u[terms - 1])
    approx = ThetaApproximation(k, s, terms, partial, tail, finite=gaps.finite)
    if not (0 <= approx.partial < 1 and approx.tail_bound >= 0):
        raise AssertionError("enclosure out of range; sequence data corrupt")
    return approx


@dataclass(frozen=True)
class DigitStream:
    """Base-s digits of theta at positions 1..length (position p weighs s^-p).

    digits[p-1] is s - 1 when p is some u_m and 0 otherwise; the
    positions carrying a nonzero digit are repeated in one_positions.
    unscaled() renders the same stream over the alphabet {0, 1}.
    """

    k: int
    s: int
    length: int
    digits: tuple
    one_positions: tuple

    def unscaled(self) -> tuple:
        return tuple(1 if d else 0 for d in self.digits)

    def value(self) -> Fraction:
        """Exact value of the rendered prefix (a lower bound for theta)."""
        return sum(
            (Fraction(d, self.s ** p) for p, d in enumerate(self.digits, start=1)),
            Fraction(0),
        )


def theta_digits(k: int, s: int, gaps: GapSequence, length: int) -> DigitStream:
    """First `length` base-s digits of theta, each certified by the table.

    Positions up to gaps.ell_max are decidable (a finite sequence
    decides every position); beyond that the digits are unknown and the
    call is refused rather than guessed.
    """
    if s < 2:
        raise ValueError("s must be at least 2, got %r" % (s,))
    if gaps.k != k:
        raise ValueError("gap sequence is for k=%d, not k=%d" % (gaps.k, k))
    if length < 1:
        raise ValueError("length must be positive, got %r" % (length,))
    if not gaps.finite and length > gaps.ell_max:
        raise TableInsufficientError(k, required=length, available=gaps.ell_max)
    members = set(gaps.u)
    digits = tuple((s - 1) if p in members else 0 for p in range(1, length + 1))
    ones = tuple(p for p in range(1, length + 1) if p in members)
    return DigitStream(k, s, length, digits, ones)


@dataclass(frozen=True)
class GapReport:
    """Consecutive gaps of u and where their running maximum grows."""

    k: int
    diffs: tuple
    running_max: tuple
    record_positions: tuple  # m with diffs[m-1] strictly above all earlier diffs

    @property
    def increases(self) -> int:
        """How many times the running maximum strictly increased."""
        return len(self.record_positions) - 1


def gap_stats(gaps: GapSequence) -> GapReport:
    diffs = gaps.gaps
    if not diffs:
        raise ValueError("need at least two first-attainment terms to form gaps")
    running = []
    records = []
    cur = 0
    for m, d in enumerate(diffs, start=1):
        if d > cur:
            cur = d
            records.append(m)
        running.append(cur)
    return GapReport(gaps.k, diffs, tuple(running), tuple(records))


@dataclass(frozen=True)
class ConvergenceRow:
    """g at one n next to the current exact enclosure of theta."""

    n: int
    g: int
    ratio: Fraction
    theta_lo: Fraction
    theta_hi: Fraction
    deviation: Fraction  # ratio - enclosure midpoint, signed


def convergence_experiment(k: int, s: int, n_list, table: RkTable):
    """Evaluate g/n along n_list against the deepest enclosure the
    table affords. Exact rationals throughout; rows follow n_list order."""
    from .geoprog import g_formula  # local import; geoprog already imports us

    gaps = min_inverse(table)
    approx = theta_partial(k, s, gaps, len(gaps.u))
    mid = approx.midpoint()
    rows = []
    for n in n_list:
        n = int(n)
        g = g_formula(k, s, n, table).value
        ratio = Fraction(g, n)
        rows.append(ConvergenceRow(n, g, ratio, approx.lo, approx.hi, ratio - mid))
    return tuple(rows)
