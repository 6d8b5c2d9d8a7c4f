"""Exact series arithmetic: interval counts, enclosures, digits, gaps."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gpfree.apfree import GapSequence, min_inverse, rk_table
from gpfree.constant import (
    convergence_experiment,
    count_nondivisible,
    gap_stats,
    theta_digits,
    theta_partial,
)
from gpfree.errors import TableInsufficientError
from gpfree.geoprog import g_formula


@pytest.fixture(scope="module")
def gaps_k3(table_k3_41):
    return min_inverse(table_k3_41)


class TestCountNondivisible:
    def test_examples(self):
        assert count_nondivisible(Fraction(5, 2), 5, 2) == 2  # {3, 5}
        assert count_nondivisible(0, 10, 2) == 5
        assert count_nondivisible(0, 9, 3) == 6
        assert count_nondivisible(Fraction(1, 3), Fraction(2, 3), 5) == 0

    def test_rejects_empty_interval(self):
        with pytest.raises(ValueError):
            count_nondivisible(5, 5, 2)
        with pytest.raises(ValueError):
            count_nondivisible(Fraction(7, 2), 3, 2)
        with pytest.raises(ValueError):
            count_nondivisible(0, 10, 1)

    def test_agrees_with_enumeration(self):
        rng = random.Random(7)
        for _ in range(300):
            s = rng.randint(2, 9)
            x = Fraction(rng.randint(-400, 400), rng.randint(1, 12))
            y = x + Fraction(rng.randint(1, 500), rng.randint(1, 12))
            expected = sum(
                1 for t in range(int(x) - 1, int(y) + 2) if x < t <= y and t % s != 0
            )
            assert count_nondivisible(x, y, s) == expected

    @given(num=st.integers(min_value=-10 ** 6, max_value=10 ** 6),
           den=st.integers(min_value=1, max_value=999),
           wnum=st.integers(min_value=1, max_value=10 ** 6),
           wden=st.integers(min_value=1, max_value=999),
           s=st.integers(min_value=2, max_value=12))
    @settings(max_examples=300, deadline=None)
    def test_counting_bound_exact(self, num, den, wnum, wden, s):
        x = Fraction(num, den)
        y = x + Fraction(wnum, wden)
        n = count_nondivisible(x, y, s)
        assert abs(n - Fraction(s - 1, s) * (y - x)) <= s - 1


class TestThetaPartial:
    def test_frozen_values_k3_s2(self, gaps_k3):
        a = theta_partial(3, 2, gaps_k3, 4)
        assert a.partial == Fraction(27, 32)
        assert a.tail_bound == Fraction(1, 256)  # 2^(1-9), u_5 = 9
        assert not a.finite

    def test_empty_sum(self, gaps_k3):
        a = theta_partial(3, 2, gaps_k3, 0)
        assert a.partial == 0
        assert a.tail_bound == 1  # u_1 = 1 gives s^(1-1)

    def test_k2_exact(self):
        for s in (2, 3, 5):
            gaps = min_inverse(rk_table(2, 6))
            a = theta_partial(2, s, gaps, 1)
            assert a.partial == Fraction(s - 1, s)
            assert a.tail_bound == 0
            assert a.finite
            assert a.lo == a.hi == a.midpoint()

    def test_last_certified_term_uses_coarse_tail(self, gaps_k3):
        m = len(gaps_k3.u)
        a = theta_partial(3, 2, gaps_k3, m)
        assert a.tail_bound == Fraction(1, 2 ** gaps_k3.u[-1])

    def test_terms_beyond_coverage_rejected(self, gaps_k3):
        with pytest.raises(ValueError):
            theta_partial(3, 2, gaps_k3, len(gaps_k3.u) + 1)

    def test_mismatched_k_rejected(self, gaps_k3):
        with pytest.raises(ValueError):
            theta_partial(4, 2, gaps_k3, 3)

    def test_enclosures_nest(self, gaps_k3):
        # every later partial sits inside every earlier enclosure
        approxes = [theta_partial(3, 2, gaps_k3, m)
                    for m in range(1, len(gaps_k3.u) + 1)]
        for i, outer in enumerate(approxes):
            for later in approxes[i + 1:]:
                assert outer.lo <= later.partial <= outer.hi
            assert 0 <= outer.partial < 1

    def test_enclosures_nest_other_bases(self, gaps_k3):
        for s in (3, 5):
            approxes = [theta_partial(3, s, gaps_k3, m)
                        for m in range(1, len(gaps_k3.u) + 1)]
            for outer, later in zip(approxes, approxes[1:]):
                assert outer.lo <= later.lo and later.hi <= outer.hi


class TestThetaDigits:
    def test_digit_pattern_k3(self, gaps_k3):
        d = theta_digits(3, 2, gaps_k3, 9)
        assert d.digits == (1, 1, 0, 1, 1, 0, 0, 0, 1)
        assert d.one_positions == (1, 2, 4, 5, 9)
        assert d.unscaled() == d.digits  # s = 2: scaled and unscaled agree

    def test_scaled_digits_base3(self, gaps_k3):
        d = theta_digits(3, 3, gaps_k3, 5)
        assert d.digits == (2, 2, 0, 2, 2)
        assert d.unscaled() == (1, 1, 0, 1, 1)

    def test_k2_any_length(self):
        gaps = min_inverse(rk_table(2, 1))
        d = theta_digits(2, 5, gaps, 7)
        assert d.digits == (4, 0, 0, 0, 0, 0, 0)

    def test_length_beyond_coverage_rejected(self, gaps_k3):
        with pytest.raises(TableInsufficientError):
            theta_digits(3, 2, gaps_k3, gaps_k3.ell_max + 1)

    def test_digit_prefix_value_matches_partial(self, gaps_k3):
        # reading digits back as a base-s number reproduces the partial sum
        for s in (2, 3):
            for length in (1, 5, 14, 41):
                d = theta_digits(3, s, gaps_k3, length)
                terms = sum(1 for u in gaps_k3.u if u <= length)
                assert d.value() == theta_partial(3, s, gaps_k3, terms).partial


class TestGapStats:
    def test_k3_records(self, gaps_k3):
        rep = gap_stats(gaps_k3)
        assert rep.diffs[:8] == (1, 2, 1, 4, 2, 2, 1, 6)
        assert rep.record_positions == (1, 2, 4, 8)
        assert rep.increases == 3
        assert rep.running_max[-1] == 6

    def test_running_max_is_max_prefix(self, gaps_k3):
        rep = gap_stats(gaps_k3)
        for i in range(len(rep.diffs)):
            assert rep.running_max[i] == max(rep.diffs[:i + 1])

    def test_needs_two_terms(self):
        with pytest.raises(ValueError):
            gap_stats(GapSequence(2, (1,), 5, finite=True))


class TestConvergence:
    def test_rows_are_exact(self, table_k3_41):
        rows = convergence_experiment(3, 2, [10, 1000], table_k3_41)
        assert [r.n for r in rows] == [10, 1000]
        for r in rows:
            assert r.g == g_formula(3, 2, r.n, table_k3_41).value
            assert r.ratio == Fraction(r.g, r.n)
            assert r.theta_lo <= r.theta_hi
            assert r.deviation == r.ratio - (r.theta_lo + r.theta_hi) / 2

    def test_deviation_shrinks(self, table_k3_41):
        rows = convergence_experiment(3, 2, [1000, 10 ** 6], table_k3_41)
        assert abs(rows[1].deviation) < abs(rows[0].deviation)

    def test_ratio_inside_coarse_band(self, table_k3_41):
        rows = convergence_experiment(3, 2, [10 ** 6], table_k3_41)
        assert abs(rows[0].deviation) <= Fraction(1, 100)
