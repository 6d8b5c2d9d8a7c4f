"""Chain formula vs brute force, chain partitions, witnesses, comparisons."""

from __future__ import annotations

from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gpfree.apfree import rk_table
from gpfree.errors import OracleCapError, TableInsufficientError
from gpfree.geoprog import (
    chain_partition,
    decompose,
    g_bruteforce,
    g_formula,
    g_multi_ratio_bruteforce,
    g_witness,
    has_k_term_gp,
    ilog,
    monotonicity_experiment,
)

# Frozen via g_bruteforce (re-derived below on every run).
G_EXAMPLES = {
    (3, 2, 4): 3,
    (3, 3, 9): 8,
    (2, 2, 10): 5,
    (3, 2, 8): 7,
}
MULTI_3_23_9 = 7


def naive_has_gp(points, k, s):
    def is_power(r):
        if r < s:
            return False
        while r % s == 0:
            r //= s
        return r == 1

    for combo in combinations(sorted(points), k):
        if combo[0] == 0:
            continue
        if any(combo[i + 1] % combo[i] for i in range(k - 1)):
            continue
        ratios = {combo[i + 1] // combo[i] for i in range(k - 1)}
        if len(ratios) == 1 and is_power(ratios.pop()):
            return True
    return False


class TestIlog:
    def test_examples(self):
        assert ilog(2, 100, 1) == 6
        assert ilog(2, 100, 25) == 2
        assert ilog(3, 9, 1) == 2
        assert ilog(2, 7, 7) == 0

    def test_rejections(self):
        with pytest.raises(ValueError):
            ilog(1, 10, 1)
        with pytest.raises(ValueError):
            ilog(2, 10, 11)
        with pytest.raises(ValueError):
            ilog(2, 0, 1)

    @given(st.integers(min_value=2, max_value=10),
           st.integers(min_value=1, max_value=10 ** 24),
           st.integers(min_value=1, max_value=10 ** 6))
    @settings(max_examples=300, deadline=None)
    def test_exactness_characterization(self, s, n, b):
        # exercises word-size boundaries too: arithmetic is arbitrary precision
        if b > n:
            with pytest.raises(ValueError):
                ilog(s, n, b)
            return
        i = ilog(s, n, b)
        assert b * s ** i <= n < b * s ** (i + 1)


class TestDecompose:
    @given(st.integers(min_value=2, max_value=7),
           st.integers(min_value=1, max_value=10 ** 12))
    @settings(max_examples=200, deadline=None)
    def test_roundtrip(self, s, a):
        b, v = decompose(a, s)
        assert b * s ** v == a
        assert b % s != 0

    def test_rejections(self):
        with pytest.raises(ValueError):
            decompose(0, 2)
        with pytest.raises(ValueError):
            decompose(5, 1)


class TestChainPartition:
    def test_small_example(self):
        part = chain_partition(10, 2)
        assert list(part.roots) == [1, 3, 5, 7, 9]
        assert list(part.lengths) == [4, 2, 2, 1, 1]
        assert part.total() == 10
        assert part.chain(3) == (3, 6)

    def test_chains_partition_the_ground_set(self):
        for n, s in [(1, 2), (17, 2), (30, 3), (100, 5), (64, 2)]:
            part = chain_partition(n, s)
            seen = []
            for b in part.roots:
                seen.extend(part.chain(int(b)))
            assert sorted(seen) == list(range(1, n + 1))

    @given(st.integers(min_value=1, max_value=10 ** 6),
           st.integers(min_value=2, max_value=7))
    @settings(max_examples=60, deadline=None)
    def test_lengths_sum_to_n(self, n, s):
        part = chain_partition(n, s)
        assert part.total() == n
        assert all(b % s != 0 for b in part.roots[:50])

    def test_chain_accessor_rejects_non_roots(self):
        part = chain_partition(10, 2)
        with pytest.raises(ValueError):
            part.chain(6)


class TestHasKTermGP:
    def test_examples(self):
        assert has_k_term_gp({3, 6, 12}, 3, 2)
        assert has_k_term_gp({1, 4, 16}, 3, 2)  # ratio 2^2
        assert not has_k_term_gp({1, 2, 3, 5, 6, 7, 8}, 3, 2)
        assert has_k_term_gp({5, 45}, 2, 3)

    @given(st.sets(st.integers(min_value=1, max_value=200), max_size=10),
           st.integers(min_value=2, max_value=4),
           st.integers(min_value=2, max_value=3))
    @settings(max_examples=200, deadline=None)
    def test_matches_naive_checker(self, points, k, s):
        assert has_k_term_gp(points, k, s) == naive_has_gp(points, k, s)


class TestGFormulaVsOracle:
    def test_frozen_examples(self):
        for (k, s, n), expected in G_EXAMPLES.items():
            table = rk_table(k, 1 + ilog(s, n, 1))
            assert g_formula(k, s, n, table).value == expected
            assert g_bruteforce(k, s, n) == expected

    @pytest.mark.parametrize("k,s", [(2, 2), (2, 3), (3, 2), (3, 3), (4, 2), (4, 3)])
    def test_formula_equals_bruteforce_to_20(self, k, s):
        table = rk_table(k, 1 + ilog(s, 20, 1))
        for n in range(1, 21):
            assert g_formula(k, s, n, table).value == g_bruteforce(k, s, n), \
                "disagreement at k=%d s=%d n=%d" % (k, s, n)

    def test_grouped_equals_direct(self, table_k3_41):
        for s in (2, 3, 5):
            for n in (1, 2, 17, 99, 1000, 54321, 100000):
                grouped = g_formula(3, s, n, table_k3_41).value
                direct = g_formula(3, s, n, table_k3_41, method="direct").value
                assert grouped == direct

    @given(n=st.integers(min_value=1, max_value=100000),
           s=st.integers(min_value=2, max_value=6))
    @settings(max_examples=60, deadline=None)
    def test_grouped_equals_direct_random(self, n, s, table_k3_41):
        assert g_formula(3, s, n, table_k3_41).value == \
               g_formula(3, s, n, table_k3_41, method="direct").value

    def test_shallow_table_is_refused(self):
        table = rk_table(3, 3)
        with pytest.raises(TableInsufficientError):
            g_formula(3, 2, 100, table)

    def test_wrong_k_table_is_refused(self, table_k4_24):
        with pytest.raises(ValueError):
            g_formula(3, 2, 10, table_k4_24)

    def test_per_chain_breakdown_sums_to_value(self, table_k3_41):
        res = g_formula(3, 2, 1000, table_k3_41, per_chain=True)
        assert sum(res.per_chain.values()) == res.value
        assert set(res.per_chain) == {int(b) for b in chain_partition(1000, 2).roots}

    def test_oracle_cap(self):
        with pytest.raises(OracleCapError):
            g_bruteforce(3, 2, 25)
        with pytest.raises(OracleCapError):
            g_bruteforce(3, 2, 70, cap=80)


class TestGWitness:
    def test_frozen_example(self, table_k3_41):
        assert g_witness(3, 2, 8, table_k3_41) == (1, 2, 3, 5, 6, 7, 8)

    @pytest.mark.parametrize("k,s", [(3, 2), (3, 3), (4, 2), (2, 2)])
    def test_witness_attains_g_and_is_gp_free(self, k, s, table_k3_41, table_k4_24):
        table = {2: rk_table(2, 15), 3: table_k3_41, 4: table_k4_24}[k]
        for n in [1, 2, 3, 7, 20, 100, 733, 5000, 10000]:
            wit = g_witness(k, s, n, table)
            assert len(wit) == g_formula(k, s, n, table).value
            assert len(set(wit)) == len(wit)
            assert all(1 <= e <= n for e in wit)
            assert not has_k_term_gp(wit, k, s)


class TestMultiRatio:
    def test_frozen_example(self):
        assert g_multi_ratio_bruteforce(3, (2, 3), 9) == MULTI_3_23_9

    def test_single_ratio_collapses_to_g(self):
        for n in range(1, 16):
            assert g_multi_ratio_bruteforce(3, (2,), n) == g_bruteforce(3, 2, n)

    def test_more_ratios_never_help(self):
        for n in range(1, 19):
            m = g_multi_ratio_bruteforce(3, (2, 3), n)
            assert m <= g_bruteforce(3, 2, n)
            assert m <= g_bruteforce(3, 3, n)

    def test_overlapping_ratio_powers_are_deduplicated(self):
        # powers of 4 are powers of 2: {2,4} must agree with {2}
        for n in range(1, 18):
            assert g_multi_ratio_bruteforce(3, (2, 4), n) == \
                   g_multi_ratio_bruteforce(3, (2,), n)

    def test_empty_ratios_rejected(self):
        with pytest.raises(ValueError):
            g_multi_ratio_bruteforce(3, (), 9)


class TestMonotonicity:
    def test_k3_no_violation_small_range(self, table_k3_41):
        report = monotonicity_experiment(3, 2, 3, 60, table_k3_41, table_k3_41)
        assert report.first_violation is None
        assert report.first_strict == 4  # g^(2)(4)=3 < 4=g^(3)(4)
        assert len(report.rows) == 60

    def test_endpoint_rows(self, table_k3_41):
        report = monotonicity_experiment(3, 2, 3, 9, table_k3_41, table_k3_41)
        assert (report.rows[8].g_s, report.rows[8].g_s2,
                report.rows[8].relation) == (8, 8, "=")
        assert (report.rows[0].g_s, report.rows[0].g_s2,
                report.rows[0].relation) == (1, 1, "=")
        assert all(r.relation in ("<", "=") for r in report.rows)

    def test_k2_comparison_recorded(self):
        # counts of nondivisibles: ceil(n/2) vs n - floor(n/3)
        table = rk_table(2, 5)
        report = monotonicity_experiment(2, 2, 3, 8, table, table)
        row6 = report.rows[5]
        assert (row6.g_s, row6.g_s2, row6.relation) == (3, 4, "<")
        assert report.first_violation is None
        assert report.first_strict == 2

    def test_rows_are_consistent(self, table_k3_41):
        report = monotonicity_experiment(3, 2, 3, 40, table_k3_41, table_k3_41)
        for row in report.rows:
            assert row.g_s == g_formula(3, 2, row.n, table_k3_41).value
            assert row.g_s2 == g_formula(3, 3, row.n, table_k3_41).value
            expected = "=" if row.g_s == row.g_s2 else ("<" if row.g_s < row.g_s2 else ">")
            assert row.relation == expected

    def test_base_ordering_enforced(self, table_k3_41):
        with pytest.raises(ValueError):
            monotonicity_experiment(3, 3, 2, 10, table_k3_41, table_k3_41)
