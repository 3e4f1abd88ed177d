from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from pvsynth.diophantine import adjust_meniscus
from pvsynth.enumeration import (
    CSV_HEADER,
    SegmentScan,
    Skip,
    candidates_at,
    conjecture_stats,
    count_lattice,
    cumulative_count,
    disk_scan,
    find_t0,
    growth_check,
    segment_witnesses,
)
from pvsynth.exact import GaussianInt, RealValue
from pvsynth.geometry import Meniscus

R = RealValue.from_rational
angles = st.fractions(min_value=-7, max_value=7, max_denominator=1000)
epsilons = st.sampled_from([Fraction(1, 2), Fraction(3, 10), Fraction(1, 10), Fraction(1, 20)])


def meniscus(eps, theta) -> Meniscus:
    return Meniscus(R(eps), R(theta))


def test_centre_point_at_level_zero():
    out = list(candidates_at(0, meniscus(Fraction(1, 2), 0)))
    assert [(c.u, c.t) for c in out] == [(GaussianInt(1), 0)]


@given(epsilons, angles, st.integers(0, 7))
def test_matches_disk_scan(eps, theta, t):
    m = meniscus(eps, theta)
    adj = adjust_meniscus(m)
    got = [c.u for c in candidates_at(t, m, adj)]
    assert len(got) == len(set(got))
    assert set(got) == disk_scan(t, m)
    assert {c.u for c in candidates_at(t, m, adj, exact_level=False)} == disk_scan(t, m, exact_level=False)


@given(epsilons, angles, st.integers(0, 9))
def test_candidate_invariants(eps, theta, t):
    m = meniscus(eps, theta)
    adj = adjust_meniscus(m)
    prev = None
    for c in candidates_at(t, m, adj):
        assert adj.tau.inverse().apply(c.z) == c.u
        assert c.remainder >= 0 and c.exact_level
        assert m.contains_lattice(c.u.re, c.u.im, t)
        key = (c.z.re, c.z.im)
        assert prev is None or key > prev  # columns ascending, then ordinates
        prev = key


@given(st.sampled_from([Fraction(1, 10), Fraction(1, 100), Fraction(1, 1000)]), angles, st.integers(0, 30))
def test_column_count_bound(eps, theta, t):
    m = meniscus(eps, theta)
    scan = SegmentScan(t, m, adjust_meniscus(m))
    assert scan.width <= 4 * math.sqrt(5) ** t * float(eps) ** 1.5 + 2


@given(epsilons, angles, st.integers(0, 7))
def test_column_bounds_hold(eps, theta, t):
    m = meniscus(eps, theta)
    scan = SegmentScan(t, m, adjust_meniscus(m))
    for n, y, _, _ in scan.points():
        lo, hi = scan.column(n)
        assert lo <= y <= hi
        assert scan.l <= n <= scan.r


def test_levels_partition():
    m = meniscus(Fraction(1, 10), Fraction(7, 10))
    adj = adjust_meniscus(m)
    for t in range(2, 9):
        all_t = {c.u for c in candidates_at(t, m, adj, exact_level=False)}
        exact = {c.u for c in candidates_at(t, m, adj)}
        lower = {5 * c.u for c in candidates_at(t - 2, m, adj, exact_level=False)}
        assert exact | lower == all_t and not exact & lower


class TestGrowth:
    def test_k_zero_trivial(self):
        m = meniscus(Fraction(3, 10), 1)
        adj = adjust_meniscus(m)
        assert growth_check(m, adj, find_t0(m, adj), 0) is True

    def test_example(self):
        m = meniscus(Fraction(3, 10), 1)
        adj = adjust_meniscus(m)
        t0 = find_t0(m, adj)
        assert cumulative_count(t0, m, adj) >= 2
        assert all(cumulative_count(t, m, adj) <= 1 for t in range(t0))
        assert cumulative_count(t0 + 2, m, adj) >= 6
        assert cumulative_count(t0 + 4, m, adj) >= 26

    def test_skip_marker(self):
        m = meniscus(Fraction(1, 20), Fraction(7, 10))
        assert growth_check(m, None, 0, 1) is Skip.PRECONDITION

    def test_mixed_parity_counterexample(self):
        # |C_2| = 2 from one point of level 1 and one of level 2; the segment argument needs a common lattice
        m = meniscus(Fraction(1, 10), -2)
        adj = adjust_meniscus(m)
        assert find_t0(m, adj) == 2
        assert count_lattice(1, m, adj) == 1 and count_lattice(2, m, adj) == 1
        assert cumulative_count(4, m, adj) == 2
        assert growth_check(m, adj, 2, 1) is False

    @given(epsilons, angles)
    def test_same_parity_growth_and_witnesses(self, eps, theta):
        m = meniscus(eps, theta)
        adj = adjust_meniscus(m)
        t = next(t for t in range(40) if count_lattice(t, m, adj) >= 2)
        pts = [c.u for c in candidates_at(t, m, adj, exact_level=False)][:2]
        for k in (0, 1, 2):
            assert cumulative_count(t + 2 * k, m, adj) >= 1 + 5**k
            wit = segment_witnesses(pts[0], pts[1], k)
            assert len(set(wit)) == 1 + 5**k
            assert all(m.contains_lattice(z.re, z.im, t + 2 * k) for z in wit)


def test_conjecture_rows():
    m = meniscus(Fraction(1, 20), Fraction(7, 10))
    rows = conjecture_stats(m, None, 9)
    t0 = find_t0(m)
    assert [r.t for r in rows] == list(range(10))
    for r in rows:
        assert r.prime_wins <= r.s2s_wins <= r.candidates
        if r.t < t0:
            assert r.candidates <= 1
    assert CSV_HEADER == "t,candidates,s2s_wins,prime_wins,area"
    assert rows[6].csv().startswith("6,5,5,1,")


def test_rejects_foreign_transform():
    m = meniscus(Fraction(1, 10), 1)
    from pvsynth.diophantine import GridTransform

    with pytest.raises(ValueError):
        list(candidates_at(3, m, GridTransform(1, 5, 0, 1)))
