from __future__ import annotations

import cmath
import math
from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies as st

from pvsynth.diophantine import (
    GridTransform,
    QuasiRational,
    adjust_meniscus,
    egcd,
    enlarged_meniscus,
    orthogonal_align,
    rational_convergent,
    real_convergent,
)
from pvsynth.exact import GaussianInt, Interval, RealValue
from pvsynth.geometry import DomainError, Meniscus

R = RealValue.from_rational


def convergents(g: Fraction) -> list[tuple[int, int]]:
    out, (p0, q0), (p1, q1) = [], (1, 0), (math.floor(g), 1)
    x = g
    while True:
        out.append((p1, q1))
        frac = x - math.floor(x)
        if frac == 0:
            return out
        x = 1 / frac
        a = math.floor(x)
        p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0


class TestRationalConvergent:
    def test_examples(self):
        c = rational_convergent(Fraction(355, 113), 100)
        assert (c.p, c.q) == (22, 7)  # 333/106 is the next convergent but 106 > 100
        c = rational_convergent(Fraction(2, 3), 50)
        assert (c.p, c.q) == (2, 3)
        c = rational_convergent(Fraction(5), 1)
        assert (c.p, c.q, c.k) == (5, 1, 0)

    def test_long_decimal_of_355_113(self):
        g = Fraction(int(Fraction(355, 113) * 10**30), 10**30)
        c = rational_convergent(g, 100)
        assert c.q <= 100 and abs(g * c.q - c.p) < Fraction(1, 100)

    @given(st.fractions(min_value=-100, max_value=100, max_denominator=10**9), st.integers(1, 10**6))
    def test_bounds_and_is_a_convergent(self, g, r):
        c = rational_convergent(g, r)
        assert 1 <= c.q <= r
        assert abs(g * c.q - c.p) < Fraction(1, r)
        assert (c.p, c.q) in convergents(g)

    def test_bad_r(self):
        with pytest.raises(ValueError):
            rational_convergent(Fraction(1, 3), 0)


class TestRealConvergent:
    def test_pi(self):
        assert real_convergent(RealValue.pi_multiple(1), 100) == (355, 113)

    @given(st.integers(0, 10**40), st.integers(1, 10**5))
    def test_bounds_on_digit_streams(self, digits, r):
        gamma_exact = Fraction(digits, 10**40) * 7 - 3
        x, y = real_convergent(RealValue(lambda m: Fraction(math.floor(gamma_exact * 10**m), 10**m)), r)
        assert 1 <= y <= 2 * r
        assert abs(gamma_exact * y - x) < Fraction(1, r)


class TestGridTransform:
    def test_determinant_enforced(self):
        with pytest.raises(ValueError):
            GridTransform(2, 0, 0, 1)

    @given(st.integers(-50, 50), st.integers(-50, 50))
    def test_inverse(self, k, j):
        t = GridTransform(1, k, 0, 1) @ GridTransform(1, 0, j, 1)
        assert t @ t.inverse() == GridTransform.identity()
        z = GaussianInt(k, j)
        assert t.inverse().apply(t.apply(z)) == z

    @given(st.integers(-10**6, 10**6), st.integers(-10**6, 10**6))
    def test_egcd(self, a, b):
        g, u, v = egcd(a, b)
        assert g == math.gcd(a, b) and u * a + v * b == g


class TestOrthogonalAlign:
    def test_example(self):
        q = QuasiRational(Interval.point(1), 1, 1)
        assert orthogonal_align(q, GaussianInt(1, -1)) == GridTransform(1, -1, 0, 1)

    def test_errors(self):
        with pytest.raises(DomainError):
            QuasiRational(Interval.point(1), 0, 0)
        with pytest.raises(DomainError):
            QuasiRational(Interval.point(1), 2, 4)
        q = QuasiRational(Interval.point(1), 1, 1)
        with pytest.raises(DomainError):
            orthogonal_align(q, GaussianInt(1, 0))
        with pytest.raises(DomainError):
            orthogonal_align(q, GaussianInt(0, 0))

    @given(st.integers(-10**4, 10**4), st.integers(-10**4, 10**4), st.integers(1, 50).flatmap(lambda k: st.sampled_from([k, -k])))
    def test_properties(self, a, b, k):
        assume((a, b) != (0, 0) and math.gcd(a, b) == 1)
        mu = Fraction(3, 7)
        tau = orthogonal_align(QuasiRational(Interval.point(mu), a, b), GaussianInt(-b * k, a * k))
        assert tau.det == 1
        assert tau.apply(GaussianInt(a, b)) == GaussianInt(0, 1)  # tau(q) = mu i
        r = tau.apply(GaussianInt(-b * k, a * k))
        assert abs(r.im) < abs(r.re)


class TestAdjust:
    def test_flat_meniscus(self):
        for eps in (Fraction(1, 10), Fraction(1, 1000)):
            adj = adjust_meniscus(Meniscus(R(eps), R(0)))
            assert adj.tau == GridTransform.identity()
            assert adj.left.contains(1 - eps**2) and adj.right.contains(1)
            assert adj.width - eps**2 < Fraction(1, 10**20)

    def test_quarter_turn(self):
        adj = adjust_meniscus(Meniscus(R(Fraction(1, 10**4)), RealValue.pi_multiple(Fraction(1, 2))))
        assert adj.width <= 64 * Fraction(1, 10**6)

    @given(st.fractions(min_value=-7, max_value=7, max_denominator=10**4), st.sampled_from([2, 3, 4]))
    def test_band_contains_transformed_meniscus(self, theta, k):
        eps = Fraction(1, 10**k)
        m = Meniscus(R(eps), R(theta))
        adj = adjust_meniscus(m)
        tau = adj.tau
        assert tau.det == 1
        c0, e = 1 - float(eps) ** 2, float(eps)
        half = math.atan2(math.sqrt(1 - c0 * c0), c0)
        center = cmath.exp(-0.5j * float(theta))
        tol = 1e-6 * float(adj.width)
        samples = [center * cmath.exp(1j * half * (2 * j / 40 - 1)) for j in range(41)]
        samples += [center * complex(c0, math.sqrt(1 - c0 * c0) * (2 * j / 40 - 1)) for j in range(41)]
        for z in samples:
            x = tau.a11 * z.real + tau.a12 * z.imag
            assert float(adj.left.lo) - tol <= x <= float(adj.right.hi) + tol
        assert float(adj.width) <= 8 * e**1.5

    @given(st.fractions(min_value=-7, max_value=7, max_denominator=10**4), st.sampled_from([2, 3, 5]))
    def test_enlarged_meniscus_contains(self, theta, k):
        m = Meniscus(R(Fraction(1, 10**k)), R(theta))
        adj = adjust_meniscus(m)
        choice = enlarged_meniscus(m, *adj.direction)
        assert choice["z1"]["contains"] or choice["z2"]["contains"]
