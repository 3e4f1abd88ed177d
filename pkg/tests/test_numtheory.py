from __future__ import annotations

import math
import random

import pytest
from hypothesis import given, strategies as st

from pvsynth.exact import GaussianInt
from pvsynth.numtheory import (
    S2SWitness,
    bounded_s2s,
    factor,
    is_probable_prime,
    is_s2s_exhaustive,
    rabin_shallit,
    s2s_criterion,
    s2s_decide_and_construct,
)


def trial_factor(n: int) -> list[tuple[int, int]]:
    out, p = [], 2
    while p * p <= n:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if e:
            out.append((p, e))
        p += 1
    if n > 1:
        out.append((n, 1))
    return out


def is_prime_slow(n: int) -> bool:
    return n >= 2 and all(n % d for d in range(2, math.isqrt(n) + 1))


PRIMES_1MOD4 = [p for p in range(5, 20_000) if p % 4 == 1 and is_prime_slow(p)]


class TestPrimality:
    @pytest.mark.parametrize("n,expected", [(5, True), (561, False), (1009, True), (2, True), (1, False), (1_000_003, True)])
    def test_examples(self, n, expected):
        assert is_probable_prime(n, k=25) is expected

    def test_carmichael_numbers(self):
        for n in (561, 1105, 1729, 2465, 2821, 6601, 8911, 41041, 825265, 321197185, 5394826801):
            assert not is_probable_prime(n)

    @given(st.integers(2, 3_000_000))
    def test_matches_trial_division(self, n):
        assert is_probable_prime(n) == is_prime_slow(n)

    def test_large_prime(self):
        assert is_probable_prime(2**127 - 1)
        assert not is_probable_prime((2**61 - 1) * (2**31 - 1))


class TestFactor:
    def test_examples(self):
        assert factor(1) == []
        assert factor(45) == [(3, 2), (5, 1)]
        assert factor(5**6) == [(5, 6)]

    @given(st.integers(1, 10**9))
    def test_matches_trial_division(self, n):
        f = factor(n)
        assert f == trial_factor(n)

    def test_semiprime_desk_scale(self):
        p, q = 2**61 - 1, 1_000_000_007
        assert factor(p * q) == sorted([(p, 1), (q, 1)])


class TestSumOfTwoSquares:
    @pytest.mark.parametrize("n,expected", [(21, None), (45, (3, 6)), (5, (1, 2)), (2, (1, 1)), (9, (0, 3)), (1, (0, 1))])
    def test_examples(self, n, expected):
        w = s2s_decide_and_construct(factor(n))
        assert (w if w is None else (w.c, w.d)) == expected

    def test_agrees_with_exhaustive_search(self):
        for n in range(1, 20_001):
            w = s2s_decide_and_construct(factor(n))
            assert (w is not None) == is_s2s_exhaustive(n) == s2s_criterion(factor(n))
            if w is not None:
                assert w.c * w.c + w.d * w.d == n

    def test_witness_checks_itself(self):
        with pytest.raises(ValueError):
            S2SWitness(1, 1, 3)
        assert S2SWitness.of(GaussianInt(-2, 1)) == S2SWitness(1, 2, 5)

    @pytest.mark.parametrize("p,pair", [(5, (1, 2)), (13, (2, 3)), (1009, (15, 28))])
    def test_rabin_shallit_examples(self, p, pair):
        w = rabin_shallit(p, random.Random(0))
        assert (w.c, w.d) == pair

    def test_rabin_shallit_all_small_primes(self):
        rng = random.Random(1)
        for p in PRIMES_1MOD4:
            w = rabin_shallit(p, rng)
            assert w.c**2 + w.d**2 == p

    @pytest.mark.parametrize("p", [3, 7, 21, 25])
    def test_rabin_shallit_rejects(self, p):
        with pytest.raises(ValueError):
            rabin_shallit(p)

    def test_rabin_shallit_round_count(self):
        # expected two rounds; count rounds until success over many seeds
        rounds = []
        for seed in range(400):
            for k in range(1, 50):
                try:
                    rabin_shallit(1009, random.Random(seed), max_rounds=k)
                    rounds.append(k)
                    break
                except RuntimeError:
                    pass
        assert 1.5 <= sum(rounds) / len(rounds) <= 2.5


class TestBounded:
    def test_examples(self):
        assert bounded_s2s(13, 2**-20, random.Random(0)) == S2SWitness(2, 3, 13)
        assert all(bounded_s2s(21, 0.5, random.Random(s)) is None for s in range(50))
        hits = sum(bounded_s2s(5, 0.5, random.Random(s)) is not None for s in range(200))
        assert hits > 100

    @pytest.mark.parametrize("n,delta", [(3, 0.5), (4, 0.5), (1, 0.5), (13, 0.0), (13, 1.0)])
    def test_preconditions(self, n, delta):
        with pytest.raises(ValueError):
            bounded_s2s(n, delta)

    @given(st.integers(2, 10**6).map(lambda k: 4 * k + 1), st.integers(0, 2**32))
    def test_witnesses_are_genuine(self, n, seed):
        w = bounded_s2s(n, 0.25, random.Random(seed))
        assert w is None or w.c**2 + w.d**2 == n

    def test_nil_rate(self):
        rng = random.Random(5)
        nil = sum(bounded_s2s(p, 0.25, rng) is None for p in PRIMES_1MOD4[:1000])
        assert nil / 1000 <= 0.30
