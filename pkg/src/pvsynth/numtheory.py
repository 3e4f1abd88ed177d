"""Primality, factoring and sums of two squares.

Randomized routines take an explicit ``random.Random``; nothing reads global
random state, so every result is reproducible from a seed.
"""
from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass
from typing import Optional

from .exact import GaussianInt, gaussian_gcd

_SMALL_PRIMES = [p for p in range(2, 1000) if all(p % q for q in range(2, math.isqrt(p) + 1))]


class FactoringUnavailable(RuntimeError):
    """The factoring time budget ran out."""


@dataclass(frozen=True)
class S2SWitness:
    c: int
    d: int
    n: int

    def __post_init__(self) -> None:
        if self.c * self.c + self.d * self.d != self.n:
            raise ValueError(f"{self.c}^2 + {self.d}^2 != {self.n}")

    @classmethod
    def of(cls, z: GaussianInt) -> S2SWitness:
        a, b = sorted((abs(z.re), abs(z.im)))
        return cls(a, b, z.norm())

    def gaussian(self) -> GaussianInt:
        return GaussianInt(self.c, self.d)


Factorization = list  # list[tuple[int, int]], primes strictly increasing


def _rng(rng: random.Random | None, salt: int = 0) -> random.Random:
    return rng if rng is not None else random.Random(salt)


def is_probable_prime(n: int, k: int = 64, rng: random.Random | None = None) -> bool:
    """Strong-pseudoprime (Miller-Rabin) test with k random bases."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n == p:
            return True
        if n % p == 0:
            return False
    if n < 1_000_000:
        return True  # no factor below 1000 and n < 1000^2
    rng = _rng(rng, n)
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for _ in range(k):
        a = rng.randrange(2, n - 1)
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_brent(n: int, rng: random.Random, deadline: float) -> int:
    if n % 2 == 0:
        return 2
    while True:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
            if time.monotonic() > deadline:
                raise FactoringUnavailable(f"budget exhausted factoring {n}")
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def factor(n: int, budget: float = 10.0, rng: random.Random | None = None) -> Factorization:
    """Prime factorization as [(p, e), ...] with p increasing.

    Trial division by small primes, then Brent's cycle-finding variant of
    Pollard rho on the cofactor.  Raises FactoringUnavailable past ``budget`` seconds.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = _rng(rng, n)
    deadline = time.monotonic() + budget
    counts: dict[int, int] = {}
    for p in _SMALL_PRIMES:
        if p * p > n:
            break
        while n % p == 0:
            counts[p] = counts.get(p, 0) + 1
            n //= p
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if is_probable_prime(m, rng=rng):
            counts[m] = counts.get(m, 0) + 1
            continue
        r = math.isqrt(m)
        if r * r == m:
            stack += [r, r]
            continue
        d = _pollard_brent(m, rng, deadline)
        stack += [d, m // d]
    return sorted(counts.items())


def s2s_criterion(f: Factorization) -> bool:
    return all(e % 2 == 0 for p, e in f if p % 4 == 3)


def _gauss_pow(z: GaussianInt, e: int) -> GaussianInt:
    out = GaussianInt(1)
    while e:
        if e & 1:
            out = out * z
        z = z * z
        e >>= 1
    return out


def s2s_decide_and_construct(f: Factorization, rng: random.Random | None = None) -> Optional[S2SWitness]:
    """None when some 4m+3 prime has odd exponent; otherwise c^2 + d^2 = n."""
    n = 1
    for p, e in f:
        n *= p**e
    if not s2s_criterion(f):
        return None
    rng = _rng(rng, n)
    z = GaussianInt(1)
    for p, e in f:
        if p == 2:
            z = z * _gauss_pow(GaussianInt(1, 1), e)
        elif p % 4 == 1:
            w = rabin_shallit(p, rng)
            z = z * _gauss_pow(w.gaussian(), e)
        else:
            z = z * p ** (e // 2)
    return S2SWitness.of(z)


# ---------------------------------------------------------------------------
# Rabin-Shallit: a square root of -1 via a polynomial gcd, then a Gaussian gcd


def _poly_mulmod(a: tuple[int, int], b: tuple[int, int], beta: int, gamma: int, n: int) -> tuple[int, int]:
    # elements of Z_n[x] / (x^2 - beta x - gamma), stored as (c0, c1)
    c0 = a[0] * b[0]
    c1 = a[0] * b[1] + a[1] * b[0]
    c2 = a[1] * b[1]
    return (c0 + c2 * gamma) % n, (c1 + c2 * beta) % n


def _root_round(n: int, b: int) -> Optional[int]:
    """One round: gcd((x-b)^2 + 1, x^((n-1)/2) - 1) over Z_n.

    When the gcd is linear, x - a, the residue a - b squares to -1.
    Returns that square root or None.
    """
    # (x-b)^2 + 1 = x^2 - 2b x + (b^2 + 1), so x^2 = 2b x - (b^2 + 1)
    beta, gamma = (2 * b) % n, (-(b * b + 1)) % n
    e = (n - 1) // 2
    result, base = (1, 0), (0, 1)
    while e:
        if e & 1:
            result = _poly_mulmod(result, base, beta, gamma, n)
        base = _poly_mulmod(base, base, beta, gamma, n)
        e >>= 1
    r0, r1 = (result[0] - 1) % n, result[1]
    # remainder r1 x + r0; gcd with the quadratic is linear iff it has exactly one common root
    if r1 == 0:
        return None
    if math.gcd(r1, n) != 1:
        return None
    a = (-r0 * pow(r1, -1, n)) % n
    s = (a - b) % n
    if (s * s + 1) % n != 0:
        return None
    return s


def _descend(n: int, s: int) -> GaussianInt:
    return gaussian_gcd(GaussianInt(n), GaussianInt(s, 1))


def rabin_shallit(p: int, rng: random.Random | None = None, max_rounds: int | None = None) -> S2SWitness:
    """Two-square representation of a prime p = 1 (mod 4)."""
    if p % 4 != 1 or not is_probable_prime(p):
        raise ValueError(f"{p} is not a prime of the form 4m+1")
    rng = _rng(rng, p)
    rounds = 0
    while max_rounds is None or rounds < max_rounds:
        rounds += 1
        s = _root_round(p, rng.randrange(p))
        if s is not None:
            return S2SWitness.of(_descend(p, s))
    raise RuntimeError(f"no square root of -1 mod {p} in {max_rounds} rounds")


def bounded_s2s(n: int, delta: float, rng: random.Random | None = None) -> Optional[S2SWitness]:
    """At most J+1 rounds, J = ceil(log2(1/delta)); any returned witness is checked."""
    if n < 5 or n % 4 != 1:
        raise ValueError(f"{n} must be >= 5 and = 1 (mod 4)")
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    rng = _rng(rng, n)
    rounds = math.ceil(math.log2(1 / delta)) + 1
    for _ in range(rounds):
        s = _root_round(n, rng.randrange(n))
        if s is None:
            continue
        z = _descend(n, s)
        if z.norm() == n:
            return S2SWitness.of(z)
        return None
    return None


def is_s2s_exhaustive(n: int) -> bool:
    c = 0
    while 2 * c * c <= n:
        d2 = n - c * c
        d = math.isqrt(d2)
        if d * d == d2:
            return True
        c += 1
    return False
