"""Search drivers: walk the levels, try each candidate's norm equation, stop at the first winner."""
from __future__ import annotations

import enum
import logging
import math
import random
from dataclasses import dataclass, field
from typing import Callable, Optional

from .circuit import ExactUnitary, IntegrityError, VWord, decompose, evaluate
from .diophantine import adjust_meniscus
from .enumeration import Candidate, candidates_at, disk_scan, find_t0
from .exact import GaussianInt, Interval, RealValue
from .geometry import Meniscus, verified_trace_distance
from .numtheory import (
    FactoringUnavailable,
    S2SWitness,
    bounded_s2s,
    factor,
    is_probable_prime,
    is_s2s_exhaustive,
    rabin_shallit,
    s2s_decide_and_construct,
)

log = logging.getLogger(__name__)

ZERO_WITNESS = S2SWitness(0, 0, 0)


class ResourceError(RuntimeError):
    """The level cap was reached without a winner."""


class Variant(enum.Enum):
    SA1_FACTOR = "sa1-factor"
    SA1_PRIME = "sa1-prime"
    SA2 = "sa2"


# ---------------------------------------------------------------------------
# norm-equation procedures


def procedure_p1(n: int, rng: random.Random | None = None, budget: float = 10.0) -> Optional[S2SWitness]:
    """Complete: a witness iff n is a sum of two squares."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return ZERO_WITNESS
    rng = rng or random.Random(n)
    try:
        f = factor(n, budget=budget, rng=rng)
    except FactoringUnavailable:
        log.warning("factoring %d ran out of budget; falling back to the prime-only procedure", n)
        return procedure_p2(n, rng)
    return s2s_decide_and_construct(f, rng)


def procedure_p2(n: int, rng: random.Random | None = None) -> Optional[S2SWitness]:
    """Sound but incomplete: only primes of the form 4m+1 get a witness."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if n % 4 != 1 or not is_probable_prime(n, rng=rng):
        return None
    return rabin_shallit(n, rng)


def primality_rounds(delta: float) -> int:
    return max(1, math.ceil(0.5 * math.log2(1 / delta)))


def procedure_p_delta(n: int, delta: float, rng: random.Random | None = None) -> Optional[S2SWitness]:
    """4m+1 gate, a bounded primality test, then bounded root finding."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    if n % 4 != 1 or n < 5:
        return None
    rng = rng or random.Random(n)
    if not is_probable_prime(n, k=primality_rounds(delta), rng=rng):
        return None
    return bounded_s2s(n, delta, rng)


# ---------------------------------------------------------------------------
# the driver


@dataclass(frozen=True)
class SynthesisResult:
    u: GaussianInt
    v: GaussianInt
    t: int
    word: VWord
    trace_dist: Interval
    explored: int
    p_calls: int = 0
    nil_count: int = 0
    variant: Variant = Variant.SA1_PRIME

    @property
    def unitary(self) -> ExactUnitary:
        return ExactUnitary(self.u, self.v, self.t)


@dataclass
class SearchStats:
    explored: int = 0
    p_calls: int = 0
    nil_count: int = 0
    levels: list[int] = field(default_factory=list)


def default_t_cap(epsilon: RealValue) -> int:
    e = float(epsilon.interval_at(20).lo)
    return math.ceil(3 * math.log(1 / e, 5)) + 200


def sa2_horizon(t0: int) -> int:
    return t0 + math.ceil(4 * math.log(t0 + 2))


def _procedure(variant: Variant, delta: float, rng: random.Random) -> Callable[[int], Optional[S2SWitness]]:
    if variant is Variant.SA1_FACTOR:
        return lambda n: procedure_p1(n, rng)
    if variant is Variant.SA1_PRIME:
        return lambda n: procedure_p2(n, rng)
    return lambda n: procedure_p_delta(n, delta, rng)


def _assemble(c: Candidate, w: S2SWitness, m: Meniscus) -> tuple[ExactUnitary, VWord, Interval] | None:
    v = GaussianInt(w.c, w.d)
    unitary = ExactUnitary(c.u, v, c.t)
    word = decompose(unitary)
    if evaluate(word) != unitary:
        raise IntegrityError(f"word {word} does not evaluate back to {unitary}")
    td, ok = verified_trace_distance(c.u, v, c.t, m.theta, m.epsilon)
    if not ok:
        return None
    return unitary, word, td


def synthesize(
    theta: RealValue,
    epsilon: RealValue,
    variant: Variant = Variant.SA1_PRIME,
    delta: float = 0.1,
    seed: int = 0,
    t_cap: int | None = None,
    horizon: int | None = None,
    meniscus: Meniscus | None = None,
) -> Optional[SynthesisResult]:
    """Least-level winning candidate under the chosen procedure, or None (SA2 only)."""
    m = meniscus or Meniscus(epsilon, theta)
    adj = adjust_meniscus(m)
    rng = random.Random(seed)
    proc = _procedure(variant, delta, rng)
    cap = t_cap if t_cap is not None else default_t_cap(epsilon)
    if variant is Variant.SA2 and horizon is None:
        horizon = sa2_horizon(find_t0(m, adj, t_max=cap))
    last = min(cap, horizon) if horizon is not None else cap
    stats = SearchStats()
    for t in range(0, last + 1):
        stats.levels.append(t)
        for c in candidates_at(t, m, adj):
            stats.explored += 1
            n = c.remainder
            if n == 0:
                w: Optional[S2SWitness] = ZERO_WITNESS
            else:
                stats.p_calls += 1
                w = proc(n)
            if w is None:
                stats.nil_count += 1
                continue
            built = _assemble(c, w, m)
            if built is None:
                log.warning("trace distance of candidate %s at level %d undecided; skipping", c.u, t)
                continue
            unitary, word, td = built
            return SynthesisResult(unitary.u, unitary.v, t, word, td, stats.explored, stats.p_calls, stats.nil_count, variant)
    if horizon is not None and horizon <= cap:
        return None
    raise ResourceError(f"no winning candidate at levels <= {cap}")


def brute_force_min_level(theta: RealValue, epsilon: RealValue, t_max: int = 12) -> int:
    """Least t with a winning candidate, by scanning the whole disk and testing sums of two squares directly."""
    m = Meniscus(epsilon, theta)
    for t in range(t_max + 1):
        for u in disk_scan(t, m):
            if is_s2s_exhaustive(5**t - u.norm()):
                return t
    raise ResourceError(f"no winner at levels <= {t_max}")
