"""Column-by-column enumeration of lattice points in the scaled meniscus.

After ``adjust_meniscus`` the transformed meniscus tau(M) sits in a thin
vertical band, so sqrt(5)^t tau(M) meets only a handful of integer columns.
In column n the disk condition is an exact quadratic in the ordinate and the
base-line condition is linear; both bounds are computed exactly or in
interval arithmetic, and every emitted point is re-checked in the original
coordinates.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional

import numpy as np

from .diophantine import AdjustResult, GridTransform, adjust_meniscus
from .exact import GaussianInt, Interval, sqrt_interval
from .geometry import Meniscus, meniscus_metrics
from .numtheory import factor, is_probable_prime, s2s_criterion


@dataclass(frozen=True)
class Candidate:
    z: GaussianInt  # sqrt(5)^t tau(u), in transformed coordinates
    t: int
    u: GaussianInt  # tau^{-1} z, so the candidate is u / sqrt(5)^t

    @property
    def u_repr(self) -> tuple[GaussianInt, int]:
        return self.u, self.t

    @property
    def remainder(self) -> int:
        """5^t - |u|^2, the norm left for v."""
        return 5**self.t - self.u.norm()

    @property
    def exact_level(self) -> bool:
        return not (self.u.re % 5 == 0 and self.u.im % 5 == 0)


def _sqrt5_power(t: int, p: int) -> Interval:
    s = Interval.point(5 ** (t // 2))
    if t % 2:
        s = s * sqrt_interval(Interval.point(5), p)
    return s


class SegmentScan:
    """The columns l..r of sqrt(5)^t tau(M) and the ordinate range in each."""

    def __init__(self, t: int, m: Meniscus, adj: AdjustResult) -> None:
        self.t = t
        self.m = m
        self.tau = adj.tau
        inv = adj.tau.inverse()
        self._A, self._B, self._C, self._D = inv.a11, inv.a12, inv.a21, inv.a22
        self._Q = self._B**2 + self._D**2
        self._P = self._A * self._B + self._C * self._D
        self._N = 5**t
        mag = max(abs(x) for x in (self._A, self._B, self._C, self._D)) + 1
        self.p = 12 + len(str(5 ** ((t + 1) // 2))) + len(str(mag))
        scale = _sqrt5_power(t, self.p + 4)
        left = adj.left * scale
        right = adj.right * scale
        self.l = math.floor(left.lo)
        self.r = math.floor(right.hi)
        c, s = m.half_angle(self.p)
        self._kappa = c * self._B - s * self._D
        self._slope = c * self._A - s * self._C
        self._rhs = m.base_offset(self.p) * scale

    @property
    def width(self) -> int:
        return self.r - self.l + 1

    def disk_range(self, n: int) -> Optional[tuple[int, int]]:
        """Exact ordinate range of the disk |tau^{-1}(n, y)|^2 <= 5^t in column n."""
        disc = self._Q * self._N - n * n
        if disc < 0:
            return None
        root = math.isqrt(disc)
        lo = -((root + self._P * n) // self._Q)  # ceil((-root - P n) / Q)
        hi = (root - self._P * n) // self._Q
        return (lo, hi) if lo <= hi else None

    def column(self, n: int) -> Optional[tuple[int, int]]:
        """Conservative ordinate range [g(n), f(n)] in column n; may include boundary points."""
        disk = self.disk_range(n)
        if disk is None:
            return None
        lo, hi = disk
        kappa = self._kappa
        if kappa.lo <= 0 <= kappa.hi:
            return lo, hi
        # base line: kappa * y > rhs - n * slope
        bound = (self._rhs - self._slope * n) / kappa
        if kappa.lo > 0:
            lo = max(lo, math.floor(bound.lo))
        else:
            hi = min(hi, math.ceil(bound.hi))
        return (lo, hi) if lo <= hi else None

    def points(self) -> Iterator[tuple[int, int, int, int]]:
        """(n, y, x', y') for every lattice point, with (x', y') = tau^{-1}(n, y)."""
        A, B, C, D = self._A, self._B, self._C, self._D
        for n in range(self.l, self.r + 1):
            rng = self.column(n)
            if rng is None:
                continue
            for y in range(rng[0], rng[1] + 1):
                x1, y1 = A * n + B * y, C * n + D * y
                if self.m.contains_lattice(x1, y1, self.t):
                    yield n, y, x1, y1


def candidates_at(t: int, m: Meniscus, adj: AdjustResult | GridTransform | None = None, exact_level: bool = True) -> Iterator[Candidate]:
    """Lattice points of sqrt(5)^t M, columns ascending then ordinate ascending.

    With ``exact_level`` the points whose preimage is divisible by 5 (level t-2
    or lower) are dropped.
    """
    adj = _as_adjust(m, adj)
    for n, y, x1, y1 in SegmentScan(t, m, adj).points():
        if exact_level and x1 % 5 == 0 and y1 % 5 == 0:
            continue
        yield Candidate(GaussianInt(n, y), t, GaussianInt(x1, y1))


def _as_adjust(m: Meniscus, adj: AdjustResult | GridTransform | None) -> AdjustResult:
    if adj is None:
        return adjust_meniscus(m)
    if isinstance(adj, GridTransform):
        full = adjust_meniscus(m)
        if full.tau != adj:
            raise ValueError("transform does not match adjust_meniscus for this meniscus")
        return full
    return adj


# ---------------------------------------------------------------------------
# brute-force oracle over the whole disk


def disk_scan(t: int, m: Meniscus, exact_level: bool = True) -> set[GaussianInt]:
    """All u with |u|^2 <= 5^t and u / sqrt(5)^t in M, by scanning the disk.

    A float prefilter with a generous margin discards points far from the
    base line; the survivors are decided exactly.
    """
    n = 5**t
    r = math.isqrt(n)
    xs = np.arange(-r, r + 1, dtype=np.int64)
    c, s = (float(v.mid) for v in m.half_angle(20))
    c0 = float(m.base_offset(20).mid)
    root = math.sqrt(n)
    out: set[GaussianInt] = set()
    for x in xs.tolist():
        h = math.isqrt(n - x * x)
        ys = np.arange(-h, h + 1, dtype=np.int64)
        proj = (c * x - s * ys) / root
        keep = ys[proj > c0 - 1e-9]
        for y in keep.tolist():
            if exact_level and x % 5 == 0 and y % 5 == 0:
                continue
            if m.contains_lattice(x, y, t):
                out.add(GaussianInt(x, y))
    return out


# ---------------------------------------------------------------------------
# counts


def count_lattice(t: int, m: Meniscus, adj: AdjustResult | None = None) -> int:
    """Number of Gaussian integers in sqrt(5)^t M (all levels of t's parity)."""
    if t < 0:
        return 0
    return sum(1 for _ in SegmentScan(t, m, _as_adjust(m, adj)).points())


def cumulative_count(t: int, m: Meniscus, adj: AdjustResult | None = None) -> int:
    """|C_t|: candidates of level at most t, of either parity."""
    adj = _as_adjust(m, adj)
    return count_lattice(t, m, adj) + count_lattice(t - 1, m, adj)


def find_t0(m: Meniscus, adj: AdjustResult | None = None, t_max: int = 200) -> int:
    """Least t with |C_t| >= 2."""
    adj = _as_adjust(m, adj)
    prev = 0
    for t in range(t_max + 1):
        cur = count_lattice(t, m, adj)
        if cur + prev >= 2:
            return t
        prev = cur
    raise RuntimeError(f"|C_t| < 2 for all t <= {t_max}")


class Skip(enum.Enum):
    PRECONDITION = "precondition unmet"


def growth_check(m: Meniscus, adj: AdjustResult | None, t: int, k: int) -> bool | Skip:
    """Does |C_{t+2k}| >= 1 + 5^k hold, given |C_t| >= 2?"""
    adj = _as_adjust(m, adj)
    if cumulative_count(t, m, adj) < 2:
        return Skip.PRECONDITION
    return cumulative_count(t + 2 * k, m, adj) >= 1 + 5**k


def segment_witnesses(z1: GaussianInt, z2: GaussianInt, k: int) -> list[GaussianInt]:
    """The 1 + 5^k lattice points ((5^k - j) z1 + j z2), j = 0..5^k.

    For two points of sqrt(5)^t M they lie on the segment between 5^k z1 and
    5^k z2, hence inside sqrt(5)^{t+2k} M by convexity.
    """
    q = 5**k
    return [(q - j) * z1 + j * z2 for j in range(q + 1)]


# ---------------------------------------------------------------------------
# empirical tables for the density conjectures


@dataclass(frozen=True)
class ConjectureRow:
    t: int
    candidates: int
    s2s_wins: int
    prime_wins: int
    area: float

    def csv(self) -> str:
        return f"{self.t},{self.candidates},{self.s2s_wins},{self.prime_wins},{self.area:.6g}"


CSV_HEADER = "t,candidates,s2s_wins,prime_wins,area"


def _minimal(u: GaussianInt, t: int) -> tuple[GaussianInt, int]:
    while t >= 2 and u.re % 5 == 0 and u.im % 5 == 0:
        u = GaussianInt(u.re // 5, u.im // 5)
        t -= 2
    return u, t


def conjecture_stats(m: Meniscus, adj: AdjustResult | None, t_max: int) -> list[ConjectureRow]:
    """Per level: |C_t|, winners (remainder is a sum of two squares) and prime winners."""
    adj = _as_adjust(m, adj)
    area = float(meniscus_metrics(m, 20).area.mid)
    verdicts: dict[tuple[GaussianInt, int], tuple[bool, bool]] = {}

    def judge(u: GaussianInt, t: int) -> tuple[bool, bool]:
        key = _minimal(u, t)
        if key not in verdicts:
            w, s = key
            n = 5**s - w.norm()
            if n == 0:
                verdicts[key] = (True, False)
            else:
                verdicts[key] = (s2s_criterion(factor(n)), n % 4 == 1 and is_probable_prime(n))
        return verdicts[key]

    rows = []
    levels: dict[int, list[GaussianInt]] = {}
    for t in range(t_max + 1):
        levels[t] = [c.u for c in candidates_at(t, m, adj, exact_level=False)]
        members = [(u, t) for u in levels[t]] + [(u, t - 1) for u in levels.get(t - 1, [])]
        wins = primes = 0
        for u, s in members:
            w, p = judge(u, s)
            wins += w
            primes += p
        rows.append(ConjectureRow(t, len(members), wins, primes, 5**t * area))
    return rows
