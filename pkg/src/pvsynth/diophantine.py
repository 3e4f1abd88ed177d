"""Continued-fraction approximation and the SL(2,Z) squeeze of a meniscus.

``adjust_meniscus`` finds an integer matrix of determinant 1 that maps the
meniscus into a vertical band of width O(eps^{3/2}), so that lattice points
of the scaled meniscus can be scanned column by column.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .exact import GaussianInt, Interval, RealValue, Rational, sqrt_interval
from .geometry import CPoint, DomainError, Meniscus


@dataclass(frozen=True)
class Convergent:
    p: int
    q: int
    k: int

    def __post_init__(self) -> None:
        if self.q < 1 or math.gcd(self.p, self.q) != 1:
            raise ValueError(f"{self.p}/{self.q} is not reduced with positive denominator")


def rational_convergent(g: Rational, r: int) -> Convergent:
    """Convergent p/q of g with |g q - p| < 1/r and 1 <= q <= r."""
    if r < 1:
        raise ValueError("r must be >= 1")
    g = Fraction(g)
    a = math.floor(g)
    p_prev, q_prev, p, q = 1, 0, a, 1
    frac = g - a
    k = 0
    while frac >= Fraction(1, r):
        gamma = 1 / frac
        a = math.floor(gamma)
        p_next, q_next = a * p + p_prev, a * q + q_prev
        if q_next > r:
            # |g q_k - p_k| < 1/q_{k+1} < 1/r
            break
        p_prev, q_prev, p, q = p, q, p_next, q_next
        frac = gamma - a
        k += 1
    return Convergent(p, q, k)


def real_convergent(gamma: RealValue, r: int) -> tuple[int, int]:
    """Reduced x/y with |gamma y - x| < 1/r and 1 <= y <= 2r."""
    if r < 1:
        raise ValueError("r must be >= 1")
    # sample g with |gamma - g| <= 1/(8 r^2); then y/(8r^2) + 1/(2r) <= 3/(4r)
    p = math.ceil(math.log10(8 * r * r)) + 1
    g = gamma.interval_at(p).lo
    c = rational_convergent(g, 2 * r)
    return c.p, c.q


def egcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, u, v) with u a + v b = g = gcd(a, b)."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        k = old_r // r
        old_r, r = r, old_r - k * r
        old_s, s = s, old_s - k * s
        old_t, t = t, old_t - k * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


@dataclass(frozen=True)
class GridTransform:
    a11: int
    a12: int
    a21: int
    a22: int

    def __post_init__(self) -> None:
        if self.det != 1:
            raise ValueError(f"determinant {self.det} != 1")

    @property
    def det(self) -> int:
        return self.a11 * self.a22 - self.a12 * self.a21

    @classmethod
    def identity(cls) -> GridTransform:
        return cls(1, 0, 0, 1)

    def __matmul__(self, other: GridTransform) -> GridTransform:
        return GridTransform(
            self.a11 * other.a11 + self.a12 * other.a21,
            self.a11 * other.a12 + self.a12 * other.a22,
            self.a21 * other.a11 + self.a22 * other.a21,
            self.a21 * other.a12 + self.a22 * other.a22,
        )

    def inverse(self) -> GridTransform:
        return GridTransform(self.a22, -self.a12, -self.a21, self.a11)

    def apply(self, z: GaussianInt) -> GaussianInt:
        return GaussianInt(self.a11 * z.re + self.a12 * z.im, self.a21 * z.re + self.a22 * z.im)

    def apply_point(self, z: CPoint) -> CPoint:
        x, y = z
        return (x * self.a11 + y * self.a12, x * self.a21 + y * self.a22)

    def rows(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return ((self.a11, self.a12), (self.a21, self.a22))


ROT90 = GridTransform(0, -1, 1, 0)


@dataclass(frozen=True)
class QuasiRational:
    """mu * (a + b i) with mu > 0 and gcd(a, b) = 1."""

    mu: Interval
    a: int
    b: int

    def __post_init__(self) -> None:
        if (self.a, self.b) == (0, 0):
            raise DomainError("quasi-rational must be nonzero")
        if math.gcd(self.a, self.b) != 1:
            raise DomainError(f"({self.a}, {self.b}) is not reduced")
        if self.mu.lo <= 0:
            raise DomainError("mu must be positive")

    def point(self) -> CPoint:
        return (self.mu * self.a, self.mu * self.b)


def _as_cpoint(r: CPoint | complex | GaussianInt) -> CPoint:
    if isinstance(r, GaussianInt):
        return (Interval.point(r.re), Interval.point(r.im))
    return r  # type: ignore[return-value]


def orthogonal_align(q: QuasiRational, r: CPoint | GaussianInt) -> GridTransform:
    """tau with tau(q) = mu i and |Im(tau r)| < |Re(tau r)|, for r orthogonal to q."""
    rx, ry = _as_cpoint(r)
    if rx.lo == rx.hi == 0 and ry.lo == ry.hi == 0:
        raise DomainError("r must be nonzero")
    dot = rx * q.a + ry * q.b
    if dot.lo > 0 or dot.hi < 0:
        raise DomainError("r is not orthogonal to q")
    g, u, v = egcd(q.a, q.b)
    tau0 = GridTransform(q.b, -q.a, u, v)
    alpha, beta = tau0.apply_point((rx, ry))
    if abs(beta).hi < abs(alpha).lo:
        return tau0
    ratio = -beta / alpha
    ks = sorted({math.ceil(ratio.lo), math.ceil(ratio.hi)})
    for k in ks:
        shear = GridTransform(1, 0, k, 1)
        a2, b2 = (shear @ tau0).apply_point((rx, ry))
        if abs(b2).hi < abs(a2).lo:
            return shear @ tau0
    # undecidable at this precision; the ceiling at the midpoint is within one of the truth
    return GridTransform(1, 0, math.ceil(ratio.mid), 1) @ tau0


# ---------------------------------------------------------------------------
# squeezing the meniscus


@dataclass(frozen=True)
class AdjustResult:
    tau: GridTransform
    left: Interval
    right: Interval
    a: int = 1
    b: int = 0
    swapped: bool = False

    @property
    def direction(self) -> tuple[int, int]:
        """(a, b) of the approximating base direction a + bi, in the original coordinates."""
        return (-self.b, self.a) if self.swapped else (self.a, self.b)

    @property
    def width(self) -> Fraction:
        """Upper bound on the band width."""
        return self.right.hi - self.left.lo


def _ceil_inv_sqrt(eps: RealValue) -> int:
    # least n with n^2 eps >= 1; round up when the comparison is undecidable
    e = eps.interval_at(40)
    n = max(1, math.isqrt(int(1 / e.hi)))
    while n * n * e.lo < 1:
        n += 1
    return n


def _working_precision(m: Meniscus) -> int:
    e = m.epsilon.interval_at(30).lo
    digits = max(1, math.ceil(-math.log10(float(e)))) if e > 0 else 30
    return 3 * digits + 20


def _extent(m: Meniscus, row: tuple[int, int], p: int) -> tuple[Interval, Interval]:
    """Enclosures of min and max of x*row[0] + y*row[1] over the meniscus."""
    pts = m.points(p)
    vals = [pts[k][0] * row[0] + pts[k][1] * row[1] for k in ("z1", "z2")]
    lo = Interval(min(v.lo for v in vals), min(v.hi for v in vals))
    hi = Interval(max(v.lo for v in vals), max(v.hi for v in vals))
    norm = sqrt_interval(Interval.point(row[0] ** 2 + row[1] ** 2), p)
    c, s = m.half_angle(p)
    c0 = m.base_offset(p)
    for sign in (1, -1):
        # extreme point of the disk in direction sign*row
        ux, uy = Interval.point(sign * row[0]) / norm, Interval.point(sign * row[1]) / norm
        proj = c * ux - s * uy
        if proj.hi <= c0.lo:
            continue  # surely outside the meniscus
        if sign == 1:
            hi = Interval(max(hi.lo, norm.lo if proj.lo > c0.hi else hi.lo), max(hi.hi, norm.hi))
        else:
            lo = Interval(min(lo.lo, -norm.hi), min(lo.hi, -norm.lo if proj.lo > c0.hi else lo.hi))
    return lo, hi


def adjust_meniscus(m: Meniscus) -> AdjustResult:
    p = _working_precision(m)
    pts = m.points(p)
    alpha = pts["z2"][0] - pts["z1"][0]
    beta = pts["z2"][1] - pts["z1"][1]
    swapped = abs(beta.mid) > abs(alpha.mid)

    def base_vector(prec: int) -> tuple[Interval, Interval]:
        pp = m.points(prec)
        ax = pp["z2"][0] - pp["z1"][0]
        ay = pp["z2"][1] - pp["z1"][1]
        if swapped:
            ax, ay = ay, -ax  # rotate by -90 degrees
        return ax, ay

    ax, _ = base_vector(p)
    if ax.lo <= 0 <= ax.hi:
        raise DomainError("base vector too short to orient at working precision")
    extra = p

    def gamma_enclosure(prec: int) -> Interval:
        x, y = base_vector(prec + extra)
        return (y / x).rounded(prec + 1)

    gamma = RealValue.from_enclosure(gamma_enclosure, label="base slope")
    n = _ceil_inv_sqrt(m.epsilon)
    b, a = real_convergent(gamma, n)
    x, _ = base_vector(p)
    q = QuasiRational(abs(x) / a, a, b)
    tau = orthogonal_align(q, GaussianInt(-b, a))
    if swapped:
        tau = tau @ ROT90.inverse()
    left, right = _extent(m, (tau.a11, tau.a12), p)
    return AdjustResult(tau, left, right, a=a, b=b, swapped=swapped)


def enlarged_meniscus(m: Meniscus, a: int, b: int, p: int = 40) -> dict:
    """The larger meniscus whose base is parallel to a + bi and passes through a corner of m.

    Reports both choices of corner; ``contains`` is False only when the other
    corner is certainly on the origin side of the new base.
    """
    pts = m.points(p)
    norm = sqrt_interval(Interval.point(a * a + b * b), p)
    d = (Interval.point(a) / norm, Interval.point(b) / norm)
    out = {}
    for name, other in (("z1", "z2"), ("z2", "z1")):
        y1 = pts[name]
        lam = (y1[0] * d[0] + y1[1] * d[1]) * -2
        y2 = (y1[0] + d[0] * lam, y1[1] + d[1] * lam)
        # unit normal of the chord, pointing away from the origin
        nx, ny = -d[1], d[0]
        dist = y1[0] * nx + y1[1] * ny
        if dist.hi < 0:
            nx, ny, dist = -nx, -ny, -dist
        far = pts[other][0] * nx + pts[other][1] * ny
        contains = far.hi >= dist.lo
        out[name] = {"y1": y1, "y2": y2, "distance": dist, "contains": contains, "handle": (nx, ny)}
    return out
