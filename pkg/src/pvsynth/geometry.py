"""Menisci of the unit disk and the trace-distance criterion.

The meniscus ``M_eps(theta)`` is ``{u : 1 - eps^2 < Re(u e^{i theta/2}), |u| <= 1}``.
Membership of a lattice point ``(x + iy) / sqrt(5)^t`` is decided exactly:
the norm condition in integers, the strict linear condition by interval
refinement up to a precision cap (undecided counts as outside).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .exact import (
    GaussianInt,
    Interval,
    Ordering,
    RealValue,
    atan_interval,
    compare_strict,
    default_precision_cap,
    sin_cos,
    sqrt_interval,
)

CPoint = tuple[Interval, Interval]


class DomainError(ValueError):
    pass


def _cmul(a: CPoint, b: CPoint) -> CPoint:
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _cabs2(a: CPoint) -> Interval:
    return a[0].square() + a[1].square()


def _check_eps(epsilon: RealValue) -> None:
    if compare_strict(epsilon, 0, 200) is not Ordering.GREATER or compare_strict(epsilon, 1, 200) is not Ordering.LESS:
        raise DomainError(f"epsilon must lie in (0, 1), got {epsilon}")


class Meniscus:
    """M_eps(theta) with its corners, base midpoint, apex and center as interval points."""

    def __init__(self, epsilon: RealValue, theta: RealValue, precision: int = 40) -> None:
        _check_eps(epsilon)
        self.epsilon = epsilon
        self.theta = theta
        self.precision = precision
        self.cap = default_precision_cap(epsilon)
        self._trig_cache: dict[int, tuple[Interval, Interval]] = {}
        self._fixed_cache: dict[int, tuple[int, int, int, int]] = {}
        self._rhs_cache: dict[tuple[int, int], tuple[int, int]] = {}
        self._refresh(precision)

    # enclosures at arbitrary precision --------------------------------
    def half_angle(self, p: int) -> tuple[Interval, Interval]:
        """(cos(theta/2), sin(theta/2)) enclosed to about 10**-p."""
        if p not in self._trig_cache:
            th = self.theta.interval_at(p + 3) * Fraction(1, 2)
            s, c = sin_cos(th, p + 3)
            self._trig_cache[p] = (c, s)
        return self._trig_cache[p]

    def base_offset(self, p: int) -> Interval:
        """1 - eps^2."""
        e = self.epsilon.interval_at(p + 2)
        return 1 - e.square()

    def half_chord(self, p: int) -> Interval:
        c0 = self.base_offset(p + 2)
        return sqrt_interval((1 - c0.square()).clip_below(0), p + 2)

    def rotation(self, p: int) -> CPoint:
        """e^{i theta/2}; the center is its conjugate."""
        c, s = self.half_angle(p)
        return (c, s)

    def _refresh(self, p: int) -> None:
        pts = self.points(p)
        self.center, self.z0, self.z1, self.z2, self.z3 = (pts[k] for k in ("z", "z0", "z1", "z2", "z3"))

    def points(self, p: int) -> dict[str, CPoint]:
        c, s = self.half_angle(p)
        c0 = self.base_offset(p)
        s0 = self.half_chord(p)
        w = (c, -s)
        return {
            "z": w,
            "z0": (w[0] * c0, w[1] * c0),
            "z1": _cmul(w, (c0, s0)),
            "z2": _cmul(w, (c0, -s0)),
            "z3": (w[0] / c0, w[1] / c0),
        }

    # fast lattice membership -------------------------------------------
    def _fixed(self, p: int) -> tuple[int, int, int, int]:
        if p not in self._fixed_cache:
            c, s = self.half_angle(p)
            den = 10**p
            self._fixed_cache[p] = (
                math.floor(c.lo * den),
                math.ceil(c.hi * den),
                math.floor(s.lo * den),
                math.ceil(s.hi * den),
            )
        return self._fixed_cache[p]

    def _rhs(self, t: int, p: int) -> tuple[int, int]:
        key = (t, p)
        if key not in self._rhs_cache:
            scale = Interval.point(5 ** (t // 2))
            if t % 2:
                scale = scale * sqrt_interval(Interval.point(5), p + t)
            r = self.base_offset(p + t) * scale
            den = 10**p
            self._rhs_cache[key] = (math.floor(r.lo * den), math.ceil(r.hi * den))
        return self._rhs_cache[key]

    def contains_lattice(self, x: int, y: int, t: int) -> bool:
        """Is (x + iy) / sqrt(5)^t in the meniscus?"""
        if x * x + y * y > 5**t:
            return False
        mag = len(str(abs(x) + abs(y) + 1))
        p = 12 + mag
        cap = self.cap + mag
        while True:
            cl, ch, sl, sh = self._fixed(p)
            lo = (x * cl if x >= 0 else x * ch) - (y * sh if y >= 0 else y * sl)
            hi = (x * ch if x >= 0 else x * cl) - (y * sl if y >= 0 else y * sh)
            rl, rh = self._rhs(t, p)
            if lo > rh:
                return True
            if hi <= rl:
                return False
            if p >= cap:
                return False
            p = min(2 * p, cap)

    def real_projection(self, x: int, y: int, t: int, p: int) -> Interval:
        """Enclosure of Re(u e^{i theta/2}) for u = (x + iy) / sqrt(5)^t."""
        c, s = self.half_angle(p + t)
        val = c * x - s * y
        scale = Interval.point(5 ** (t // 2))
        if t % 2:
            scale = scale * sqrt_interval(Interval.point(5), p + t)
        return val / scale

    def __repr__(self) -> str:
        return f"Meniscus(eps={self.epsilon!r}, theta={self.theta!r})"


def build_meniscus(epsilon: RealValue, theta: RealValue, precision: int = 40) -> Meniscus:
    return Meniscus(epsilon, theta, precision)


@dataclass(frozen=True)
class MeniscusMetrics:
    base_len: Interval
    arc_len: Interval
    median_len: Interval
    side_len: Interval
    handle_len: Interval
    area: Interval


def meniscus_metrics(m: Meniscus, precision: int | None = None) -> MeniscusMetrics:
    p = precision or m.precision
    c0 = m.base_offset(p)
    s0 = m.half_chord(p)
    half_arc = atan_interval(s0 / c0, p)
    pts = m.points(p)
    hx = pts["z"][0] - pts["z0"][0]
    hy = pts["z"][1] - pts["z0"][1]
    handle = sqrt_interval((hx.square() + hy.square()), p)
    return MeniscusMetrics(
        base_len=2 * s0,
        arc_len=2 * half_arc,
        median_len=1 / c0 - c0,
        side_len=s0 / c0,
        handle_len=handle,
        area=half_arc - c0 * s0,
    )


# ---------------------------------------------------------------------------
# points and membership


class ComplexReal:
    """A complex number whose parts are RealValues (exact rationals allowed)."""

    def __init__(self, re: RealValue | int | Fraction, im: RealValue | int | Fraction = 0) -> None:
        self.re = re if isinstance(re, RealValue) else RealValue.from_rational(re)
        self.im = im if isinstance(im, RealValue) else RealValue.from_rational(im)

    def enclose(self, p: int) -> CPoint:
        return (self.re.interval_at(p), self.im.interval_at(p))

    def negated(self) -> ComplexReal:
        return ComplexReal(self.re.scaled(-1), self.im.scaled(-1))


Point = Union[GaussianInt, tuple[GaussianInt, int], ComplexReal]


def _as_lattice(u: Point) -> tuple[GaussianInt, int] | None:
    if isinstance(u, GaussianInt):
        return u, 0
    if isinstance(u, tuple):
        return u
    return None


def in_meniscus(u: Point, m: Meniscus) -> bool:
    """Membership by definition: 1 - eps^2 < Re(u e^{i theta/2}) and |u| <= 1."""
    lat = _as_lattice(u)
    if lat is not None:
        z, t = lat
        return m.contains_lattice(z.re, z.im, t)
    assert isinstance(u, ComplexReal)

    def proj(p: int) -> Interval:
        c, s = m.half_angle(p + 2)
        x, y = u.enclose(p + 4)
        return c * x - s * y

    def norm2(p: int) -> Interval:
        x, y = u.enclose(p + 2)
        return x.square() + y.square()

    if compare_strict(proj, m.base_offset, m.cap) is not Ordering.GREATER:
        return False
    # |u|^2 <= 1; an exact 1 must count as inside
    p = 8
    while True:
        n = norm2(p)
        if n.hi <= 1:
            return True
        if n.lo > 1:
            return False
        if p >= m.cap:
            return False
        p = min(2 * p, m.cap)


def canonical_candidate(u: Point, theta: RealValue, cap: int = 200) -> tuple[Point, bool]:
    """(u or -u, indeterminate): flip u when Re(u e^{i theta/2}) < 0."""

    def proj(p: int) -> Interval:
        th = theta.interval_at(p + 3) * Fraction(1, 2)
        s, c = sin_cos(th, p + 3)
        lat = _as_lattice(u)
        if lat is not None:
            z, t = lat
            r = c * z.re - s * z.im
            return r  # positive scaling by sqrt(5)^-t does not change the sign
        x, y = u.enclose(p + 4)  # type: ignore[union-attr]
        return c * x - s * y

    order = compare_strict(proj, 0, cap)
    if order is Ordering.LESS:
        lat = _as_lattice(u)
        if lat is not None:
            z, t = lat
            return ((-z, t) if isinstance(u, tuple) else -z), False
        return u.negated(), False  # type: ignore[union-attr]
    if order is Ordering.GREATER:
        return u, False
    # exactly zero or undecided; zero keeps u by the >= rule, but we cannot tell which
    return u, True


def _scale_interval(t: int, p: int) -> Interval:
    s = Interval.point(5 ** (t // 2))
    if t % 2:
        s = s * sqrt_interval(Interval.point(5), p + t)
    return s


def trace_distance(u: GaussianInt, v: GaussianInt, t: int, theta: RealValue, precision: int = 30) -> Interval:
    """Enclosure of sqrt(1 - |Tr(U R^dagger)|/2) = sqrt(1 - |Re(u e^{i theta/2})| / sqrt(5)^t)."""
    if u.norm() + v.norm() != 5**t:
        raise DomainError(f"norm equation fails for u={u}, v={v}, t={t}")
    p = precision + 4
    th = theta.interval_at(p + t) * Fraction(1, 2)
    s, c = sin_cos(th, p + t)
    re = (c * u.re - s * u.im) / _scale_interval(t, p + t)
    inner = (1 - abs(re)).clip_below(0)
    if inner.hi > 1:
        inner = Interval(inner.lo, Fraction(1))
    return sqrt_interval(inner, p)


def verified_trace_distance(u: GaussianInt, v: GaussianInt, t: int, theta: RealValue, epsilon: RealValue, cap: int | None = None) -> tuple[Interval, bool]:
    """Refine the trace-distance enclosure until its upper end is below eps (or the cap)."""
    cap = cap or default_precision_cap(epsilon)
    p = 16
    while True:
        td = trace_distance(u, v, t, theta, p)
        eps = epsilon.interval_at(p)
        if td.hi < eps.lo:
            return td, True
        if td.lo >= eps.hi or p >= cap:
            return td, False
        p = min(2 * p, cap)
