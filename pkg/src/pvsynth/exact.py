"""Exact integers, Gaussian integers, rational intervals and digit-oracle reals.

Reals never enter as floats.  A :class:`RealValue` is either an exact
rational or a decimal digit oracle ``m -> sum_{n<=m} d_n / 10**n``; every
derived quantity is an :class:`Interval` with rational endpoints that is
guaranteed to contain the true value.
"""
from __future__ import annotations

import enum
import math
import re
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Union

Rational = Union[int, Fraction]


class OracleUnavailable(RuntimeError):
    """A digit source failed or could not be refined far enough."""


# ---------------------------------------------------------------------------
# Gaussian integers


@dataclass(frozen=True)
class GaussianInt:
    re: int
    im: int = 0

    def __add__(self, other: GaussianInt) -> GaussianInt:
        return GaussianInt(self.re + other.re, self.im + other.im)

    def __sub__(self, other: GaussianInt) -> GaussianInt:
        return GaussianInt(self.re - other.re, self.im - other.im)

    def __neg__(self) -> GaussianInt:
        return GaussianInt(-self.re, -self.im)

    def __mul__(self, other: GaussianInt | int) -> GaussianInt:
        if isinstance(other, int):
            return GaussianInt(self.re * other, self.im * other)
        return gaussian_mul(self, other)

    __rmul__ = __mul__

    def conj(self) -> GaussianInt:
        return GaussianInt(self.re, -self.im)

    def norm(self) -> int:
        return self.re * self.re + self.im * self.im

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def divisible_by(self, k: int) -> bool:
        return self.re % k == 0 and self.im % k == 0

    def exact_div(self, k: int) -> GaussianInt:
        if not self.divisible_by(k):
            raise ValueError(f"{self} is not divisible by {k}")
        return GaussianInt(self.re // k, self.im // k)

    def __divmod__(self, other: GaussianInt) -> tuple[GaussianInt, GaussianInt]:
        # nearest-integer quotient, so norm(remainder) <= norm(other) / 2
        n = other.norm()
        if n == 0:
            raise ZeroDivisionError("Gaussian division by zero")
        num = self * other.conj()
        q = GaussianInt(_round_div(num.re, n), _round_div(num.im, n))
        return q, self - q * other

    def __str__(self) -> str:
        return f"{self.re},{self.im}"


def _round_div(a: int, b: int) -> int:
    return (2 * a + b) // (2 * b)


def gaussian_mul(z: GaussianInt, w: GaussianInt) -> GaussianInt:
    return GaussianInt(z.re * w.re - z.im * w.im, z.re * w.im + z.im * w.re)


def gaussian_gcd(a: GaussianInt, b: GaussianInt) -> GaussianInt:
    while not b.is_zero():
        _, r = divmod(a, b)
        a, b = b, r
    return a


def parse_gaussian(text: str) -> GaussianInt:
    """Parse the ``re,im`` wire format."""
    parts = text.replace(" ", "").split(",")
    if len(parts) != 2:
        raise ValueError(f"expected 're,im', got {text!r}")
    return GaussianInt(int(parts[0]), int(parts[1]))


# ---------------------------------------------------------------------------
# Intervals


def _floor_to(x: Fraction, den: int) -> Fraction:
    return Fraction(math.floor(x * den), den)


def _ceil_to(x: Fraction, den: int) -> Fraction:
    return Fraction(math.ceil(x * den), den)


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self) -> None:
        if not isinstance(self.lo, Fraction):
            object.__setattr__(self, "lo", Fraction(self.lo))
        if not isinstance(self.hi, Fraction):
            object.__setattr__(self, "hi", Fraction(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, x: Rational) -> Interval:
        x = Fraction(x)
        return cls(x, x)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, x: Rational) -> bool:
        return self.lo <= x <= self.hi

    def overlaps(self, other: Interval) -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def is_point(self) -> bool:
        return self.lo == self.hi

    def __add__(self, other: Interval | Rational) -> Interval:
        other = _as_interval(other)
        return Interval(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __neg__(self) -> Interval:
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other: Interval | Rational) -> Interval:
        other = _as_interval(other)
        return Interval(self.lo - other.hi, self.hi - other.lo)

    def __rsub__(self, other: Rational) -> Interval:
        return _as_interval(other) - self

    def __mul__(self, other: Interval | Rational) -> Interval:
        other = _as_interval(other)
        if other.is_point():
            c = other.lo
            return Interval(self.lo * c, self.hi * c) if c >= 0 else Interval(self.hi * c, self.lo * c)
        ps = (self.lo * other.lo, self.lo * other.hi, self.hi * other.lo, self.hi * other.hi)
        return Interval(min(ps), max(ps))

    __rmul__ = __mul__

    def __truediv__(self, other: Interval | Rational) -> Interval:
        other = _as_interval(other)
        if other.lo <= 0 <= other.hi:
            raise ZeroDivisionError(f"interval division by {other} containing 0")
        return self * Interval(1 / other.hi, 1 / other.lo)

    def __rtruediv__(self, other: Rational) -> Interval:
        return _as_interval(other) / self

    def __abs__(self) -> Interval:
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return Interval(Fraction(0), max(-self.lo, self.hi))

    def square(self) -> Interval:
        a = abs(self)
        return Interval(a.lo * a.lo, a.hi * a.hi)

    def hull(self, other: Interval) -> Interval:
        return Interval(min(self.lo, other.lo), max(self.hi, other.hi))

    def widen(self, r: Rational) -> Interval:
        return Interval(self.lo - r, self.hi + r)

    def clip_below(self, floor: Rational) -> Interval:
        """Intersect with ``[floor, inf)``; used where the exact value is known to lie there."""
        floor = Fraction(floor)
        return Interval(max(self.lo, floor), max(self.hi, floor))

    def rounded(self, digits: int) -> Interval:
        """Outward-round both endpoints to multiples of ``10**-digits``."""
        den = 10**digits
        return Interval(_floor_to(self.lo, den), _ceil_to(self.hi, den))

    def __str__(self) -> str:
        return f"[{format_decimal(self.lo, 20, 'floor')}, {format_decimal(self.hi, 20, 'ceil')}]"


def _as_interval(x: Interval | Rational) -> Interval:
    return x if isinstance(x, Interval) else Interval.point(x)


def format_decimal(x: Fraction, digits: int, mode: str = "floor") -> str:
    """Render ``x`` with ``digits`` fractional digits, rounded toward -inf or +inf."""
    den = 10**digits
    k = math.floor(x * den) if mode == "floor" else math.ceil(x * den)
    sign = "-" if k < 0 else ""
    k = abs(k)
    whole, frac = divmod(k, den)
    text = f"{sign}{whole}.{frac:0{digits}d}".rstrip("0")
    return text[:-1] if text.endswith(".") else text


# ---------------------------------------------------------------------------
# Rigorous elementary functions on fixed-point integers.
#
# Each helper returns an integer pair (lo, hi) with lo <= f(x) * 2**bits <= hi.

_GUARD = 24


def _pi_fixed(bits: int) -> tuple[int, int]:
    # Machin: pi = 16 atan(1/5) - 4 atan(1/239)
    b = bits + _GUARD
    one = 1 << b

    def atan_inv(k: int) -> int:
        total = term = one // k
        k2 = k * k
        n = 1
        while term:
            term //= k2
            n += 2
            total += -(term // n) if (n // 2) % 2 else term // n
        return total

    approx = 16 * atan_inv(5) - 4 * atan_inv(239)
    # each atan_inv is off by at most ~2 per term; 4*b terms is a safe margin
    err = 20 * b + 64
    return (approx - err) >> _GUARD, ((approx + err) >> _GUARD) + 1


_PI_CACHE: dict[int, tuple[int, int]] = {}
_PI_LOCK = threading.Lock()


def pi_interval(digits: int) -> Interval:
    bits = int(digits * 3.33) + 8
    with _PI_LOCK:
        cached = next((k for k in sorted(_PI_CACHE) if k >= bits), None)
        if cached is None:
            _PI_CACHE[bits] = _pi_fixed(bits)
            cached = bits
        lo, hi = _PI_CACHE[cached]
    return Interval(Fraction(lo, 1 << cached), Fraction(hi, 1 << cached))


def _sincos_fixed(x: Fraction, bits: int) -> tuple[tuple[int, int], tuple[int, int]]:
    """Enclosures of sin(x), cos(x) for rational |x| <= 4."""
    if abs(x) > 4:
        raise ValueError("argument not reduced")
    b = bits + _GUARD
    one = 1 << b
    xf = math.floor(x * one)  # |xf - x*one| < 1
    x2 = xf * xf
    smag, cmag = abs(xf), one
    s_sum, c_sum = smag, cmag
    n = 0
    while smag or cmag:
        n += 1
        smag = ((smag * x2) >> (2 * b)) // ((2 * n) * (2 * n + 1))
        cmag = ((cmag * x2) >> (2 * b)) // ((2 * n - 1) * (2 * n))
        sign = -1 if n % 2 else 1
        s_sum += sign * smag
        c_sum += sign * cmag
    if xf < 0:
        s_sum = -s_sum
    # rounding errors amplify by at most cosh(4) < 32 along the series
    err = 64 * (n + 4)
    return (
        ((s_sum - err) >> _GUARD, ((s_sum + err) >> _GUARD) + 1),
        ((c_sum - err) >> _GUARD, ((c_sum + err) >> _GUARD) + 1),
    )


def _reduce_angle(x: Interval, digits: int) -> Interval:
    """Shift by a multiple of 2*pi so the midpoint lies in [-pi, pi]."""
    m = x.mid
    if abs(m) <= 3:
        return x
    k = round(m / (2 * Fraction(355, 113)))
    extra = len(str(abs(k))) + 2
    return x - pi_interval(digits + extra) * (2 * k)


def sin_cos(x: Interval, digits: int) -> tuple[Interval, Interval]:
    """Enclosures of sin and cos over ``x``, with extra width at most ``10**-digits``."""
    x = _reduce_angle(x, digits)
    m = x.mid
    bits = int(digits * 3.33) + 8
    if m == 0:
        s_enc, c_enc = (0, 0), (1 << bits, 1 << bits)
    else:
        # the midpoint may carry a huge denominator; round it first
        den = 1 << (bits + 4)
        m_r = Fraction(math.floor(m * den), den)
        s_enc, c_enc = _sincos_fixed(m_r, bits)
        s_enc = (s_enc[0] - 1, s_enc[1] + 1)
        c_enc = (c_enc[0] - 1, c_enc[1] + 1)
        x = x.hull(Interval.point(m_r))
        m = m_r
    scale = 1 << bits
    # |sin'|, |cos'| <= 1
    spread = max(x.hi - m, m - x.lo)
    s = Interval(Fraction(s_enc[0], scale), Fraction(s_enc[1], scale)).widen(spread)
    c = Interval(Fraction(c_enc[0], scale), Fraction(c_enc[1], scale)).widen(spread)
    one = Interval(Fraction(-1), Fraction(1))
    return _intersect(s, one), _intersect(c, one)


def _intersect(a: Interval, b: Interval) -> Interval:
    return Interval(max(a.lo, b.lo), min(a.hi, b.hi))


def sqrt_interval(x: Interval, digits: int) -> Interval:
    if x.hi < 0:
        raise ValueError(f"sqrt of negative interval {x}")
    bits = int(digits * 3.33) + 8
    s2 = 1 << (2 * bits)
    lo_sq = max(0, math.floor(x.lo * s2))
    hi_sq = math.ceil(x.hi * s2)
    lo = math.isqrt(lo_sq)
    hi = math.isqrt(hi_sq)
    if hi * hi < hi_sq:
        hi += 1
    return Interval(Fraction(lo, 1 << bits), Fraction(hi, 1 << bits))


def _atan_small(x: Fraction, bits: int) -> tuple[int, int]:
    """atan(x) for rational |x| <= 1/2, fixed point."""
    b = bits + _GUARD
    one = 1 << b
    xf = math.floor(x * one)
    x2 = xf * xf
    power = xf
    total = 0
    n = 0
    while power:
        total += power // (2 * n + 1) if n % 2 == 0 else -(power // (2 * n + 1))
        power = (power * x2) >> (2 * b) if power > 0 else -((-power * x2) >> (2 * b))
        n += 1
    err = 4 * (n + 4)
    return (total - err) >> _GUARD, ((total + err) >> _GUARD) + 1


def atan_rational(x: Rational, digits: int) -> Interval:
    x = Fraction(x)
    if x < 0:
        return -atan_rational(-x, digits)
    bits = int(digits * 3.33) + 8
    scale = Fraction(1, 1 << bits)
    if x > 1:
        return pi_interval(digits + 2) / 2 - atan_rational(1 / x, digits + 1)
    if x > Fraction(1, 2):
        # atan(x) = pi/4 + atan((x-1)/(x+1)), |(x-1)/(x+1)| <= 1/3
        lo, hi = _atan_small((x - 1) / (x + 1), bits)
        return pi_interval(digits + 2) / 4 + Interval(lo * scale, hi * scale)
    lo, hi = _atan_small(x, bits)
    return Interval(lo * scale, hi * scale)


def atan_interval(x: Interval, digits: int) -> Interval:
    """atan over an interval: Lipschitz-1 widening around a rounded midpoint."""
    den = 10 ** (digits + 4)
    m = Fraction(math.floor(x.mid * den), den)
    spread = max(x.hi - m, m - x.lo)
    return atan_rational(m, digits + 2).widen(spread)


# ---------------------------------------------------------------------------
# Reals given by digit oracles


class RealValue:
    """A real number known through enclosures of width <= 10**-p.

    Built either from an exact rational, from a decimal digit oracle
    ``digit_source(m) = sum_{n<=m} d_n / 10**n`` (d_0 integer, d_n in 0..9),
    or from an enclosure function for derived quantities.
    """

    def __init__(
        self,
        digit_source: Callable[[int], Rational] | None = None,
        *,
        exact: Rational | None = None,
        enclosure: Callable[[int], Interval] | None = None,
        label: str = "",
    ) -> None:
        if sum(x is not None for x in (digit_source, exact, enclosure)) != 1:
            raise ValueError("give exactly one of digit_source, exact, enclosure")
        self.digit_source = digit_source
        self.exact = Fraction(exact) if exact is not None else None
        self._enclosure = enclosure
        self.label = label
        self._cache: dict[int, Fraction] = {}
        self._lock = threading.Lock()

    # constructors -------------------------------------------------------
    @classmethod
    def from_rational(cls, q: Rational, label: str = "") -> RealValue:
        q = Fraction(q)
        return cls(exact=q, label=label or str(q))

    @classmethod
    def from_digits(cls, source: Callable[[int], Rational], label: str = "") -> RealValue:
        return cls(source, label=label)

    @classmethod
    def from_enclosure(cls, fn: Callable[[int], Interval], label: str = "") -> RealValue:
        return cls(enclosure=fn, label=label)

    @classmethod
    def pi_multiple(cls, r: Rational, label: str = "") -> RealValue:
        r = Fraction(r)
        if r == 0:
            return cls.from_rational(0, label or "0")

        def enclose(p: int) -> Interval:
            extra = max(0, len(str(abs(r.numerator)))) + 2
            return (pi_interval(p + extra) * r).rounded(p + 1)

        return cls(enclosure=enclose, label=label or f"{r}*pi")

    # oracle access ------------------------------------------------------
    def partial(self, m: int) -> Fraction:
        """The digit oracle: floor(x * 10**m) / 10**m."""
        if m < 0:
            raise ValueError("m must be >= 0")
        with self._lock:
            if m in self._cache:
                return self._cache[m]
        if self.exact is not None:
            value = _floor_to(self.exact, 10**m)
        elif self.digit_source is not None:
            try:
                value = Fraction(self.digit_source(m))
            except Exception as exc:  # noqa: BLE001 - any oracle failure
                raise OracleUnavailable(f"digit source failed at m={m}: {exc}") from exc
        else:
            value = self._partial_from_enclosure(m)
        with self._lock:
            self._cache[m] = value
        return value

    def _partial_from_enclosure(self, m: int, cap: int = 4096) -> Fraction:
        den = 10**m
        p = m + 4
        while p <= cap:
            enc = self._enclosure(p)
            lo, hi = math.floor(enc.lo * den), math.floor(enc.hi * den)
            if lo == hi:
                return Fraction(lo, den)
            p *= 2
        raise OracleUnavailable(f"{self.label or 'value'}: digit {m} undecidable by precision {cap}")

    def interval_at(self, p: int) -> Interval:
        if p < 0:
            raise ValueError("precision must be >= 0")
        if self.exact is not None:
            return Interval.point(self.exact)
        if self._enclosure is not None:
            enc = self._enclosure(p)
            if enc.width > Fraction(1, 10**p):
                raise OracleUnavailable(f"enclosure at p={p} too wide: {enc}")
            return enc
        s = self.partial(p)
        return Interval(s, s + Fraction(1, 10**p))

    # arithmetic helpers for derived reals --------------------------------
    def scaled(self, k: Rational) -> RealValue:
        k = Fraction(k)
        if self.exact is not None:
            return RealValue.from_rational(self.exact * k)
        extra = len(str(abs(k.numerator))) + 1

        def enclose(p: int) -> Interval:
            return self.interval_at(p + extra) * k

        return RealValue.from_enclosure(enclose, label=f"{k}*({self.label})")

    def __repr__(self) -> str:
        return f"RealValue({self.label or '<oracle>'})"


def interval_eval(x: RealValue, precision: int) -> Interval:
    if precision < 1:
        raise ValueError("precision must be >= 1")
    return x.interval_at(precision)


class Ordering(enum.Enum):
    LESS = "less"
    GREATER = "greater"
    UNDECIDED = "undecided"


IntervalSource = Union[RealValue, Callable[[int], Interval], Rational]


def _source(x: IntervalSource) -> Callable[[int], Interval]:
    if isinstance(x, RealValue):
        return x.interval_at
    if isinstance(x, (int, Fraction)):
        pt = Interval.point(x)
        return lambda p: pt
    return x


def compare_strict(a: IntervalSource, b: IntervalSource, max_precision: int, start: int = 8) -> Ordering:
    """Decide a < b or a > b by refining enclosures, doubling precision up to the cap."""
    fa, fb = _source(a), _source(b)
    p = min(start, max_precision)
    while True:
        ia, ib = fa(p), fb(p)
        if ia.hi < ib.lo:
            return Ordering.LESS
        if ia.lo > ib.hi:
            return Ordering.GREATER
        if p >= max_precision:
            return Ordering.UNDECIDED
        p = min(2 * p, max_precision)


def default_precision_cap(epsilon: RealValue | None = None) -> int:
    """4 * ceil(log10(1/eps)) + 64 digits, or the PVSYNTH_PRECISION_CAP override."""
    import os

    env = os.environ.get("PVSYNTH_PRECISION_CAP")
    if env:
        return int(env)
    if epsilon is None:
        return 64
    lo = epsilon.interval_at(30).lo
    if lo <= 0:
        return 4 * 30 + 64
    return 4 * max(0, math.ceil(-math.log10(float(lo)))) + 64


# ---------------------------------------------------------------------------
# Parsing

_DECIMAL = re.compile(r"^[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$")
_RATIONAL = re.compile(r"^[+-]?\d+/\d+$")


def parse_rational(text: str) -> Fraction:
    """Parse a decimal (with optional exponent) or ``p/q`` string exactly."""
    s = text.strip()
    if _RATIONAL.match(s):
        num, den = s.split("/")
        if int(den) == 0:
            raise ValueError(f"zero denominator in {text!r}")
        return Fraction(int(num), int(den))
    if _DECIMAL.match(s):
        return Fraction(s)
    raise ValueError(f"not a decimal or rational: {text!r}")


def parse_real(text: str) -> RealValue:
    """Parse ``<decimal>``, ``p/q``, ``pi``, ``-pi`` or ``<rational>*pi``."""
    s = text.strip().replace(" ", "")
    low = s.lower()
    if low in ("pi", "+pi"):
        return RealValue.pi_multiple(1, label=s)
    if low == "-pi":
        return RealValue.pi_multiple(-1, label=s)
    if low.endswith("*pi"):
        return RealValue.pi_multiple(parse_rational(s[:-3]), label=s)
    return RealValue.from_rational(parse_rational(s), label=s)
