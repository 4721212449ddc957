"""Midpoint-radius enclosures over double precision.

A :class:`Ball` is a center (``float`` or ``complex``) and a radius such that
the exact quantity lies in the closed disk (or interval) of that radius around
the center.  Every operation inflates the radius by a bound on the floating
point rounding of its center, so results stay enclosures of the exact result
whenever the inputs are.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from numbers import Number

from .errors import BranchCutHit, DomainError

EPS = 2.0**-52
TINY = 2.0**-1074
# slack for basic arithmetic and for libm transcendental functions
_ARITH = 4.0 * EPS
_TRANS = 16.0 * EPS


def up(x: float) -> float:
    """Round a nonnegative radius estimate upward."""
    if math.isinf(x) or math.isnan(x):
        return math.inf
    return x * (1.0 + _ARITH) + TINY


def _round(mid, slack=_ARITH) -> float:
    return slack * abs(mid) + TINY


@dataclass(frozen=True)
class Ball:
    mid: complex | float
    rad: float = 0.0

    def __post_init__(self):
        if not (self.rad >= 0.0):
            raise ValueError(f"negative or NaN radius {self.rad!r}")

    # construction ---------------------------------------------------------
    @classmethod
    def of(cls, x) -> "Ball":
        if isinstance(x, Ball):
            return x
        if isinstance(x, bool):
            x = int(x)
        if isinstance(x, int):
            f = float(x)
            return cls(f, 0.0 if int(f) == x else math.ulp(f))
        if isinstance(x, (float, complex)):
            return cls(x, 0.0)
        if isinstance(x, Number):
            return cls(complex(x) if isinstance(x, complex) else float(x), 0.0)
        # mpmath numbers and Fractions: round to nearest, keep a half-ulp radius
        try:
            f = float(x)
            return cls(f, 0.5 * math.ulp(f) + TINY)
        except TypeError:
            c = complex(x)
            return cls(c, 0.5 * (math.ulp(c.real) + math.ulp(c.imag)) + TINY)

    @classmethod
    def from_decimal(cls, text: str) -> "Ball":
        """Parse a decimal string with a half-ulp radius."""
        f = float(text)
        return cls(f, 0.5 * math.ulp(f) + TINY)

    @classmethod
    def interval(cls, lo: float, hi: float) -> "Ball":
        if hi < lo:
            lo, hi = hi, lo
        mid = 0.5 * (lo + hi)
        return cls(mid, up(max(hi - mid, mid - lo)))

    # inspection -----------------------------------------------------------
    @property
    def is_real(self) -> bool:
        return not isinstance(self.mid, complex)

    @property
    def real(self) -> "Ball":
        return Ball(float(self.mid.real), self.rad)

    @property
    def imag(self) -> "Ball":
        return Ball(float(self.mid.imag) if isinstance(self.mid, complex) else 0.0,
                    self.rad)

    def lower(self) -> float:
        return _down_sub(float(self.mid.real), self.rad)

    def upper(self) -> float:
        return _up_add(float(self.mid.real), self.rad)

    def mag(self) -> float:
        """Upper bound on the modulus of any point in the ball."""
        return up(abs(self.mid) + self.rad)

    def mig(self) -> float:
        """Lower bound on the modulus of any point in the ball."""
        return max(0.0, (abs(self.mid) - self.rad) * (1.0 - _ARITH))

    def contains(self, x) -> bool:
        if isinstance(x, Ball):
            return abs(x.mid - self.mid) + x.rad <= self.rad * (1 + _ARITH) + TINY
        return abs(complex(x) - self.mid) <= self.rad * (1 + _ARITH) + TINY

    def overlaps(self, other) -> bool:
        other = Ball.of(other)
        return abs(other.mid - self.mid) <= up(self.rad + other.rad)

    def contains_zero(self) -> bool:
        return abs(self.mid) <= self.rad

    def sign(self) -> int:
        """+1 or -1 when the real ball excludes zero, otherwise 0."""
        m = float(self.mid.real)
        if m - self.rad > 0 and self.lower() > 0:
            return 1
        if m + self.rad < 0 and self.upper() < 0:
            return -1
        return 0

    def conjugate(self) -> "Ball":
        if isinstance(self.mid, complex):
            return Ball(self.mid.conjugate(), self.rad)
        return self

    def to_complex(self) -> "Ball":
        return Ball(complex(self.mid), self.rad)

    def widen(self, extra: float) -> "Ball":
        return Ball(self.mid, up(self.rad + extra))

    # arithmetic -----------------------------------------------------------
    def __neg__(self):
        return Ball(-self.mid, self.rad)

    def __pos__(self):
        return self

    def __add__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        m = self.mid + other.mid
        return Ball(m, up(self.rad + other.rad + _round(m)))

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        m = self.mid - other.mid
        return Ball(m, up(self.rad + other.rad + _round(m)))

    def __rsub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        m = self.mid * other.mid
        r = abs(self.mid) * other.rad + abs(other.mid) * self.rad + self.rad * other.rad
        return Ball(m, up(r + _round(m)))

    __rmul__ = __mul__

    def inverse(self) -> "Ball":
        a = abs(self.mid)
        if a <= self.rad or a == 0.0:
            raise ZeroDivisionError("ball contains zero")
        m = 1.0 / self.mid
        low = (a - self.rad) * (1.0 - _ARITH)
        if low <= 0.0:
            raise ZeroDivisionError("ball contains zero")
        r = self.rad / (a * low)
        return Ball(m, up(r + _round(m)))

    def __truediv__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        if other.rad == 0.0 and other.mid != 0:
            m = self.mid / other.mid
            r = self.rad / abs(other.mid)
            return Ball(m, up(r + _round(m)))
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other / self

    def __pow__(self, p):
        if isinstance(p, int) and not isinstance(p, bool):
            if p < 0:
                return (self ** (-p)).inverse()
            result = Ball(1.0)
            base = self
            while p:
                if p & 1:
                    result = result * base
                base = base * base
                p >>= 1
            return result
        return exp(log(self) * p)

    def __abs__(self):
        a = abs(self.mid)
        return Ball(a, up(self.rad + _round(a)))

    def __repr__(self):
        return f"Ball({self.mid!r} +/- {self.rad:.3g})"


def _coerce(x):
    if isinstance(x, Ball):
        return x
    if isinstance(x, (int, float, complex)):
        return Ball.of(x)
    return None


def _up_add(a: float, b: float) -> float:
    s = a + b
    return s + abs(s) * _ARITH + TINY


def _down_sub(a: float, b: float) -> float:
    s = a - b
    return s - abs(s) * _ARITH - TINY


# elementary functions ------------------------------------------------------

def exp(x) -> Ball:
    x = Ball.of(x)
    if isinstance(x.mid, complex):
        m = cmath.exp(x.mid)
    else:
        m = math.exp(x.mid)
    # |exp(c+d) - exp(c)| <= |exp(c)| (exp(r) - 1)
    r = abs(m) * math.expm1(x.rad) if x.rad else 0.0
    return Ball(m, up(r + _round(m, _TRANS)))


def log(x) -> Ball:
    """Principal logarithm.

    A ball that meets the closed negative real axis raises
    :class:`BranchCutHit`, except for an exact negative real point, where the
    value continuous from the upper half plane is returned.
    """
    x = Ball.of(x)
    a = abs(x.mid)
    if a <= x.rad or a == 0.0:
        raise DomainError("log of a ball containing zero")
    mid = x.mid
    if isinstance(mid, complex) or mid < 0:
        c = complex(mid)
        if c.real < 0 and abs(c.imag) <= x.rad:
            if x.rad == 0.0 and c.imag == 0.0:
                m = complex(math.log(-c.real), math.pi)
                return Ball(m, up(_round(m, _TRANS)))
            raise BranchCutHit("log argument straddles the negative real axis")
        m = cmath.log(c)
    else:
        m = math.log(mid)
    r = -math.log1p(-x.rad / a) if x.rad else 0.0
    return Ball(m, up(r + _round(m, _TRANS)))


def sqrt(x) -> Ball:
    x = Ball.of(x)
    if not isinstance(x.mid, complex) and x.mid >= 0:
        if x.mid <= x.rad:
            hi = math.sqrt(x.mid + x.rad)
            return Ball.interval(0.0, hi * (1 + _TRANS))
        m = math.sqrt(x.mid)
        r = x.rad / (math.sqrt(x.mid - x.rad) + m)
        return Ball(m, up(r + _round(m, _TRANS)))
    return exp(log(x) * 0.5)


def cos(x) -> Ball:
    x = Ball.of(x)
    m = cmath.cos(x.mid) if isinstance(x.mid, complex) else math.cos(x.mid)
    # |cos'| <= cosh(|Im| + r) on the disk
    im = abs(complex(x.mid).imag)
    r = math.cosh(im + x.rad) * x.rad if x.rad else 0.0
    return Ball(m, up(r + _round(m, _TRANS) + TINY))


def sin(x) -> Ball:
    x = Ball.of(x)
    m = cmath.sin(x.mid) if isinstance(x.mid, complex) else math.sin(x.mid)
    im = abs(complex(x.mid).imag)
    r = math.cosh(im + x.rad) * x.rad if x.rad else 0.0
    return Ball(m, up(r + _round(m, _TRANS) + TINY))


def atan(x) -> Ball:
    x = Ball.of(x)
    if isinstance(x.mid, complex):
        raise DomainError("atan is provided for real balls only")
    m = math.atan(x.mid)
    return Ball(m, up(x.rad + _round(m, _TRANS)))


def hypot(re: Ball, im: Ball) -> Ball:
    return abs(Ball.of(re) + Ball.of(im) * 1j)


def bmax(a, b) -> Ball:
    a, b = Ball.of(a), Ball.of(b)
    return Ball.interval(max(a.lower(), b.lower()), max(a.upper(), b.upper()))


def fsum(balls) -> Ball:
    """Sum a sequence of balls in the order given (compensated center)."""
    balls = [Ball.of(b) for b in balls]
    if not balls:
        return Ball(0.0)
    if any(isinstance(b.mid, complex) for b in balls):
        re = math.fsum(complex(b.mid).real for b in balls)
        im = math.fsum(complex(b.mid).imag for b in balls)
        m = complex(re, im)
    else:
        m = math.fsum(b.mid for b in balls)
    r = math.fsum(b.rad for b in balls)
    return Ball(m, up(r + _round(m)))


def ball_to_json(x: "Ball | None"):
    if x is None:
        return None
    if isinstance(x.mid, complex):
        return {"center": [x.mid.real, x.mid.imag], "radius": x.rad}
    return {"center": float(x.mid), "radius": x.rad}


def ball_from_json(obj) -> "Ball | None":
    if obj is None:
        return None
    c = obj["center"]
    mid = complex(c[0], c[1]) if isinstance(c, list) else float(c)
    return Ball(mid, float(obj["radius"]))


PI = Ball(math.pi, 2.0**-51)
LOG_2PI = Ball(math.log(2 * math.pi), 2.0**-50)
EULER_GAMMA = Ball(0.5772156649015329, 2.0**-52)
