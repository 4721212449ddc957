"""Certified scalar building blocks.

Principal-branch log-Gamma and polygamma by upward recurrence plus Stirling
with an explicit remainder, real zeta and zeta'/zeta by Euler-Maclaurin, and
truncated Laurent series for extracting polar parts of Gamma products.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from . import ball as bl
from .ball import Ball
from .errors import DomainError, NotAPole, OrderMismatch, PoleHit

STIRLING_SHIFT = 10.0
STIRLING_TERMS = 12
EM_CUTOFF = 24
EM_TERMS = 12


@lru_cache(maxsize=None)
def bernoulli(n: int) -> Fraction:
    """Bernoulli number B_n with B_1 = -1/2."""
    if n == 0:
        return Fraction(1)
    if n == 1:
        return Fraction(-1, 2)
    if n % 2:
        return Fraction(0)
    total = Fraction(0)
    for k in range(n):
        total += math.comb(n + 1, k) * bernoulli(k)
    return -total / (n + 1)


def _frac_ball(q: Fraction) -> Ball:
    f = float(q)
    return Ball(f, 0.5 * math.ulp(f) + bl.TINY)


def _check_pole(z: Ball) -> None:
    c = complex(z.mid)
    if c.real <= 0.5:
        k = round(c.real)
        if k <= 0 and abs(c - k) <= z.rad + 1e-300:
            raise PoleHit(f"Gamma pole at {k}")


def _shift(z: Ball) -> tuple[Ball, int]:
    re = complex(z.mid).real
    m = max(0, math.ceil(STIRLING_SHIFT - re))
    return z + m, m


def _sec_half_arg_pow(z: Ball, p: int) -> float:
    """Upper bound for sec(arg(w)/2)**p over the ball, valid for Re(w) > 0."""
    c = complex(z.mid)
    if c.real - z.rad <= 0:
        raise DomainError("Stirling remainder requires Re(z) > 0")
    # cos(arg/2)^2 = (1 + cos arg)/2 and cos arg >= (Re - r)/(|c| + r)
    cos_arg = (c.real - z.rad) / (abs(c) + z.rad)
    cos_half_sq = 0.5 * (1.0 + cos_arg) * (1 - 1e-15)
    return bl.up(cos_half_sq ** (-p / 2.0))


def log_gamma(s) -> Ball:
    """Principal branch of log Gamma(s) as an enclosure.

    The remainder after K Stirling terms at the shifted point w (Re w >= 10)
    is bounded by |B_{2K+2}| / ((2K+2)(2K+1)|w|^{2K+1}) * sec^{2K+2}(arg w / 2).
    """
    z = Ball.of(s)
    _check_pole(z)
    w, m = _shift(z)
    lw = bl.log(w)
    res = (w - 0.5) * lw - w + bl.LOG_2PI * 0.5
    inv = w.inverse()
    inv2 = inv * inv
    powk = inv
    for k in range(1, STIRLING_TERMS + 1):
        coef = _frac_ball(bernoulli(2 * k) / (2 * k * (2 * k - 1)))
        res = res + coef * powk
        powk = powk * inv2
    K = STIRLING_TERMS + 1
    tail = abs(float(bernoulli(2 * K))) / ((2 * K) * (2 * K - 1))
    tail *= inv.mag() ** (2 * K - 1) * _sec_half_arg_pow(w, 2 * K)
    res = res.widen(tail)
    if m:
        acc = bl.fsum(bl.log(z + k) for k in range(m))
        res = res - acc
    return res


def gamma(s) -> Ball:
    return bl.exp(log_gamma(s))


def polygamma(m: int, s) -> Ball:
    """psi^{(m)}(s) for m >= 0 (m = 0 is the digamma function)."""
    if m < 0:
        raise DomainError("polygamma order must be nonnegative")
    z = Ball.of(s)
    _check_pole(z)
    w, shift = _shift(z)
    inv = w.inverse()
    K = STIRLING_TERMS
    if m == 0:
        res = bl.log(w) - inv * 0.5
        p = inv * inv
        for k in range(1, K + 1):
            res = res - _frac_ball(bernoulli(2 * k) / (2 * k)) * p
            p = p * inv * inv
    else:
        sgn = -1.0 if m % 2 == 0 else 1.0  # (-1)^{m+1}
        res = inv ** m * float(math.factorial(m - 1)) + inv ** (m + 1) * (0.5 * math.factorial(m))
        p = inv ** (m + 2)
        for k in range(1, K + 1):
            c = bernoulli(2 * k) * Fraction(math.factorial(2 * k + m - 1), math.factorial(2 * k))
            res = res + _frac_ball(c) * p
            p = p * inv * inv
        res = res * sgn
    Kn = K + 1
    tail = abs(float(bernoulli(2 * Kn))) * math.factorial(2 * Kn + m - 1) / math.factorial(2 * Kn)
    tail *= inv.mag() ** (2 * Kn + m) * _sec_half_arg_pow(w, 2 * Kn + m + 1)
    res = res.widen(tail)
    if shift:
        sign = -1.0 if m % 2 else 1.0
        fact = float(math.factorial(m))
        acc = bl.fsum(((z + k) ** (-(m + 1))) * (sign * fact) for k in range(shift))
        res = res - acc
    return res


def digamma(s) -> Ball:
    return polygamma(0, s)


# real zeta by Euler-Maclaurin -----------------------------------------------

def _em_power_log_sum(sigma: Ball, j: int) -> Ball:
    """Sum over n >= 1 of n^{-sigma} (log n)^j for j in {0, 1}, sigma > 1."""
    N = EM_CUTOFF
    logs = [bl.log(Ball.of(n)) for n in range(1, N + 1)]
    terms = []
    for n in range(2, N):
        t = bl.exp(-sigma * logs[n - 1])
        terms.append(t * logs[n - 1] if j else t)
    head = bl.fsum(terms)
    if j == 0:
        head = head + 1.0
    logN = logs[N - 1]
    s1 = sigma - 1.0
    NpowS = bl.exp(-sigma * logN)
    Npow1 = NpowS * float(N)
    if j == 0:
        integral = Npow1 / s1
    else:
        integral = Npow1 * (logN / s1 + (s1 * s1).inverse())
    fN = NpowS * logN if j else NpowS
    total = head + integral + fN * 0.5
    # derivative coefficients: f^{(m)}(x) = x^{-sigma-m} (a_m log x + b_m)
    a, b = (Ball(1.0), Ball(0.0)) if j else (Ball(0.0), Ball(1.0))
    derivs = []
    for mm in range(2 * EM_TERMS + 1):
        derivs.append((a, b))
        a, b = a * (-(sigma + mm)), b * (-(sigma + mm)) + a
    for k in range(1, EM_TERMS + 1):
        a_k, b_k = derivs[2 * k - 1]
        val = bl.exp(-(sigma + (2 * k - 1)) * logN) * (a_k * logN + b_k)
        total = total - _frac_ball(bernoulli(2 * k) / math.factorial(2 * k)) * val
    a_K, b_K = derivs[2 * EM_TERMS]
    if a_K.mag() > 0 and (a_K * logN + b_K).contains_zero():
        raise DomainError("Euler-Maclaurin remainder sign test failed")
    a_r, b_r = derivs[2 * EM_TERMS - 1]
    last = bl.exp(-(sigma + (2 * EM_TERMS - 1)) * logN) * (a_r * logN + b_r)
    rem = abs(float(bernoulli(2 * EM_TERMS))) / math.factorial(2 * EM_TERMS) * last.mag()
    return total.widen(rem)


def _real_sigma(sigma) -> Ball:
    s = Ball.of(sigma)
    if isinstance(s.mid, complex):
        raise DomainError("real argument required")
    if s.lower() <= 1.0:
        raise DomainError(f"sigma must exceed 1, got {sigma!r}")
    return s


def zeta_real(sigma) -> Ball:
    """zeta(sigma) for real sigma > 1."""
    s = _real_sigma(sigma)
    if s.mid > 60:
        # 1 + 2^-s + 3^-s + tail, tail <= 3^{1-s}/(s-1)
        t = bl.exp(-s * math.log(2)) + bl.exp(-s * math.log(3))
        return (t + 1.0).widen(3.0 ** (1 - s.lower()) / (s.lower() - 1))
    return _em_power_log_sum(s, 0)


def zeta_deriv_real(sigma) -> Ball:
    s = _real_sigma(sigma)
    return -_em_power_log_sum(s, 1)


def zeta_logderiv(sigma) -> Ball:
    """zeta'(sigma)/zeta(sigma) for real sigma > 1."""
    s = _real_sigma(sigma)
    if s.mid > 60:
        lead = bl.exp(-s * math.log(2)) * (-math.log(2))
        # |sum_{n>2} Lambda(n) n^-s| <= sum_{n>=3} log n n^-s
        tail = 2 * math.log(3) * 3.0 ** (-s.lower()) * (1 + 3 / (s.lower() - 1))
        return lead.widen(tail + 4.0 ** (-s.lower()) * 2)
    return zeta_deriv_real(s) / zeta_real(s)


def log_zeta_real(sigma) -> Ball:
    s = _real_sigma(sigma)
    if s.mid > 40:
        # 0 <= log zeta(s) <= zeta(s) - 1
        z1 = bl.exp(-s * math.log(2))
        hi = z1.upper() + 3.0 ** (-s.lower()) * (1 + 3 / (s.lower() - 1))
        lo = max(0.0, z1.lower() - z1.lower() ** 2)
        return Ball.interval(lo, hi)
    return bl.log(zeta_real(s))


# truncated Laurent series ----------------------------------------------------

@dataclass(frozen=True)
class TruncatedSeries:
    """Local expansion sum_k c_k h^k for k = lowest_order .. lowest_order+len-1.

    Coefficients may be :class:`Ball` values or any field elements supporting
    ``+ - * /`` (for example mpmath numbers).
    """

    expansion_point: complex
    lowest_order: int
    coefficients: tuple

    @property
    def top_order(self) -> int:
        return self.lowest_order + len(self.coefficients) - 1

    def coeff(self, k: int):
        i = k - self.lowest_order
        if i < 0:
            return self.coefficients[0] * 0
        if i >= len(self.coefficients):
            raise IndexError(f"coefficient of order {k} not available")
        return self.coefficients[i]

    def polar_part(self) -> list:
        """[c_1, c_2, ...] where c_j multiplies h^{-j}."""
        return [self.coeff(-j) for j in range(1, -self.lowest_order + 1)]

    def residue(self):
        return self.coeff(-1)

    def _zero(self):
        return self.coefficients[0] * 0

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        lo = min(self.lowest_order, other.lowest_order)
        hi = min(self.top_order, other.top_order)
        coeffs = tuple(self.coeff(k) + other.coeff(k) for k in range(lo, hi + 1))
        return TruncatedSeries(self.expansion_point, lo, coeffs)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "TruncatedSeries":
        return TruncatedSeries(self.expansion_point, self.lowest_order,
                               tuple(x * c for x in self.coefficients))

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            return self.scale(other)
        n = min(len(self.coefficients), len(other.coefficients))
        a, b = self.coefficients, other.coefficients
        out = []
        for k in range(n):
            acc = a[0] * b[k]
            for i in range(1, k + 1):
                acc = acc + a[i] * b[k - i]
            out.append(acc)
        return TruncatedSeries(self.expansion_point,
                               self.lowest_order + other.lowest_order, tuple(out))

    def __truediv__(self, other):
        if not isinstance(other, TruncatedSeries):
            return self.scale(1 / other) if not isinstance(other, Ball) else \
                TruncatedSeries(self.expansion_point, self.lowest_order,
                                tuple(x / other for x in self.coefficients))
        n = min(len(self.coefficients), len(other.coefficients))
        a, b = self.coefficients, other.coefficients
        out = []
        for k in range(n):
            acc = a[k]
            for i in range(1, k + 1):
                acc = acc - b[i] * out[k - i]
            out.append(acc / b[0])
        return TruncatedSeries(self.expansion_point,
                               self.lowest_order - other.lowest_order, tuple(out))

    def shift_order(self, d: int) -> "TruncatedSeries":
        """Multiply by h^d."""
        return TruncatedSeries(self.expansion_point, self.lowest_order + d, self.coefficients)

    def truncate(self, top: int) -> "TruncatedSeries":
        n = top - self.lowest_order + 1
        return TruncatedSeries(self.expansion_point, self.lowest_order, self.coefficients[:n])


def series_exp(p: TruncatedSeries, exp_fn) -> TruncatedSeries:
    """exp of a series with nonnegative valuation; exp_fn handles the constant."""
    if p.lowest_order < 0:
        raise DomainError("exp of a series with a pole")
    n = p.top_order + 1
    q = [p.coeff(k) for k in range(n)]
    e = [exp_fn(q[0])]
    for m in range(1, n):
        acc = q[1] * e[m - 1]
        for k in range(2, m + 1):
            acc = acc + q[k] * e[m - k] * k
        e.append(acc / m)
    return TruncatedSeries(p.expansion_point, 0, tuple(e))


class BallBackend:
    """Double-precision ball numerics for polar expansions."""

    @staticmethod
    def num(x):
        return Ball.of(complex(x))

    exp = staticmethod(bl.exp)
    log_gamma = staticmethod(log_gamma)
    polygamma = staticmethod(polygamma)

    @staticmethod
    def is_close_int(a) -> int | None:
        c = complex(a.mid)
        k = round(c.real)
        if k <= 0 and abs(c - k) <= a.rad + 1e-12:
            return k
        return None


class MpBackend:
    """mpmath numerics at the current working precision."""

    def __init__(self):
        import mpmath

        self.mp = mpmath

    def num(self, x):
        return self.mp.mpc(x)

    def exp(self, x):
        return self.mp.exp(x)

    def log_gamma(self, x):
        return self.mp.loggamma(x)

    def polygamma(self, m, x):
        return self.mp.psi(m, x)

    def is_close_int(self, a) -> int | None:
        k = int(self.mp.nint(self.mp.re(a)))
        if k <= 0 and abs(complex(a) - k) <= 1e-12:
            return k
        return None


def _gamma_local(a, lam, length: int, point, backend):
    """Expansion of Gamma(a + lam*h) in h, length coefficients (Laurent if pole)."""
    num = backend.num
    k = backend.is_close_int(a)
    if k is None:
        base = a
        pole_k = None
    else:
        base = num(1)
        pole_k = -k
    # log Gamma(base + lam h) - log Gamma(base) = sum_m psi^{(m-1)}(base) (lam h)^m / m!
    L = length
    coeffs = [num(0)]
    lam_pow = num(1)
    for m in range(1, L):
        lam_pow = lam_pow * lam
        coeffs.append(backend.polygamma(m - 1, base) * lam_pow / math.factorial(m))
    lg = TruncatedSeries(point, 0, tuple(coeffs))
    g0 = backend.log_gamma(base)
    ser = series_exp(lg, lambda c: backend.exp(c + g0))
    if pole_k is None:
        return ser
    # Gamma(-k + x) = Gamma(1 + x) / prod_{i=0}^{k} (i - k + x),  x = lam h
    for i in range(pole_k):
        c = num(i - pole_k)
        lin = TruncatedSeries(point, 0, tuple([c, lam] + [num(0)] * (L - 2)))
        ser = ser / lin
    # the last factor is x = lam*h itself
    ser = TruncatedSeries(point, ser.lowest_order - 1,
                          tuple(c / lam for c in ser.coefficients))
    return ser.truncate(ser.lowest_order + length - 1)


def gamma_polar_expansion(rho, factors: Sequence, w, order: int | None = None,
                          top: int | None = None, backend=None) -> TruncatedSeries:
    """Laurent expansion of g(s) = e^{w(1/2-s)} prod Gamma(lambda_j s + mu_j) at rho.

    ``factors`` holds objects with ``lambda_j`` and ``mu_j`` attributes (or
    (lambda, mu) pairs).  Coefficients are returned from h^{-n} up to h^{top};
    the default top keeps four guard orders beyond the pole order.
    """
    backend = backend or BallBackend()
    num = backend.num
    pairs = [(f.lambda_j, f.mu_j) if hasattr(f, "lambda_j") else tuple(f) for f in factors]
    rho_n = num(rho)
    args = [num(lam) * rho_n + num(mu) for lam, mu in pairs]
    n = sum(1 for a in args if backend.is_close_int(a) is not None)
    if n == 0:
        raise NotAPole(f"{rho!r} is not a pole of the Gamma product")
    if order is not None and order != n:
        raise OrderMismatch(f"pole order is {n}, expected {order}")
    if top is None:
        top = 3
    length = top + n + 1
    point = complex(rho)
    w_n = num(w)
    ser = None
    for (lam, _), a in zip(pairs, args):
        fac = _gamma_local(a, num(lam), length, point, backend)
        ser = fac if ser is None else ser * fac
    expo = [backend.exp(w_n * (num(0.5) - rho_n))]
    for m in range(1, length):
        expo.append(expo[-1] * (-w_n) / m)
    ser = ser * TruncatedSeries(point, 0, tuple(expo))
    return ser.truncate(top)
