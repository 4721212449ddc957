"""Explicit constants: A_eps, Z_theta, z_theta, c_theta(eps) and Selberg analogues.

Every integral of log Z or log z reduces, after a change of variable, to
values of I(b) = int_b^inf log zeta(y) dy.  I(b) is computed by Gauss-Legendre
panels whose error is bounded through the derivative majorant

    |d^k/dy^k log zeta(y)| <= k!/(y-1)^{k+1} + (k/(e y))^k,

plus an explicit tail [0, 2^{-Y}(1 + 2/(Y-1))/log 2] beyond the cutoff Y.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from enum import Enum
from functools import lru_cache

import numpy as np

from . import ball as bl
from .ball import Ball
from .errors import DomainError
from .special_functions import log_zeta_real, zeta_logderiv

GL_NODES = 12
TAIL_CUTOFF = 48.0
_NODES, _WEIGHTS = np.polynomial.legendre.leggauss(GL_NODES)


class Variant(str, Enum):
    ARTIN = "artin"
    SELBERG = "selberg"
    SELBERG_POLY = "selberg_poly"


@dataclass(frozen=True)
class QuadratureInfo:
    panels: int
    tail_cutoff: float
    tail_bound: float


@dataclass(frozen=True)
class ConstantReport:
    theta: float
    epsilon: float
    variant: str
    A_eps: Ball
    c_theta_eps: Ball
    terms: dict
    quadrature: QuadratureInfo

    def to_json(self) -> dict:
        b = bl.ball_to_json
        return {
            "theta": self.theta,
            "epsilon": self.epsilon,
            "variant": self.variant,
            "A_eps": b(self.A_eps),
            "c_theta_eps": b(self.c_theta_eps),
            "terms": {k: b(v) for k, v in self.terms.items()},
            "quadrature": asdict(self.quadrature),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "ConstantReport":
        b = bl.ball_from_json
        return cls(obj["theta"], obj["epsilon"], obj["variant"], b(obj["A_eps"]),
                   b(obj["c_theta_eps"]), {k: b(v) for k, v in obj["terms"].items()},
                   QuadratureInfo(**obj["quadrature"]))


def a_epsilon(epsilon) -> Ball:
    e = Ball.of(epsilon)
    if e.mid - e.rad < 0:
        raise DomainError("A_eps needs eps >= 0")
    h = e + 0.5
    return h * bl.log(h.inverse() + 1.0) + bl.log(e + 1.5)


def _check_args(theta: float, sigma: float, double: bool):
    if sigma - theta <= 1:
        raise DomainError("sigma - theta > 1 required")
    if double and 2 * sigma - 2 * theta <= 1:
        raise DomainError("2 sigma - 2 theta > 1 required")


def log_big_Z_theta(theta: float, sigma: float) -> Ball:
    _check_args(theta, sigma, False)
    return (log_zeta_real(sigma + theta) + log_zeta_real(sigma - theta)) * 0.5


def log_small_z_theta(theta: float, sigma: float) -> Ball:
    _check_args(theta, sigma, True)
    num = log_zeta_real(2 * sigma + 2 * theta) + log_zeta_real(2 * sigma - 2 * theta)
    den = log_zeta_real(sigma + theta) + log_zeta_real(sigma - theta)
    return (num - den) * 0.5


def big_Z_theta(theta: float, sigma: float) -> Ball:
    return bl.exp(log_big_Z_theta(theta, sigma))


def small_z_theta(theta: float, sigma: float) -> Ball:
    return bl.exp(log_small_z_theta(theta, sigma))


def small_z_logderiv(theta: float, sigma: float) -> Ball:
    """d/dsigma log z_theta(sigma)."""
    _check_args(theta, sigma, True)
    return (zeta_logderiv(2 * sigma + 2 * theta) + zeta_logderiv(2 * sigma - 2 * theta)
            - (zeta_logderiv(sigma + theta) + zeta_logderiv(sigma - theta)) * 0.5)


# certified integral of log zeta --------------------------------------------

def _deriv_majorant(k: int, y: float) -> float:
    return math.exp(math.lgamma(k + 1) - (k + 1) * math.log(y - 1)) + (k / (math.e * y)) ** k


def _gl_error(h: float, n: int, y: float) -> float:
    lg = 4 * math.lgamma(n + 1) - math.log(2 * n + 1) - 3 * math.lgamma(2 * n + 1)
    return math.exp((2 * n + 1) * math.log(h) + lg) * _deriv_majorant(2 * n, y)


def _log_zeta_tail(Y: float) -> float:
    return 2.0 ** (-Y) * (1 + 2 / (Y - 1)) / math.log(2)


def _panels(b: float, end: float, tol: float) -> list:
    y = b
    panels = []
    while y < end:
        h = min(2.0, 0.5 * (y - 1.0), end - y)
        while _gl_error(h, GL_NODES, y) > tol * h and h > 1e-6:
            h *= 0.5
        panels.append((y, h))
        y += h
    return panels


def _panel_sum(panels) -> Ball:
    total = Ball(0.0)
    for a, h in panels:
        half = 0.5 * h
        vals = [log_zeta_real(a + half * (1.0 + x)) for x in _NODES]
        s = bl.fsum(v * float(w) for v, w in zip(vals, _WEIGHTS)) * half
        # inexact nodes/weights: |f'| <= 1/(a-1)^2 + 1/(e a) on the panel
        fmax = max(v.mag() for v in vals)
        dmax = _deriv_majorant(1, a)
        s = s.widen(_gl_error(h, GL_NODES, a) + 8e-16 * h * (2 * fmax + dmax))
        total = total + s
    return total


@lru_cache(maxsize=256)
def _tail_from(k: int, tol: float) -> tuple[Ball, int]:
    """int_k^infinity for integer k >= 2, built from unit segments."""
    if k >= TAIL_CUTOFF:
        return Ball.interval(0.0, _log_zeta_tail(k)), 0
    panels = _panels(float(k), float(k + 1), tol)
    rest, n = _tail_from(k + 1, tol)
    return _panel_sum(panels) + rest, n + len(panels)


@lru_cache(maxsize=4096)
def _log_zeta_integral(b: float, tol: float) -> tuple[Ball, int]:
    # the tail beyond the next integer is shared between calls
    k = max(2, math.ceil(b))
    panels = _panels(b, float(k), tol)
    rest, n = _tail_from(k, tol)
    return _panel_sum(panels) + rest, n + len(panels)


def log_zeta_integral(b: float, tol: float = 1e-14) -> Ball:
    """I(b) = int_b^infinity log zeta(y) dy for b > 1."""
    if b <= 1:
        raise DomainError("integral of log zeta needs b > 1")
    if b >= TAIL_CUTOFF:
        return Ball.interval(0.0, _log_zeta_tail(b))
    return _log_zeta_integral(float(b), tol)[0]


def _log_zeta_between(a: float, b: float) -> Ball:
    """int_a^b log zeta(y) dy."""
    return log_zeta_integral(a) - log_zeta_integral(b)


# Selberg-type Z via the prime zeta identity ----------------------------------
# sum_p sum_l p^{-l x} = sum_m (phi(m)/m) log zeta(m x)

def _phi(m: int) -> int:
    result, n, p = m, m, 2
    while p * p <= n:
        if n % p == 0:
            while n % p == 0:
                n //= p
            result -= result // p
        p += 1
    if n > 1:
        result -= result // n
    return result


def _m_cutoff(x: float) -> int:
    return max(2, math.ceil(64.0 / x))


def _geometric_tail(m0: int, x: float, power: int) -> float:
    """Bound for sum_{m>m0} m^power 2^{-m x} * 3."""
    q = 2.0 ** (-x)
    m = m0 + 1
    return 3.0 * (m ** power) * q**m / (1 - q) ** (power + 1)


def prime_power_sum(x: float) -> Ball:
    """S(x) = sum_p sum_{l>=1} p^{-l x} for x > 1."""
    if x <= 1:
        raise DomainError("prime power sum needs x > 1")
    m0 = _m_cutoff(x)
    terms = [log_zeta_real(m * x) * (_phi(m) / m) for m in range(1, m0 + 1)]
    return bl.fsum(terms).widen(_geometric_tail(m0, x, 0))


def prime_power_sum_deriv(x: float) -> Ball:
    """S'(x) = sum_m phi(m) zeta'/zeta(m x)."""
    m0 = _m_cutoff(x)
    terms = [zeta_logderiv(m * x) * float(_phi(m)) for m in range(1, m0 + 1)]
    return bl.fsum(terms).widen(_geometric_tail(m0, x, 1))


def _prime_power_sum_integral(a: float, b: float | None) -> Ball:
    """int_a^b S(x) dx (b=None for infinity)."""
    m0 = _m_cutoff(a)
    terms = []
    for m in range(1, m0 + 1):
        hi = log_zeta_integral(m * a)
        if b is not None:
            hi = hi - log_zeta_integral(m * b)
        terms.append(hi * (_phi(m) / m**2))
    return bl.fsum(terms).widen(_geometric_tail(m0, a, 0) / math.log(2))


def selberg_log_Z(thetaL: float, C_L: float, sigma: float) -> Ball:
    if sigma - thetaL <= 1:
        raise DomainError("sigma - theta_L > 1 required")
    if C_L == 0:
        return Ball(0.0)
    return prime_power_sum(sigma - thetaL) * C_L


def selberg_Z(thetaL: float, C_L: float, sigma: float) -> Ball:
    return bl.exp(selberg_log_Z(thetaL, C_L, sigma))


def selberg_z(thetaL: float, C_L: float, sigma: float) -> Ball:
    return bl.exp(-selberg_log_Z(thetaL, C_L, sigma))


# c_theta(eps) ------------------------------------------------------------------

def _quad_info(eps: float, theta: float) -> QuadratureInfo:
    lo = 1 + eps - theta
    _, panels = _log_zeta_integral(float(lo), 1e-14)
    return QuadratureInfo(panels=panels, tail_cutoff=TAIL_CUTOFF,
                          tail_bound=_log_zeta_tail(TAIL_CUTOFF))


def _c_artin(theta: float, eps: float) -> dict:
    a = 1 + eps
    I = log_zeta_integral
    t1 = log_big_Z_theta(theta, a) * (0.5 + eps)
    t2 = (I(a + theta) + I(a - theta)) * 0.5

    def int_log_z(lo: float, hi: float | None) -> Ball:
        def seg(scale: float, shift: float) -> Ball:
            lo_y = scale * lo + shift
            if hi is None:
                return I(lo_y) * (1 / scale)
            return _log_zeta_between(lo_y, scale * hi + shift) * (1 / scale)

        num = seg(2, 2 * theta) + seg(2, -2 * theta)
        den = seg(1, theta) + seg(1, -theta)
        return (num - den) * 0.5

    t3 = -int_log_z(a, 2 + eps)
    t4 = -int_log_z(1.5, None)
    t5 = a_epsilon(eps) * small_z_logderiv(theta, a)
    return {"half_plus_eps_log_Z": t1, "int_log_Z": t2, "minus_int_log_z_short": t3,
            "minus_int_log_z_tail": t4, "A_eps_z_logderiv": t5}


def _c_selberg(thetaL: float, C_L: float, eps: float) -> dict:
    a = 1 + eps
    x = a - thetaL
    if C_L == 0:
        zero = Ball(0.0)
        return {"half_plus_eps_log_Z": zero, "int_log_Z": zero, "minus_int_log_z_short": zero,
                "minus_int_log_z_tail": zero, "A_eps_z_logderiv": zero}
    t1 = prime_power_sum(x) * ((0.5 + eps) * C_L)
    t2 = _prime_power_sum_integral(x, None) * C_L
    # log z = -log Z, so subtracting its integrals adds those of log Z
    t3 = _prime_power_sum_integral(x, 2 + eps - thetaL) * C_L
    t4 = _prime_power_sum_integral(1.5 - thetaL, None) * C_L
    t5 = -(a_epsilon(eps) * prime_power_sum_deriv(x) * C_L)
    return {"half_plus_eps_log_Z": t1, "int_log_Z": t2, "minus_int_log_z_short": t3,
            "minus_int_log_z_tail": t4, "A_eps_z_logderiv": t5}


def c_theta(theta: float, epsilon: float, variant: str | Variant = Variant.ARTIN,
            C_L: float = 1.0, l: int = 1) -> ConstantReport:
    """c_theta(eps) assembled from its five addends.

    ``variant`` is ``artin`` (Z_theta built from zeta), ``selberg`` (Z_{theta_L}
    from the Euler-product constant C_L) or ``selberg_poly`` (l * c_0(eps)).
    """
    variant = Variant(variant)
    if not (epsilon > theta):
        raise DomainError("eps > theta required")
    if epsilon <= 0:
        raise DomainError("eps > 0 required")
    if variant is Variant.SELBERG_POLY:
        if theta != 0:
            raise DomainError("polynomial Euler product forces theta = 0")
        terms = {k: v * float(l) for k, v in _c_artin(0.0, epsilon).items()}
    elif variant is Variant.ARTIN:
        terms = _c_artin(theta, epsilon)
    else:
        terms = _c_selberg(theta, C_L, epsilon)
    total = bl.fsum(terms.values())
    return ConstantReport(theta=theta, epsilon=epsilon, variant=variant.value,
                          A_eps=a_epsilon(epsilon), c_theta_eps=total, terms=terms,
                          quadrature=_quad_info(epsilon, theta))


def sweep_epsilon(theta: float, grid, variant: str = "artin", C_L: float = 1.0,
                  l: int = 1) -> tuple[float, list[ConstantReport]]:
    """Evaluate c_theta on a grid of eps and report the minimizing eps."""
    reports = [c_theta(theta, e, variant, C_L, l) for e in grid if e > theta]
    best = min(reports, key=lambda r: r.c_theta_eps.upper())
    return best.epsilon, reports
