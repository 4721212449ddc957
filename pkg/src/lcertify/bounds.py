"""Strip estimates: Gamma ratio bounds, convexity bounds and two worked examples."""

from __future__ import annotations

from dataclasses import dataclass

from . import ball as bl
from .ball import Ball
from .constants import big_Z_theta, selberg_Z
from .errors import DomainError, PoleProximity, SingularD
from .lfunc_model import ClassTag, LFunctionDescriptor, abs_QL, analytic_conductor_Q
from .special_functions import zeta_real

POLE_FLOOR = 1e-6


def _rpow(base: Ball, p: float) -> Ball:
    """base**p for a positive real ball; p = 0 gives exactly 1."""
    if p == 0:
        return Ball(1.0)
    base = Ball.of(base)
    if base.lower() <= 0:
        raise DomainError("real power of a nonpositive quantity")
    return bl.exp(bl.log(base) * p)


def gamma_ratio_bound(mu: complex, epsilon: float, t: float) -> Ball:
    """|(mu + 2 - eps + it)/2|^{1/2+eps}, dominating
    |Gamma((mu+1+eps+it)/2) / Gamma((mu-eps+it)/2)| for eps in [-1/2, 1/2]."""
    if not (-0.5 <= epsilon <= 0.5):
        raise DomainError("eps must lie in [-1/2, 1/2]")
    base = abs((Ball.of(complex(mu)) + complex(2 - epsilon, t)) * 0.5)
    return _rpow(base, 0.5 + epsilon)


def gamma_ratio_bound_large_mu(mu: complex, epsilon: float, t: float) -> Ball:
    """Alternative for large Re(mu) and eps < 1/2:
    ((Re mu + 3/2)/(Re mu + 1/2))^2 |(mu+1+eps+it)/2|^{1/2+eps}.

    Provided for comparison only; nothing selects it automatically.
    """
    if not (-0.5 <= epsilon < 0.5):
        raise DomainError("eps must lie in [-1/2, 1/2)")
    re = complex(mu).real
    if re + 0.5 <= 0:
        raise DomainError("Re(mu) > -1/2 required")
    pre = (Ball.of(re + 1.5) / (re + 0.5)) ** 2
    base = abs((Ball.of(complex(mu)) + complex(1 + epsilon, t)) * 0.5)
    return pre * _rpow(base, 0.5 + epsilon)


def gamma_ratio_bound_selberg(lam: float, mu: complex, epsilon: float, t: float) -> Ball:
    """|mu + 1 + (-eps + it) lam|^{2 lam (1/2+eps)}, dominating
    |Gamma(mu + lam(1+eps) + i lam t) / Gamma(mu - lam eps + i lam t)|."""
    if not (0 < lam < 1):
        raise DomainError("0 < lambda < 1 required")
    if not (-0.5 <= epsilon <= 0.5 * (1.0 / lam - 1.0)):
        raise DomainError("eps must lie in [-1/2, (1/lambda - 1)/2]")
    base = abs(Ball.of(complex(mu)) + 1.0 + complex(-epsilon, t) * lam)
    return _rpow(base, 2 * lam * (0.5 + epsilon))


@dataclass(frozen=True)
class StripBoundInput:
    descriptor: LFunctionDescriptor
    s: complex
    epsilon: float
    b_upper: Ball | None = None
    pole_floor: float = POLE_FLOOR


def epsilon_max(d: LFunctionDescriptor) -> float:
    if d.class_tag is ClassTag.ARTIN:
        return 0.5
    lam = max(g.lambda_j for g in d.gamma_factors)
    return min(0.5, 0.5 * (1.0 / lam - 1.0))


def default_b_upper(d: LFunctionDescriptor, epsilon: float) -> Ball:
    """Majorant for sup |L(1+eps+it)| from the Euler product data."""
    sigma = 1.0 + epsilon
    if d.class_tag is ClassTag.ARTIN:
        return big_Z_theta(d.theta, sigma) ** d.r
    if d.class_tag is ClassTag.SELBERG_POLY:
        return zeta_real(sigma) ** int(d.euler_order)
    return selberg_Z(d.theta, d.C_L, sigma)


def convexity_bound(inp: StripBoundInput) -> Ball:
    d = inp.descriptor
    eps = inp.epsilon
    s = complex(inp.s)
    sigma = s.real
    if not (0 < eps <= epsilon_max(d)):
        raise DomainError(f"eps must lie in (0, {epsilon_max(d)}]")
    if not (-eps <= sigma <= 1 + eps):
        raise DomainError("Re(s) must lie in [-eps, 1+eps]")
    b = inp.b_upper if inp.b_upper is not None else default_b_upper(d, eps)
    expo = (1 + eps - sigma) / 2
    sb = Ball.of(s)
    if d.class_tag is ClassTag.ARTIN:
        qpart = _rpow(abs(analytic_conductor_Q(d, sb + 2.0)), expo)
        ratio = Ball(1.0)
        for p in d.poles:
            den = abs(s - complex(p))
            if den < inp.pole_floor:
                raise PoleProximity(f"|s - {p}| = {den:.3g} below floor")
            ratio = ratio * (abs(sb - complex(p) - 1.0) / abs(sb - complex(p)))
    else:
        qpart = _rpow(abs_QL(d, sb), expo)
        ratio = Ball(1.0)
        if d.pole_order:
            if abs(s - 1) < inp.pole_floor:
                raise PoleProximity(f"|s - 1| = {abs(s - 1):.3g} below floor")
            ratio = (abs(sb - 2.0) / abs(sb - 1.0)) ** d.pole_order
    return Ball.of(b) * qpart * ratio


def artin_example_bound(r: int, N: float, s: complex) -> Ball:
    """zeta(1.49)^r N^{(1.49-sigma)/2} (|3+s|/(2 pi))^{(1.49-sigma) r/2}."""
    s = complex(s)
    sigma = s.real
    if not (0.5 <= sigma <= 1.49):
        raise DomainError("Re(s) must lie in [0.5, 1.49]")
    e = 1.49 - sigma
    q = abs(Ball.of(s) + 3.0) / (bl.PI * 2.0)
    return zeta_real(1.49) ** r * _rpow(Ball.of(N), e / 2) * _rpow(q, e * r / 2)


MAASS_THETA = 7.0 / 64.0


def maass_constant() -> Ball:
    return zeta_real(1.4 + MAASS_THETA) * zeta_real(1.4 - MAASS_THETA)


def maass_example_bound(N: int, parity: int, r_prime: float, s: complex) -> Ball:
    """Piecewise bound for a weight 0 Maass newform L-function of level N."""
    s = complex(s)
    sigma, t = s.real, s.imag
    if parity not in (0, 1):
        raise DomainError("parity must be 0 or 1")
    if not (-0.4 <= sigma <= 1.4):
        raise DomainError("sigma must lie in [-0.4, 1.4]")
    den = 1 - sigma + parity
    if den == 0:
        raise SingularD("1 - sigma + parity vanishes")
    D = Ball.of(3 * sigma - 1 + parity + abs(r_prime)) + Ball.of(2 * sigma - 1) ** 2 / den
    c = Ball.of(5.0) / (bl.PI * 2.0) if abs(t) < 5 else Ball.of(3.0) / (bl.PI * 4.0)
    base = c * bl.sqrt(Ball.of(float(N))) * (D + abs(t))
    return maass_constant() * _rpow(base, 1.4 - sigma)
