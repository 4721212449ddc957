"""Upper bounds for pi * int_{t1}^{t2} S(t) dt with precondition auditing."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np
from scipy import integrate

from . import ball as bl
from .ball import Ball
from .constants import a_epsilon, c_theta
from .errors import DomainError, MissingAttestation, PreconditionViolated
from .lfunc_model import ClassTag, LFunctionDescriptor, log_abs_Q, log_abs_QL
from .special_functions import digamma


class TheoremTag(str, Enum):
    ARTIN = "artin"
    SELBERG = "selberg"
    SELBERG_POLY = "selberg_polynomial"


@dataclass(frozen=True)
class AuditEntry:
    condition: str
    passed: bool
    margin: float


@dataclass
class BoundReport:
    theorem_tag: TheoremTag
    t1: float
    t2: float
    epsilon: float
    X: float
    rhs_value: Ball | None
    term_breakdown: dict = field(default_factory=dict)
    precondition_audit: list = field(default_factory=list)

    @property
    def status(self) -> str:
        return "OK" if self.rhs_value is not None else "NotApplicable"

    def to_json(self) -> dict:
        b = bl.ball_to_json
        return {
            "theorem": self.theorem_tag.value,
            "status": self.status,
            "t1": self.t1, "t2": self.t2, "epsilon": self.epsilon, "X": self.X,
            "rhs": b(self.rhs_value),
            "terms": {k: b(v) for k, v in self.term_breakdown.items()},
            "audit": [{"condition": a.condition, "passed": a.passed, "margin": a.margin}
                      for a in self.precondition_audit],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "BoundReport":
        b = bl.ball_from_json
        return cls(TheoremTag(obj["theorem"]), obj["t1"], obj["t2"], obj["epsilon"], obj["X"],
                   b(obj["rhs"]), {k: b(v) for k, v in obj["terms"].items()},
                   [AuditEntry(**a) for a in obj["audit"]])


class _Audit:
    def __init__(self):
        self.entries: list[AuditEntry] = []

    def check(self, condition: str, margin: float, strict_positive: bool = False):
        ok = margin > 0 if strict_positive else margin >= 0
        self.entries.append(AuditEntry(condition, bool(ok), float(margin)))

    def first_failure(self):
        return next((e for e in self.entries if not e.passed), None)


def _finish(tag, t1, t2, eps, X, terms, audit: _Audit, strict: bool) -> BoundReport:
    bad = audit.first_failure()
    if bad is not None:
        if strict:
            raise PreconditionViolated(bad.condition, f"margin {bad.margin:.6g}")
        return BoundReport(tag, t1, t2, eps, X, None, terms, audit.entries)
    rhs = bl.fsum(terms.values())
    return BoundReport(tag, t1, t2, eps, X, rhs, terms, audit.entries)


def _q_coefficient(eps: float) -> float:
    return 1.0 / 16 + eps * (1 + eps) / 4


def bound_artin(d: LFunctionDescriptor, t1: float, t2: float, epsilon: float, X: float,
                strict: bool = True) -> BoundReport:
    if d.class_tag is not ClassTag.ARTIN:
        raise PreconditionViolated("class = artin_type", d.class_tag.value)
    eps = epsilon
    au = _Audit()
    au.check("X>5", X - 5, strict_positive=True)
    au.check("eps>theta", eps - d.theta, strict_positive=True)
    au.check("eps<=1/2", 0.5 - eps)
    au.check("t2>=t1", t2 - t1)
    for j, g in enumerate(d.gamma_factors):
        mu = g.mu_j
        au.check(f"|t2+Im(mu_j)|>=3/2 (j={j})", abs(t2 + mu.imag) - 1.5)
        au.check(f"(t1+Im(mu_j))^2>=(2+eps+Re(mu_j))^2+X^2 (j={j})",
                 (t1 + mu.imag) ** 2 - (2 + eps + mu.real) ** 2 - X**2)
    terms = {}
    if 0 < eps <= 0.5 and eps > d.theta and X > 0:
        A = a_epsilon(eps)
        r = d.r
        terms["log_Q_t2"] = log_abs_Q(d, complex(3 + eps, t2)) * _q_coefficient(eps)
        terms["log_Q_t1"] = log_abs_Q(d, complex(1 + eps, t1)) * ((A - 1.0) * 0.5)
        terms["c_theta"] = c_theta(d.theta, eps, "artin").c_theta_eps * float(r)
        terms["inverse_X"] = (A * 0.09 + (8.3 + (0.5 + eps) * (2 + eps) / 5)) * (r / X)
    return _finish(TheoremTag.ARTIN, t1, t2, eps, X, terms, au, strict)


def _selberg_common(d, t1, t2, eps, X, au: _Audit):
    lam_max = max(g.lambda_j for g in d.gamma_factors)
    for j, g in enumerate(d.gamma_factors):
        au.check(f"lambda_j<1 (j={j})", 1 - g.lambda_j, strict_positive=True)
    cap = min(0.5, 0.5 * (1 / lam_max - 1)) if lam_max < 1 else 0.0
    au.check("eps>=0", eps)
    au.check("eps<=min{1/2,(1/max lambda_j-1)/2}", cap - eps)
    au.check("eps>theta_L", eps - d.theta, strict_positive=True)
    au.check("X>5", X - 5, strict_positive=True)
    au.check("t2>=t1", t2 - t1)
    au.check("t1>=0", t1)
    au.check("t2>=eps", t2 - eps)
    for j, g in enumerate(d.gamma_factors):
        mu, lam = g.mu_j, g.lambda_j
        rhs = (lam * (2 + eps) + mu.real) ** 2 + X**2
        au.check(f"(t1+Im(mu_j))^2>=(lambda_j(2+eps)+Re(mu_j))^2+X^2 (j={j})",
                 (t1 + mu.imag) ** 2 - rhs)
        # the same inequality at lambda_j t1 is what the Gamma estimates actually use
        au.check(f"(lambda_j t1+Im(mu_j))^2>=(lambda_j(2+eps)+Re(mu_j))^2+X^2 (j={j})",
                 (lam * t1 + mu.imag) ** 2 - rhs)
    return cap


def _selberg_terms(d, t1, t2, eps, X, c_term: Ball) -> dict:
    A = a_epsilon(eps)
    f = d.f
    terms = {
        "log_QL_t2": log_abs_QL(d, complex(1 + eps, t2)) * _q_coefficient(eps),
        "log_QL_t1": log_abs_QL(d, complex(1 + eps, t1)) * ((A - 1.0) * 0.5),
        "c_theta": c_term,
        "inverse_X": (A * 0.8 + 0.9) * (f / X),
    }
    if d.pole_order:
        terms["pole"] = Ball.of(d.pole_order * (2.5 + eps)) / max(eps, t1)
    else:
        terms["pole"] = Ball(0.0)
    return terms


def _attest(d: LFunctionDescriptor, strict: bool, au: _Audit):
    au.check("L(1)!=0 attested", 1.0 if d.L1_nonzero else -1.0, strict_positive=True)
    if strict and not d.L1_nonzero:
        raise MissingAttestation("L(1)!=0", "set L1_nonzero in the descriptor")


def bound_selberg(d: LFunctionDescriptor, t1: float, t2: float, epsilon: float, X: float,
                  strict: bool = True) -> BoundReport:
    if d.class_tag is ClassTag.ARTIN:
        raise PreconditionViolated("class = selberg", d.class_tag.value)
    au = _Audit()
    _attest(d, strict, au)
    cap = _selberg_common(d, t1, t2, epsilon, X, au)
    terms = {}
    if d.theta < epsilon <= cap and epsilon > 0 and X > 0:
        c = c_theta(d.theta, epsilon, "selberg", C_L=d.C_L).c_theta_eps
        terms = _selberg_terms(d, t1, t2, epsilon, X, c)
    return _finish(TheoremTag.SELBERG, t1, t2, epsilon, X, terms, au, strict)


def bound_selberg_polynomial(d: LFunctionDescriptor, t1: float, t2: float, epsilon: float,
                             X: float, strict: bool = True) -> BoundReport:
    if d.class_tag is ClassTag.ARTIN:
        raise PreconditionViolated("class = selberg", d.class_tag.value)
    au = _Audit()
    _attest(d, strict, au)
    au.check("polynomial Euler product given", 1.0 if d.euler_order else -1.0,
             strict_positive=True)
    au.check("theta_L=0", -abs(d.theta))
    cap = _selberg_common(replace(d, theta=0.0), t1, t2, epsilon, X, au)
    terms = {}
    if d.euler_order and 0 < epsilon <= cap and X > 0:
        c = c_theta(0.0, epsilon, "selberg_poly", l=int(d.euler_order)).c_theta_eps
        terms = _selberg_terms(d, t1, t2, epsilon, X, c)
    return _finish(TheoremTag.SELBERG_POLY, t1, t2, epsilon, X, terms, au, strict)


def bound_for(d: LFunctionDescriptor, t1, t2, epsilon, X, strict=True) -> BoundReport:
    """Dispatch on the descriptor class."""
    if d.class_tag is ClassTag.ARTIN:
        return bound_artin(d, t1, t2, epsilon, X, strict)
    if d.class_tag is ClassTag.SELBERG_POLY:
        return bound_selberg_polynomial(d, t1, t2, epsilon, X, strict)
    return bound_selberg(d, t1, t2, epsilon, X, strict)


def bound_for_reverse(d: LFunctionDescriptor, t1, t2, epsilon, X, strict=True) -> BoundReport:
    """Upper bound for -pi * int_{t1}^{t2} S(t) dt.

    The same estimate with the roles of the endpoints exchanged: the log Q term
    with the 1/16 + eps(1+eps)/4 weight is taken at t1 and the (A_eps - 1)/2 term
    at t2. Hypotheses are audited at both endpoints.
    """
    fwd = bound_for(d, t1, t2, epsilon, X, strict=False)
    end = bound_for(d, t2, t2, epsilon, X, strict=False)
    au = _Audit()
    au.entries = list(fwd.precondition_audit) + [
        AuditEntry(f"{e.condition} [at t2]", e.passed, e.margin) for e in end.precondition_audit]
    terms = dict(fwd.term_breakdown)
    if terms:
        A = a_epsilon(epsilon)
        if d.class_tag is ClassTag.ARTIN:
            terms["log_Q_t2"] = log_abs_Q(d, complex(3 + epsilon, t1)) * _q_coefficient(epsilon)
            terms["log_Q_t1"] = log_abs_Q(d, complex(1 + epsilon, t2)) * ((A - 1.0) * 0.5)
        else:
            terms["log_QL_t2"] = log_abs_QL(d, complex(1 + epsilon, t1)) * _q_coefficient(epsilon)
            terms["log_QL_t1"] = log_abs_QL(d, complex(1 + epsilon, t2)) * ((A - 1.0) * 0.5)
    return _finish(fwd.theorem_tag, t1, t2, epsilon, X, terms, au, strict)


def max_admissible_X(d: LFunctionDescriptor, t1: float, epsilon: float) -> float:
    """Largest X meeting the t1 hypothesis of the class theorem (may be <= 5)."""
    best = math.inf
    for g in d.gamma_factors:
        mu = g.mu_j
        if d.class_tag is ClassTag.ARTIN:
            pairs = [(t1 + mu.imag, 2 + epsilon + mu.real)]
        else:
            lam = g.lambda_j
            pairs = [(t1 + mu.imag, lam * (2 + epsilon) + mu.real),
                     (lam * t1 + mu.imag, lam * (2 + epsilon) + mu.real)]
        for a, b in pairs:
            room = a * a - b * b
            best = min(best, math.sqrt(room) if room > 0 else 0.0)
    return best * (1 - 1e-12)


# lemma checks ------------------------------------------------------------------

def _gamma_logderiv_real(d: LFunctionDescriptor, s: complex) -> Ball:
    sb = Ball.of(complex(s))
    if d.class_tag is ClassTag.ARTIN:
        out = bl.log(d.N) * 0.5 - bl.log(bl.PI) * (d.r / 2.0)
        for g in d.gamma_factors:
            out = out + digamma((sb + g.mu_j) * 0.5).real * 0.5
        return out.real
    out = bl.log(d.N)
    for g in d.gamma_factors:
        out = out + digamma(sb * g.lambda_j + g.mu_j).real * g.lambda_j
    return out.real


def check_gammaQ_property(d: LFunctionDescriptor, sigma: float, t: float, epsilon: float,
                          X: float) -> tuple[bool, bool]:
    if not (0.5 <= sigma <= 2 + epsilon):
        raise PreconditionViolated("sigma in [1/2, 2+eps]", f"sigma={sigma}")
    if not X > 5:
        raise PreconditionViolated("X>5", f"X={X}")
    artin = d.class_tag is ClassTag.ARTIN
    for j, g in enumerate(d.gamma_factors):
        lam = 1.0 if artin else g.lambda_j
        lhs = (lam * t + g.mu_j.imag) ** 2
        rhs = ((2 + epsilon) * lam + g.mu_j.real) ** 2 + X**2
        if lhs < rhs:
            raise PreconditionViolated(f"(t+Im(mu_j))^2 condition (j={j})",
                                       f"{lhs:.6g} < {rhs:.6g}")
    val = _gamma_logderiv_real(d, complex(sigma, t))
    s1 = complex(1 + epsilon, t)
    if artin:
        val = val - log_abs_Q(d, s1) * 0.5
        n = d.r
        lo = -n * (1 / (2 * math.sqrt(2) * X) + (4 / math.pi**2 + 0.25) / X**2)
    else:
        val = val - log_abs_QL(d, s1) * 0.5
        n = d.f
        lo = -n * (3 / (4 * math.sqrt(2) * X) + (4 / math.pi**2 + 1) / X**2)
    hi = 4 * n / (math.pi**2 * X**2)
    return val.lower() >= lo, val.upper() <= hi


def _easy_integrand(x: float, w: complex) -> float:
    wb = w.conjugate()
    num = abs((x + 1 + w) * (x + 1 - wb))
    den = abs((x + w) * (x - wb))
    if den == 0:
        return math.inf
    return math.log(num) - math.log(den)


def easy_integral(w: complex, epsilon: float) -> tuple[float, float]:
    """Quadrature value and error estimate of the left side of the easy-integral lemma."""
    w = complex(w)
    upper = 0.5 + epsilon
    # log singularities where x + w = 0 or x = conj(w) on the real axis
    pts = sorted({p for p in (-w.real, w.real) if 0 < p < upper and abs(w.imag) < 1e-3})
    val, err = integrate.quad(_easy_integrand, 0.0, upper, args=(w,), points=pts or None,
                              limit=400, epsabs=1e-12, epsrel=1e-12)
    return val, err


def check_easy_integral_property(w: complex, epsilon: float) -> bool:
    w = complex(w)
    if abs(w.real) > 0.5:
        raise DomainError("|Re(w)| <= 1/2 required")
    if not (0 <= epsilon <= 0.5):
        raise DomainError("eps in [0, 1/2] required")
    val, err = easy_integral(w, epsilon)
    wb = Ball.of(w)
    rhs = a_epsilon(epsilon) * ((wb + 1.0).inverse() + (1.0 - wb.conjugate()).inverse()).real
    return val - err <= rhs.upper()


def sample_gammaQ_configs(d: LFunctionDescriptor, n: int, seed: int = 0) -> list[tuple]:
    """n random (sigma, t, eps, X) meeting the hypotheses of check_gammaQ_property."""
    rng = np.random.default_rng(seed)
    artin = d.class_tag is ClassTag.ARTIN
    out = []
    while len(out) < n:
        eps = float(rng.uniform(0.0, 0.5))
        X = float(rng.uniform(5.5, 40.0))
        sigma = float(rng.uniform(0.5, 2 + eps))
        tmin = 0.0
        for g in d.gamma_factors:
            lam = 1.0 if artin else g.lambda_j
            need = math.sqrt(((2 + eps) * lam + g.mu_j.real) ** 2 + X**2)
            tmin = max(tmin, (need - g.mu_j.imag) / lam)
        t = float(tmin * (1 + 1e-9) + rng.uniform(0.0, 200.0))
        out.append((sigma, t, eps, X))
    return out


def sample_easy_configs(n: int, seed: int = 0) -> list[tuple]:
    """n random (w, eps) with |Re w| <= 1/2 and eps in [0, 1/2]."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        w = complex(rng.uniform(-0.5, 0.5), rng.uniform(-20.0, 20.0))
        out.append((w, float(rng.uniform(0.0, 0.5))))
    return out
