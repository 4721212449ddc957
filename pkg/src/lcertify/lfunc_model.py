"""L-function data model, descriptor ingestion and derived quantities."""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, replace
from enum import Enum
from pathlib import Path

from . import ball as bl
from .ball import Ball
from .errors import (BranchCutHit, DegenerateOmega, InvariantViolation, ParseError,
                     WrongClass)
from .special_functions import log_gamma

OMEGA_TOL = 1e-12
DEFAULT_M_MAX = 10**6


class ClassTag(str, Enum):
    ARTIN = "artin_type"
    SELBERG = "selberg"
    SELBERG_POLY = "selberg_polynomial"


@dataclass(frozen=True)
class GammaFactor:
    lambda_j: float
    mu_j: complex


@dataclass(frozen=True)
class CoefficientSource:
    """Dirichlet coefficients as an explicit list, periodic values or Euler data."""

    kind: str
    values: tuple = ()
    alphas: tuple = ()  # ((p, (alpha_1, ..., alpha_l)), ...)

    def expand(self, M: int) -> list[complex]:
        """a(1), ..., a(M)."""
        if self.kind == "list":
            if M > len(self.values):
                raise InvariantViolation(
                    f"coefficient list has {len(self.values)} entries, {M} requested")
            return list(self.values[:M])
        if self.kind == "periodic":
            q = len(self.values)
            return [self.values[(n - 1) % q] if q > 1 else self.values[0]
                    for n in range(1, M + 1)] if q != 0 else []
        if self.kind == "euler":
            return _expand_euler(dict(self.alphas), M)
        raise ParseError(f"unknown coefficient kind {self.kind!r}")

    @property
    def max_length(self) -> int | None:
        if self.kind == "list":
            return len(self.values)
        if self.kind == "euler":
            return None
        return None


def _primes_upto(n: int) -> list[int]:
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0:2] = b"\x00\x00"
    for p in range(2, int(n**0.5) + 1):
        if sieve[p]:
            sieve[p * p::p] = bytearray(len(sieve[p * p::p]))
    return [i for i in range(n + 1) if sieve[i]]


def _expand_euler(alphas: dict, M: int) -> list[complex]:
    a = [0j] * (M + 1)
    a[1] = 1 + 0j
    # a(p^k) is the complete homogeneous symmetric polynomial in the alphas
    prime_power = {}
    for p in _primes_upto(M):
        if p not in alphas:
            raise InvariantViolation(f"Euler data missing for prime {p} (needed up to {M})")
        roots = alphas[p]
        hk = [1 + 0j]
        k, pk = 1, p
        while pk <= M:
            # h_k via the generating function prod 1/(1 - alpha x)
            hk.append(_homogeneous(roots, k))
            prime_power[pk] = (p, hk[k])
            k += 1
            pk *= p
    for n in range(2, M + 1):
        m, val = n, 1 + 0j
        p = _smallest_factor(m)
        while m > 1:
            p = _smallest_factor(m)
            pk = 1
            while m % p == 0:
                m //= p
                pk *= p
            val *= prime_power[pk][1]
        a[n] = val
    return a[1:]


def _homogeneous(roots, k: int) -> complex:
    # coefficients of prod_j 1/(1 - r_j x) up to x^k
    poly = [1 + 0j] + [0j] * k
    for r in roots:
        for i in range(1, k + 1):
            poly[i] += r * poly[i - 1]
    return poly[k]


def _smallest_factor(n: int) -> int:
    if n % 2 == 0:
        return 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return f
        f += 2
    return n


@dataclass(frozen=True)
class LFunctionDescriptor:
    class_tag: ClassTag
    N: Ball
    gamma_factors: tuple[GammaFactor, ...]
    omega: complex
    theta: float = 0.0
    pole_order: int = 0
    poles: tuple[complex, ...] = ()
    C_L: float = 1.0
    euler_order: int | None = None
    coefficients: CoefficientSource | None = None
    pole_residue: complex | None = None
    coeff_C: float = 1.0
    coeff_alpha: float = 0.0
    L1_nonzero: bool = False
    central_offset: float | None = None
    M_max: int = DEFAULT_M_MAX
    name: str = ""

    @property
    def f(self) -> int:
        return len(self.gamma_factors)

    @property
    def r(self) -> int:
        return len(self.gamma_factors)

    @property
    def m_poles(self) -> int:
        return len(self.poles) if self.class_tag is ClassTag.ARTIN else self.pole_order

    def coefficient_list(self, M: int) -> list[complex]:
        if self.coefficients is None:
            raise InvariantViolation("descriptor has no coefficient source")
        if M > self.M_max:
            raise InvariantViolation(f"M={M} exceeds configured M_max={self.M_max}")
        return self.coefficients.expand(M)

    def count_offset(self) -> float:
        """N(0+) = Phi(0+) + S(0+), the value of the counting function just above 0."""
        if self.central_offset is not None:
            return self.central_offset
        # a simple pole at s=1 passed above on the way from +infinity turns arg by -pi
        return -float(self.m_poles)


@dataclass(frozen=True)
class DerivedData:
    degree: float
    lambda_invariant: float
    z: complex


# validation and loading --------------------------------------------------------

def validate(d: LFunctionDescriptor) -> LFunctionDescriptor:
    if not d.gamma_factors:
        raise InvariantViolation("gamma factor list must be nonempty")
    if d.N.mid <= 0:
        raise InvariantViolation("N > 0")
    if abs(abs(d.omega) - 1.0) > OMEGA_TOL:
        raise InvariantViolation("|omega| = 1")
    if not (d.theta < 0.5):
        raise InvariantViolation("theta < 1/2")
    if d.theta < 0:
        raise InvariantViolation("theta >= 0")
    for j, g in enumerate(d.gamma_factors):
        if not (g.lambda_j > 0):
            raise InvariantViolation(f"lambda_j > 0 (j={j})")
        if d.class_tag is ClassTag.ARTIN:
            if g.lambda_j != 0.5:
                raise InvariantViolation(f"lambda_j = 1/2 for the Artin-type class (j={j})")
            if g.mu_j.real < -d.theta:
                raise InvariantViolation(f"Re(mu_j) >= -theta (j={j})")
        elif g.mu_j.real < 0:
            raise InvariantViolation(f"Re(mu_j) >= 0, axiom (iii) (j={j})")
    if d.pole_order < 0:
        raise InvariantViolation("pole order k_L >= 0")
    for p in d.poles:
        if abs(complex(p).real - 1.0) > 1e-12:
            raise InvariantViolation("poles lie on the 1-line")
    if d.class_tag is ClassTag.SELBERG_POLY and not d.euler_order:
        raise InvariantViolation("selberg_polynomial requires euler_order")
    if d.class_tag is ClassTag.SELBERG_POLY and d.theta != 0:
        raise InvariantViolation("theta_L = 0 for a polynomial Euler product")
    if d.coefficients is not None and d.class_tag is not ClassTag.ARTIN:
        a1 = d.coefficients.expand(1)[0]
        if abs(a1 - 1) > 1e-12:
            raise InvariantViolation("a(1) = 1 (Selberg class)")
    return d


def _cplx(v) -> complex:
    if isinstance(v, (list, tuple)):
        if len(v) != 2:
            raise ParseError(f"complex value must be [re, im], got {v!r}")
        return complex(float(v[0]), float(v[1]))
    return complex(float(v))


def descriptor_from_dict(raw: dict) -> LFunctionDescriptor:
    try:
        tag = ClassTag(raw["class"])
        N = Ball.from_decimal(str(raw["N"]))
        gammas = tuple(GammaFactor(float(g["lambda"]), _cplx(g.get("mu", 0)))
                       for g in raw["gamma"])
        omega = _cplx(raw.get("omega", [1, 0]))
        coeffs = None
        if "coefficients" in raw:
            c = raw["coefficients"]
            kind = c["type"]
            if kind in ("list", "periodic"):
                coeffs = CoefficientSource(kind, tuple(_cplx(v) for v in c["values"]))
            elif kind == "euler":
                al = tuple(sorted((int(p), tuple(_cplx(a) for a in roots))
                                  for p, roots in c["alphas"].items()))
                coeffs = CoefficientSource("euler", alphas=al)
            else:
                raise ParseError(f"unknown coefficient type {kind!r}")
        bound = raw.get("coeff_bound", {})
        d = LFunctionDescriptor(
            class_tag=tag,
            N=N,
            gamma_factors=gammas,
            omega=omega,
            theta=float(raw.get("theta", 0.0)),
            pole_order=int(raw.get("pole_order", 0)),
            poles=tuple(_cplx(p) for p in raw.get("poles", [])),
            C_L=float(raw.get("C_L", 1.0)),
            euler_order=int(raw["euler_order"]) if raw.get("euler_order") is not None else None,
            coefficients=coeffs,
            pole_residue=_cplx(raw["pole_residue"]) if "pole_residue" in raw else None,
            coeff_C=float(bound.get("C", 1.0)),
            coeff_alpha=float(bound.get("alpha", raw.get("theta", 0.0))),
            L1_nonzero=bool(raw.get("L1_nonzero", False)),
            central_offset=(float(raw["central_offset"])
                            if raw.get("central_offset") is not None else None),
            M_max=int(raw.get("M_max", DEFAULT_M_MAX)),
            name=str(raw.get("name", "")),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed descriptor: {exc}") from exc
    return validate(d)


def load_descriptor(path) -> LFunctionDescriptor:
    p = Path(path)
    try:
        raw = json.loads(p.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"{p}: {exc}") from exc
    return descriptor_from_dict(raw)


# derived quantities --------------------------------------------------------------

def derived(d: LFunctionDescriptor) -> DerivedData:
    deg = 2.0 * sum(g.lambda_j for g in d.gamma_factors)
    lam = math.prod(g.lambda_j ** (2 * g.lambda_j) for g in d.gamma_factors)
    return DerivedData(deg, lam, reality_rotation_z(d.omega))


def reality_rotation_z(omega: complex) -> complex:
    """Unit complex z making z * (completed function) real on the critical line.

    omega = 1 is the degenerate case of the closed formula; z = 1 there.
    """
    omega = complex(omega)
    if abs(abs(omega) - 1.0) > OMEGA_TOL:
        raise DegenerateOmega("|omega| must be 1")
    one_minus = 1.0 - omega.real
    if one_minus <= 1e-15:
        return 1 + 0j
    re = omega.imag / math.sqrt(2.0 * one_minus)
    im = -math.sqrt(one_minus) / math.sqrt(2.0)
    return complex(re, im)


def analytic_conductor_Q(d: LFunctionDescriptor, s) -> Ball:
    if d.class_tag is not ClassTag.ARTIN:
        raise WrongClass("Q(s) is defined for the Artin-type class")
    s = Ball.of(s).to_complex()
    out = d.N.to_complex()
    two_pi = bl.PI * 2.0
    for g in d.gamma_factors:
        out = out * ((s + g.mu_j) / two_pi)
    return out


def _check_selberg(d):
    if d.class_tag is ClassTag.ARTIN:
        raise WrongClass("Q_L(s) is defined for the Selberg classes")


def selberg_conductor_QL(d: LFunctionDescriptor, s) -> Ball:
    """N^2 prod (lambda_j s + mu_j + 1)^{2 lambda_j}, principal powers."""
    _check_selberg(d)
    s = Ball.of(s).to_complex()
    out = (d.N * d.N).to_complex()
    for g in d.gamma_factors:
        base = s * g.lambda_j + (g.mu_j + 1)
        if base.mid.real <= 0 and abs(base.mid.imag) <= base.rad:
            raise BranchCutHit("lambda_j s + mu_j + 1 lies on the branch cut")
        out = out * bl.exp(bl.log(base) * (2 * g.lambda_j))
    return out


def abs_QL(d: LFunctionDescriptor, s) -> Ball:
    """|Q_L(s)|, which needs no branch choice."""
    _check_selberg(d)
    s = Ball.of(s).to_complex()
    out = d.N * d.N
    for g in d.gamma_factors:
        base = abs(s * g.lambda_j + (g.mu_j + 1))
        out = out * bl.exp(bl.log(base) * (2 * g.lambda_j))
    return out


def log_abs_QL(d: LFunctionDescriptor, s) -> Ball:
    _check_selberg(d)
    s = Ball.of(s).to_complex()
    out = bl.log(d.N) * 2.0
    for g in d.gamma_factors:
        out = out + bl.log(abs(s * g.lambda_j + (g.mu_j + 1))) * (2 * g.lambda_j)
    return out


def log_abs_Q(d: LFunctionDescriptor, s) -> Ball:
    """log |Q(s)| for the Artin-type class."""
    if d.class_tag is not ClassTag.ARTIN:
        raise WrongClass("Q(s) is defined for the Artin-type class")
    s = Ball.of(s).to_complex()
    two_pi = bl.PI * 2.0
    out = bl.log(d.N)
    for g in d.gamma_factors:
        out = out + bl.log(abs((s + g.mu_j) / two_pi))
    return out


def log_gamma_factor(d: LFunctionDescriptor, s) -> Ball:
    """log gamma(s) (Artin form) or log gamma_L(s) (Selberg form), principal log Gamma."""
    s = Ball.of(s).to_complex()
    if d.class_tag is ClassTag.ARTIN:
        logN = bl.log(d.N)
        logpi = bl.log(bl.PI)
        out = logN * ((s - 0.5) * 0.5)
        for g in d.gamma_factors:
            out = out - logpi * (s * 0.5) + log_gamma((s + g.mu_j) * 0.5)
        return out + Ball(cmath.log(d.omega), 1e-15)
    out = bl.log(d.N) * s
    for g in d.gamma_factors:
        out = out + log_gamma(s * g.lambda_j + g.mu_j)
    return out


def gamma_factor(d: LFunctionDescriptor, s) -> Ball:
    return bl.exp(log_gamma_factor(d, s))


def selberg_form(d: LFunctionDescriptor) -> tuple[LFunctionDescriptor, complex]:
    """Rewrite an Artin-type descriptor as N_S^s prod Gamma(s/2 + mu_j/2).

    Returns the rewritten descriptor and the constant c with
    gamma(s) = c * N_S^s prod Gamma(s/2 + mu_j/2).
    """
    if d.class_tag is not ClassTag.ARTIN:
        return d, 1 + 0j
    r = d.r
    Ns = bl.sqrt(d.N) * bl.exp(bl.log(bl.PI) * (-r / 2.0))
    gammas = tuple(GammaFactor(0.5, g.mu_j / 2) for g in d.gamma_factors)
    c = d.omega * float(d.N.mid) ** -0.25
    omega = c.conjugate() / c
    out = replace(d, class_tag=ClassTag.SELBERG, N=Ns, gamma_factors=gammas,
                  omega=omega, pole_order=len(d.poles), poles=())
    return out, c
