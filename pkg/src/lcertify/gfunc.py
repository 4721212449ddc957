"""The kernel G(u) = sum of residues of e^{W(1/2-s)} prod Gamma(lambda s + mu_j),
W = u + i pi f eta / 4, together with its tail and large-u bounds.

Residues along each chain rho, rho - 1/lambda, rho - 2/lambda, ... are produced
by the recursion

    g(h + rho - 1/lambda) = e^{W/lambda} g(h + rho) / prod_j (lambda (h + rho) - 1 + mu_j)

on truncated Laurent series.  A chain stops once

    e^{u/lambda} / prod_j (|1 - lambda rho - mu_j| - lambda) < 1/2

and the largest polar coefficient at rho is below the tolerance; that coefficient
then bounds the remaining tail.  Terms peak near k ~ |e^{W/lambda}| before they
decay, so the chain runs in mpmath at a working precision chosen from a float
estimate of the peak.  A single Gamma factor has the summed form
(1/lambda) e^{W(1/2 + mu/lambda)} exp(-e^{W/lambda}), used directly when f = 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath

from . import ball as bl
from .ball import Ball
from .errors import DomainError, NonConvergent, UnequalLambdas
from .lfunc_model import GammaFactor, LFunctionDescriptor
from .special_functions import MpBackend, TruncatedSeries, gamma_polar_expansion

MAX_CHAIN_STEPS = 10_000
INT_TOL = 1e-12


# pole lattice --------------------------------------------------------------

@dataclass(frozen=True)
class Chain:
    base: complex            # rightmost pole of the chain
    members: tuple           # indices of the factors whose poles lie on this chain
    offsets: tuple           # chain step at which each member starts contributing


@dataclass(frozen=True)
class PoleLattice:
    lam: float
    chains: tuple
    spacing: float

    def order_at(self, chain: Chain, k: int) -> int:
        return sum(1 for o in chain.offsets if o <= k)


def _factors(x) -> tuple:
    if isinstance(x, LFunctionDescriptor):
        return x.gamma_factors
    return tuple(f if isinstance(f, GammaFactor) else GammaFactor(float(f[0]), complex(f[1]))
                 for f in x)


def common_lambda(factors) -> float:
    lams = {g.lambda_j for g in factors}
    if len(lams) != 1:
        raise UnequalLambdas("all lambda_j must be equal")
    return lams.pop()


def pole_lattice(factors) -> PoleLattice:
    factors = _factors(factors)
    lam = common_lambda(factors)
    groups: list[list[int]] = []
    for j, g in enumerate(factors):
        for grp in groups:
            d = g.mu_j - factors[grp[0]].mu_j
            if abs(d.imag) < INT_TOL and abs(d.real - round(d.real)) < INT_TOL:
                grp.append(j)
                break
        else:
            groups.append([j])
    chains = []
    for grp in groups:
        ref = min(grp, key=lambda j: factors[j].mu_j.real)
        mu0 = factors[ref].mu_j
        offs = tuple(int(round((factors[j].mu_j - mu0).real)) for j in grp)
        chains.append(Chain(base=-mu0 / lam, members=tuple(grp), offsets=offs))
    return PoleLattice(lam=lam, chains=tuple(chains), spacing=1.0 / lam)


# values --------------------------------------------------------------------

@dataclass(frozen=True)
class GValue:
    u: float
    eta: float
    value: Ball
    residues: int
    tail_bound: float
    large_u_shortcut: bool
    method: str


def _check_eta(eta: float):
    if not (-1.0 < eta < 1.0):
        raise DomainError("eta must lie in (-1, 1)")


def _W(u: float, eta: float, f: int) -> complex:
    return complex(u, math.pi * f * eta / 4)


def g_closed_form(lam: float, mu: complex, u: float, eta: float) -> Ball:
    """G for a single factor Gamma(lambda s + mu)."""
    W = Ball(_W(u, eta, 1), 0.0)
    W = W.widen(4 * bl.EPS * abs(W.mid))
    inner = bl.exp(W * (1.0 / lam))
    pre = bl.exp(W * (0.5 + complex(mu) / lam)) * (1.0 / lam)
    return pre * bl.exp(-inner)


def _chain_plan(factors, lam, chain: Chain, u: float, W: complex, tol: float):
    """Float pass over the chain: steps to the stopping point and peak log magnitude."""
    mus = [g.mu_j for g in factors]
    rho = chain.base
    logmag = (W * (0.5 - rho)).real
    peak = logmag
    ew = u / lam
    for k in range(MAX_CHAIN_STEPS):
        args = [lam * rho + m for m in mus]
        denom = math.prod(max(abs(1 - a) - lam, 0.0) for a in args)
        if (all(a.real <= INT_TOL for a in args) and denom > 0
                and math.exp(ew) / denom < 0.5 and logmag < math.log(tol) - 2):
            return k + 1, peak
        for a in args:
            d = abs(a - 1)
            logmag -= math.log(d) if d > 1e-9 else math.log(lam)
        logmag += ew
        peak = max(peak, logmag)
        rho -= 1.0 / lam
    raise NonConvergent("residue chain did not reach the tail condition")


def _mp_ball(z, rad: float) -> Ball:
    c = complex(z)
    return Ball(c, bl.up(rad + 0.5 * (math.ulp(abs(c.real)) + math.ulp(abs(c.imag)))))


def _chain_sum(factors, lam, chain: Chain, u: float, eta: float, tol: float):
    f = len(factors)
    W = _W(u, eta, f)
    steps, peak = _chain_plan(factors, lam, chain, u, W, tol)
    bits = int((max(peak, 0.0) + math.log(1.0 / tol) + math.log(steps + 2))
               / math.log(2)) + 64
    with mpmath.workprec(max(bits, 80)):
        mc = mpmath.mpc
        top = max(chain.offsets) - min(chain.offsets) + 1
        ser = gamma_polar_expansion(chain.base, factors, W, top=top, backend=MpBackend())
        mus = [mc(g.mu_j) for g in factors]
        lam_m = mpmath.mpf(lam)
        ew = mpmath.exp(mc(W) / lam_m)
        bound_ew = mpmath.exp(u / lam_m)
        rho = mc(chain.base)
        total = mc(0)
        abs_sum = mpmath.mpf(0)
        # dG/dW = sum Res (1/2 - s) g(s), needed for the rounding of W itself
        dsum = mc(0)
        rho_max = mpmath.mpf(0)
        k = 0
        while True:
            total += ser.coeff(-1)
            polar = ser.polar_part()
            cmax = max(abs(c) for c in polar)
            abs_sum += cmax
            dsum += (0.5 - rho) * polar[0] - (polar[1] if len(polar) > 1 else 0)
            rho_max = max(rho_max, abs(0.5 - rho) + 1)
            args = [lam_m * rho + m for m in mus]
            denom = mpmath.mpf(1)
            for a in args:
                denom *= max(abs(1 - a) - lam_m, 0)
            if (all(mpmath.re(a) <= INT_TOL for a in args) and denom > 0
                    and bound_ew / denom < 0.5 and cmax <= tol):
                tail = float(cmax)
                dtail = 2 * (abs(0.5 - rho) + 1 / lam_m) * cmax
                break
            k += 1
            if k > MAX_CHAIN_STEPS:
                raise NonConvergent("residue chain did not reach the tail condition")
            # step to rho - 1/lambda; a vanishing linear factor raises the pole order
            out = ser.scale(ew)
            shifts = 0
            for a in args:
                c0 = a - 1
                if abs(c0) < INT_TOL:
                    shifts += 1
                    out = out.scale(1 / lam_m)
                else:
                    pad = [mc(0)] * (len(out.coefficients) - 2)
                    out = out / TruncatedSeries(out.expansion_point, 0, tuple([c0, lam_m] + pad))
            ser = out.shift_order(-shifts)
            rho = rho - 1 / lam_m
        rounding = float(abs_sum) * 2.0 ** (-mpmath.mp.prec + 20) * (k + 1)
        w_err = 4 * bl.EPS * abs(W)
        dG = abs(dsum) + dtail + abs_sum * rho_max * 2.0 ** (-mpmath.mp.prec + 20) * (k + 1)
        # doubled to cover the variation of G' across the tiny W disc
        rounding += 2 * float(dG) * w_err
        return _mp_ball(total, rounding + tail), k + 1, tail


def g_residue_sum(factors, u: float, eta: float, tol: float = 1e-16) -> GValue:
    """G by explicit residue chains (any f)."""
    _check_eta(eta)
    factors = _factors(factors)
    lat = pole_lattice(factors)
    if not lat.lam < 1:
        raise DomainError("lambda < 1 required for the tail lemma")
    total = Ball(0j)
    count = 0
    tail = 0.0
    for ch in lat.chains:
        v, n, t = _chain_sum(factors, lat.lam, ch, u, eta, tol / len(lat.chains))
        total = total + v
        count += n
        tail += t
    return GValue(u, eta, total, count, tail, False, "residue")


def g_eval(d, u: float, eta: float, tol: float = 1e-16, method: str = "auto") -> GValue:
    """G(u; eta) as a ball of radius about tol or less.

    ``method`` is ``auto`` (large-u bound when it is below tol, summed form for
    f = 1, residue chains otherwise), ``residue`` or ``closed``.
    """
    _check_eta(eta)
    factors = _factors(d)
    lam = common_lambda(factors)
    f = len(factors)
    if method == "auto" and lam >= 0.5:
        try:
            b = g_large_u_bound(factors, u, eta)
        except DomainError:
            b = None
        if b is not None and b.upper() <= tol:
            return GValue(u, eta, Ball(0j, b.upper()), 0, b.upper(), True, "large_u")
    if method in ("auto", "closed") and f == 1:
        v = g_closed_form(lam, factors[0].mu_j, u, eta)
        return GValue(u, eta, v.to_complex(), 0, 0.0, False, "closed")
    if method == "closed":
        raise DomainError("summed form exists only for a single Gamma factor")
    return g_residue_sum(factors, u, eta, tol)


# analytic bounds -------------------------------------------------------------

@dataclass(frozen=True)
class DecayConstants:
    delta: float
    mu: complex
    nu: tuple
    K: float
    f: int
    lam: float


def decay_constants(d, eta: float) -> DecayConstants:
    _check_eta(eta)
    factors = _factors(d)
    lam = common_lambda(factors)
    if lam < 0.5:
        raise DomainError("lambda >= 1/2 required")
    f = len(factors)
    delta = 0.5 * math.pi * (1 - abs(eta) / (2 * lam))
    mu = (lam - 1) / (2 * lam) + (0.5 + sum(g.mu_j for g in factors)) / (f * lam)
    nu = tuple(g.mu_j.real + 0.5 * (1.0 / f - 1) for g in factors)
    K = (1 / math.pi) * math.sqrt(2 ** (f + 1) / f * math.exp(delta * (f - 1)) / delta) \
        * math.exp(-math.pi * f * eta * mu.imag / 4)
    return DecayConstants(delta, mu, nu, K, f, lam)


def _nu_product(dc: DecayConstants, X: float) -> float:
    out = 1.0
    for v in dc.nu:
        out *= (1 + dc.f * v / X) ** v
    return out


def _slack(x: float) -> float:
    return bl.up(x * (1 + 1e-12))


def g_large_u_bound(d, u: float, eta: float) -> Ball:
    """Upper bound for |G(u)| valid when X_1(u) >= f."""
    dc = decay_constants(d, eta)
    log_x1 = math.log(dc.f * dc.delta) - dc.delta + u / (dc.f * dc.lam)
    if log_x1 > 700:
        return Ball(0.0, 0.0).widen(bl.TINY)
    X1 = math.exp(log_x1)
    if X1 < dc.f:
        raise DomainError(f"X_1(u) = {X1:.6g} < f")
    logb = math.log(dc.K) + dc.mu.real * u - X1 + math.log(_nu_product(dc, X1))
    val = math.exp(logb) if logb > -745 else 0.0
    return Ball.interval(0.0, _slack(val) + bl.TINY)


def dirichlet_tail_bound(d: LFunctionDescriptor, M: int, x: float, eta: float) -> Ball:
    """Bound for |sum_{n>M} a(n) (n/N)^{-1/2} G(x + log(n/N))|."""
    dc = decay_constants(d, eta)
    N = float(d.N.mid)
    C, alpha = d.coeff_C, d.coeff_alpha
    f, lam = dc.f, dc.lam
    c = dc.mu.real + 0.5 + alpha
    cp = max(c * f * lam - 1, 0.0)
    log_x2 = math.log(f * dc.delta) - dc.delta + (x - math.log(N)) / (f * lam)
    log_y = log_x2 + math.log(M) / (lam * f)
    if log_y > 700:
        return Ball.interval(0.0, bl.TINY)
    Y = math.exp(log_y)
    if not Y > max(cp, f):
        raise DomainError(f"X_2(x) M^(1/(lambda f)) = {Y:.6g} <= max(c', f)")
    logb = (math.log(dc.K * lam * f) + dc.mu.real * (x - 0.5 * math.log(N)) + math.log(C)
            + c * math.log(M) - Y - math.log(Y - cp) + math.log(_nu_product(dc, Y)))
    val = math.exp(logb) if logb > -745 else 0.0
    return Ball.interval(0.0, _slack(val) + bl.TINY)


def dirichlet_cutoff(d: LFunctionDescriptor, x: float, eta: float, tol: float,
                     m_max: int | None = None) -> int:
    """Smallest M (doubling search, then bisection) with dirichlet_tail_bound <= tol."""
    m_max = m_max or d.M_max

    def ok(M):
        try:
            return dirichlet_tail_bound(d, M, x, eta).upper() <= tol
        except DomainError:
            return False

    hi = 1
    while not ok(hi):
        hi *= 2
        if hi > m_max:
            raise DomainError("Dirichlet cutoff exceeds M_max")
    lo = hi // 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return hi
