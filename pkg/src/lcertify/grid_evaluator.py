"""Certified samples of Lambda_L(1/2+it) on a Fourier grid.

With F(t) = Lambda_L(1/2+it) e^{pi f eta t/4} and hat F(x) = (1/2pi) int F(t) e^{-ixt} dt,
the periodizations

    tF(m) = sum_l F(m/A + lB),    tFhat(n) = sum_l hat F(2 pi n/B + 2 pi A l)

are a length q = AB discrete Fourier pair: tF(m) = (2 pi/B) sum_n tFhat(n) e^{2 pi i mn/q}.
hat F comes from the G-kernel Dirichlet sum; the l != 0 images on both sides are
bounded analytically and carried as radii.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import ball as bl
from .ball import Ball
from .bounds import default_b_upper, epsilon_max
from .errors import BudgetExceeded, DomainError, PreconditionViolated
from .gfunc import decay_constants, dirichlet_cutoff, dirichlet_tail_bound, g_eval
from .lfunc_model import ClassTag, LFunctionDescriptor, reality_rotation_z, selberg_form
from .special_functions import log_gamma

C_ETA_STEPS = (1.0, 2.0, 4.0, 8.0)
C_B_STEPS = (4.0, 6.0, 8.0, 12.0, 16.0, 24.0, 32.0, 48.0)
FFT_ROUNDING_FACTOR = 10.0


@dataclass(frozen=True)
class GridSpec:
    T: float
    A: float
    B: float
    q: int
    eta: float
    M: int
    target_tol: float
    fhat_tol: float
    g_tol: float
    epsilon: float
    c_eta: float = 1.0
    c_B: float = 4.0
    c_A: float = 8.0
    log: tuple = ()

    def to_json(self) -> dict:
        return {k: getattr(self, k) for k in
                ("T", "A", "B", "q", "eta", "M", "target_tol", "fhat_tol", "g_tol",
                 "epsilon", "c_eta", "c_B", "c_A")} | {"log": list(self.log)}

    @classmethod
    def from_json(cls, obj: dict) -> "GridSpec":
        kw = dict(obj)
        kw["log"] = tuple(kw.get("log", ()))
        return cls(**kw)


@dataclass(frozen=True)
class Sample:
    t: float
    F: Ball            # Lambda_L(1/2+it) e^{pi f eta t/4}
    value: Ball        # Lambda_L(1/2+it)
    imag_residual: float
    ledger: dict


@dataclass
class EvaluatedGrid:
    spec: GridSpec
    samples: list
    global_ledger: dict = field(default_factory=dict)

    def in_window(self, t1: float, t2: float) -> list:
        return [s for s in self.samples if t1 <= s.t <= t2]


# descriptor normalisation ----------------------------------------------------

def selberg_data(d: LFunctionDescriptor) -> LFunctionDescriptor:
    if d.class_tag is ClassTag.ARTIN:
        if any(abs(complex(p) - 1) > 1e-12 for p in d.poles):
            raise DomainError("poles off s = 1 are not supported by the evaluator")
        d, _ = selberg_form(d)
    return d


def zero_density(d: LFunctionDescriptor, T: float) -> float:
    """Rough zero density log((T/e)^{d_L} lambda N^2)/(2 pi) at height T."""
    deg = 2 * sum(g.lambda_j for g in d.gamma_factors)
    lam = math.prod(g.lambda_j ** (2 * g.lambda_j) for g in d.gamma_factors)
    N = float(d.N.mid)
    return math.log((T / math.e) ** deg * lam * N * N) / (2 * math.pi)


def pole_residue_Lcal(d: LFunctionDescriptor) -> Ball:
    """Residue at s = 1 of N^s prod Gamma(lambda_j s + mu_j) L(s)."""
    if d.pole_order == 0:
        return Ball(0j)
    if d.pole_order > 1:
        raise DomainError("only a simple pole at s = 1 is supported")
    if d.pole_residue is None:
        raise DomainError("descriptor lacks pole_residue")
    out = Ball.of(d.pole_residue).to_complex() * d.N
    for g in d.gamma_factors:
        out = out * bl.exp(log_gamma(Ball.of(complex(g.lambda_j + g.mu_j))))
    return out


# hat F -------------------------------------------------------------------------

def _W(x: float, f: int, eta: float) -> Ball:
    w = complex(x, math.pi * f * eta / 4)
    return Ball(w, 4 * bl.EPS * abs(w))


def residue_term(d: LFunctionDescriptor, z: complex, x: float, eta: float) -> Ball:
    """Res_{s=1} Lambda_L(s) e^{W(1/2-s)} = z R e^{-W/2}."""
    if d.pole_order == 0:
        return Ball(0j)
    return pole_residue_Lcal(d) * z * bl.exp(-_W(x, d.f, eta) * 0.5)


def _g_logderiv_bound(d, u: float) -> float:
    """Bound on |G'(u)/G(u)|, exact in form for f = 1 and doubled for margin."""
    lam = d.gamma_factors[0].lambda_j
    f = d.f
    mu = sum(g.mu_j for g in d.gamma_factors)
    return 2 * (0.5 + abs(mu) / lam + f * math.exp(min(u / (f * lam), 700.0)) / lam)


def _fhat_core(d, x, eta, g_tol, M, coeffs, z):
    N = float(d.N.mid)
    rel_N = d.N.rad / N
    terms = []
    g_rad = 0.0
    for n in range(1, M + 1):
        a = coeffs[n - 1]
        if a == 0:
            continue
        u = x + math.log(n / N)
        gv = g_eval(d, u, eta, g_tol)
        # rounding of u and the uncertainty of N move the kernel argument
        du = 4 * bl.EPS * (abs(x) + abs(math.log(n / N)) + 1) + 2 * rel_N
        gval = gv.value.widen(du * _g_logderiv_bound(d, u) * gv.value.mag())
        w = bl.sqrt(Ball.of(float(n)) / d.N).inverse() * a
        terms.append(gval * w)
        g_rad += gv.tail_bound * w.mag()
    return bl.fsum(terms) * z, g_rad


def fhat_point(d: LFunctionDescriptor, x: float, spec: GridSpec, M: int | None = None,
               with_ledger: bool = False):
    """hat F(x) = z sum_{n<=M} a(n) (n/N)^{-1/2} G(x + log(n/N)) - Res term, with the
    Dirichlet tail as radius."""
    d = selberg_data(d)
    eta = spec.eta
    z = reality_rotation_z(d.omega)
    if M is None:
        M = dirichlet_cutoff(d, x, eta, spec.fhat_tol / 4)
    tail = dirichlet_tail_bound(d, M, x, eta).upper()
    coeffs = d.coefficient_list(M)
    s, g_rad = _fhat_core(d, x, eta, spec.g_tol, M, coeffs, z)
    val = (s - residue_term(d, z, x, eta)).widen(tail)
    if with_ledger:
        return val, {"dirichlet_tail": tail, "g_tails": g_rad, "M": M}
    return val


def fhat_alias_tail(d: LFunctionDescriptor, x1: float, spec: GridSpec) -> tuple[Ball, float]:
    """sum_{l>=0} hat F(x1 + 2 pi l A): residue-kernel value and K-expression radius."""
    d = selberg_data(d)
    dc = decay_constants(d, spec.eta)
    f, lam = dc.f, dc.lam
    N = float(d.N.mid)
    c = dc.mu.real + 0.5 + d.coeff_alpha
    cp = max(c * f * lam - 1, 0.0)
    log_x2 = math.log(f * dc.delta) - dc.delta + (x1 - math.log(N)) / (f * lam)
    X2 = math.exp(min(log_x2, 700.0))
    if not X2 > max(cp, f):
        raise PreconditionViolated("X_2(x)>max{c',f}", f"X_2={X2:.6g} at x={x1:.6g}")
    if log_x2 > 700:
        rad = bl.TINY
    else:
        prod = 1.0
        for v in dc.nu:
            prod *= (1 + f * v / X2) ** v
        logr = (math.log(dc.K) - math.log1p(-math.exp(-math.pi * spec.A))
                + dc.mu.real * (x1 - 0.5 * math.log(N)) - X2
                + math.log1p(lam * f * d.coeff_C / (X2 - cp)) + math.log(prod))
        rad = bl.up(math.exp(logr) * (1 + 1e-12)) if logr > -745 else bl.TINY
    z = reality_rotation_z(d.omega)
    if d.pole_order == 0:
        val = Ball(0j)
    else:
        kern = Ball.of(1.0) - bl.exp(Ball.of(-math.pi) * spec.A)
        val = -(residue_term(d, z, x1, spec.eta) / kern)
    return val, rad


def _fhat_aliased_job(args):
    d, n, spec = args
    return fhat_aliased(d, n, spec, with_ledger=True)


def fhat_aliased(d: LFunctionDescriptor, n: int, spec: GridSpec, with_ledger: bool = False):
    """tFhat(n) for n >= 0 (the negative half follows from conjugate symmetry)."""
    d = selberg_data(d)
    x = 2 * math.pi * n / spec.B
    two_pi_A = 2 * math.pi * spec.A
    v0, led = fhat_point(d, x, spec, with_ledger=True)
    v1, r1 = fhat_alias_tail(d, x + two_pi_A, spec)
    v2, r2 = fhat_alias_tail(d, -x + two_pi_A, spec)
    val = (v0 + v1 + v2.conjugate()).widen(r1 + r2)
    if with_ledger:
        led = dict(led)
        led["fhat_alias"] = r1 + r2
        return val, led
    return val


# F majorant for the time-domain images --------------------------------------

def _log_abs_gamma_upper(x: float, y: float) -> float:
    """log of sqrt(2 pi) |z|^{x-1/2} e^{-pi |y|/2 + 1/(6|z|)}, valid for x > 0."""
    r = math.hypot(x, y)
    return 0.5 * math.log(2 * math.pi) + (x - 0.5) * math.log(r) - math.pi * abs(y) / 2 \
        + 1 / (6 * r)


def f_majorant_log(d: LFunctionDescriptor, y: float, eta: float, epsilon: float,
                   b_log: float) -> float:
    """log of an upper bound for |F(y)| (y > 0 on the upper side)."""
    s = complex(0.5, y)
    out = b_log + 0.5 * math.log(float(d.N.mid) + d.N.rad)
    qexp = (0.5 + epsilon) / 2
    out += qexp * 2 * math.log(float(d.N.mid) + d.N.rad)
    for g in d.gamma_factors:
        zj = g.lambda_j * s + g.mu_j
        if zj.real <= 0:
            raise DomainError("Gamma majorant needs Re(lambda_j/2 + mu_j) > 0")
        out += _log_abs_gamma_upper(zj.real, zj.imag)
        out += qexp * 2 * g.lambda_j * math.log(abs(g.lambda_j * s + g.mu_j + 1))
    if d.pole_order:
        out += d.pole_order * (math.log(abs(s - 2)) - math.log(abs(s - 1)))
    out += math.pi * d.f * eta * y / 4
    return out


def f_majorant_decay(d: LFunctionDescriptor, y0: float, eta: float, epsilon: float) -> float:
    """Lower bound on -d/dy log(majorant) for y >= y0 > 0."""
    rate = -math.pi * d.f * eta / 4
    qexp = (0.5 + epsilon) / 2
    for g in d.gamma_factors:
        lam = g.lambda_j
        im0 = lam * y0 + g.mu_j.imag
        if im0 <= 0:
            return -math.inf
        x = lam / 2 + g.mu_j.real
        rate += math.pi * lam / 2
        # d/dy log|alpha + i lam y| <= lam / (Im alpha + lam y0)
        rate -= abs(x - 0.5) * lam / im0
        rate -= qexp * 2 * lam * lam / im0
    return rate


def f_alias_radius(d: LFunctionDescriptor, t: float, spec: GridSpec, b_log: float) -> float:
    """Bound on sum_{l != 0} |F(t + lB)| for |t| < B."""
    total = 0.0
    # |F(-y)| = |F(y)| e^{-pi f eta y/2}: the lower images use eta -> -eta
    for y0, e in ((spec.B + t, spec.eta), (spec.B - t, -spec.eta)):
        rate = f_majorant_decay(d, y0, e, spec.epsilon)
        if not rate > 0:
            raise PreconditionViolated("F majorant decays", f"rate {rate:.3g} at y={y0:.6g}")
        logu = f_majorant_log(d, y0, e, spec.epsilon, b_log)
        geom = -math.log1p(-math.exp(-rate * spec.B))
        lv = logu + geom
        total += math.exp(lv) if lv > -745 else 0.0
    return bl.up(total * (1 + 1e-10)) + bl.TINY


def beta_rate_f_alias_bound(d: LFunctionDescriptor, t: float, spec: GridSpec,
                        upper: bool = True) -> float:
    """E(eps) / (1 - e^{-(beta_L -/+ pi f eta/4) B}) with the gamma-angle rate beta_L.

    Raises when its hypotheses fail; in degree one with eta near 1 the rate is
    negative, which is why the pipeline uses f_alias_radius instead.
    """
    d = selberg_data(d)
    eps = spec.epsilon
    s = complex(0.5, t)
    deg = sum(2 * g.lambda_j for g in d.gamma_factors)
    beta = deg * math.pi / 4
    for g in d.gamma_factors:
        zj = g.lambda_j * s + g.mu_j
        if (zj.imag > 0) != upper or zj.imag == 0:
            raise PreconditionViolated("sign of Im(lambda_j s+mu_j)", f"j with Im={zj.imag:.3g}")
        beta -= g.lambda_j * (math.atan(zj.real / abs(zj.imag)) + 1 / (2 * zj.real)
                              + 2 / (math.pi**2 * abs(zj.imag**2 - zj.real**2)))
    rate = beta - math.pi * d.f * spec.eta / 4 if upper else beta + math.pi * d.f * spec.eta / 4
    if not rate > 0:
        raise PreconditionViolated("beta_L -/+ pi f eta/4 > 0", f"value {rate:.6g}")
    b_log = math.log(default_b_upper(d, eps).upper())
    logE = f_majorant_log(d, t, spec.eta, eps, b_log)
    return math.exp(logE) / (1 - math.exp(-rate * spec.B))


# grid choice -----------------------------------------------------------------

def _smooth_at_least(n: int) -> int:
    """Smallest 2^a 3^b 5^c >= n."""
    best = None
    p2 = 1
    while p2 < 2 * n:
        p3 = p2
        while p3 < 2 * n:
            p5 = p3
            while p5 < n:
                p5 *= 5
            if best is None or p5 < best:
                best = p5
            p3 *= 3
        p2 *= 2
    return best


def _b_log(d, eps) -> float:
    return math.log(default_b_upper(d, eps).upper())


def choose_grid(d: LFunctionDescriptor, T: float, target_tol: float,
                c_eta: float | None = None, c_B: float | None = None,
                c_A: float = 8.0) -> GridSpec:
    """Deterministic grid for samples on [-T, T] with radius about target_tol."""
    d = selberg_data(d)
    if T <= 0:
        raise DomainError("T > 0 required")
    log = []
    dens = max(zero_density(d, max(T, 2 * math.e)), 0.1)
    A0 = max(c_A * dens, 1.0)
    log.append(f"zero density {dens:.4g} at T={T}; A >= {c_A} x density = {A0:.4g}")
    eps_max = epsilon_max(d)
    eps = eps_max if eps_max > d.theta else None
    if eps is None:
        raise DomainError("no admissible eps for the F majorant")
    b_log = _b_log(d, eps)
    etas = (c_eta,) if c_eta is not None else C_ETA_STEPS
    bs = (c_B,) if c_B is not None else C_B_STEPS
    candidates = []
    for ce in etas:
        eta = 1 - ce / T
        if not (-1 < eta < 1):
            continue
        for cb in bs:
            B = cb * T
            q = _smooth_at_least(math.ceil(A0 * B))
            A = q / B
            trial = GridSpec(T, A, B, q, eta, 0, target_tol, 0.0, 0.0, eps, ce, cb, c_A)
            try:
                alias = max(f_alias_radius(d, t, trial, b_log) for t in (-T, 0.0, T))
            except (PreconditionViolated, DomainError):
                continue
            candidates.append((q, ce, cb, alias, trial))
            log.append(f"c_eta={ce} c_B={cb}: q={q}, F-alias bound {alias:.3g}")
            if alias <= target_tol / 4:
                break
    ok = [c for c in candidates if c[3] <= target_tol / 4]
    if not ok:
        raise BudgetExceeded(f"no grid meets F-alias budget {target_tol / 4:.3g}")
    q, ce, cb, alias, trial = min(ok, key=lambda c: (c[0], c[1]))
    log.append(f"selected c_eta={ce} c_B={cb} q={q} A={trial.A:.6g} B={trial.B:.6g}")
    fhat_tol = target_tol / (8 * math.pi * trial.A)
    M = dirichlet_cutoff(d, 0.0, trial.eta, fhat_tol / 4)
    g_tol = fhat_tol / (4 * M * math.sqrt(float(d.N.mid) + 1) * max(d.coeff_C, 1.0)
                        * M ** max(d.coeff_alpha, 0.0))
    log.append(f"Dirichlet cutoff at x=0: M={M}; hat F tol {fhat_tol:.3g}; G tol {g_tol:.3g}")
    spec = replace(trial, M=M, fhat_tol=fhat_tol, g_tol=g_tol)
    # rounding floor of the transform, from the size of hat F near 0
    f0 = fhat_point(d, 0.0, spec).mag()
    floor = 2 * math.pi * spec.A * FFT_ROUNDING_FACTOR * math.log2(q) * bl.EPS * f0
    log.append(f"|hat F(0)| <= {f0:.4g}; FFT rounding floor {floor:.3g}")
    if floor > target_tol / 4:
        raise BudgetExceeded(f"tolerance {target_tol:.3g} below rounding floor {floor:.3g}")
    return replace(spec, log=tuple(log))


# inversion -------------------------------------------------------------------

def worker_count(workers: int | None = None) -> int:
    if workers is not None:
        return max(1, int(workers))
    env = os.environ.get("LCERTIFY_THREADS")
    return max(1, int(env)) if env else 1


def _compute_fhat(d, spec: GridSpec, workers: int):
    half = spec.q // 2
    jobs = [(d, n, spec) for n in range(0, half + 1)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            out = list(ex.map(_fhat_aliased_job, jobs, chunksize=max(1, len(jobs) // (8 * workers))))
    else:
        out = [_fhat_aliased_job(j) for j in jobs]
    return out


def invert_to_lambda(d: LFunctionDescriptor, spec: GridSpec, workers: int | None = None,
                     check_budget: bool = True) -> EvaluatedGrid:
    d = selberg_data(d)
    workers = worker_count(workers)
    q, A, B = spec.q, spec.A, spec.B
    vals = _compute_fhat(d, spec, workers)
    # index n in (-q/2, q/2]; tFhat(-n) = conj tFhat(n) since F is real
    mids = np.zeros(q, dtype=complex)
    rads = np.zeros(q)
    led_sum = {"dirichlet_tail": 0.0, "g_tails": 0.0, "fhat_alias": 0.0}
    for n, (v, led) in enumerate(vals):
        idx = [n] if (n == 0 or 2 * n == q) else [n, q - n]
        for k, i in enumerate(idx):
            mids[i] = complex(v.mid) if k == 0 else complex(v.mid).conjugate()
            rads[i] = v.rad
            for key in led_sum:
                led_sum[key] += led[key]
    scale = 2 * math.pi / B
    ft = np.fft.ifft(mids) * q * scale
    input_rad = scale * math.fsum(rads)
    fft_round = scale * FFT_ROUNDING_FACTOR * math.log2(q) * bl.EPS * q * float(np.max(np.abs(mids)))
    analytic = {k: scale * v for k, v in led_sum.items()}
    analytic["arith_rounding"] = max(input_rad - math.fsum(analytic.values()), 0.0)
    b_log = _b_log(d, spec.epsilon)
    samples = []
    m_max = int(math.floor(spec.T * A + 1e-9))
    order = list(range(-m_max, m_max + 1))
    for m in order:
        t = m / A
        c = ft[m % q]
        alias = f_alias_radius(d, t, spec, b_log)
        ledger = dict(analytic)
        ledger["f_alias"] = alias
        ledger["fft_rounding"] = fft_round
        rad = bl.up(math.fsum(ledger.values()) * (1 + 4 * bl.EPS))
        F = Ball(float(c.real), rad)
        damp = bl.exp(Ball.of(-math.pi * d.f * spec.eta * t / 4))
        samples.append(Sample(t, F, F * damp, abs(float(c.imag)), ledger))
    grid = EvaluatedGrid(spec, samples, {"input_radius": input_rad, "fft_rounding": fft_round,
                                         **analytic})
    if check_budget:
        worst = max(s.F.rad for s in samples)
        if worst > spec.target_tol:
            raise BudgetExceeded(f"achieved radius {worst:.3g} exceeds {spec.target_tol:.3g}")
    return grid


def evaluate(d: LFunctionDescriptor, T: float, tol: float, workers: int | None = None) -> EvaluatedGrid:
    spec = choose_grid(d, T, tol)
    return invert_to_lambda(d, spec, workers)
