"""Independent mpmath reference values used across the test suite."""

import math

import mpmath
import numpy as np


def c_theta_oracle(theta, eps, dps=32):
    """The Artin-type constant by direct mpmath quadrature at doubled precision."""
    with mpmath.workdps(dps):
        zeta = mpmath.zeta

        def logZ(s):
            return (mpmath.log(zeta(s + theta)) + mpmath.log(zeta(s - theta))) / 2

        def logz(s):
            return (mpmath.log(zeta(2 * s + 2 * theta)) + mpmath.log(zeta(2 * s - 2 * theta))) / 2 \
                - logZ(s)

        a = 1 + mpmath.mpf(eps)
        A = (0.5 + a - 1) * mpmath.log(1 + 1 / (0.5 + a - 1)) + mpmath.log(1.5 + a - 1)
        dlogz = mpmath.diff(logz, a)
        val = (0.5 + eps) * logZ(a) + mpmath.quad(logZ, [a, a + 1, a + 10, mpmath.inf]) \
            - mpmath.quad(logz, [a, 2 + eps]) - mpmath.quad(logz, [1.5, 5, mpmath.inf]) \
            + A * dlogz
        return float(val)


def lambda_zeta(t, dps=30):
    """pi^{-s/2} Gamma(s/2) zeta(s) at s = 1/2 + it."""
    with mpmath.workdps(dps):
        s = mpmath.mpc(0.5, t)
        return mpmath.re(mpmath.pi ** (-s / 2) * mpmath.gamma(s / 2) * mpmath.zeta(s))


def lambda_mod3(t, dps=30):
    """(3/pi)^{s/2} Gamma((s+1)/2) L(s, chi_-3) at s = 1/2 + it."""
    with mpmath.workdps(dps):
        s = mpmath.mpc(0.5, t)
        v = (3 / mpmath.pi) ** (s / 2) * mpmath.gamma((s + 1) / 2) \
            * mpmath.dirichlet(s, [0, 1, -1])
        return mpmath.re(v)


def sign_scan_count(fn, t_max, step=0.02):
    """Number of sign changes of fn on (0, t_max] sampled at the given step."""
    n = int(round(t_max / step))
    vals = [fn(step * (k + 0.5)) for k in range(n)]
    return sum(1 for a, b in zip(vals, vals[1:]) if a * b < 0)


def g_zeta_oracle(u, eta):
    """2 e^{w/2} exp(-e^{2w}), w = u + i pi eta/4."""
    with mpmath.workdps(30):
        w = mpmath.mpc(u, mpmath.pi * eta / 4)
        return complex(2 * mpmath.exp(w / 2) * mpmath.exp(-mpmath.exp(2 * w)))


def chain_terms(lam, mu, u, eta, kmax):
    """|k-th residue| of Gamma(lam s + mu) e^{W(1/2-s)} for k < kmax."""
    with mpmath.workdps(40):
        W = mpmath.mpc(u, mpmath.pi * eta / 4)
        pre = mpmath.exp(W * (0.5 + mu / lam)) / lam
        q = mpmath.exp(W / lam)
        return [pre * (-1) ** k * q**k / mpmath.factorial(k) for k in range(kmax)]


def dirichlet_tail_numpy(coeffs_period, N, M, x, eta, n_max=10**7, chunk=2 * 10**6):
    total = 0j
    period = np.asarray(coeffs_period, dtype=float)
    for lo in range(M + 1, n_max + 1, chunk):
        n = np.arange(lo, min(lo + chunk, n_max + 1), dtype=float)
        a = period[(n.astype(np.int64) - 1) % len(period)]
        w = x + np.log(n / N) + 1j * math.pi * eta / 4
        with np.errstate(under="ignore", over="ignore"):
            g = 2 * np.exp(w / 2) * np.exp(-np.exp(2 * w))
        total += np.sum(a * np.sqrt(N / n) * g)
    return abs(total)


def dirichlet_tail_mod3(N, M, x, eta, n_max=10**7, chunk=2 * 10**6):
    total = 0j
    for lo in range(M + 1, n_max + 1, chunk):
        n = np.arange(lo, min(lo + chunk, n_max + 1), dtype=float)
        a = np.array([1.0, -1.0, 0.0])[(n.astype(np.int64) - 1) % 3]
        w = x + np.log(n / N) + 1j * math.pi * eta / 4
        with np.errstate(under="ignore", over="ignore"):
            g = 2 * np.exp(w * (0.5 + 1.0)) * np.exp(-np.exp(2 * w))
        total += np.sum(a * np.sqrt(N / n) * g)
    return abs(total)
