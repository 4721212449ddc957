"""Acceptance run: one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -v`` or directly with
``python tests/test_acceptance.py``.
"""

import json
import math
import sys
import time

import mpmath
import numpy as np
import pytest

from lcertify import bounds, constants, gfunc, s_integral, turing
from lcertify import grid_evaluator as ge
from lcertify.errors import DomainError

from oracles import (c_theta_oracle, chain_terms, dirichlet_tail_mod3, dirichlet_tail_numpy,
                     g_zeta_oracle, lambda_mod3, lambda_zeta, sign_scan_count)

WINDOWS = [(30.0, 40.0), (40.0, 55.0), (55.0, 70.0), (70.0, 90.0), (90.0, 100.0)]
THREADS = (1, 4, 8)


@pytest.fixture
def report(capsys):
    def emit(n, ok, detail, elapsed=None):
        tail = f" [{elapsed:.2f} s]" if elapsed is not None else ""
        with capsys.disabled():
            print(f"\ncriterion {n}: {'PASS' if ok else 'FAIL'} {detail}{tail}")
        assert ok, detail
    return emit


def _timed(fn, *args, **kw):
    t = time.perf_counter()
    out = fn(*args, **kw)
    return out, time.perf_counter() - t


def grid_fingerprint(grid):
    """Bit-exact serialization of the sample centers and radii."""
    rows = []
    for s in grid.samples:
        c = complex(s.F.mid)
        rows.append((s.t.hex(), c.real.hex(), c.imag.hex(), s.F.rad.hex(),
                     float(s.value.mid).hex(), s.value.rad.hex()))
    return json.dumps([ge.GridSpec.to_json(grid.spec), rows], sort_keys=True)


@pytest.fixture(scope="module")
def criterion6(zeta, mod3):
    out = {}
    for name, d, t2 in (("zeta", zeta, 100.0), ("mod3", mod3, 50.0)):
        runs = {}
        for w in THREADS:
            t = time.perf_counter()
            grid = ge.invert_to_lambda(d, ge.choose_grid(d, t2 + max(turing.H_SWEEP) + 1, 1e-8),
                                       workers=w)
            cert = turing.certify(d, 0.0, t2, grid=grid)
            runs[w] = (grid, cert, time.perf_counter() - t)
        out[name] = runs
    return out


@pytest.fixture(scope="module")
def criterion5(zeta):
    runs = {}
    for w in THREADS:
        t = time.perf_counter()
        grid = ge.invert_to_lambda(zeta, ge.choose_grid(zeta, 50.0, 1e-8), workers=w)
        runs[w] = (grid, time.perf_counter() - t)
    return runs


def test_criterion_1_constants(report):
    ok, worst, slowest = True, 0.0, 0.0
    (a_half, t_a) = _timed(constants.a_epsilon, 0.5)
    (a_zero, t_b) = _timed(constants.a_epsilon, 0.0)
    (z2, t_c) = _timed(constants.small_z_theta, 0.0, 2.0)
    ok &= a_half.contains(2 * math.log(2)) and a_half.rad <= 1e-12
    ok &= a_zero.contains(0.5 * math.log(3) + math.log(1.5)) and a_zero.rad <= 1e-12
    ok &= z2.contains(math.pi**2 / 15)
    slowest = max(t_a, t_b, t_c)
    for eps in (0.3, 0.4, 0.5):
        rep, dt = _timed(constants.c_theta, 0.0, eps)
        err = abs(rep.c_theta_eps.mid - c_theta_oracle(0.0, eps))
        worst = max(worst, err)
        slowest = max(slowest, dt)
        ok &= err <= 1e-6
    ok &= slowest < 1.0
    report(1, ok, f"max |c0 - oracle| = {worst:.2e}, slowest call {slowest:.3f} s")


def test_criterion_2_example_constant(report):
    c, dt = _timed(bounds.maass_constant)
    report(2, abs(c.mid - 10.4) <= 0.05 and dt < 1.0, f"constant = {c.mid:.6f}", dt)


def test_criterion_3_g_kernel(zeta, report):
    t = time.perf_counter()
    ok, worst_rad = True, 0.0
    for u in (-3.0, -1.0, 0.0, 0.5, 1.5, 2.0):
        for eta in (0.0, 0.5, -0.9):
            v = gfunc.g_eval(zeta, u, eta)
            ok &= abs(complex(v.value.mid) - g_zeta_oracle(u, eta)) <= v.value.rad
            ok &= v.value.rad <= 1e-10
            worst_rad = max(worst_rad, v.value.rad)
    dt = time.perf_counter() - t
    report(3, ok and dt < 1.0, f"18 pairs enclosed, max radius {worst_rad:.2e}", dt)


def test_criterion_4_tail_soundness(zeta, mod3, report):
    t = time.perf_counter()
    ok = True
    for seed in range(10):
        rng = np.random.default_rng(seed)
        d = (zeta, mod3)[seed % 2]
        mu = d.gamma_factors[0].mu_j.real
        u, eta = float(rng.uniform(-3, 2.5)), float(rng.uniform(-0.95, 0.95))
        tol = 10.0 ** float(rng.uniform(-16, -8))
        v = gfunc.g_eval(d, u, eta, tol, method="residue")
        with mpmath.workdps(40):
            tail = float(abs(mpmath.fsum(chain_terms(0.5, mu, u, eta, 201)[v.residues:])))
        ok &= tail <= v.tail_bound
    for seed in range(10):
        rng = np.random.default_rng(1000 + seed)
        d = (zeta, mod3)[seed % 2]
        N = float(d.N.mid)
        while True:
            x, eta = float(rng.uniform(-1.5, 2.0)), float(rng.uniform(-0.95, 0.95))
            M = int(rng.integers(1, 60))
            try:
                b = gfunc.dirichlet_tail_bound(d, M, x, eta).upper()
                break
            except DomainError:
                continue
        brute = dirichlet_tail_numpy([1.0], N, M, x, eta) if d is zeta \
            else dirichlet_tail_mod3(N, M, x, eta)
        ok &= brute <= b
    report(4, ok, "10 residue chains (l<=200) and 10 Dirichlet tails (n<=1e7) within bounds",
           time.perf_counter() - t)


def test_criterion_5_evaluation(criterion5, report):
    grid, dt = criterion5[1]
    pos = [s for s in grid.samples if 0 <= s.t <= 50]
    idx = np.linspace(0, len(pos) - 1, 25).round().astype(int)
    ok, worst = True, 0.0
    for i in idx:
        s = pos[i]
        ref = float(lambda_zeta(s.t))
        ok &= abs(s.value.mid - ref) <= s.value.rad
        ok &= abs(s.F.mid - ref * math.exp(math.pi * grid.spec.eta * s.t / 4)) <= s.F.rad
    worst = max(s.F.rad for s in grid.samples)
    ok &= worst <= 1e-6 and dt < 60
    report(5, ok, f"25 points enclosed, max radius {worst:.2e}", dt)


def test_criterion_6_turing(criterion6, report):
    _, cz, tz = criterion6["zeta"][1]
    _, cm, tm = criterion6["mod3"][1]
    ref = sign_scan_count(lambda_mod3, 50.0, step=0.05)
    ok = cz.verdict is turing.Verdict.COMPLETE and cz.claimed_zero_count == 29
    ok &= cm.verdict is turing.Verdict.COMPLETE and cm.claimed_zero_count == ref
    ok &= tz + tm < 300
    report(6, ok, f"zeta (0,100]: {cz.verdict.value} {cz.claimed_zero_count}; "
                  f"mod 3 (0,50]: {cm.verdict.value} {cm.claimed_zero_count} (oracle {ref})",
           tz + tm)


def test_criterion_7_theorem_vs_truth(zeta, criterion6, report):
    grid, cert, _ = criterion6["zeta"][1]
    brackets = turing.scan_sign_changes(grid).brackets
    ok = cert.verdict is turing.Verdict.COMPLETE
    margins = []
    for t1, t2 in WINDOWS:
        actual = turing.s_integral_by_scan(zeta, brackets, t1, t2)
        X = s_integral.max_admissible_X(zeta, t1, 0.45)
        for fn in (s_integral.bound_selberg, s_integral.bound_selberg_polynomial):
            rhs = fn(zeta, t1, t2, 0.45, X).rhs_value
            ok &= actual.upper() <= rhs.lower()
            margins.append(rhs.lower() - actual.upper())
    report(7, ok, f"5 windows, smallest margin {min(margins):.3f}")


def test_criterion_8_lemma_properties(zeta, zeta_artin, report):
    ok = True
    for d in (zeta, zeta_artin):
        for sigma, t, eps, X in s_integral.sample_gammaQ_configs(d, 50, seed=0):
            ok &= all(s_integral.check_gammaQ_property(d, sigma, t, eps, X))
    for w, eps in s_integral.sample_easy_configs(50, seed=0):
        ok &= s_integral.check_easy_integral_property(w, eps)
    report(8, ok, "50 configurations each")


def test_criterion_9_drill(zeta, criterion6, report):
    grid, cert, _ = criterion6["zeta"][1]
    scan = turing.scan_sign_changes(grid)
    inside = [s for s in scan.brackets if s.b <= 100]
    flipped = 0
    for drop in inside:
        brackets = [s for s in scan.brackets if s != drop]
        c = turing.turing_verdict(zeta, 0.0, 100.0, cert.h, cert.epsilon, brackets)
        flipped += c.verdict is turing.Verdict.INCONCLUSIVE
    report(9, flipped == len(inside), f"{flipped}/{len(inside)} deletions flip the verdict")


def test_criterion_10_reproducibility(criterion5, criterion6, report):
    ok = len({grid_fingerprint(g) for g, _ in criterion5.values()}) == 1
    for name in ("zeta", "mod3"):
        runs = criterion6[name]
        ok &= len({grid_fingerprint(g) for g, _, _ in runs.values()}) == 1
        ok &= len({json.dumps(c.to_json(), sort_keys=True) for _, c, _ in runs.values()}) == 1
    report(10, ok, f"threads {THREADS}: grids and certificates bit-identical")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
