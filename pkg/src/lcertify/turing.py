"""Zero counting on the critical line with a Turing-type completeness check."""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import ball as bl
from .ball import Ball
from .errors import DomainError, IncompleteBelow, PreconditionViolated
from .grid_evaluator import EvaluatedGrid, choose_grid, invert_to_lambda
from .lfunc_model import ClassTag, LFunctionDescriptor
from .s_integral import BoundReport, bound_for, bound_for_reverse, max_admissible_X
from .special_functions import log_gamma

H_SWEEP = (10.0, 15.0, 20.0, 25.0)
GL_ORDER = 4
PANEL = 1.0


class Verdict(str, Enum):
    COMPLETE = "complete"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class PhiValue:
    t: float
    phi: Ball


@dataclass(frozen=True)
class Bracket:
    a: float
    b: float


@dataclass
class ScanResult:
    brackets: list
    indeterminate: list


@dataclass(frozen=True)
class SValue:
    t: float
    value: Ball
    label: str          # "exact" or "lower_bound"


@dataclass
class Certificate:
    window: tuple
    grid_digest: str
    sign_changes: list
    phi_increment: Ball
    turing_windows: tuple
    verdict: Verdict
    claimed_zero_count: int | None
    h: float
    epsilon: float
    X: dict
    upper_bound: Ball | None = None
    lower_bound: Ball | None = None
    gap: int | None = None
    indeterminate: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def to_json(self) -> dict:
        b = bl.ball_to_json
        return {
            "window": list(self.window),
            "grid_digest": self.grid_digest,
            "sign_changes": {"count": len(self.sign_changes),
                             "locations": [[s.a, s.b] for s in self.sign_changes]},
            "phi_increment": b(self.phi_increment),
            "turing_windows": {"h_low": _rep(self.turing_windows[0]),
                               "h_high": _rep(self.turing_windows[1])},
            "verdict": self.verdict.value,
            "claimed_zero_count": self.claimed_zero_count,
            "h": self.h,
            "epsilon": self.epsilon,
            "X": self.X,
            "upper_bound": b(self.upper_bound),
            "lower_bound": b(self.lower_bound),
            "gap": self.gap,
            "indeterminate": self.indeterminate,
            "notes": self.notes,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Certificate":
        b = bl.ball_from_json
        tw = obj["turing_windows"]
        rep = [None if tw[k] is None else BoundReport.from_json(tw[k]) for k in ("h_low", "h_high")]
        return cls(tuple(obj["window"]), obj["grid_digest"],
                   [Bracket(a, c) for a, c in obj["sign_changes"]["locations"]],
                   b(obj["phi_increment"]), tuple(rep), Verdict(obj["verdict"]),
                   obj["claimed_zero_count"], obj["h"], obj["epsilon"], obj["X"],
                   b(obj["upper_bound"]), b(obj["lower_bound"]), obj["gap"],
                   obj["indeterminate"], obj["notes"])


def _rep(r):
    return None if r is None else r.to_json()


# Phi -------------------------------------------------------------------------

def _phi_args(d: LFunctionDescriptor, t):
    """(lambda_j, Gamma argument) pairs along the critical line."""
    if d.class_tag is ClassTag.ARTIN:
        return [(0.5, (Ball.of(complex(0.5, 0)) + g.mu_j + Ball.of(t) * 1j) * 0.5)
                for g in d.gamma_factors]
    return [(g.lambda_j, Ball.of(complex(g.lambda_j / 2 + g.mu_j.real, g.mu_j.imag))
             + Ball.of(t) * (1j * g.lambda_j)) for g in d.gamma_factors]


def phi(d: LFunctionDescriptor, t) -> Ball:
    """Smooth main term of the zero counting function."""
    t = Ball.of(t)
    im = bl.fsum([log_gamma(z).imag for _, z in _phi_args(d, t)])
    if d.class_tag is ClassTag.ARTIN:
        om = complex(d.omega)
        lin = (bl.log(d.N) * 0.5 - bl.log(bl.PI) * (0.5 * d.r)) * t
        const = Ball.of(math.atan2(om.imag, om.real)) \
            - bl.log(bl.PI) * (0.5 * sum(g.mu_j.imag for g in d.gamma_factors))
        total = const + lin + im
    else:
        total = bl.log(d.N) * t + im
    return (total / bl.PI).real


def _psi_deriv_bound(m: int, z: complex) -> float:
    """|psi^{(m)}(z)| <= m! (|z|^{-m-1} + int_R (x^2+y^2)^{-(m+1)/2} dx), Re z >= 0, m >= 1."""
    y = abs(z.imag)
    if z.real < 0 or y == 0:
        return math.inf
    line = math.sqrt(math.pi) * math.gamma(m / 2) / math.gamma((m + 1) / 2) / y**m
    return math.factorial(m) * (abs(z) ** (-m - 1) + line)


def phi_derivative_bound(d: LFunctionDescriptor, k: int, a: float, b: float) -> float:
    """Bound for |Phi^{(k)}| on [a, b], k >= 2, with 0 <= a < b."""
    total = 0.0
    for lam, z in _phi_args(d, a):
        zc = complex(z.mid)
        # |z| and |Im z| are smallest at the left end when Im z grows with t
        if d.class_tag is ClassTag.ARTIN:
            lo = min(abs(zc.imag), abs(zc.imag + 0.5 * (b - a)))
        else:
            lo = min(abs(zc.imag), abs(zc.imag + lam * (b - a)))
        if zc.imag * (zc.imag + lam * (b - a)) <= 0:
            return math.inf
        zz = complex(zc.real, lo)
        total += lam**k * _psi_deriv_bound(k - 1, zz)
    return total / math.pi


def _gl_rule(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    return [float(v) for v in x], [float(v) for v in w]


def phi_integral(d: LFunctionDescriptor, a: float, b: float, panel: float = PANEL,
                 n: int = GL_ORDER) -> Ball:
    """int_a^b Phi(t) dt by Gauss-Legendre panels with the derivative remainder."""
    if b < a:
        raise DomainError("b >= a required")
    if b == a:
        return Ball(0.0)
    k = max(1, math.ceil((b - a) / panel))
    h = (b - a) / k
    xs, ws = _gl_rule(n)
    const = h ** (2 * n + 1) * math.factorial(n) ** 4 / ((2 * n + 1) * math.factorial(2 * n) ** 3)
    parts = []
    err = 0.0
    for i in range(k):
        lo = a + i * h
        mid = lo + h / 2
        for x, w in zip(xs, ws):
            parts.append(phi(d, mid + x * h / 2) * (w * h / 2))
        err += const * phi_derivative_bound(d, 2 * n, lo, lo + h)
    # node placement rounding: |Phi'| ~ log t, tiny next to the remainder
    err += (b - a) * 16 * bl.EPS * max(abs(a), abs(b)) * (1 + math.log1p(abs(b)))
    if not math.isfinite(err):
        raise DomainError("Phi derivative bound unavailable on this interval")
    return bl.fsum(parts).widen(bl.up(err))


# scanning --------------------------------------------------------------------

def _sign_samples(samples):
    return [(s.t, s.F.sign()) for s in samples]


def scan_samples(points) -> ScanResult:
    """points: sorted (t, sign) with sign in {-1, 0, 1}; 0 means indeterminate."""
    brackets, indet = [], []
    last = None
    for t, sg in points:
        if sg == 0:
            indet.append(t)
            continue
        if last is not None and last[1] != sg:
            brackets.append(Bracket(last[0], t))
        last = (t, sg)
    return ScanResult(brackets, indet)


def scan_sign_changes(grid: EvaluatedGrid, t_min: float = 0.0) -> ScanResult:
    pts = [(t, sg) for t, sg in _sign_samples(grid.samples) if t >= t_min]
    return scan_samples(pts)


def s_by_scan(d: LFunctionDescriptor, grid: EvaluatedGrid, t: float,
              complete_below: float | None = None) -> SValue:
    """S(t) = N(t) - Phi(t), with N counted from the scan.

    Exact when a complete verdict covers (0, t]; otherwise the count is only a
    lower bound and the result is labeled accordingly.
    """
    scan = scan_sign_changes(grid)
    if t > grid.spec.T:
        raise IncompleteBelow(f"t={t} above scan height {grid.spec.T}")
    for s in scan.brackets:
        if s.a < t < s.b:
            raise IncompleteBelow(f"t={t} inside the bracket [{s.a}, {s.b}]")
    for ti in scan.indeterminate:
        if abs(ti - t) <= 1e-12 or ti < t:
            raise IncompleteBelow(f"indeterminate sample at t={ti} below {t}")
    count = sum(1 for s in scan.brackets if s.b <= t)
    val = Ball.of(count + d.count_offset()) - phi(d, t)
    exact = complete_below is not None and t <= complete_below
    return SValue(t, val, "exact" if exact else "lower_bound")


# certificate -----------------------------------------------------------------

def grid_digest(grid: EvaluatedGrid) -> str:
    blob = json.dumps(grid.spec.to_json(), sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()


def _window_X(d, lo, eps, X):
    if X is not None:
        return X
    return max_admissible_X(d, lo, eps)


def turing_verdict(d: LFunctionDescriptor, t1: float, t2: float, h: float, epsilon: float,
                   brackets: list, X: float | None = None, digest: str = "",
                   indeterminate: list | None = None) -> Certificate:
    """Apply the averaged inequalities to a given list of brackets."""
    notes = []
    indeterminate = list(indeterminate or [])
    offset = d.count_offset()
    inside = [s for s in brackets if s.a >= t1 and s.b <= t2]
    straddle = [s for s in brackets if (s.a < t2 < s.b) or (s.a < t1 < s.b)]
    if straddle:
        notes.append("a bracket straddles a window end")
    if any(t1 < ti <= t2 + h for ti in indeterminate):
        notes.append("indeterminate samples in the window")
    # upper side: Z(t2) <= avg Phi + rhs/(pi h) - N(0+) - (1/h) sum (t2+h-b)^+
    Xh = _window_X(d, t2, epsilon, X)
    rep_hi = bound_for(d, t2, t2 + h, epsilon, Xh)
    above = [s for s in brackets if s.a >= t2]
    credit_hi = math.fsum(max(0.0, t2 + h - s.b) for s in above) / h
    upper = (phi_integral(d, t2, t2 + h) + rep_hi.rhs_value / bl.PI) / h \
        - (offset + credit_hi)
    n_hi = math.floor(upper.upper())
    rep_lo = None
    lower = None
    if t1 > 0:
        if t1 - h < 0:
            raise PreconditionViolated("t1-h>=0", f"t1={t1}, h={h}")
        Xl = _window_X(d, t1 - h, epsilon, X)
        rep_lo = bound_for_reverse(d, t1 - h, t1, epsilon, Xl)
        below = [s for s in brackets if s.b <= t1]
        credit_lo = math.fsum(max(0.0, s.a - (t1 - h)) for s in below) / h
        lower = (phi_integral(d, t1 - h, t1) - rep_lo.rhs_value / bl.PI) / h \
            - (offset - credit_lo)
        n_lo = math.ceil(lower.lower())
        X_used = {"high": Xh, "low": Xl}
    else:
        n_lo = 0
        X_used = {"high": Xh}
    forced = n_hi - n_lo
    found = len(inside)
    gap = forced - found
    ok = gap == 0 and not straddle and not notes
    if gap < 0:
        notes.append("bounds fall below the number of sign changes")
    cert = Certificate(
        window=(t1, t2), grid_digest=digest, sign_changes=inside,
        phi_increment=phi(d, t2) - phi(d, t1),
        turing_windows=(rep_lo, rep_hi),
        verdict=Verdict.COMPLETE if ok else Verdict.INCONCLUSIVE,
        claimed_zero_count=found if ok else None,
        h=h, epsilon=epsilon, X=X_used, upper_bound=upper, lower_bound=lower, gap=gap,
        indeterminate=indeterminate, notes=notes)
    return cert


def certify(d: LFunctionDescriptor, t1: float, t2: float, h: float | None = None,
            epsilon: float = 0.45, X: float | None = None, grid: EvaluatedGrid | None = None,
            tol: float = 1e-8, workers: int | None = None) -> Certificate:
    """Count zeros in (t1, t2] and check completeness; h=None sweeps H_SWEEP."""
    hs = (h,) if h is not None else H_SWEEP
    if grid is None:
        grid = invert_to_lambda(d, choose_grid(d, t2 + max(hs) + 1.0, tol), workers)
    if grid.spec.T < t2 + max(hs):
        raise DomainError(f"grid height {grid.spec.T} does not cover t2+h={t2 + max(hs)}")
    scan = scan_sign_changes(grid)
    digest = grid_digest(grid)
    cert = None
    for hh in hs:
        cert = turing_verdict(d, t1, t2, hh, epsilon, scan.brackets, X, digest,
                              scan.indeterminate)
        if cert.verdict is Verdict.COMPLETE:
            break
    return cert


def s_integral_by_scan(d: LFunctionDescriptor, brackets: list, t1: float, t2: float) -> Ball:
    """pi * int_{t1}^{t2} S(t) dt from bracketed zeros, assuming the list is complete
    below t2."""
    lo = hi = 0.0
    for s in brackets:
        if s.b <= t1:
            lo += t2 - t1
            hi += t2 - t1
        elif s.a >= t2:
            continue
        elif s.a >= t1 and s.b <= t2:
            lo += t2 - s.b
            hi += t2 - s.a
        else:
            raise IncompleteBelow(f"bracket [{s.a}, {s.b}] straddles a window end")
    steps = Ball.interval(lo, hi)
    val = steps + Ball.of(d.count_offset() * (t2 - t1)) - phi_integral(d, t1, t2)
    return val * bl.PI
