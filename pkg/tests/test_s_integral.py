import math
from dataclasses import replace

import mpmath
import pytest

from lcertify import s_integral as SI
from lcertify.errors import DomainError, MissingAttestation, PreconditionViolated

from oracles import c_theta_oracle


def _a_eps(e):
    return (0.5 + e) * math.log(1 + 1 / (0.5 + e)) + math.log(1.5 + e)


def test_polynomial_bound_term_by_term_mod3(mod3):
    eps, X, t = 0.4, 10.0, 50.0
    rep = SI.bound_selberg_polynomial(mod3, t, t, eps, X)
    A = _a_eps(eps)
    logq = math.log(3 / math.pi) + math.log(abs(0.5 * complex(1 + eps, t) + 1.5))
    ref = (1 / 16 + eps * (1 + eps) / 4) * logq + (A - 1) / 2 * logq \
        + c_theta_oracle(0.0, eps) + (0.9 + 0.8 * A) / X
    assert rep.status == "OK"
    assert abs(rep.rhs_value.mid - ref) < 1e-6


def test_artin_bound_zeta(zeta_artin):
    rep = SI.bound_artin(zeta_artin, 50, 50, 0.5, 10)
    eps, A = 0.5, _a_eps(0.5)
    ref = (1 / 16 + eps * (1 + eps) / 4) * math.log(abs(complex(3 + eps, 50)) / (2 * math.pi)) \
        + (A - 1) / 2 * math.log(abs(complex(1 + eps, 50)) / (2 * math.pi)) \
        + c_theta_oracle(0.0, eps) + (8.3 + 0.09 * A + (0.5 + eps) * (2 + eps) / 5) / 10
    assert abs(rep.rhs_value.mid - ref) < 1e-6


def test_selberg_bound_has_pole_term(zeta):
    rep = SI.bound_selberg(zeta, 60, 60, 0.45, 10)
    assert rep.term_breakdown["pole"].contains((2.5 + 0.45) / 60)
    assert rep.rhs_value.mid > 0


def test_precondition_violation_named(zeta):
    with pytest.raises(PreconditionViolated) as ei:
        SI.bound_for(zeta, 5, 50, 0.4, 10)
    assert "lambda_j" in ei.value.condition or "Im(mu_j)" in ei.value.condition
    rep = SI.bound_for(zeta, 5, 50, 0.4, 10, strict=False)
    assert rep.status == "NotApplicable" and rep.rhs_value is None


def test_attestation_required(zeta):
    with pytest.raises(MissingAttestation):
        SI.bound_selberg(replace(zeta, L1_nonzero=False), 60, 60, 0.4, 10)


def test_eps_must_exceed_theta(zeta):
    d = replace(zeta, theta=0.2)
    with pytest.raises(PreconditionViolated):
        SI.bound_selberg(d, 60, 60, 0.2, 10)


def test_audit_lists_all_hypotheses(zeta_artin, zeta):
    rep = SI.bound_artin(zeta_artin, 50, 60, 0.5, 10)
    conds = {a.condition for a in rep.precondition_audit}
    assert {"X>5", "eps>theta", "eps<=1/2", "t2>=t1"} <= conds
    rep = SI.bound_selberg(zeta, 50, 60, 0.4, 10)
    conds = {a.condition for a in rep.precondition_audit}
    assert {"X>5", "eps>theta_L", "t1>=0", "t2>=eps", "L(1)!=0 attested"} <= conds


def test_rhs_nondecreasing_in_t2(zeta):
    vals = [SI.bound_for(zeta, 50, t2, 0.4, 10).rhs_value.mid for t2 in (50, 70, 120, 400)]
    assert vals == sorted(vals)


def test_reverse_bound_audits_both_ends(zeta):
    rep = SI.bound_for_reverse(zeta, 40, 60, 0.4, 10)
    assert rep.status == "OK"
    assert any("[at t2]" in a.condition for a in rep.precondition_audit)
    fwd = SI.bound_for(zeta, 40, 60, 0.4, 10)
    assert rep.term_breakdown["c_theta"].mid == fwd.term_breakdown["c_theta"].mid


def test_max_admissible_X(zeta):
    X = SI.max_admissible_X(zeta, 100, 0.45)
    assert SI.bound_for(zeta, 100, 120, 0.45, X).status == "OK"
    with pytest.raises(PreconditionViolated):
        SI.bound_for(zeta, 100, 120, 0.45, X * 1.001)


def test_bound_report_round_trip(zeta):
    rep = SI.bound_for(zeta, 50, 70, 0.4, 10)
    back = SI.BoundReport.from_json(rep.to_json())
    assert back.rhs_value.mid == rep.rhs_value.mid and back.rhs_value.rad == rep.rhs_value.rad
    assert back.to_json() == rep.to_json()


def test_gammaQ_examples(zeta):
    assert SI.check_gammaQ_property(zeta, 1.0, 100.0, 0.4, 10.0) == (True, True)
    with pytest.raises(PreconditionViolated):
        SI.check_gammaQ_property(zeta, 1.0, 10.0, 0.4, 10.0)


def test_gammaQ_synthetic_degree_three(zeta_artin):
    d = replace(zeta_artin, gamma_factors=zeta_artin.gamma_factors * 3)
    assert SI.check_gammaQ_property(d, 1.0, 200.0, 0.3, 20.0) == (True, True)


@pytest.mark.parametrize("w,eps", [(10j, 0.3), (0.5, 0.4), (0.3j, 0.0), (0.0, 0.5)])
def test_easy_integral_examples(w, eps):
    assert SI.check_easy_integral_property(w, eps)


def test_easy_integral_against_mpmath():
    w = complex(0.2, 1.5)
    f = lambda x: mpmath.log(abs((x + 1 + w) * (x + 1 - w.conjugate())
                                 / ((x + w) * (x - w.conjugate()))))
    ref = float(mpmath.quad(f, [0, 0.2, 0.9]))
    val, err = SI.easy_integral(w, 0.4)
    assert abs(val - ref) < 1e-9


def test_easy_integral_domain():
    with pytest.raises(DomainError):
        SI.check_easy_integral_property(0.7, 0.1)
