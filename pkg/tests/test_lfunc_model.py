import cmath
import json
import math

import mpmath
import pytest

from lcertify.errors import DegenerateOmega, InvariantViolation, ParseError, WrongClass
from lcertify.lfunc_model import (ClassTag, abs_QL, analytic_conductor_Q, derived,
                                  descriptor_from_dict, gamma_factor, load_descriptor,
                                  reality_rotation_z, selberg_conductor_QL, selberg_form)

RAW = {
    "class": "selberg", "N": "0.5641895835477563",
    "gamma": [{"lambda": 0.5, "mu": [0, 0]}], "pole_order": 1,
    "coefficients": {"type": "periodic", "values": [1]},
}


def test_bundled_descriptors(zeta, zeta_artin, mod3):
    assert zeta.class_tag is ClassTag.SELBERG and zeta.pole_order == 1
    assert zeta_artin.class_tag is ClassTag.ARTIN and zeta_artin.m_poles == 1
    assert mod3.coefficient_list(6) == [1, -1, 0, 1, -1, 0]


def test_derived_invariants(zeta):
    dd = derived(zeta)
    assert dd.degree == 1.0
    assert dd.lambda_invariant == pytest.approx(0.5)
    assert dd.z == 1


@pytest.mark.parametrize("arg", [0.3, 1.0, 2.0, -2.5, math.pi - 1e-3])
def test_rotation_makes_completed_function_real(arg):
    omega = cmath.exp(1j * arg)
    z = reality_rotation_z(omega)
    assert abs(abs(z) - 1) < 1e-14
    assert abs(z * z - omega.conjugate()) < 1e-12


def test_rotation_rejects_non_unit():
    with pytest.raises(DegenerateOmega):
        reality_rotation_z(1.5)


def test_selberg_conductor(zeta):
    s = complex(1.4, 37.0)
    q = selberg_conductor_QL(zeta, s)
    ref = (1 / math.pi) * (0.5 * s + 1)
    assert q.contains(ref)
    assert abs_QL(zeta, s).contains(abs(ref))
    with pytest.raises(WrongClass):
        analytic_conductor_Q(zeta, s)


def test_artin_gamma_factor(zeta_artin):
    s = complex(0.5, 14.0)
    ref = complex(mpmath.pi ** (-s / 2) * mpmath.gamma(s / 2))
    assert gamma_factor(zeta_artin, s).contains(ref)
    q = analytic_conductor_Q(zeta_artin, s)
    assert q.contains(s / (2 * math.pi))


def test_selberg_form_matches_gamma(zeta_artin):
    d, c = selberg_form(zeta_artin)
    s = complex(0.7, 9.0)
    ref = complex(mpmath.pi ** (-s / 2) * mpmath.gamma(s / 2))
    alt = c * complex(d.N.mid) ** s * complex(mpmath.gamma(s * d.gamma_factors[0].lambda_j))
    assert abs(alt - ref) < 1e-12 * abs(ref)
    assert d.pole_order == 1


def test_parse_and_validate(tmp_path):
    d = descriptor_from_dict(RAW)
    assert d.N.contains(1 / math.sqrt(math.pi))
    p = tmp_path / "d.json"
    p.write_text(json.dumps(RAW))
    assert load_descriptor(p).N.mid == d.N.mid
    with pytest.raises(ParseError):
        descriptor_from_dict({"class": "selberg"})
    with pytest.raises(InvariantViolation):
        descriptor_from_dict(dict(RAW, theta=0.7))
    with pytest.raises(InvariantViolation):
        descriptor_from_dict(dict(RAW, coefficients={"type": "list", "values": [2, 1]}))


def test_euler_coefficients():
    raw = dict(RAW, coefficients={"type": "euler", "alphas": {"2": [1, -1], "3": [[0, 1], [0, -1]],
                                                          "5": [1], "7": [1]}})
    d = descriptor_from_dict(raw)
    a = d.coefficient_list(9)
    # (1 - x)(1 + x) at p = 2 gives a(2) = 0, a(4) = 1; at p = 3 the factor is 1/(1 + x^2): a(3) = 0, a(9) = -1
    assert a[1] == 0 and a[3] == 1 and a[2] == 0 and a[8] == -1
