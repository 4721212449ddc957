import pytest

from lcertify import bundled_descriptor
from lcertify import grid_evaluator as ge
from lcertify import turing


@pytest.fixture(scope="session")
def zeta():
    return bundled_descriptor("zeta")


@pytest.fixture(scope="session")
def zeta_artin():
    return bundled_descriptor("zeta_artin")


@pytest.fixture(scope="session")
def mod3():
    return bundled_descriptor("dirichlet_mod3")


@pytest.fixture(scope="session")
def zeta_grid50(zeta):
    return ge.invert_to_lambda(zeta, ge.choose_grid(zeta, 50, 1e-8), workers=1)


@pytest.fixture(scope="session")
def zeta_grid_verify(zeta):
    spec = ge.choose_grid(zeta, 100 + max(turing.H_SWEEP) + 1.0, 1e-8)
    return ge.invert_to_lambda(zeta, spec, workers=1)


@pytest.fixture(scope="session")
def mod3_grid_verify(mod3):
    spec = ge.choose_grid(mod3, 50 + max(turing.H_SWEEP) + 1.0, 1e-8)
    return ge.invert_to_lambda(mod3, spec, workers=1)
