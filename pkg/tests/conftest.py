import numpy as np
import pytest

from model import ModelParams, Branch, a_of_alpha
from module import integrate_profile, build_grid




ANCHOR_ALPHA = np.pi / 3
ANCHOR_A = complex(-16.0 / 21.0, np.sqrt(0.3125) / 4.2)

STANDARD_SPAN = 0.5
STANDARD_H = 1e-3
STANDARD_V = np.arange(5) * 1e-3




@pytest.fixture
def rng():
    return np.random.default_rng(42)


@pytest.fixture(scope='session')
def anchor_params():
    return ModelParams(b=1.0, c3=0.5, branch=Branch.LOW_POS)


@pytest.fixture(scope='session')
def neg_params():
    return ModelParams(b=1.0, c3=-0.25, branch=Branch.NEG)


@pytest.fixture(scope='session')
def anchor_a(anchor_params):
    return a_of_alpha(ANCHOR_ALPHA, anchor_params)


@pytest.fixture(scope='session')
def standard_profile(anchor_params):
    return integrate_profile(anchor_params, ANCHOR_ALPHA, STANDARD_SPAN, STANDARD_H)


@pytest.fixture(scope='session')
def standard_grid(standard_profile):
    return build_grid(standard_profile, STANDARD_V)
