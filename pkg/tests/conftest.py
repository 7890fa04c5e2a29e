import numpy as np
import pytest

from agcode import build_code
from curve import suzuki_curve


@pytest.fixture(scope="session")
def curve():
    return suzuki_curve(1)


@pytest.fixture(scope="session")
def params(curve):
    return curve.params


@pytest.fixture(scope="session")
def small(curve):
    return curve.small


@pytest.fixture(scope="session")
def big(curve):
    return curve.big


@pytest.fixture(scope="session")
def code_cache(curve):
    codes = {}

    def get(ell):
        if ell not in codes:
            codes[ell] = build_code(curve, ell)
        return codes[ell]

    return get


@pytest.fixture(scope="session")
def code1(code_cache):
    return code_cache(1)


@pytest.fixture(scope="session")
def code27(code_cache):
    return code_cache(27)


@pytest.fixture(scope="session")
def code45(code_cache):
    return code_cache(45)


@pytest.fixture(scope="session")
def code63(code_cache):
    return code_cache(63)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
