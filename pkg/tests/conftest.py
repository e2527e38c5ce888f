import numpy as np
import pytest

from vmdfourier.corpus import get_function
from vmdfourier.verify import profile


@pytest.fixture(scope="session")
def runge():
    return get_function("runge")


@pytest.fixture(scope="session")
def odd_vmd():
    return get_function("odd_vmd")


@pytest.fixture(scope="session")
def gauss():
    return get_function("gauss")


@pytest.fixture(scope="session")
def zero():
    return get_function("zero")


@pytest.fixture(scope="session")
def profiles():
    cache = {}

    def get(name):
        if name not in cache:
            cache[name] = profile(get_function(name))
        return cache[name]

    return get


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
