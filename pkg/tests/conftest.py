import json
from pathlib import Path

import numpy as np
import pytest

from exactboson.io import load_matrix
from exactboson.linalg import haar_unitary, input_matrix
from exactboson.permanent import warmup as warm_permanent
from exactboson.sampler import warmup as warm_sampler

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session", autouse=True)
def compiled_kernels():
    warm_permanent()
    warm_sampler()


@pytest.fixture
def data_dir():
    return DATA


def fixture_matrix(name):
    return load_matrix(DATA / name)


def raw_fixture(name):
    return json.loads((DATA / name).read_text())


def haar(m, n, seed):
    return input_matrix(haar_unitary(m, seed), n)


def random_complex(k, rng):
    return rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k))


@pytest.fixture
def A53():
    return fixture_matrix("haar_5x3.json")
