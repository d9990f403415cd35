from pathlib import Path

import numpy as np
import pytest

from fatcw.kernels import SmoothingParams, default_context

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def ctx():
    return default_context()


@pytest.fixture(scope="session")
def params():
    return SmoothingParams()


@pytest.fixture(scope="session")
def golden():
    out = {}
    for line in (FIXTURES / "golden_constants.txt").read_text().splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            key, val = line.split()
            out[key] = float(val)
    return out


@pytest.fixture
def rng():
    return np.random.Generator(np.random.Philox(key=7))
