import math

import numpy as np
import pytest

from qzeno import cli
from qzeno.core import SystemParams


@pytest.fixture(autouse=True)
def no_user_config(tmp_path, monkeypatch):
    """Keep a real ~/.qzeno/config.json out of the tests"""
    monkeypatch.setattr(cli, "DEFAULT_CONFIG", tmp_path / "absent" / "config.json")


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def params_08():
    """sqrt(0.8)|11> + sqrt(0.2)|00>, c0 = 0.8"""
    return SystemParams(math.sqrt(0.8), math.sqrt(0.2))


@pytest.fixture
def bell_params():
    return SystemParams(1 / math.sqrt(2), 1 / math.sqrt(2))
