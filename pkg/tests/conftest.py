import math

import numpy as np
import pytest

from bellcond.observables import ChshAngles
from bellcond.states import SettingModel, bell_state

SQRT2 = math.sqrt(2)


@pytest.fixture
def phi_plus():
    return bell_state("phi_plus")


@pytest.fixture
def tsirelson():
    return ChshAngles.tsirelson()


@pytest.fixture
def uniform():
    return SettingModel.uniform()


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def quiet_log(monkeypatch):
    monkeypatch.setenv("BELLCOND_LOG", "error")
