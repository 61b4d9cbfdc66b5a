import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from stable_stein.kernels import ModifiedPareto, Pareto


@pytest.fixture
def pareto15():
    return Pareto(1.5)


@pytest.fixture
def mp_beta4():
    a, b = 1.5, 4.0
    w = a * b / (a + b)
    return ModifiedPareto(a, b, A=w, B=w)
