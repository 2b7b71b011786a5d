import numpy as np
import pytest

from idealcalc.core.ensembles import make_rng
from idealcalc.core.search import SearchBudget


@pytest.fixture
def rng() -> np.random.Generator:
    return make_rng(20240601)


@pytest.fixture
def small_budget() -> SearchBudget:
    return SearchBudget(restarts=3, ascent_steps=40, seed=11)

