import numpy as np
import pytest

from risbandit.config import config_from_document


@pytest.fixture
def desk_config():
    """Default desk-scale setup: N_tot=32, n_group=16, card(A)=16."""
    return config_from_document({})


@pytest.fixture
def desk_system(desk_config):
    return desk_config.system


@pytest.fixture
def tiny_config():
    """Cheap setup for statistics-heavy tests: N_tot=8, card(A)=16."""
    return config_from_document({"system": {"n_tot": 8, "n_group": 4}})


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
