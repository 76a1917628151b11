import logging
import os
import sys

import numpy as np
import pytest
from hypothesis import settings as hypothesis_settings

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from config import settings_from_env  # noqa: E402
from models.density import DensityMatrix  # noqa: E402
from models.params import ModelParams  # noqa: E402

hypothesis_settings.register_profile("gqd", derandomize=True)
hypothesis_settings.load_profile("gqd")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def reference_params():
    """J = 1, D = 0, B = 0, T = 1: Z = 2 cosh 2 + 2."""
    return ModelParams(J=1.0, B=0.0, D=0.0, T=1.0)


@pytest.fixture
def bell_state():
    """(|01> - |10>)/sqrt(2)."""
    return DensityMatrix.from_ket(np.array([0.0, 1.0, -1.0, 0.0]))


@pytest.fixture
def fast_settings():
    """Coarse optimizer settings for tests that run many Bures or oracle evaluations."""
    return settings_from_env(
        bures_grid_lat=17,
        bures_grid_lon=32,
        oracle_starts=3,
        oracle_iterations=200,
        oracle_bures_grid_level=5,
        sweep_workers=2,
    )


def random_density_matrix(rng, rank=4):
    """Random full-rank (or lower-rank) two-qubit state."""
    g = rng.normal(size=(4, rank)) + 1j * rng.normal(size=(4, rank))
    rho = g @ g.conj().T
    return DensityMatrix(rho / np.trace(rho).real)


@pytest.fixture(autouse=True)
def _drop_cli_log_handlers():
    """cli_main installs console handlers bound to the captured stderr of one test."""
    yield
    root = logging.getLogger()
    for handler in list(root.handlers):
        if getattr(handler, "_gqd_handler", False):
            root.removeHandler(handler)
