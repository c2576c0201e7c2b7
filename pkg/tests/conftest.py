import os

# settings are read at import time; keep test runs from writing log files
os.environ.setdefault("PROPINN_LOG_TO_FILE", "0")
os.environ.setdefault("PROPINN_LOG_LEVEL", "WARNING")

import numpy as np  # noqa: E402
import pytest  # noqa: E402

from models.mlp_model import MLPModel  # noqa: E402
from models.propinn_model import ProPINNModel  # noqa: E402
from schemas.model_schema import MLPConfig, ProPINNConfig  # noqa: E402


def small_mlp(width: int = 8, depth: int = 3, activation: str = "tanh") -> MLPModel:
    return MLPModel(MLPConfig(hidden_width=width, depth=depth, activation=activation))


def small_propinn(**overrides) -> ProPINNModel:
    options = {
        "d_model": 4,
        "projector_hidden": 4,
        "mixer_hidden": 4,
        "head_hidden": 8,
        "head_depth": 2,
        "perturb_counts": (2, 3, 4),
    } | overrides
    return ProPINNModel(ProPINNConfig(**options))


@pytest.fixture
def mlp():
    return small_mlp()


@pytest.fixture
def propinn():
    return small_propinn()


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
