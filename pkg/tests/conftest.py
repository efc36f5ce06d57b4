import numpy as np
import pytest

from mdsim import ActivityParams, build_body, free_space_config


@pytest.fixture(scope="session")
def body():
    return build_body(1.8, 84.24)


@pytest.fixture(scope="session")
def fast_cfg():
    """Small free-space-like config for quick synthesis in unit tests."""
    return free_space_config(
        bandwidth_hz=0.5e9,
        sampling_frequency_hz=2.0e6,
        prf_hz=640.0,
        duration_s=0.4,
    )


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def walking_params(**overrides):
    return ActivityParams(activity="S8", **overrides)
