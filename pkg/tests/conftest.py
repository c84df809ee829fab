import math

import numpy as np
import pytest

from qkg.model import BarrierSpec


@pytest.fixture
def rng():
    return np.random.default_rng(987654321)


@pytest.fixture
def spec_factory(rng):
    """Random specs from the same distribution the verification suite uses."""
    def make(theta_min=0.0, theta_max=math.pi):
        omega0 = rng.uniform(0.5, 2.0)
        return BarrierSpec(
            a=20.0 * (1.0 - rng.random()),
            v0=0.9 * omega0 * (1.0 - rng.random()),
            omega0=omega0,
            theta=rng.uniform(theta_min, theta_max),
            phi=rng.uniform(0.0, 2.0 * math.pi),
        )
    return make


@pytest.fixture
def spec_point():
    """The worked single-barrier example used throughout the tests."""
    return BarrierSpec(a=1.0, v0=0.3, omega0=1.0, theta=math.pi / 2, phi=0.0)
