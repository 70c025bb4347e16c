import numpy as np
import pytest

from behavior_cones import Trajectory, leslie_model, simulate

# Four-age-class cyclic Leslie instance used across the suite: last-two-classes
# output, unit survival, single fertile class.
LESLIE_OUTPUT = np.array([0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 1.0])
LESLIE_HANKEL4 = np.array(
    [
        [0.0, 0.0, 1.0, 1.0],
        [0.0, 1.0, 1.0, 0.0],
        [1.0, 1.0, 0.0, 0.0],
        [1.0, 0.0, 0.0, 1.0],
    ]
)
# Same matrix with its columns reversed; its positive pattern is the circulant
# band whose non-negative rank exceeds its ordinary rank.
LESLIE_HANKEL4_PERMUTED = LESLIE_HANKEL4[:, ::-1].copy()


@pytest.fixture(scope="session")
def leslie():
    return leslie_model([0.0, 0.0, 0.0, 1.0], [1.0, 1.0, 1.0], k=2)


@pytest.fixture(scope="session")
def leslie_data(leslie):
    """(trajectory, states) of the cyclic Leslie instance from the first unit vector."""
    return simulate(leslie, [1.0, 0.0, 0.0, 0.0], T=7)


@pytest.fixture(scope="session")
def leslie_trajectory(leslie_data) -> Trajectory:
    return leslie_data[0]
