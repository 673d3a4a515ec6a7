import numpy as np
import pytest

from varbound import HermitianOperator, angular_momentum


@pytest.fixture(scope="session")
def spin_half():
    return angular_momentum("1/2")


@pytest.fixture(scope="session")
def spin_one():
    return angular_momentum(1)


@pytest.fixture(scope="session")
def spin_three_half():
    return angular_momentum("3/2")


@pytest.fixture(scope="session")
def skew_pair():
    """Dimension-3 pair with no rotational symmetry; tight bound is 15/32."""
    x = HermitianOperator(np.diag([-1.0, 0.0, 1.0]))
    y = HermitianOperator(np.array([[0, 1, 0], [1, 0, 1j], [0, -1j, 0]]))
    return x, y
