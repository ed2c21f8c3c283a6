"""
Shared fixtures: the five-node formation networks and seeded generators
"""

import numpy as np
import pytest

from netswitch.core.sparsity import SparsityPattern
from netswitch.utils import config

FIVE_NODE_A = np.array([
    [0, 1, 0, 0, 0],
    [0, 0, 1, 0, 0],
    [0, 0, 0, 1, 0],
    [0, 0, 0, 0, 1],
    [-150, -260, -187, -69, -13],
], dtype=float)

FIVE_NODE_B = np.array([
    [-13, -9.35, -3.45, -0.65, -0.05],
    [7.5, 0, 0, 0, 0],
    [0, 7.5, 0, 0, 0],
    [0, 0, 7.5, 0, 0],
    [0, 0, 0, 7.5, 0],
])

FIVE_NODE_A_PRIME = FIVE_NODE_A.copy()
FIVE_NODE_A_PRIME[3, :3] = 1.0

INITIAL_EDGES = [(2, 4), (2, 2), (3, 3), (4, 4), (5, 5)]

FORCED_ZEROS = [
    (2, 2), (2, 3), (2, 4), (2, 5), (3, 1), (3, 3), (3, 4), (3, 5),
    (4, 1), (4, 2), (4, 4), (4, 5), (5, 1), (5, 2), (5, 3), (5, 5),
]


@pytest.fixture(autouse=True)
def fresh_settings(monkeypatch):
    """Every test starts from the default settings"""
    monkeypatch.delenv("NETSWITCH_THREADS", raising=False)
    config.reset_settings()
    yield
    config.reset_settings()


@pytest.fixture
def five_node_A():
    return FIVE_NODE_A.copy()


@pytest.fixture
def five_node_B():
    return FIVE_NODE_B.copy()


@pytest.fixture
def five_node_A_prime():
    return FIVE_NODE_A_PRIME.copy()


@pytest.fixture
def initial_pattern():
    return SparsityPattern(5, INITIAL_EDGES)


@pytest.fixture
def forced_zeros():
    return SparsityPattern(5, FORCED_ZEROS)


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


@pytest.fixture
def triangular_pair():
    """Commuting pair with real spectra, B = -3 I - A / 2"""
    A = np.array([[-1.0, 1.0, 0.0], [0.0, -2.0, 1.0], [0.0, 0.0, -4.0]])
    B = -3.0 * np.eye(3) - 0.5 * A
    return A, B
