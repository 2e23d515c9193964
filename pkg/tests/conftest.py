"""Configuration for pytest."""

from unittest.mock import MagicMock

import pytest
from pubsub import pub

from euler_entropy.graph import MultiGraph
from euler_entropy.graph.generators import circulant, complete, cycle, hypercube


@pytest.fixture
def k5() -> MultiGraph:
    """The complete graph on five vertices (4-regular, 243 partitions)."""
    return complete(5)


@pytest.fixture
def octahedron() -> MultiGraph:
    """The octahedron K_{2,2,2} (4-regular, 729 partitions)."""
    return circulant(6, (1, 2))


@pytest.fixture
def c5() -> MultiGraph:
    """The cycle on five vertices."""
    return cycle(5)


@pytest.fixture
def q3() -> MultiGraph:
    """The 3-dimensional hypercube."""
    return hypercube(3)


@pytest.fixture
def subscribe_mock(monkeypatch) -> MagicMock:
    """Fixture for pub.subscribe."""
    mock = MagicMock()
    monkeypatch.setattr(pub, "subscribe", mock)
    return mock


@pytest.fixture
def sendmsg_mock(monkeypatch) -> MagicMock:
    """Fixture for pub.sendMessage."""
    mock = MagicMock()
    monkeypatch.setattr(pub, "sendMessage", mock)
    return mock


@pytest.fixture(autouse=True)
def no_budget_override(monkeypatch) -> None:
    """Make sure the budget environment variable is not inherited."""
    monkeypatch.delenv("EULER_ENTROPY_BUDGET", raising=False)
