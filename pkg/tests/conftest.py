import numpy as np
import pytest

from kscontract.graph import (
    complete_graph,
    double_ring_graph,
    path_graph,
    random_connected_graph,
    ring_graph,
    star_graph,
)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def k3():
    return complete_graph(3)


@pytest.fixture(scope="session")
def k5():
    return complete_graph(5)


@pytest.fixture(scope="session")
def ring5():
    return ring_graph(5)


@pytest.fixture(scope="session")
def ring6():
    return ring_graph(6)


@pytest.fixture(scope="session")
def double_ring():
    return double_ring_graph(7)


@pytest.fixture(scope="session")
def random10():
    return random_connected_graph(10, 0.15, np.random.default_rng(7))


@pytest.fixture(scope="session")
def test_graphs(k3, k5, ring5, ring6, random10):
    return {
        "K3": k3,
        "K5": k5,
        "ring5": ring5,
        "ring6": ring6,
        "random10": random10,
        "path4": path_graph(4),
        "star4": star_graph(4),
    }


_ACCEPTANCE = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_ACCEPTANCE] = []


@pytest.fixture
def acceptance_lines(request):
    return request.config.stash[_ACCEPTANCE]


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
