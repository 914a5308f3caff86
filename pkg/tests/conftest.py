import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from regtail.graphs import named_pattern


@pytest.fixture(scope="session")
def k3():
    return named_pattern("k3")


@pytest.fixture(scope="session")
def c4():
    return named_pattern("c4")


@pytest.fixture(scope="session")
def k4():
    return named_pattern("k4")


@pytest.fixture(scope="session")
def k5():
    return named_pattern("k5")
