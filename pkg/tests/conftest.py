import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from aigopt.npn import enumerate_classes
from aigopt.synthesis import brute_oracle


@pytest.fixture(scope="session")
def oracle2():
    return brute_oracle(2)


@pytest.fixture(scope="session")
def oracle3():
    return brute_oracle(3)


@pytest.fixture(scope="session")
def classes2():
    return enumerate_classes(2)


@pytest.fixture(scope="session")
def classes3():
    return enumerate_classes(3)


@pytest.fixture(scope="session")
def classes4():
    return enumerate_classes(4)
