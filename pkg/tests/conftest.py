import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from nlsbox import Grid


@pytest.fixture
def grid2d_small() -> Grid:
    return Grid(2, 16.0, 16)


@pytest.fixture
def grid3d_small() -> Grid:
    return Grid(3, 16.0, 16)


@pytest.fixture
def grid2d_medium() -> Grid:
    return Grid(2, 32.0, 128)
