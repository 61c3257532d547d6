import os
import sys
import tempfile

# settings are read at import, so the environment comes first
os.environ["LOG_TO_FILE"] = "false"
os.environ["LOGS_DIR"] = tempfile.mkdtemp(prefix="polymatroid-logs-")
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import pytest

from core.polymatroid import CagedPolymatroid, free_polymatroid, polymatroid_from_function, validate

# Ranks of the four-element example: 1, 2, 3 are points on a line, 4 is a line
# meeting that line only at the origin.
INTRO_RANKS = {
    0b0000: 0,
    0b0001: 1, 0b0010: 1, 0b0100: 1, 0b1000: 2,
    0b0011: 2, 0b0101: 2, 0b0110: 2, 0b0111: 2,
}

INTRO_FILE = """\
# four elements, 4 has rank two
N 4
cage 1 1 1 2
S - 0
S 1 1
S 2 1
S 1,2 2
S 3 1
S 1,3 2
S 2,3 2
S 1,2,3 2
S 4 2
S 1,4 3
S 2,4 3
S 1,2,4 3
S 3,4 3
S 1,3,4 3
S 2,3,4 3
S 1,2,3,4 3
"""

INTRO_SUBSPACE = """\
blocks 1 1 1 2
1 0 1 2 1
0 1 1 -1 0
0 0 0 0 -1
"""

INTRO_FLATS = [
    (0, 0, 0, 0),
    (0, 0, 0, 1), (0, 0, 1, 0), (0, 1, 0, 0), (1, 0, 0, 0),
    (0, 0, 0, 2), (0, 0, 1, 1), (0, 1, 0, 1), (1, 0, 0, 1), (1, 1, 1, 0),
    (1, 1, 1, 2),
]


def intro_rank(mask: int) -> int:
    return INTRO_RANKS.get(mask, 3)


@pytest.fixture
def intro_poly():
    return polymatroid_from_function(4, intro_rank)


@pytest.fixture
def intro(intro_poly):
    return CagedPolymatroid(intro_poly, (1, 1, 1, 2))


@pytest.fixture
def two_element():
    """rk = 2 on every nonempty subset of two elements, cage (2, 2)"""
    poly = validate((0, 2, 2, 2), 2)
    return CagedPolymatroid(poly, (2, 2))


@pytest.fixture
def chain3():
    """One element of rank 3 with cage 3"""
    return CagedPolymatroid(validate((0, 3), 1), (3,))


@pytest.fixture
def boolean2():
    return CagedPolymatroid.tight(free_polymatroid((1, 1)))


@pytest.fixture
def intro_file(tmp_path):
    path = tmp_path / "intro.txt"
    path.write_text(INTRO_FILE)
    return str(path)


@pytest.fixture
def intro_subspace_file(tmp_path):
    path = tmp_path / "intro_subspace.txt"
    path.write_text(INTRO_SUBSPACE)
    return str(path)
