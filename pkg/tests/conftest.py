import pytest

from digitop import AdjacencyKind, DigitalImage

K2 = AdjacencyKind(1, 1)
K4 = AdjacencyKind(2, 1)
K8 = AdjacencyKind(2, 2)

# p_1..p_6 in cyclic order
C6_POINTS = [(0, 0), (1, 1), (2, 1), (3, 0), (2, -1), (1, -1)]
# r_1..r_8 in cyclic order
C8_POINTS = [(0, 0), (0, 1), (0, 2), (1, 2), (2, 2), (2, 1), (2, 0), (1, 0)]


def interval(n, start=0):
    return DigitalImage([(i,) for i in range(start, start + n)], K2)


@pytest.fixture
def c6():
    return DigitalImage(C6_POINTS, K8)


@pytest.fixture
def c8():
    return DigitalImage(C8_POINTS, K4)


@pytest.fixture
def pendant():
    """C_6 with one extra point hanging off p_4."""
    return DigitalImage(C6_POINTS + [(4, 0)], K8)


@pytest.fixture
def square4():
    return DigitalImage([(0, 0), (1, 0), (0, 1), (1, 1)], K4)
