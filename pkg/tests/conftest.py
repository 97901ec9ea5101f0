import pytest

from cyclequiv import DirectedGraph

# Both figures use the variable order of their introduction: the two-cycle
# example maps A,B,C,D to 0,1,2,3; the three-cycle example maps
# X,Y,Z1,Z2,Z3 to 0,1,2,3,4.


@pytest.fixture
def fig1() -> DirectedGraph:
    """A -> C <-> D <- B: the canonical two-cycle example."""
    return DirectedGraph(4, [(0, 2), (2, 3), (3, 2), (1, 3)])


@pytest.fixture
def fig1_mirror() -> DirectedGraph:
    """The only other member of fig1's equivalence class."""
    return DirectedGraph(4, [(0, 3), (3, 2), (2, 3), (1, 2)])


@pytest.fixture
def cycle3() -> DirectedGraph:
    """X -> Z1 -> Z2 -> Z3 -> Z1 <- ... with Y -> Z3: a directed 3-cycle
    fed from two outside vertices."""
    return DirectedGraph(5, [(0, 2), (2, 3), (3, 4), (4, 2), (1, 4)])


@pytest.fixture
def collider() -> DirectedGraph:
    return DirectedGraph(3, [(0, 1), (2, 1)])


@pytest.fixture
def chain() -> DirectedGraph:
    return DirectedGraph(3, [(0, 1), (1, 2)])
