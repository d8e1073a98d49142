import pathlib

import pytest

from multifact import Graph

DATA = pathlib.Path(__file__).parent / "data"

# small named graphs used throughout; edge lists keep sorted label order
DIAMOND = [("a", "b"), ("a", "c"), ("b", "c"), ("b", "d"), ("c", "d")]
BOWTIE = [("a", "b"), ("a", "c"), ("b", "c"), ("c", "d"), ("c", "e"), ("d", "e")]
K3 = [("a", "b"), ("a", "c"), ("b", "c")]
# three maximal cliques {a,b,c,d}, {a,b,c,e}, {a,b,f}: a chain of two
# nontrivial intersections {a,b} < {a,b,c}
FIX_CHAIN = [
    ("a", "b"), ("a", "c"), ("a", "d"), ("a", "e"), ("a", "f"),
    ("b", "c"), ("b", "d"), ("b", "e"), ("b", "f"),
    ("c", "d"), ("c", "e"),
]


@pytest.fixture
def diamond() -> Graph:
    return Graph.from_edge_list(DIAMOND)


@pytest.fixture
def bowtie() -> Graph:
    return Graph.from_edge_list(BOWTIE)


@pytest.fixture
def k3() -> Graph:
    return Graph.from_edge_list(K3)


@pytest.fixture
def fix_chain() -> Graph:
    return Graph.from_edge_list(FIX_CHAIN)
