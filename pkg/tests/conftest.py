import pytest

from k3mukai.lattice import LINE_GRAM, IntegerLattice


@pytest.fixture
def line():
    return IntegerLattice(LINE_GRAM, ("H", "l"))


@pytest.fixture
def conic():
    return IntegerLattice(((8, 2), (2, -2)), ("H", "C"))


@pytest.fixture
def elliptic_pair():
    return IntegerLattice(((0, 4), (4, 0)), ("f1", "f2"))


@pytest.fixture
def rank_one():
    return IntegerLattice(((8,),), ("H",))
