import numpy as np
import pytest

from gadget import block_partition, from_target, GadgetTarget, kronecker_power, trivial
from zmod import factorize


@pytest.fixture(scope="session")
def mod6():
    """The running modulus 6 = 2 * 3"""
    return factorize(6)


@pytest.fixture(scope="session")
def block9(mod6):
    """Block-partition gadget n=9, s=3 (t=7)"""
    return block_partition(9, 3, mod6)


@pytest.fixture(scope="session")
def block81(block9):
    return kronecker_power(block9, 2)


@pytest.fixture(scope="session")
def trivial3(mod6):
    return trivial(3, mod6)


@pytest.fixture(scope="session")
def witness3(mod6):
    """n=3 gadget with t=2 built from a rank-2 class-valued target"""
    M = np.array([[1, 4, 3], [4, 1, 0], [3, 0, 1]])
    return from_target(GadgetTarget.from_matrix(M, mod6))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
