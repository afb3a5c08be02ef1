"""Shared pytest fixtures for the hypergraph spectral test suite."""
import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from hypergraph import build, fuzz_corpus  # noqa: E402

FIXTURES_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'fixtures')

# Size of the seeded random corpus; the slow marker runs the full 500.
FUZZ_INSTANCES = int(os.environ.get('FUZZ_INSTANCES', '40'))
FUZZ_SEED = 20240


@pytest.fixture
def g1():
    """n=2, one edge: omega(v0)=1, omega(v1)=i"""
    return build(2, [[(0, 1.0, 0.0), (1, 0.0, 1.0)]])


@pytest.fixture
def g2():
    """Two 2-edges on {v0, v1} with phases (1, 1) and (1, -1)"""
    return build(2, [[(0, 1.0, 0.0), (1, 1.0, 0.0)], [(0, 1.0, 0.0), (1, -1.0, 0.0)]])


@pytest.fixture
def g3():
    """One all-ones 3-edge: the sharp case of rho(A) <= Delta(nabla - 1)"""
    return build(3, [[(0, 1.0, 0.0), (1, 1.0, 0.0), (2, 1.0, 0.0)]])


@pytest.fixture
def empty():
    return build(0, [])


@pytest.fixture(scope='session')
def corpus():
    """Seeded random hypergraphs across continuous and k-th-root phases (n, m <= 10)"""
    return list(fuzz_corpus(FUZZ_INSTANCES, FUZZ_SEED))


@pytest.fixture
def fixture_path():
    def _path(name):
        return os.path.join(FIXTURES_DIR, name)
    return _path
