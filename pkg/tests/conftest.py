import pytest

from modules.hall_algebra import HallAlgebra
from modules.hall_numbers import HallCounter
from modules.orbits import OrbitCatalog
from modules.quiver import parse_quiver

A2_TEXT = "vertices: 1 2\narrows: 1->2\n"
A3_TEXT = "vertices: 1 2 3\narrows: 1->2 2->3\n"
D4_TEXT = "vertices: 1 2 3 4\narrows: 1->4 2->4 3->4\n"
A1A1_TEXT = "vertices: a b\narrows:\n"

PRIMES = (2, 3, 5, 7, 11, 13)


@pytest.fixture(scope="session")
def a2():
    return parse_quiver(A2_TEXT)


@pytest.fixture(scope="session")
def a3():
    return parse_quiver(A3_TEXT)


@pytest.fixture(scope="session")
def d4():
    return parse_quiver(D4_TEXT)


@pytest.fixture(scope="session")
def a2_catalog(a2):
    return OrbitCatalog(a2)


@pytest.fixture(scope="session")
def a3_catalog(a3):
    return OrbitCatalog(a3)


@pytest.fixture(scope="session")
def d4_catalog(d4):
    return OrbitCatalog(d4)


@pytest.fixture(scope="session")
def a2_counter(a2_catalog):
    return HallCounter(a2_catalog, PRIMES)


@pytest.fixture(scope="session")
def a3_counter(a3_catalog):
    return HallCounter(a3_catalog, PRIMES)


@pytest.fixture(scope="session")
def d4_counter(d4_catalog):
    return HallCounter(d4_catalog, PRIMES)


@pytest.fixture(scope="session")
def a2_algebra(a2_counter):
    return HallAlgebra(a2_counter)


@pytest.fixture(scope="session")
def a3_algebra(a3_counter):
    return HallAlgebra(a3_counter)


@pytest.fixture(scope="session")
def d4_algebra(d4_counter):
    return HallAlgebra(d4_counter)


@pytest.fixture
def quiver_file(tmp_path):
    path = tmp_path / "A2.txt"
    path.write_text("# A2\n" + A2_TEXT, encoding="utf-8")
    return path
