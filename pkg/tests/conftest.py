import pytest

from cpncells.complex_core import GluedComplex, build_face_poset, from_facet_list
from cpncells.quotient import cpn_complex, cross_polytope_boundary, rpn_complex
from cpncells.staircase import SphereProduct

# the 6-vertex RP^2 (half icosahedron), used as an independent homology oracle
RP2_SIX = [
    (1, 2, 4), (2, 3, 5), (3, 4, 1), (4, 5, 2), (5, 1, 3),
    (1, 2, 6), (2, 3, 6), (3, 4, 6), (4, 5, 6), (5, 1, 6),
]


def two_triangles() -> GluedComplex:
    """S^2 from two triangles glued along all three edges."""
    return GluedComplex(2, [[1, 1, 1], [0, 0, 0]])


@pytest.fixture(scope="session")
def s2_3():
    return two_triangles()


@pytest.fixture(scope="session")
def sp():
    cache = {}

    def get(n):
        if n not in cache:
            cache[n] = SphereProduct(n)
        return cache[n]

    return get


@pytest.fixture(scope="session")
def tn():
    cache = {}

    def get(n):
        if n not in cache:
            cache[n] = cpn_complex(n)
        return cache[n]

    return get


@pytest.fixture(scope="session")
def poset_of():
    cache = {}

    def get(c):
        key = id(c)
        if key not in cache:
            cache[key] = (c, build_face_poset(c))
        return cache[key][1]

    return get


@pytest.fixture(scope="session")
def octahedron():
    return cross_polytope_boundary(2)


@pytest.fixture(scope="session")
def rp2():
    return rpn_complex(2).complex


@pytest.fixture(scope="session")
def rp2_six():
    return from_facet_list(RP2_SIX)


# one line per acceptance criterion, filled in by test_acceptance
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
