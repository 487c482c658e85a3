import random
from math import comb, factorial

import numpy as np
import pytest

from cpncells.complex_core import (
    GluedComplex,
    euler_characteristic,
    f_vector,
    is_closed_pseudomanifold,
    is_simplicial_cell,
    is_simplicial_complex,
    self_gluings,
)
from cpncells.errors import CapacityExceeded, IllDefinedGluing, NotGood, NotIdentityGlued
from cpncells.gem_io import canonical_code, complex_to_gem
from cpncells.quotient import (
    antipodal_orbits,
    cpn_complex,
    cross_polytope_boundary,
    cross_polytope_facets,
    quotient_complex,
    rpn_complex,
)
from cpncells.sym_action import OrbitTable, orbits

CPN_F = {
    1: (3, 3, 2),
    2: (6, 15, 30, 30, 12),
    3: (10, 46, 184, 440, 596, 420, 120),
}


@pytest.mark.parametrize("n", [1, 2, 3])
def test_cpn_f_vector(tn, n):
    q = tn(n)
    c = q.complex
    assert f_vector(c) == CPN_F[n]
    assert euler_characteristic(c) == n + 1
    assert f_vector(c)[0] == comb(n + 2, 2)
    assert c.facet_count == factorial(2 * n) // factorial(n)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_cpn_structure(tn, n):
    c = tn(n).complex
    assert c.is_identity_glued
    assert c.dimension == 2 * n
    assert is_simplicial_cell(c)
    assert is_closed_pseudomanifold(c)
    assert not self_gluings(c)


def test_cp1_is_two_triangles(tn, s2_3):
    assert tn(1).complex == s2_3


def test_facet_freeness(sp, tn):
    for n in (1, 2, 3):
        assert f_vector(tn(n).complex)[-1] * factorial(n) == f_vector(sp(n).complex)[-1]


def test_projection(tn):
    q = tn(2)
    assert q.projection.shape == (24,)
    assert np.bincount(q.projection).tolist() == [2] * 12
    assert q.representatives == tuple(o[0] for o in q.orbits)


def test_trivial_group(sp):
    c = sp(2).complex
    table = OrbitTable(tuple((f,) for f in range(c.facet_count)))
    q = quotient_complex(c, table)
    assert q.complex == c


def test_representative_choice_irrelevant(sp, tn):
    rng = random.Random(3)
    c = sp(2).complex
    table = orbits(2)
    base = canonical_code(complex_to_gem(tn(2).complex))
    for _ in range(5):
        reps = [rng.choice(o) for o in table]
        q = quotient_complex(c, table, representatives=reps)
        assert canonical_code(complex_to_gem(q.complex)) == base


def test_representative_outside_orbit(sp):
    table = orbits(2)
    reps = list(table.representatives)
    reps[0] = table[1][0]
    with pytest.raises(ValueError):
        quotient_complex(sp(2).complex, table, representatives=reps)


def test_not_good_partition_rejected():
    # two triangles, identify the facets and declare two vertices one orbit
    c = GluedComplex(2, [[1, 1, 1], [0, 0, 0]])
    table = OrbitTable(((0, 1),))
    with pytest.raises(NotGood) as info:
        quotient_complex(c, table, vertex_orbit=[0, 0, 1])
    assert info.value.witness is not None


def test_ill_defined_gluing():
    # a 4-cycle of edges; members of {0, 3} reach different orbits along colour 0
    c = GluedComplex(1, [[1, 3], [0, 2], [3, 1], [2, 0]])
    table = OrbitTable(((0, 3), (1,), (2,)))
    with pytest.raises(IllDefinedGluing):
        quotient_complex(c, table, vertex_orbit=[0, 1, 2, 3])


def test_quotient_needs_identity_gluing(rp2_six):
    with pytest.raises(NotIdentityGlued):
        quotient_complex(rp2_six, OrbitTable(tuple((f,) for f in range(10))))


def test_cpn_capacity():
    with pytest.raises(CapacityExceeded):
        cpn_complex(5)
    with pytest.raises(CapacityExceeded):
        cpn_complex(0)


@pytest.mark.parametrize("n, f", [(1, (4, 4)), (2, (6, 12, 8)), (3, (8, 24, 32, 16))])
def test_cross_polytope(n, f):
    c = cross_polytope_boundary(n)
    assert f_vector(c) == f
    assert is_simplicial_complex(c)
    assert euler_characteristic(c) == 1 + (-1) ** n


def test_cross_polytope_matches_facet_list():
    from cpncells.complex_core import from_facet_list

    for n in (1, 2, 3):
        a = f_vector(cross_polytope_boundary(n))
        b = f_vector(from_facet_list(cross_polytope_facets(n)))
        assert a == b


@pytest.mark.parametrize("n, f", [(1, (2, 2)), (2, (3, 6, 4)), (3, (4, 12, 16, 8))])
def test_rpn(n, f):
    q = rpn_complex(n)
    assert f_vector(q.complex) == f
    assert is_simplicial_cell(q.complex)
    assert euler_characteristic(q.complex) == (1 + (-1) ** n) // 2


def test_rpn_vertex_count_up_to_eight():
    for n in range(1, 9):
        q = rpn_complex(n)
        assert f_vector(q.complex)[0] == n + 1
        assert q.facet_count == 2**n


def test_antipodal_orbits_pair_complements():
    for o in antipodal_orbits(3):
        assert o[0] ^ o[1] == 0b1111


def test_quotient_dimension(tn):
    for n in (1, 2, 3):
        assert tn(n).complex.dimension == 2 * n
