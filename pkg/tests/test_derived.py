from math import factorial

import pytest

from cpncells.complex_core import FREE, GluedComplex, build_face_poset, euler_characteristic, f_vector, is_simplicial_complex
from cpncells.derived import derived_chains, derived_f_vector, derived_subdivision, surjection_count
from cpncells.errors import CapacityExceeded, ConstructionInconsistency
from cpncells.quotient import cross_polytope_boundary, rpn_complex

T_F = {
    1: (3, 3, 2),
    2: (6, 15, 30, 30, 12),
    3: (10, 46, 184, 440, 596, 420, 120),
    4: (15, 111, 764, 3345, 8982, 14700, 14280, 7560, 1680),
}
X_F = {
    1: (3, 3, 2),
    2: (9, 27, 58, 60, 24),
    3: (27, 189, 926, 2460, 3504, 2520, 720),
    4: (81, 1215, 12130, 64860, 194280, 337680, 338400, 181440, 40320),
}


def test_surjections():
    for a in range(1, 7):
        assert surjection_count(a, a) == factorial(a)
    assert surjection_count(3, 2) == 6
    assert surjection_count(2, 3) == 0
    with pytest.raises(ValueError):
        surjection_count(0, 1)


def test_surjections_brute_force():
    from itertools import product

    for a in range(1, 6):
        for b in range(1, 5):
            brute = sum(1 for m in product(range(b), repeat=a) if len(set(m)) == b)
            assert surjection_count(a, b) == brute


def test_triangle_closure_formula():
    f = derived_f_vector((3, 3, 1))
    assert f == (7, 12, 6)
    assert f[0] == 3 + 3 + 1


def test_derived_single_simplex():
    for d in (1, 2, 3):
        c = GluedComplex(d, [[FREE] * (d + 1)])
        sub = derived_subdivision(c)
        assert sub.facet_count == factorial(d + 1)
        assert f_vector(sub) == derived_f_vector(f_vector(c))


def test_derived_cpn_rows():
    assert derived_f_vector(T_F[1]) == (8, 18, 12)
    assert derived_f_vector(T_F[2]) == (93, 990, 3060, 3600, 1440)
    assert derived_f_vector(T_F[3]) == (1816, 66396, 549864, 1816800, 2843520, 2116800, 604800)
    assert derived_f_vector(T_F[4]) == (
        51437, 5808816, 109509744, 767035800, 2621323440, 4874990400, 5050684800, 2743372800, 609638400,
    )


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_top_derived_entries(n):
    d = 2 * n
    assert derived_f_vector(X_F[n])[d] == factorial(d) * factorial(d + 1)
    assert derived_f_vector(T_F[n])[d] == factorial(d) * factorial(d + 1) // factorial(n)


@pytest.fixture(scope="module")
def small_fixtures(s2_3, sp, tn):
    return {
        "S2_3": s2_3,
        "T1": tn(1).complex,
        "T2": tn(2).complex,
        "X2": sp(2).complex,
        "octahedron": cross_polytope_boundary(2),
        "rp2": rpn_complex(2).complex,
    }


@pytest.mark.parametrize("name", ["S2_3", "T1", "T2", "X2", "octahedron", "rp2"])
def test_explicit_matches_formula(small_fixtures, name):
    c = small_fixtures[name]
    sub = derived_subdivision(c)
    poset = build_face_poset(sub)
    assert poset.f_vector == derived_f_vector(f_vector(c))
    assert is_simplicial_complex(sub, poset)
    assert euler_characteristic(sub, poset) == euler_characteristic(c)
    assert sub.is_identity_glued


def test_explicit_cpn_values(tn):
    assert f_vector(derived_subdivision(tn(1).complex)) == (8, 18, 12)
    assert f_vector(derived_subdivision(tn(2).complex)) == (93, 990, 3060, 3600, 1440)


def test_derived_of_general_gluing(rp2_six):
    sub = derived_subdivision(rp2_six)
    assert f_vector(sub) == derived_f_vector((6, 15, 10))
    assert is_simplicial_complex(sub)


def test_capacity(tn):
    with pytest.raises(CapacityExceeded):
        derived_subdivision(tn(2).complex, cap=100)


def test_irregular_input_refused():
    loop = GluedComplex(1, [[0, 0]], [[[1, 0], [1, 0]]])
    with pytest.raises(ConstructionInconsistency):
        derived_subdivision(loop)


def test_chains_are_flags(tn):
    c = tn(2).complex
    poset = build_face_poset(c)
    chains = derived_chains(c, poset)
    assert chains.shape == (12 * 120, 5)
    # consecutive entries are incident faces
    for row in chains[::37]:
        for j in range(1, 5):
            assert int(row[j - 1]) in poset.faces(j, int(row[j]))
