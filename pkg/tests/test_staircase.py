from math import factorial

import numpy as np
import pytest

from cpncells.complex_core import build_face_poset, euler_characteristic, f_vector, is_closed_pseudomanifold, is_simplicial_cell
from cpncells.errors import CapacityExceeded
from cpncells.gem_io import complex_to_gem
from cpncells.staircase import (
    MonotonePath,
    SphereProduct,
    boundary_faces,
    cell_index,
    cell_word,
    certify_identity_gluing,
    enumerate_monotone_paths,
    grid_distance,
    path_count,
    triangle_product_complex,
    vertex_coords,
    vertex_id,
)


@pytest.mark.parametrize("n, count", [(1, 1), (2, 6), (3, 90), (4, 2520)])
def test_path_counts(n, count):
    assert len(enumerate_monotone_paths(n)) == count == path_count(n) == factorial(2 * n) // 2**n


def test_first_path_for_two_factors():
    assert enumerate_monotone_paths(2)[0].vertices == (0, 1, 2, 5, 8)


def test_paths_sorted_by_increments():
    for n in (2, 3):
        incs = [p.increments for p in enumerate_monotone_paths(n)]
        assert incs == sorted(incs)


def test_single_triangle():
    assert triangle_product_complex(1) == [[0, 1, 2]]


def test_two_factor_triangle_product():
    facets = triangle_product_complex(2)
    assert len(facets) == 6
    assert [0, 1, 2, 5, 8] in facets
    assert sorted({v for f in facets for v in f}) == list(range(9))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_grid_distance_increases_along_paths(n):
    for p in enumerate_monotone_paths(n):
        assert [grid_distance(c) for c in p.coords] == list(range(2 * n + 1))


def test_vertex_id_round_trip():
    for n in (1, 2, 3):
        for v in range(3**n):
            assert vertex_id(vertex_coords(v, n)) == v


def test_vertex_coords_range():
    with pytest.raises(ValueError):
        vertex_coords(9, 2)


def test_cell_words():
    assert cell_word(0, 3) == "UUU"
    assert cell_word(7, 3) == "LLL"
    assert cell_index("LUL") == 5
    with pytest.raises(ValueError):
        cell_index("LX")


def test_invalid_path():
    with pytest.raises(ValueError):
        MonotonePath(2, (0, 0, 0, 1))


def test_boundary_of_single_triangle():
    assert len(boundary_faces([[0, 1, 2]])) == 3


def test_boundary_of_two_triangles_sharing_edge():
    ridges = [tuple(r) for r, _ in boundary_faces([[0, 1, 2], [1, 2, 3]])]
    assert len(ridges) == 4
    assert (1, 2) not in ridges


def test_boundary_ridges_of_square_lie_on_cell_boundary():
    facets = triangle_product_complex(2)
    bd = boundary_faces(facets)
    on_boundary = {tuple(r) for r, _ in bd}
    for f in facets:
        for k in range(5):
            ridge = tuple(f[:k] + f[k + 1:])
            coords = [vertex_coords(v, 2) for v in ridge]
            # a ridge is on the boundary of the product iff some axis misses a value
            misses = any(len({c[a] for c in coords}) < 3 for a in range(2))
            assert misses == (ridge in on_boundary)
    interior = (6 * 5 - len(bd)) // 2
    # four copies of the interior, boundary ridges shared by two cells
    assert 4 * interior + 4 * len(bd) // 2 == 60


@pytest.mark.parametrize(
    "n, f",
    [
        (1, (3, 3, 2)),
        (2, (9, 27, 58, 60, 24)),
        (3, (27, 189, 926, 2460, 3504, 2520, 720)),
    ],
)
def test_sphere_product_f_vectors(sp, n, f):
    c = sp(n).complex
    assert f_vector(c) == f
    assert euler_characteristic(c) == 2**n


@pytest.mark.parametrize("n", [1, 2, 3])
def test_sphere_product_structure(sp, n):
    s = sp(n)
    c = s.complex
    assert c.facet_count == factorial(2 * n)
    assert c.is_identity_glued
    assert is_simplicial_cell(c)
    assert is_closed_pseudomanifold(c)
    assert complex_to_gem(c).is_perfect()
    certify_identity_gluing(s)


def test_sphere_product_grid_vertices(sp):
    s = sp(2)
    poset = build_face_poset(s.complex)
    # each vertex class carries exactly one grid vertex
    vt = poset.table(0)
    grid = {}
    for f in range(s.complex.facet_count):
        for i in range(5):
            grid.setdefault(int(vt[f, i]), set()).add(int(s.facet_vertices[f, i]))
    assert all(len(v) == 1 for v in grid.values())
    assert sorted(next(iter(v)) for v in grid.values()) == list(range(9))


def test_cross_cell_gluing_keeps_path(sp):
    s = sp(2)
    nb = s.complex.neighbors
    for f in range(s.complex.facet_count):
        for i in range(5):
            g = int(nb[f, i])
            pf, cf = s.split_id(f)
            pg, cg = s.split_id(g)
            if cf != cg:
                assert pf == pg
                assert bin(cf ^ cg).count("1") == 1


def test_one_cell_of_the_square_product(sp):
    s = sp(2)
    nb = s.complex.neighbors
    inside = [(f, int(nb[f, i])) for f in range(6) for i in range(5) if nb[f, i] < 6]
    assert {f for f, _ in inside} == set(range(6))


def test_global_id_layout(sp):
    s = sp(2)
    assert s.global_id(3, 2) == 15
    assert s.split_id(15) == (3, 2)


def test_capacity():
    with pytest.raises(CapacityExceeded):
        SphereProduct(5)
    with pytest.raises(ValueError):
        SphereProduct(0)


def test_facet_vertices_shape(sp):
    s = sp(3)
    assert s.facet_vertices.shape == (720, 7)
    assert np.all(np.diff(s.facet_vertices, axis=1) > 0)
