import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from cpncells.complex_core import GluedComplex, dumps_gcx, euler_characteristic, f_vector, loads_gcx
from cpncells.derived import derived_f_vector, derived_subdivision
from cpncells.gem_io import ColouredGraph, canonical_code, complex_to_gem, export_gem, find_isomorphism, gem_to_complex, import_gem
from cpncells.homology import homology
from cpncells.quotient import quotient_complex
from cpncells.staircase import SphereProduct
from cpncells.sym_action import compose, orbits, perm_on_facet

TRIALS = settings(max_examples=120, deadline=None)
_SP2 = SphereProduct(2).complex
_SP3 = SphereProduct(3).complex


@st.composite
def matchings(draw, max_half=5, dims=(1, 2, 3)):
    """A graph whose colour classes are random perfect matchings."""
    d = draw(st.sampled_from(dims))
    nodes = 2 * draw(st.integers(1, max_half))
    colours = []
    for _ in range(d + 1):
        order = draw(st.permutations(range(nodes)))
        colours.append(tuple((order[2 * i], order[2 * i + 1]) for i in range(nodes // 2)))
    return ColouredGraph(nodes, tuple(colours))


def _connected(g):
    seen, stack = {0}, [0]
    part = g.partners()
    while stack:
        x = stack.pop()
        for row in part:
            y = int(row[x])
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == g.node_count


@TRIALS
@given(matchings())
def test_gluing_is_an_involution(g):
    c = gem_to_complex(g)
    nb = c.neighbors
    f = np.arange(c.facet_count)
    for i in range(c.dimension + 1):
        assert np.all(nb[nb[f, i], i] == f)
    assert GluedComplex(c.dimension, nb) == c


@TRIALS
@given(matchings(max_half=4, dims=(1, 2)))
def test_euler_matches_betti(g):
    c = gem_to_complex(g)
    h = homology(c)
    assert h.euler_characteristic == euler_characteristic(c)


@TRIALS
@given(matchings(), st.randoms(use_true_random=False))
def test_canonical_code_relabel_invariant(g, rng):
    if not _connected(g):
        return
    perm = list(range(g.node_count))
    rng.shuffle(perm)
    h = g.relabel(perm)
    assert canonical_code(h) == canonical_code(g)
    phi = find_isomorphism(g, h)
    assert phi is not None and g.relabel(phi) == h


@TRIALS
@given(matchings(max_half=8))
def test_gem_text_round_trip(g):
    assert import_gem(export_gem(g)) == g


@TRIALS
@given(matchings(max_half=4))
def test_gcx_round_trip(g):
    c = gem_to_complex(g)
    assert loads_gcx(dumps_gcx(c)) == c


@TRIALS
@given(st.data())
def test_quotient_representatives_irrelevant(data):
    n = data.draw(st.sampled_from([2, 3]))
    c = _SP2 if n == 2 else _SP3
    table = orbits(n)
    reps = [data.draw(st.sampled_from(o)) for o in table]
    q = quotient_complex(c, table, representatives=reps)
    base = quotient_complex(c, table)
    assert canonical_code(complex_to_gem(q.complex)) == canonical_code(complex_to_gem(base.complex))


@TRIALS
@given(matchings(max_half=3, dims=(1, 2)))
def test_subdivision_preserves_homology(g):
    c = gem_to_complex(g)
    sub = derived_subdivision(c)
    assert f_vector(sub) == derived_f_vector(f_vector(c))
    assert homology(sub) == homology(c)


@TRIALS
@given(st.permutations(range(3)), st.permutations(range(3)), st.integers(0, 719))
def test_action_law(p, q, f):
    p, q = tuple(p), tuple(q)
    assert perm_on_facet(compose(p, q), f) == perm_on_facet(p, perm_on_facet(q, f))


def _small_fixtures():
    from conftest import RP2_SIX
    from cpncells.complex_core import from_facet_list
    from cpncells.quotient import cpn_complex, cross_polytope_boundary

    tetra = [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)]
    return [
        cpn_complex(1).complex,
        from_facet_list(tetra),
        cross_polytope_boundary(2),
        from_facet_list(RP2_SIX),
        cpn_complex(2).complex,
    ]


_FIXTURES = _small_fixtures()
_FIXTURE_HOMOLOGY = [homology(c) for c in _FIXTURES]


def _shuffle_facets(c, order):
    sigma = np.asarray(order)
    nb = c.neighbors
    new_nb = np.empty_like(nb)
    new_nb[sigma] = np.where(nb == -1, -1, sigma[np.maximum(nb, 0)])
    perms = None
    if c.perms is not None:
        perms = np.empty_like(c.perms)
        perms[sigma] = c.perms
    return GluedComplex(c.dimension, new_nb, perms)


@TRIALS
@given(st.data())
def test_subdivision_invariance_on_fixtures(data):
    k = data.draw(st.integers(0, len(_FIXTURES) - 1))
    c = _FIXTURES[k]
    shuffled = _shuffle_facets(c, data.draw(st.permutations(range(c.facet_count))))
    assert f_vector(shuffled) == f_vector(c)
    assert homology(derived_subdivision(shuffled)) == _FIXTURE_HOMOLOGY[k]
