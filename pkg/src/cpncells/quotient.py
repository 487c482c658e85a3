"""Quotients of identity-glued complexes by facet orbits.

``cpn_complex(n)`` is X^n / Sym(n); ``rpn_complex(n)`` is the boundary of the
(n+1)-dimensional cross polytope modulo the antipodal map.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .complex_core import FREE, FacePoset, GluedComplex, build_face_poset
from .errors import CapacityExceeded, IllDefinedGluing, InvolutionViolation, NotGood, NotIdentityGlued
from .staircase import MAX_N, SphereProduct
from .sym_action import OrbitTable, check_good_action, orbits, sym_vertex_orbits


@dataclass(frozen=True)
class QuotientComplex:
    complex: GluedComplex
    orbits: OrbitTable
    projection: np.ndarray
    representatives: tuple[int, ...]

    @property
    def facet_count(self) -> int:
        return self.complex.facet_count


def induced_vertex_orbits(c: GluedComplex, table: OrbitTable, poset: FacePoset) -> np.ndarray:
    """Vertex partition induced by facet orbits when labels are carried identically.

    Vertex ``(f, {i})`` is identified with ``(rep(orbit(f)), {i})``.
    """
    parent = list(range(poset.count(0)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    vt = poset.table(0)
    for orbit in table:
        rep = orbit[0]
        for f in orbit[1:]:
            for i in range(c.dimension + 1):
                a, b = find(int(vt[f, i])), find(int(vt[rep, i]))
                if a != b:
                    parent[max(a, b)] = min(a, b)
    return np.array([find(x) for x in range(len(parent))])


def quotient_complex(c: GluedComplex, table: OrbitTable,
                     vertex_orbit: Mapping[int, int] | Sequence[int] | None = None,
                     representatives: Sequence[int] | None = None,
                     poset: FacePoset | None = None) -> QuotientComplex:
    """One facet per orbit; face ``i`` of an orbit glues to the orbit of the
    colour-``i`` neighbour of any of its members.

    Every member is checked, not only the representative.  ``vertex_orbit``
    overrides the vertex partition used for the goodness precondition.
    """
    if not c.is_identity_glued:
        raise NotIdentityGlued("quotients need an identity-glued (coloured) complex")
    proj = table.projection()
    if proj.shape[0] != c.facet_count or (proj < 0).any():
        raise ValueError("orbits must partition the facets")
    poset = poset or build_face_poset(c)
    if vertex_orbit is None:
        vertex_orbit = induced_vertex_orbits(c, table, poset)
    good = check_good_action(c, vertex_orbit, poset)
    if not good:
        raise NotGood(good.message, good.witness)

    if representatives is None:
        reps = table.representatives
    else:
        reps = tuple(int(r) for r in representatives)
        if any(proj[r] != k for k, r in enumerate(reps)):
            raise ValueError("each representative must belong to its orbit")

    nb = c.neighbors
    q_nb = np.full((len(table), c.dimension + 1), FREE, dtype=np.int64)
    target = np.where(nb == FREE, FREE, proj[np.maximum(nb, 0)])
    for k, orbit in enumerate(table):
        rows = target[list(orbit)]
        if not np.all(rows == rows[0]):
            i = int(np.argmax(np.any(rows != rows[0], axis=0)))
            raise IllDefinedGluing(f"members of orbit {k} disagree on the orbit glued along face {i}")
        q_nb[k] = target[reps[k]]
    try:
        q = GluedComplex(c.dimension, q_nb)
    except InvolutionViolation as exc:
        raise IllDefinedGluing(f"quotient gluing is not an involution: {exc}") from exc
    return QuotientComplex(q, table, proj, reps)


def cpn_complex(n: int, sp: SphereProduct | None = None) -> QuotientComplex:
    """T_n = X^n / Sym(n)."""
    if not 1 <= n <= MAX_N:
        raise CapacityExceeded(f"CP^{n} construction supports 1 <= n <= {MAX_N}")
    sp = sp or SphereProduct(n)
    poset = build_face_poset(sp.complex)
    labels = sym_vertex_orbits(sp.facet_vertices, poset, n)
    return quotient_complex(sp.complex, orbits(n), vertex_orbit=labels, poset=poset)


def cross_polytope_boundary(n: int) -> GluedComplex:
    """Boundary of the (n+1)-dimensional cross polytope, graded by antipodal pair.

    Facet ``b`` picks ``v_i`` where bit ``i`` of ``b`` is set and ``u_i``
    otherwise; label ``i`` is the vertex from pair ``i``.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if n > 20:
        raise CapacityExceeded("cross polytopes are limited to n <= 20")
    count = 2 ** (n + 1)
    b = np.arange(count)[:, None]
    nb = b ^ (1 << np.arange(n + 1))[None, :]
    return GluedComplex(n, nb)


def cross_polytope_vertex(facet: int, label: int) -> int:
    """Vertex id ``2*i`` for ``u_i`` and ``2*i + 1`` for ``v_i``."""
    return 2 * label + (facet >> label & 1)


def cross_polytope_facets(n: int) -> list[list[int]]:
    return [[cross_polytope_vertex(b, i) for i in range(n + 1)] for b in range(2 ** (n + 1))]


def antipodal_orbits(n: int) -> OrbitTable:
    full = 2 ** (n + 1) - 1
    return OrbitTable(tuple(sorted((b, b ^ full) for b in range(2**n))))


def antipodal_vertex_orbits(c: GluedComplex, poset: FacePoset) -> np.ndarray:
    """Orbit of a vertex class is the index of its antipodal pair (its label)."""
    _, s = poset.representatives(0)
    return np.array([poset.combos(0)[int(x)][0] for x in s])


def rpn_complex(n: int) -> QuotientComplex:
    """The (n+1)-vertex crystallisation of RP^n."""
    c = cross_polytope_boundary(n)
    poset = build_face_poset(c)
    return quotient_complex(c, antipodal_orbits(n), vertex_orbit=antipodal_vertex_orbits(c, poset), poset=poset)
