"""Derived (barycentric) subdivision and its closed-form f-vector."""

from __future__ import annotations

from itertools import permutations
from math import comb, factorial
from typing import Sequence

import numpy as np

from .complex_core import FREE, FacePoset, GluedComplex, build_face_poset, is_simplicial_cell
from .errors import CapacityExceeded, ConstructionInconsistency

DEFAULT_CAP = 10**7


def surjection_count(a: int, b: int) -> int:
    """Number of surjections from an ``a``-set onto a ``b``-set."""
    if a < 1 or b < 1:
        raise ValueError("set sizes must be positive")
    return sum((-1) ** k * comb(b, k) * (b - k) ** a for k in range(b + 1))


def derived_f_vector(f: Sequence[int]) -> tuple[int, ...]:
    d = len(f) - 1
    return tuple(
        sum(surjection_count(j + 1, ell + 1) * int(f[j]) for j in range(ell, d + 1))
        for ell in range(d + 1)
    )


def derived_facet_count(c: GluedComplex) -> int:
    return factorial(c.dimension + 1) * c.facet_count


def derived_subdivision(c: GluedComplex, cap: int = DEFAULT_CAP, poset: FacePoset | None = None) -> GluedComplex:
    """Derived subdivision as an identity-glued complex.

    Facet ``F * (d+1)! + r`` is the maximal chain of faces of facet ``F``
    obtained by adding labels in the order of the ``r``-th permutation
    (lexicographic).  Its label ``j`` is the face of dimension ``j`` in that
    chain, so every gluing preserves labels.
    """
    d = c.dimension
    total = derived_facet_count(c)
    if total > cap:
        raise CapacityExceeded(f"derived subdivision would have {total} facets (cap {cap})")
    poset = poset or build_face_poset(c)
    if not is_simplicial_cell(c, poset):
        raise ConstructionInconsistency("derived subdivision needs a regular (simplicial cell) complex")
    orders = list(permutations(range(d + 1)))
    m = len(orders)
    index = {o: r for r, o in enumerate(orders)}
    swap = np.empty((m, d), dtype=np.int64)
    for r, o in enumerate(orders):
        for j in range(d):
            s = list(o)
            s[j], s[j + 1] = s[j + 1], s[j]
            swap[r, j] = index[tuple(s)]
    last = np.array([o[-1] for o in orders], dtype=np.int64)

    base = np.arange(c.facet_count, dtype=np.int64)[:, None] * m
    nb = np.empty((c.facet_count * m, d + 1), dtype=np.int64)
    for j in range(d):
        nb[:, j] = (base + swap[None, :, j]).ravel()
    top_nb = c.neighbors[:, last]  # (F, m): neighbour across the face opposite the last label
    if c.is_identity_glued:
        top = np.where(top_nb == FREE, FREE, top_nb * m + np.arange(m)[None, :])
    else:
        top = np.full(top_nb.shape, FREE, dtype=np.int64)
        perms = c.perms
        for f in range(c.facet_count):
            for r, o in enumerate(orders):
                g = top_nb[f, r]
                if g != FREE:
                    p = perms[f, o[-1]]
                    top[f, r] = g * m + index[tuple(int(p[x]) for x in o)]
    nb[:, d] = top.ravel()
    return GluedComplex(d, nb)


def derived_chains(c: GluedComplex, poset: FacePoset | None = None) -> np.ndarray:
    """Source face classes ``(dim j, class id)`` per derived facet and label, as
    a ``(facets, d+1)`` array of class ids (the dimension is the column)."""
    d = c.dimension
    poset = poset or build_face_poset(c)
    orders = list(permutations(range(d + 1)))
    out = np.empty((c.facet_count * len(orders), d + 1), dtype=np.int64)
    for j in range(d + 1):
        idx = [poset.combos(j).index(tuple(sorted(o[: j + 1]))) for o in orders]
        out[:, j] = poset.table(j)[:, idx].ravel()
    return out
