"""Coordinate-permutation action of Sym(n) on X^n, orbits, and goodness checks.

A permutation ``p`` is an image table on ``0..n-1`` and moves axis ``a`` to
axis ``p[a]``: coordinate ``p[a]`` of the image equals coordinate ``a`` of
the source, and likewise for the letters of a cell word.  With this
convention ``act(p, act(q, x)) == act(compose(p, q), x)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from math import factorial
from typing import Mapping, Sequence

import numpy as np

from .complex_core import Certificate, FacePoset, GluedComplex, build_face_poset
from .errors import CapacityExceeded, InvalidFacet
from .staircase import MAX_N, MonotonePath, enumerate_monotone_paths, vertex_coords, vertex_id

Perm = tuple[int, ...]


def all_perms(n: int) -> list[Perm]:
    return list(permutations(range(n)))


def compose(p: Sequence[int], q: Sequence[int]) -> Perm:
    """``p o q``: apply ``q`` first."""
    return tuple(p[x] for x in q)


def inverse(p: Sequence[int]) -> Perm:
    out = [0] * len(p)
    for a, b in enumerate(p):
        out[b] = a
    return tuple(out)


def _check_perm(p: Sequence[int], n: int) -> None:
    if sorted(p) != list(range(n)):
        raise ValueError(f"{tuple(p)} is not a permutation of 0..{n - 1}")


def perm_on_vertex(p: Sequence[int], v: Sequence[int]) -> tuple[int, ...]:
    """Image of grid coordinates ``v`` under ``p``."""
    _check_perm(p, len(v))
    out = [0] * len(v)
    for a, x in enumerate(v):
        out[p[a]] = x
    return tuple(out)


def perm_on_vertex_id(p: Sequence[int], vid: int) -> int:
    n = len(p)
    return vertex_id(perm_on_vertex(p, vertex_coords(vid, n)))


def perm_on_path(p: Sequence[int], path: MonotonePath) -> MonotonePath:
    return MonotonePath(path.n, tuple(p[a] for a in path.steps))


def perm_on_cell(p: Sequence[int], cell: int) -> int:
    out = 0
    for a in range(len(p)):
        if cell >> a & 1:
            out |= 1 << p[a]
    return out


class FacetAction:
    """Lookup tables for the Sym(n) action on global facet ids of X^n."""

    def __init__(self, n: int):
        if n > MAX_N:
            raise CapacityExceeded(f"Sym({n}) action tables are limited to n <= {MAX_N}")
        self.n = n
        self.perms = all_perms(n)
        paths = enumerate_monotone_paths(n)
        self.path_len = len(paths)
        index = {q.steps: i for i, q in enumerate(paths)}
        self.path_table = np.array(
            [[index[perm_on_path(p, q).steps] for q in paths] for p in self.perms], dtype=np.int64
        )
        self.cell_table = np.array(
            [[perm_on_cell(p, c) for c in range(2**n)] for p in self.perms], dtype=np.int64
        )
        self._perm_index = {p: k for k, p in enumerate(self.perms)}

    @property
    def facet_count(self) -> int:
        return self.path_len * 2**self.n

    def facet_map(self, p: Sequence[int]) -> np.ndarray:
        """Image of every global facet id under ``p``."""
        k = self._perm_index[tuple(p)]
        ids = np.arange(self.facet_count)
        path, cell = ids % self.path_len, ids // self.path_len
        return self.path_table[k][path] + self.path_len * self.cell_table[k][cell]

    def apply(self, p: Sequence[int], facet: int) -> int:
        if not 0 <= facet < self.facet_count:
            raise InvalidFacet(f"facet {facet} is not a facet of X^{self.n}")
        k = self._perm_index[tuple(p)]
        path, cell = facet % self.path_len, facet // self.path_len
        return int(self.path_table[k, path] + self.path_len * self.cell_table[k, cell])


def perm_on_facet(p: Sequence[int], facet: int) -> int:
    """Image of global facet id ``facet`` of X^n (n = len(p)) under ``p``."""
    n = len(p)
    _check_perm(p, n)
    return _action(n).apply(p, facet)


_ACTIONS: dict[int, FacetAction] = {}


def _action(n: int) -> FacetAction:
    if n not in _ACTIONS:
        _ACTIONS[n] = FacetAction(n)
    return _ACTIONS[n]


@dataclass(frozen=True)
class OrbitTable:
    """Orbits of facet ids, each sorted, listed in lexicographic order."""

    orbits: tuple[tuple[int, ...], ...]

    def __len__(self):
        return len(self.orbits)

    def __iter__(self):
        return iter(self.orbits)

    def __getitem__(self, k):
        return self.orbits[k]

    @property
    def representatives(self) -> tuple[int, ...]:
        return tuple(o[0] for o in self.orbits)

    def projection(self) -> np.ndarray:
        """Orbit index of every facet id."""
        size = sum(len(o) for o in self.orbits)
        out = np.full(size, -1, dtype=np.int64)
        for k, o in enumerate(self.orbits):
            out[list(o)] = k
        return out

    @classmethod
    def from_labels(cls, labels: Sequence[int]) -> "OrbitTable":
        groups: dict[int, list[int]] = {}
        for f, lab in enumerate(labels):
            groups.setdefault(int(lab), []).append(f)
        return cls(tuple(sorted(tuple(g) for g in groups.values())))

    def to_text(self) -> str:
        return "".join(f"orbit {k}: " + " ".join(map(str, o)) + "\n" for k, o in enumerate(self.orbits))

    def projection_text(self) -> str:
        return "".join(f"proj {f} {k}\n" for f, k in enumerate(self.projection()))


def orbits(n: int) -> OrbitTable:
    """Sym(n)-orbits of the facets of X^n."""
    if n < 1:
        raise ValueError("n must be positive")
    act = _action(n)
    images = np.stack([act.facet_map(p) for p in act.perms])
    label = images.min(axis=0)
    table = OrbitTable.from_labels(label)
    size = factorial(n)
    bad = [o for o in table if len(o) != size]
    if bad:
        raise AssertionError(f"orbit {bad[0]} does not have {size} elements")
    return table


def grid_vertex_orbit(vid: int, n: int) -> tuple[int, ...]:
    """Orbit label of a grid vertex: its sorted coordinate multiset."""
    return tuple(sorted(vertex_coords(vid, n)))


def sym_vertex_orbits(facet_vertices: np.ndarray, poset: FacePoset, n: int) -> np.ndarray:
    """Orbit label (an int) of every vertex class of X^n under Sym(n)."""
    f, s = poset.representatives(0)
    labels = np.array([c[0] for c in poset.combos(0)])[s]
    grid = facet_vertices[f, labels]
    keys = {}
    out = np.empty(grid.size, dtype=np.int64)
    for i, v in enumerate(grid):
        out[i] = keys.setdefault(grid_vertex_orbit(int(v), n), len(keys))
    return out


def check_good_action(c: GluedComplex, vertex_orbit: Mapping[int, int] | Sequence[int],
                      poset: FacePoset | None = None) -> Certificate:
    """No edge joins two vertices carrying the same orbit label."""
    poset = poset or build_face_poset(c)
    if isinstance(vertex_orbit, Mapping):
        lab = np.array([vertex_orbit[v] for v in range(poset.count(0))])
    else:
        lab = np.asarray(vertex_orbit)
    if lab.shape[0] != poset.count(0):
        raise ValueError("orbit labels must cover every vertex class")
    if c.dimension == 0:
        return Certificate(True)
    ends = poset.vertex_sets(1)
    bad = lab[ends[:, 0]] == lab[ends[:, 1]]
    if bad.any():
        e = int(np.argmax(bad))
        u, v = (int(x) for x in ends[e])
        return Certificate(False, (e, (u, v)), f"edge {e} joins vertices {u} and {v} of one orbit")
    return Certificate(True)


def check_good_action_cellwise(c: GluedComplex, group, poset: FacePoset | None = None,
                               max_facets: int = 720) -> Certificate:
    """Every cell in ``sigma`` and ``g(sigma)`` is fixed by ``g``.

    ``group`` is a sequence of elements, each either a facet map (array of
    facet images, labels carried identically) or a pair ``(facet_map,
    label_maps)`` with ``label_maps[f]`` the label bijection at facet ``f``.
    Checking facets suffices: any cell of ``sigma`` lies in a facet.
    """
    if c.facet_count > max_facets:
        raise CapacityExceeded(f"cellwise goodness is exhaustive; {c.facet_count} facets exceeds {max_facets}")
    poset = poset or build_face_poset(c)
    d = c.dimension
    for gi, g in enumerate(group):
        if isinstance(g, tuple):
            fmap, lmaps = np.asarray(g[0]), np.asarray(g[1])
        else:
            fmap, lmaps = np.asarray(g), None
        for k in range(d + 1):
            combos = poset.combos(k)
            table = poset.table(k)
            if lmaps is None:
                image = table[fmap]
            else:
                image = np.empty_like(table)
                for f in range(c.facet_count):
                    for s, combo in enumerate(combos):
                        image[f, s] = poset.class_of(fmap[f], [lmaps[f][x] for x in combo])
            for f in range(c.facet_count):
                mine = table[f]
                theirs = set(int(x) for x in image[f])
                for s, alpha in enumerate(mine):
                    # alpha = class(f, S) is in g(sigma); its image is class(g f, g S)
                    if int(alpha) in theirs and image[f, s] != alpha:
                        return Certificate(
                            False, (gi, f, k, int(alpha)),
                            f"element {gi} moves the {k}-cell {int(alpha)} shared by facet {f} and its image",
                        )
    return Certificate(True)


def sym_group_elements(n: int) -> list[np.ndarray]:
    act = _action(n)
    return [act.facet_map(p) for p in act.perms]
