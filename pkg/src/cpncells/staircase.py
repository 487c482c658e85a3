"""Staircase subdivision of the n-fold triangle product and the complex X^n.

Grid vertices are tuples ``(i_1, ..., i_n)`` with entries in ``{1, 2, 3}``
and id ``sum((i_k - 1) * 3**(n - k))``.  A monotone path is recorded by its
axis sequence: ``2n`` axis labels in ``0..n-1``, each appearing twice.  A
step along axis ``a`` adds ``3**(n-1-a)`` to the vertex id.

Facets of X^n are pairs (path, cell).  Cells are words in {U, L}^n stored as
integers; the letter of axis ``a`` is bit ``a`` (U = 0, L = 1).  The global
facet id is ``path_index + N * cell`` with ``N = (2n)! / 2**n``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from math import comb, factorial, prod
from typing import Sequence

import numpy as np

from .complex_core import FREE, GluedComplex
from .errors import CapacityExceeded, ConstructionInconsistency

MAX_N = 4


def vertex_id(coords: Sequence[int]) -> int:
    n = len(coords)
    return sum((c - 1) * 3 ** (n - 1 - k) for k, c in enumerate(coords))


def vertex_coords(vid: int, n: int) -> tuple[int, ...]:
    if not 0 <= vid < 3**n:
        raise ValueError(f"vertex id {vid} out of range for n={n}")
    out = []
    for k in range(n):
        out.append(vid // 3 ** (n - 1 - k) % 3 + 1)
    return tuple(out)


def grid_distance(coords: Sequence[int]) -> int:
    """Edge-graph distance from the all-ones corner."""
    return sum(coords) - len(coords)


def cell_word(cell: int, n: int) -> str:
    """Letters A_1 ... A_n of a cell index (letter of axis a is bit a)."""
    return "".join("L" if cell >> a & 1 else "U" for a in range(n))


def cell_index(word: str) -> int:
    if set(word) - {"U", "L"}:
        raise ValueError(f"cell word {word!r} must use letters U and L")
    return sum(1 << a for a, ch in enumerate(word) if ch == "L")


@dataclass(frozen=True)
class MonotonePath:
    n: int
    steps: tuple[int, ...]

    def __post_init__(self):
        if len(self.steps) != 2 * self.n or any(self.steps.count(a) != 2 for a in range(self.n)):
            raise ValueError(f"{self.steps} is not a maximal monotone path for n={self.n}")

    @property
    def increments(self) -> tuple[int, ...]:
        return tuple(3 ** (self.n - 1 - a) for a in self.steps)

    @cached_property
    def vertices(self) -> tuple[int, ...]:
        out = [0]
        for inc in self.increments:
            out.append(out[-1] + inc)
        return tuple(out)

    @property
    def coords(self) -> list[tuple[int, ...]]:
        return [vertex_coords(v, self.n) for v in self.vertices]


def _multiset_orders(n: int):
    counts = [2] * n
    seq: list[int] = []

    def rec():
        if len(seq) == 2 * n:
            yield tuple(seq)
            return
        for a in range(n):
            if counts[a]:
                counts[a] -= 1
                seq.append(a)
                yield from rec()
                seq.pop()
                counts[a] += 1

    yield from rec()


@lru_cache(maxsize=None)
def enumerate_monotone_paths(n: int) -> tuple[MonotonePath, ...]:
    """All maximal monotone paths, sorted by their increment sequences."""
    if n < 1:
        raise ValueError("n must be positive")
    paths = [MonotonePath(n, s) for s in _multiset_orders(n)]
    paths.sort(key=lambda p: p.increments)
    return tuple(paths)


def path_count(n: int) -> int:
    return prod(comb(2 * (n - j), 2) for j in range(n))


def triangle_product_complex(n: int) -> list[list[int]]:
    """Facets (vertex id lists) of the staircase subdivision of the triangle^n."""
    return [list(p.vertices) for p in enumerate_monotone_paths(n)]


def boundary_faces(facets: Sequence[Sequence[int]]):
    """Codimension-one faces lying in an odd number of facets.

    Returns ``(ridge, (facet index, dropped position))`` pairs in first-seen
    order; a face seen a third time re-enters at the end with its latest
    position.
    """
    open_faces: dict[tuple[int, ...], tuple[int, int]] = {}
    for f, facet in enumerate(facets):
        facet = list(facet)
        for k in range(len(facet)):
            ridge = tuple(facet[:k] + facet[k + 1:])
            if ridge in open_faces:
                del open_faces[ridge]
            else:
                open_faces[ridge] = (f, k)
    return [(list(r), pos) for r, pos in open_faces.items()]


def _boundary_axis(path: MonotonePath, k: int) -> int | None:
    """Axis whose triangle edge carries the ridge dropping position ``k``.

    ``None`` means the ridge is interior to the product cell.
    """
    s = path.steps
    if k == 0:
        return s[0]
    if k == len(s):
        return s[-1]
    return s[k] if s[k - 1] == s[k] else None


class SphereProduct:
    """The simplicial cell decomposition X^n of (S^2)^n together with its labels.

    Attributes
    ----------
    complex : GluedComplex
        Identity-glued complex on ``(2n)!`` facets of dimension ``2n``.
    facet_vertices : ndarray of shape ((2n)!, 2n + 1)
        Grid vertex id at every local label.
    """

    def __init__(self, n: int):
        if n < 1:
            raise ValueError("n must be positive")
        if n > MAX_N:
            raise CapacityExceeded(f"X^{n} has {factorial(2 * n)} facets; n <= {MAX_N} is supported")
        self.n = n
        self.paths = enumerate_monotone_paths(n)
        self.path_len = len(self.paths)
        self.cell_count = 2**n
        self.complex, self.facet_vertices = self._build()

    def global_id(self, path_index: int, cell: int) -> int:
        return path_index + self.path_len * cell

    def split_id(self, facet: int) -> tuple[int, int]:
        return facet % self.path_len, facet // self.path_len

    def _build(self):
        n, paths, N = self.n, self.paths, self.path_len
        d = 2 * n
        index = {p.steps: i for i, p in enumerate(paths)}
        local = np.full((N, d + 1), FREE, dtype=np.int64)
        axis = np.full((N, d + 1), -1, dtype=np.int64)
        for i, p in enumerate(paths):
            for k in range(d + 1):
                a = _boundary_axis(p, k)
                if a is not None:
                    axis[i, k] = a
                    continue
                s = list(p.steps)
                s[k - 1], s[k] = s[k], s[k - 1]
                j = index[tuple(s)]
                q = paths[j]
                same = p.vertices[:k] + p.vertices[k + 1:] == q.vertices[:k] + q.vertices[k + 1:]
                if not same:
                    raise ConstructionInconsistency(f"paths {i} and {j} do not share ridge {k} position-wise")
                local[i, k] = j
        self._check_boundary(local, axis)

        verts = np.array([p.vertices for p in paths], dtype=np.int64)
        cells = np.arange(self.cell_count)
        nb = np.empty((self.cell_count * N, d + 1), dtype=np.int64)
        for c in cells:
            block = np.where(local >= 0, local + N * c, N * (c ^ (1 << np.maximum(axis, 0))) + np.arange(N)[:, None])
            nb[c * N:(c + 1) * N] = block
        return GluedComplex(d, nb), np.tile(verts, (self.cell_count, 1))

    def _check_boundary(self, local: np.ndarray, axis: np.ndarray) -> None:
        # cross-check the interior/boundary split against the Z2-boundary scan
        facets = [list(p.vertices) for p in self.paths]
        expected = {pos for _, pos in boundary_faces(facets)}
        found = {(int(i), int(k)) for i, k in zip(*np.nonzero(local == FREE))}
        if expected != found:
            raise ConstructionInconsistency("boundary ridges disagree with the Z2-boundary of the path complex")
        for i, k in found:
            ridge = self.paths[i].coords[:k] + self.paths[i].coords[k + 1:]
            values = {c[axis[i, k]] for c in ridge}
            if len(values) != 2:
                raise ConstructionInconsistency(f"ridge {k} of path {i} is not on a triangle edge of axis {axis[i, k]}")

    def to_gem(self):
        from .gem_io import complex_to_gem

        return complex_to_gem(self.complex)


def sphere_product(n: int) -> GluedComplex:
    """X^n as an identity-glued complex."""
    return SphereProduct(n).complex


def certify_identity_gluing(sp: SphereProduct) -> None:
    """Raise unless glued facets carry equal grid vertices at every shared label."""
    nb, fv = sp.complex.neighbors, sp.facet_vertices
    d = sp.complex.dimension
    for i in range(d + 1):
        other = fv[nb[:, i]]
        keep = np.ones(d + 1, dtype=bool)
        keep[i] = False
        if not np.array_equal(fv[:, keep], other[:, keep]):
            f = int(np.argmax(np.any(fv[:, keep] != other[:, keep], axis=1)))
            raise ConstructionInconsistency(f"gluing of facet {f} along face {i} is not the identity on vertices")
