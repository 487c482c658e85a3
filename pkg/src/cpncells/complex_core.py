"""Pure simplicial posets stored as facets plus face-to-face gluings.

A ``GluedComplex`` of dimension ``d`` has ``facet_count`` facets, each with
local vertex labels ``0..d``.  Face label ``i`` of a facet is the ridge
opposite local vertex ``i``.  Each face label is either free or glued to a
face of another facet by a bijection of labels.  Global vertices, edges and
higher faces only exist as equivalence classes of ``(facet, label subset)``
pairs, which is what :func:`build_face_poset` computes.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from itertools import combinations
from typing import Any, Iterable, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .errors import FaceNotFound, InvolutionViolation, ParseError

FREE = -1

# (facet, mask) node budget for the general (non-identity) union-find path
_GENERAL_NODE_CAP = 20_000_000


class GluedComplex:
    """Immutable facet-gluing table of a pure simplicial poset.

    Parameters
    ----------
    dimension : int
        Dimension ``d`` of every facet.
    neighbors : array-like of shape (facet_count, d + 1)
        ``neighbors[f, i]`` is the facet glued along face label ``i`` of
        ``f`` or ``-1`` if that face is free.
    perms : array-like of shape (facet_count, d + 1, d + 1), optional
        ``perms[f, i]`` maps the labels of ``f`` to the labels of the
        neighbour.  ``None`` means every gluing is the identity.
    """

    def __init__(self, dimension: int, neighbors, perms=None, *, validate: bool = True):
        d = int(dimension)
        if d < 0:
            raise ValueError("dimension must be non-negative")
        nb = np.array(neighbors, dtype=np.int64, copy=True)
        if nb.ndim != 2 or nb.shape[1] != d + 1 or nb.shape[0] < 1:
            raise ValueError(f"neighbors must have shape (facet_count, {d + 1})")
        if perms is not None:
            perms = np.array(perms, dtype=np.int8, copy=True)
            if perms.shape != (nb.shape[0], d + 1, d + 1):
                raise ValueError("perms must have shape (facet_count, d+1, d+1)")
            perms[nb == FREE] = np.arange(d + 1, dtype=np.int8)
            if np.array_equal(perms, np.broadcast_to(np.arange(d + 1, dtype=np.int8), perms.shape)):
                perms = None
        self._d = d
        self._nb = nb
        self._perms = perms
        nb.setflags(write=False)
        if perms is not None:
            perms.setflags(write=False)
        if validate:
            self._check_involution()

    @property
    def dimension(self) -> int:
        return self._d

    @property
    def facet_count(self) -> int:
        return self._nb.shape[0]

    @property
    def neighbors(self) -> np.ndarray:
        return self._nb

    @property
    def perms(self) -> np.ndarray | None:
        return self._perms

    @property
    def is_identity_glued(self) -> bool:
        return self._perms is None

    def perm_array(self) -> np.ndarray:
        """Dense ``(facet_count, d+1, d+1)`` bijection array, identity included."""
        if self._perms is not None:
            return self._perms
        eye = np.arange(self._d + 1, dtype=np.int8)
        return np.broadcast_to(eye, (self.facet_count, self._d + 1, self._d + 1))

    def gluing(self, facet: int, label: int):
        """Return ``(neighbor, bijection)`` for a glued face or ``None`` if free."""
        g = int(self._nb[facet, label])
        if g == FREE:
            return None
        if self._perms is None:
            return g, tuple(range(self._d + 1))
        return g, tuple(int(x) for x in self._perms[facet, label])

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, GluedComplex):
            return NotImplemented
        return (
            self._d == other._d
            and np.array_equal(self._nb, other._nb)
            and np.array_equal(self.perm_array(), other.perm_array())
        )

    def __hash__(self):
        return hash((self._d, self._nb.tobytes()))

    def __repr__(self) -> str:
        kind = "identity-glued" if self.is_identity_glued else "general"
        return f"GluedComplex(dimension={self._d}, facet_count={self.facet_count}, {kind})"

    def _check_involution(self) -> None:
        nb, d, n_f = self._nb, self._d, self.facet_count
        if nb.min() < FREE or nb.max() >= n_f:
            bad = np.argwhere((nb < FREE) | (nb >= n_f))[0]
            raise InvolutionViolation(f"facet {bad[0]} face {bad[1]} points outside the complex")
        perms = self.perm_array()
        if self._perms is not None:
            srt = np.sort(self._perms, axis=2)
            if not np.all(srt == np.arange(d + 1)):
                f, i = np.argwhere(~np.all(srt == np.arange(d + 1), axis=2))[0]
                raise InvolutionViolation(f"gluing at facet {f} face {i} is not a permutation")
        f_idx, i_idx = np.nonzero(nb != FREE)
        g_idx = nb[f_idx, i_idx]
        j_idx = perms[f_idx, i_idx, i_idx].astype(np.int64)
        same = (g_idx == f_idx) & (j_idx == i_idx)
        if same.any():
            k = np.argmax(same)
            raise InvolutionViolation(f"facet {f_idx[k]} glues face {i_idx[k]} to itself")
        back = nb[g_idx, j_idx]
        bad = back != f_idx
        if self._perms is not None:
            fwd = perms[f_idx, i_idx].astype(np.int64)
            rev = perms[g_idx, j_idx].astype(np.int64)
            composed = np.take_along_axis(rev, fwd, axis=1)
            bad |= ~np.all(composed == np.arange(d + 1), axis=1)
        if bad.any():
            k = np.argmax(bad)
            raise InvolutionViolation(
                f"facet {f_idx[k]} face {i_idx[k]} -> facet {g_idx[k]} face {j_idx[k]} "
                "is not matched by the reverse gluing"
            )


def from_facet_list(facets: Sequence[Sequence[int]]) -> GluedComplex:
    """Glued representation of an abstract simplicial complex.

    Local labels are positions in each facet's sorted vertex tuple, so the
    bijections are order preserving on shared ridges.
    """
    rows = [tuple(sorted(int(v) for v in f)) for f in facets]
    if not rows or len({len(r) for r in rows}) != 1:
        raise ValueError("facets must be a non-empty list of equal-size vertex sets")
    d = len(rows[0]) - 1
    nb = np.full((len(rows), d + 1), FREE, dtype=np.int64)
    perms = np.broadcast_to(np.arange(d + 1, dtype=np.int8), (len(rows), d + 1, d + 1)).copy()
    seen: dict[tuple, tuple[int, int]] = {}
    paired: set[tuple] = set()
    for f, row in enumerate(rows):
        for i in range(d + 1):
            ridge = row[:i] + row[i + 1:]
            if ridge in paired:
                raise ValueError(f"ridge {ridge} lies in more than two facets")
            if ridge not in seen:
                seen[ridge] = (f, i)
                continue
            g, j = seen.pop(ridge)
            paired.add(ridge)
            other = rows[g]
            p = [other.index(v) if v in other else j for v in row]
            nb[f, i], nb[g, j] = g, f
            perms[f, i] = p
            perms[g, j] = np.argsort(p)
    return GluedComplex(d, nb, perms)


def from_coloured_arcs(dimension: int, facet_count: int, arcs: Iterable[tuple[int, int, int]]) -> GluedComplex:
    """Identity-glued complex from ``(colour, a, b)`` triples."""
    nb = np.full((facet_count, dimension + 1), FREE, dtype=np.int64)
    for c, a, b in arcs:
        if nb[a, c] != FREE or nb[b, c] != FREE:
            raise InvolutionViolation(f"colour {c} uses node {a} or {b} twice")
        nb[a, c], nb[b, c] = b, a
    return GluedComplex(dimension, nb)


@dataclass(frozen=True)
class Certificate:
    """Outcome of a structural check; truthy iff the check passed."""

    ok: bool
    witness: Any = None
    message: str = ""

    def __bool__(self) -> bool:
        return bool(self.ok)


def _mask(labels: Iterable[int]) -> int:
    m = 0
    for x in labels:
        m |= 1 << int(x)
    return m


class FacePoset:
    """Face classes of a :class:`GluedComplex`, dimension by dimension.

    For dimension ``k`` the poset keeps an integer table of shape
    ``(facet_count, C(d+1, k+1))``: entry ``[f, s]`` is the class id of the
    pair ``(f, combos(k)[s])``.  Class ids are ordered by their canonical
    representative, the lexicographically least member.
    """

    def __init__(self, complex_: GluedComplex, tables: list[np.ndarray]):
        self.complex = complex_
        self.dimension = complex_.dimension
        self.facet_count = complex_.facet_count
        self._tables = tables
        self._combos = [list(combinations(range(self.dimension + 1), k + 1)) for k in range(self.dimension + 1)]
        self._combo_index = [{c: s for s, c in enumerate(cs)} for cs in self._combos]
        self._counts = []
        self._rep = []
        for k, t in enumerate(tables):
            t.setflags(write=False)
            n = int(t.max()) + 1
            flat = t.ravel()
            first = np.full(n, flat.size, dtype=np.int64)
            np.minimum.at(first, flat, np.arange(flat.size))
            m = t.shape[1]
            self._counts.append(n)
            self._rep.append((first // m, first % m))
        self._sub = [None] + [self._sub_index(k) for k in range(1, self.dimension + 1)]

    def _sub_index(self, k: int) -> np.ndarray:
        lower = self._combo_index[k - 1]
        out = np.empty((len(self._combos[k]), k + 1), dtype=np.int64)
        for s, c in enumerate(self._combos[k]):
            for i in range(k + 1):
                out[s, i] = lower[c[:i] + c[i + 1:]]
        return out

    @property
    def f_vector(self) -> tuple[int, ...]:
        return tuple(self._counts)

    def count(self, k: int) -> int:
        return self._counts[k]

    def table(self, k: int) -> np.ndarray:
        return self._tables[k]

    def combos(self, k: int) -> list[tuple[int, ...]]:
        return self._combos[k]

    def sub_index(self, k: int) -> np.ndarray:
        """``(C(d+1,k+1), k+1)`` array: combo index after dropping position ``i``."""
        return self._sub[k]

    def class_of(self, facet: int, labels: Iterable[int]) -> int:
        labels = tuple(sorted(int(x) for x in labels))
        k = len(labels) - 1
        try:
            s = self._combo_index[k][labels]
        except (IndexError, KeyError):
            raise FaceNotFound(f"labels {labels} are not a face of a {self.dimension}-simplex") from None
        return int(self._tables[k][facet, s])

    def representative(self, k: int, cls: int) -> tuple[int, tuple[int, ...]]:
        self._check(k, cls)
        f, s = self._rep[k]
        return int(f[cls]), self._combos[k][int(s[cls])]

    def representatives(self, k: int) -> tuple[np.ndarray, np.ndarray]:
        """Arrays ``(facet, combo index)`` of all canonical representatives."""
        return self._rep[k]

    def members(self, k: int, cls: int) -> list[tuple[int, tuple[int, ...]]]:
        self._check(k, cls)
        fs, ss = np.nonzero(self._tables[k] == cls)
        return [(int(f), self._combos[k][int(s)]) for f, s in zip(fs, ss)]

    def vertices(self, k: int, cls: int) -> tuple[int, ...]:
        f, labels = self.representative(k, cls)
        return tuple(int(self._tables[0][f, x]) for x in labels)

    def faces(self, k: int, cls: int) -> tuple[int, ...]:
        """Codimension-one faces of a class, in the label order of its representative."""
        if k == 0:
            return ()
        self._check(k, cls)
        f, s = self._rep[k]
        return tuple(int(x) for x in self._tables[k - 1][f[cls], self._sub[k][s[cls]]])

    def vertex_sets(self, k: int) -> np.ndarray:
        """``(count(k), k+1)`` array of vertex class ids of every k-class."""
        f, s = self._rep[k]
        labels = np.array(self._combos[k], dtype=np.int64)[s]
        return self._tables[0][f[:, None], labels]

    def _check(self, k: int, cls: int) -> None:
        if not 0 <= k <= self.dimension or not 0 <= cls < self._counts[k]:
            raise FaceNotFound(f"no {k}-face with id {cls}")


def _identity_components(c: GluedComplex) -> dict[int, np.ndarray]:
    """Component labels of each (mask, facet) for an identity-glued complex.

    A face with label set S is a connected component of the dual graph
    restricted to colours outside S.
    """
    d, n_f, nb = c.dimension, c.facet_count, c.neighbors
    src, dst = [], []
    for col in range(d + 1):
        f = np.nonzero(nb[:, col] > np.arange(n_f))[0]
        src.append(f)
        dst.append(nb[f, col])
    out = {}
    full = (1 << (d + 1)) - 1
    for mask in range(1, full + 1):
        cols = [col for col in range(d + 1) if not mask >> col & 1]
        if not cols:
            out[mask] = np.arange(n_f)
            continue
        s = np.concatenate([src[col] for col in cols])
        t = np.concatenate([dst[col] for col in cols])
        g = coo_matrix((np.ones(s.size, dtype=np.int8), (s, t)), shape=(n_f, n_f)).tocsr()
        _, lab = connected_components(g, directed=False)
        out[mask] = lab
    return out


def _general_components(c: GluedComplex) -> np.ndarray:
    d, n_f, nb = c.dimension, c.facet_count, c.neighbors
    m = 1 << (d + 1)
    if n_f * m > _GENERAL_NODE_CAP:
        from .errors import CapacityExceeded

        raise CapacityExceeded(f"{n_f} facets x {m} subsets is too large for general gluings")
    masks = np.arange(m)
    cache: dict[bytes, np.ndarray] = {}
    perms = c.perm_array()
    src, dst = [], []
    for f, i in zip(*np.nonzero(nb != FREE)):
        g = nb[f, i]
        if (g, perms[f, i, i]) < (f, i):
            continue
        p = perms[f, i]
        key = p.tobytes()
        if key not in cache:
            img = np.zeros(m, dtype=np.int64)
            for x in range(d + 1):
                img |= ((masks >> x) & 1) << int(p[x])
            cache[key] = img
        keep = masks[(masks >> i & 1) == 0]
        src.append(f * m + keep)
        dst.append(g * m + cache[key][keep])
    size = n_f * m
    if src:
        s, t = np.concatenate(src), np.concatenate(dst)
    else:
        s = t = np.zeros(0, dtype=np.int64)
    graph = coo_matrix((np.ones(s.size, dtype=np.int8), (s, t)), shape=(size, size)).tocsr()
    _, lab = connected_components(graph, directed=False)
    return lab.reshape(n_f, m)


def build_face_poset(c: GluedComplex) -> FacePoset:
    """Partition all ``(facet, label subset)`` pairs into face classes."""
    d = c.dimension
    if c.is_identity_glued:
        comps = _identity_components(c)

        def column(mask):
            return comps[mask]
    else:
        lab = _general_components(c)

        def column(mask):
            return lab[:, mask]

    tables = []
    for k in range(d + 1):
        cols = []
        offset = 0
        for combo in combinations(range(d + 1), k + 1):
            col = column(_mask(combo)).astype(np.int64)
            if c.is_identity_glued:
                col = col + offset
                offset = int(col.max()) + 1
            cols.append(col)
        raw = np.stack(cols, axis=1)
        _, first, inv = np.unique(raw.ravel(), return_index=True, return_inverse=True)
        rank = np.empty(first.size, dtype=np.int64)
        rank[np.argsort(first, kind="stable")] = np.arange(first.size)
        tables.append(rank[inv.ravel()].reshape(raw.shape).astype(np.int32))
    return FacePoset(c, tables)


def f_vector(c: GluedComplex, poset: FacePoset | None = None) -> tuple[int, ...]:
    return (poset or build_face_poset(c)).f_vector


def euler_characteristic(c: GluedComplex, poset: FacePoset | None = None) -> int:
    return sum((-1) ** j * x for j, x in enumerate(f_vector(c, poset)))


def is_simplicial_cell(c: GluedComplex, poset: FacePoset | None = None) -> Certificate:
    """Every facet has ``d+1`` pairwise distinct vertex classes."""
    poset = poset or build_face_poset(c)
    vt = poset.table(0)
    srt = np.sort(vt, axis=1)
    dup = np.any(srt[:, 1:] == srt[:, :-1], axis=1)
    if not dup.any():
        return Certificate(True)
    f = int(np.argmax(dup))
    row = [int(x) for x in vt[f]]
    for i in range(len(row)):
        for j in range(i + 1, len(row)):
            if row[i] == row[j]:
                return Certificate(False, (f, (i, j)), f"facet {f} has labels {i} and {j} on one vertex")
    raise AssertionError("unreachable")


def is_simplicial_complex(c: GluedComplex, poset: FacePoset | None = None) -> Certificate:
    """Regular, and every face is determined by its vertex set."""
    poset = poset or build_face_poset(c)
    cert = is_simplicial_cell(c, poset)
    if not cert:
        return cert
    for k in range(1, c.dimension + 1):
        vs = np.sort(poset.vertex_sets(k), axis=1)
        uniq, idx, counts = np.unique(vs, axis=0, return_index=True, return_counts=True)
        if uniq.shape[0] != vs.shape[0]:
            dup = tuple(int(x) for x in uniq[np.argmax(counts > 1)])
            return Certificate(False, (k, dup), f"two {k}-faces share the vertex set {dup}")
    return Certificate(True)


def dual_graph(c: GluedComplex) -> list[tuple[int, int, int, int]]:
    """Arcs ``(f, i, g, j)`` of the dual multigraph, each glued ridge once."""
    nb = c.neighbors
    perms = c.perm_array()
    arcs = []
    for f, i in zip(*np.nonzero(nb != FREE)):
        g = int(nb[f, i])
        j = int(perms[f, i, i])
        if (f, i) < (g, j):
            arcs.append((int(f), int(i), g, j))
    return arcs


def dual_graph_components(c: GluedComplex) -> np.ndarray:
    nb = c.neighbors
    f, i = np.nonzero(nb != FREE)
    n = c.facet_count
    g = coo_matrix((np.ones(f.size, dtype=np.int8), (f, nb[f, i])), shape=(n, n)).tocsr()
    return connected_components(g, directed=False)[1]


def self_gluings(c: GluedComplex) -> list[tuple[int, int, int]]:
    """``(facet, i, j)`` for every facet glued to itself along faces ``i != j``."""
    return [(f, i, j) for f, i, g, j in dual_graph(c) if f == g]


def is_closed_pseudomanifold(c: GluedComplex) -> Certificate:
    """No free ridge and a connected dual graph."""
    free = np.argwhere(c.neighbors == FREE)
    if free.size:
        f, i = (int(x) for x in free[0])
        return Certificate(False, ("free", f, i), f"face {i} of facet {f} is free")
    lab = dual_graph_components(c)
    if lab.max() > 0:
        f = int(np.argmax(lab != lab[0]))
        return Certificate(False, ("disconnected", 0, f), f"facets 0 and {f} are not connected")
    return Certificate(True)


def link_of_face(c: GluedComplex, k: int, cls: int, poset: FacePoset | None = None) -> GluedComplex:
    """Link of the ``k``-face class ``cls`` as a ``(d-k-1)``-dimensional complex.

    Link facets are the members ``(f, S)`` of the class, in lexicographic
    order; their labels are the complement of ``S`` renumbered increasingly.
    """
    poset = poset or build_face_poset(c)
    d = c.dimension
    if not 0 <= k < d:
        raise FaceNotFound(f"links need a face of dimension below {d}")
    members = poset.members(k, cls)
    index = {m: n for n, m in enumerate(members)}
    ld = d - k - 1
    nb = np.full((len(members), ld + 1), FREE, dtype=np.int64)
    perms = np.broadcast_to(np.arange(ld + 1, dtype=np.int8), (len(members), ld + 1, ld + 1)).copy()
    for n, (f, labels) in enumerate(members):
        comp = [x for x in range(d + 1) if x not in labels]
        for a, x in enumerate(comp):
            glued = c.gluing(f, x)
            if glued is None:
                continue
            g, p = glued
            target = tuple(sorted(p[y] for y in labels))
            tcomp = [y for y in range(d + 1) if y not in target]
            nb[n, a] = index[(g, target)]
            perms[n, a] = [tcomp.index(p[y]) for y in comp]
    return GluedComplex(ld, nb, perms)


def dumps_gcx(c: GluedComplex) -> str:
    """Serialise to the GCX v1 text format."""
    out = io.StringIO()
    d = c.dimension
    out.write(f"gcx {d} {c.facet_count}\n")
    perms = c.perm_array()
    for f in range(c.facet_count):
        parts = []
        for i in range(d + 1):
            g = int(c.neighbors[f, i])
            if g == FREE:
                parts.append("-")
            else:
                parts.append(f"{g}/" + " ".join(str(int(x)) for x in perms[f, i]))
        out.write(f"facet {f}: " + " | ".join(parts) + "\n")
    return out.getvalue()


def loads_gcx(text: str, *, validate: bool = True) -> GluedComplex:
    lines = [(n + 1, ln) for n, ln in enumerate(text.splitlines()) if ln.strip()]
    if not lines:
        raise ParseError("empty GCX input", 1, 1)
    lineno, head = lines[0]
    tok = head.split()
    if len(tok) != 3 or tok[0] != "gcx":
        raise ParseError("expected header 'gcx <d> <facet_count>'", lineno, 1)
    try:
        d, n_f = int(tok[1]), int(tok[2])
    except ValueError:
        raise ParseError("non-integer header field", lineno, 1) from None
    if len(lines) - 1 != n_f:
        raise ParseError(f"header announces {n_f} facets, found {len(lines) - 1}", lineno, 1)
    nb = np.full((n_f, d + 1), FREE, dtype=np.int64)
    perms = np.broadcast_to(np.arange(d + 1, dtype=np.int8), (n_f, d + 1, d + 1)).copy()
    for f, (lineno, ln) in enumerate(lines[1:]):
        head, sep, body = ln.partition(":")
        if not sep or head.split() != ["facet", str(f)]:
            raise ParseError(f"expected 'facet {f}:'", lineno, 1)
        entries = body.split("|")
        if len(entries) != d + 1:
            raise ParseError(f"expected {d + 1} gluing entries", lineno, len(head) + 2)
        for i, entry in enumerate(entries):
            entry = entry.strip()
            col = ln.find(entry) + 1
            if entry == "-":
                continue
            g, slash, rest = entry.partition("/")
            try:
                nb[f, i] = int(g)
                p = [int(x) for x in rest.split()]
            except ValueError:
                raise ParseError(f"bad gluing entry {entry!r}", lineno, col) from None
            if not slash or len(p) != d + 1:
                raise ParseError(f"bad gluing entry {entry!r}", lineno, col)
            perms[f, i] = p
    return GluedComplex(d, nb, perms, validate=validate)
