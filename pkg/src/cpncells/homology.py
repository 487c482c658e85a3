"""Integer simplicial homology via boundary matrices and Smith normal form.

Faces are oriented by their local labels.  This is consistent whenever every
gluing bijection is order preserving on the labels of the shared ridge
("graded"), which holds for all identity-glued complexes and for complexes
read from facet lists.  Other inputs are derived-subdivided first.
"""

from __future__ import annotations

import heapq
import logging
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy import sparse

from .complex_core import FREE, FacePoset, GluedComplex, build_face_poset
from .errors import NotGraded

log = logging.getLogger(__name__)


@dataclass
class ChainComplexZ:
    """``boundaries[k]`` is the sparse matrix of d_k (rows: (k-1)-faces); index 0 is None."""

    f_vector: tuple[int, ...]
    boundaries: list = field(default_factory=list)

    @property
    def dimension(self) -> int:
        return len(self.f_vector) - 1


@dataclass(frozen=True)
class SmithResult:
    invariant_factors: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    @property
    def torsion(self) -> tuple[int, ...]:
        return tuple(x for x in self.invariant_factors if x > 1)


@dataclass(frozen=True)
class HomologyResult:
    betti: tuple[int, ...]
    torsion: tuple[tuple[int, ...], ...]

    @property
    def euler_characteristic(self) -> int:
        return sum((-1) ** k * b for k, b in enumerate(self.betti))

    @property
    def torsion_free(self) -> bool:
        return not any(self.torsion)

    def report(self) -> str:
        lines = []
        for k, (b, tors) in enumerate(zip(self.betti, self.torsion)):
            terms = [f"Z^{b}"] + [f"Z/{t}" for t in tors]
            lines.append(f"H_{k} = " + " + ".join(terms))
        return "\n".join(lines) + "\n"


def is_graded(c: GluedComplex) -> bool:
    """True iff each gluing bijection is increasing on the shared labels."""
    if c.is_identity_glued:
        return True
    d = c.dimension
    f, i = np.nonzero(c.neighbors != FREE)
    rows = c.perms[f, i].astype(np.int64)
    keep = np.arange(d + 1)[None, :] != i[:, None]
    shared = rows[keep].reshape(len(f), d)
    return bool(np.all(np.diff(shared, axis=1) > 0))


def chain_complex(c: GluedComplex, poset: FacePoset | None = None) -> ChainComplexZ:
    if not is_graded(c):
        raise NotGraded("gluings do not preserve the label order of shared faces")
    poset = poset or build_face_poset(c)
    out = ChainComplexZ(poset.f_vector, [None])
    for k in range(1, c.dimension + 1):
        f, s = poset.representatives(k)
        sub = poset.sub_index(k)[s]  # (count_k, k+1)
        rows = poset.table(k - 1)[f[:, None], sub]
        signs = np.where(np.arange(k + 1) % 2 == 0, 1, -1)
        cols = np.repeat(np.arange(len(f)), k + 1)
        vals = np.tile(signs, len(f))
        m = sparse.coo_matrix((vals, (rows.ravel(), cols)), shape=(poset.count(k - 1), poset.count(k)), dtype=np.int64)
        out.boundaries.append(m.tocsc())
    return out


def _dense_snf(a: list[list[int]]) -> list[int]:
    """Invariant factors of a dense integer matrix (Python ints, exact)."""
    a = [list(r) for r in a]
    m = len(a)
    n = len(a[0]) if m else 0
    factors: list[int] = []
    t = 0
    while t < m and t < n:
        pivot = None
        for i in range(t, m):
            row = a[i]
            for j in range(t, n):
                v = row[j]
                if v and (pivot is None or abs(v) < pivot[0]):
                    pivot = (abs(v), i, j)
                    if pivot[0] == 1:
                        break
            if pivot and pivot[0] == 1:
                break
        if pivot is None:
            break
        _, i, j = pivot
        a[t], a[i] = a[i], a[t]
        for row in a:
            row[t], row[j] = row[j], row[t]
        while True:
            p = a[t][t]
            clean = True
            for i in range(t + 1, m):
                v = a[i][t]
                if v:
                    q = v // p
                    if q:
                        ri, rt = a[i], a[t]
                        for j in range(t, n):
                            if rt[j]:
                                ri[j] -= q * rt[j]
                    if a[i][t]:
                        clean = False
            rt = a[t]
            for j in range(t + 1, n):
                v = rt[j]
                if v:
                    q = v // p
                    if q:
                        for i in range(t, m):
                            if a[i][t]:
                                a[i][j] -= q * a[i][t]
                    if rt[j]:
                        clean = False
            if not clean:
                # move the smallest remaining entry of row/column t into the pivot
                best = (abs(p), t, t)
                for i in range(t + 1, m):
                    if a[i][t] and abs(a[i][t]) < best[0]:
                        best = (abs(a[i][t]), i, t)
                for j in range(t + 1, n):
                    if a[t][j] and abs(a[t][j]) < best[0]:
                        best = (abs(a[t][j]), t, j)
                _, i, j = best
                a[t], a[i] = a[i], a[t]
                for row in a:
                    row[t], row[j] = row[j], row[t]
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if a[i][j] % p), None)
            if bad is None:
                break
            i = bad[0]
            a[t] = [x + y for x, y in zip(a[t], a[i])]
        factors.append(abs(a[t][t]))
        t += 1
    return factors


def _sparse_unit_reduce(cols: list[dict[int, int]]) -> tuple[int, list[dict[int, int]]]:
    """Eliminate unit pivots; return their count and the residual columns.

    Each elimination splits off a 1x1 block ``[+-1]`` by unimodular row and
    column operations, so the residual has the remaining invariant factors.
    """
    row_cols: dict[int, set[int]] = {}
    for c, col in enumerate(cols):
        for r in col:
            row_cols.setdefault(r, set()).add(c)
    alive = [bool(col) for col in cols]
    heap = [(len(col), c) for c, col in enumerate(cols) if col]
    heapq.heapify(heap)
    units = 0
    while heap:
        size, c = heapq.heappop(heap)
        col = cols[c]
        if not alive[c] or size != len(col):
            continue
        if not col:
            alive[c] = False
            continue
        best = None
        for r, v in col.items():
            if v == 1 or v == -1:
                cnt = len(row_cols[r])
                if best is None or cnt < best[0]:
                    best = (cnt, r, v)
                    if cnt == 1:
                        break
        if best is None:
            continue
        _, r, v = best
        for c2 in list(row_cols[r]):
            if c2 == c:
                continue
            target = cols[c2]
            factor = target[r] * v
            for r2, v2 in col.items():
                new = target.get(r2, 0) - factor * v2
                if new:
                    if r2 not in target:
                        row_cols[r2].add(c2)
                    target[r2] = new
                else:
                    del target[r2]
                    row_cols[r2].discard(c2)
            heapq.heappush(heap, (len(target), c2))
        for r2 in col:
            row_cols[r2].discard(c)
        del row_cols[r]
        cols[c] = {}
        alive[c] = False
        units += 1
    rest = [col for c, col in enumerate(cols) if col]
    return units, rest


def smith_normal_form(matrix) -> SmithResult:
    """Invariant factors ``d_1 | d_2 | ...`` of an integer matrix (exact).

    Accepts nested sequences, numpy arrays or scipy sparse matrices.
    """
    if sparse.issparse(matrix):
        m = sparse.csc_matrix(matrix)
        cols = []
        for j in range(m.shape[1]):
            lo, hi = m.indptr[j], m.indptr[j + 1]
            cols.append({int(r): int(v) for r, v in zip(m.indices[lo:hi], m.data[lo:hi]) if v})
    else:
        arr = [list(map(int, row)) for row in matrix]
        n_cols = len(arr[0]) if arr else 0
        cols = [{i: arr[i][j] for i in range(len(arr)) if arr[i][j]} for j in range(n_cols)]
    units, rest = _sparse_unit_reduce(cols)
    factors = [1] * units
    if rest:
        rows = sorted({r for col in rest for r in col})
        where = {r: i for i, r in enumerate(rows)}
        dense = [[0] * len(rest) for _ in rows]
        for j, col in enumerate(rest):
            for r, v in col.items():
                dense[where[r]][j] = v
        log.debug("dense Smith normal form on a %dx%d residual", len(rows), len(rest))
        factors.extend(sorted(_dense_snf(dense)))
    return SmithResult(tuple(sorted(factors)))


def homology(c: GluedComplex, poset: FacePoset | None = None) -> HomologyResult:
    """Betti numbers and torsion coefficients of ``c`` over the integers."""
    if not is_graded(c):
        from .derived import derived_subdivision

        c = derived_subdivision(c, poset=poset)
        poset = None
    cc = chain_complex(c, poset)
    return homology_of_chain_complex(cc)


def homology_of_chain_complex(cc: ChainComplexZ) -> HomologyResult:
    d = cc.dimension
    snf: list[SmithResult | None] = [None]
    for k in range(1, d + 1):
        snf.append(smith_normal_form(cc.boundaries[k]))
    rank = [0] + [s.rank for s in snf[1:]] + [0]
    betti = tuple(cc.f_vector[k] - rank[k] - rank[k + 1] for k in range(d + 1))
    torsion = tuple(snf[k + 1].torsion if k < d else () for k in range(d + 1))
    return HomologyResult(betti, torsion)


def boundary_squares_vanish(cc: ChainComplexZ) -> bool:
    for k in range(2, cc.dimension + 1):
        prod = cc.boundaries[k - 1] @ cc.boundaries[k]
        if prod.count_nonzero():
            return False
    return True


def simplicial_homology_oracle(facets: Iterable[Sequence[int]]) -> HomologyResult:
    """Homology of an abstract simplicial complex from its facet list.

    Enumerates every face by vertex set, independent of the glued-complex
    machinery; used to cross-check :func:`homology`.
    """
    from itertools import combinations

    facets = [tuple(sorted(f)) for f in facets]
    d = max(len(f) for f in facets) - 1
    faces = [set() for _ in range(d + 1)]
    for f in facets:
        for k in range(len(f)):
            faces[k].update(combinations(f, k + 1))
    faces = [sorted(s) for s in faces]
    index = [{s: i for i, s in enumerate(fs)} for fs in faces]
    cc = ChainComplexZ(tuple(len(fs) for fs in faces), [None])
    for k in range(1, d + 1):
        rows, cols, vals = [], [], []
        for j, s in enumerate(faces[k]):
            for i in range(k + 1):
                rows.append(index[k - 1][s[:i] + s[i + 1:]])
                cols.append(j)
                vals.append((-1) ** i)
        cc.boundaries.append(sparse.csc_matrix((vals, (rows, cols)), shape=(len(faces[k - 1]), len(faces[k])), dtype=np.int64))
    return homology_of_chain_complex(cc)
