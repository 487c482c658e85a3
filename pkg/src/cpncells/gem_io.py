"""Graph encodings: coloured-graph text I/O, canonical codes and reference data.

Text format (one block per colour, 0-based ids)::

    Colour 0:
    ((0,8),(1,7),(2,6))

    Colour 1:
    ...

The parser also reads wrapped listings, missing outer parentheses, missing or
trailing separators, and 1-based ids via ``index_base``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from importlib import resources
from typing import Iterable, Sequence

import numpy as np

from .complex_core import FREE, Certificate, GluedComplex
from .errors import Disconnected, MatchingViolation, NotIdentityGlued, ParseError

Arc = tuple[int, int]


@dataclass(frozen=True)
class ColouredGraph:
    """Nodes ``0..node_count-1`` with one partial matching per colour."""

    node_count: int
    colours: tuple[tuple[Arc, ...], ...]

    def __post_init__(self):
        norm = []
        for c, arcs in enumerate(self.colours):
            seen: set[int] = set()
            out = []
            for a, b in arcs:
                a, b = int(a), int(b)
                if a == b:
                    raise MatchingViolation(f"loop ({a},{a}) in colour {c}")
                for x in (a, b):
                    if not 0 <= x < self.node_count:
                        raise MatchingViolation(f"node {x} of colour {c} is outside 0..{self.node_count - 1}")
                    if x in seen:
                        raise MatchingViolation(f"node {x} appears twice in colour {c}")
                    seen.add(x)
                out.append((min(a, b), max(a, b)))
            norm.append(tuple(sorted(out)))
        object.__setattr__(self, "colours", tuple(norm))

    @property
    def dimension(self) -> int:
        return len(self.colours) - 1

    def partners(self) -> np.ndarray:
        """``(colours, nodes)`` array of matched nodes, -1 where unmatched."""
        out = np.full((len(self.colours), self.node_count), -1, dtype=np.int64)
        for c, arcs in enumerate(self.colours):
            for a, b in arcs:
                out[c, a], out[c, b] = b, a
        return out

    def is_perfect(self) -> bool:
        return all(2 * len(arcs) == self.node_count for arcs in self.colours)

    def relabel(self, perm: Sequence[int]) -> "ColouredGraph":
        """Graph with node ``x`` renamed ``perm[x]``."""
        return ColouredGraph(self.node_count, tuple(tuple((perm[a], perm[b]) for a, b in arcs) for arcs in self.colours))

    def reversed_colours(self) -> "ColouredGraph":
        return ColouredGraph(self.node_count, self.colours[::-1])


@dataclass(frozen=True)
class GraphAutomorphismData:
    perm: tuple[int, ...]
    reversing: bool = False

    @classmethod
    def from_cycles(cls, cycles: Sequence[Sequence[int]], node_count: int, reversing: bool = False) -> "GraphAutomorphismData":
        perm = list(range(node_count))
        for cyc in cycles:
            for k, x in enumerate(cyc):
                perm[x] = cyc[(k + 1) % len(cyc)]
        return cls(tuple(perm), reversing)


# ---------------------------------------------------------------- text I/O


def export_gem(g: ColouredGraph) -> str:
    blocks = []
    for c, arcs in enumerate(g.colours):
        body = ",".join(f"({a},{b})" for a, b in arcs)
        blocks.append(f"Colour {c}:\n({body})\n")
    return "\n".join(blocks)


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def where(self, pos: int | None = None) -> tuple[int, int]:
        pos = self.pos if pos is None else pos
        line = self.text.count("\n", 0, pos) + 1
        col = pos - (self.text.rfind("\n", 0, pos) + 1) + 1
        return line, col

    def error(self, msg: str) -> ParseError:
        line, col = self.where()
        return ParseError(f"{msg} at line {line}, column {col}", line, col)

    def skip(self, chars: str = " \t\r\n") -> None:
        while self.pos < len(self.text) and self.text[self.pos] in chars:
            self.pos += 1

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str) -> None:
        self.skip()
        if self.peek() != ch:
            found = repr(self.peek()) if self.peek() else "end of input"
            raise self.error(f"expected {ch!r}, found {found}")
        self.pos += 1

    def integer(self) -> int:
        self.skip()
        start = self.pos
        while self.peek().isdigit():
            self.pos += 1
        if start == self.pos:
            raise self.error("expected a non-negative integer")
        return int(self.text[start:self.pos])

    def word(self, w: str) -> bool:
        self.skip()
        if self.text.startswith(w, self.pos):
            self.pos += len(w)
            return True
        return False


def _tuples(sc: _Scanner, stop) -> list[list[int]]:
    """Parenthesised integer tuples until ``stop()`` is true, separators optional."""
    out = []
    while True:
        sc.skip(" \t\r\n,")
        if stop():
            return out
        sc.expect("(")
        items = [sc.integer()]
        while True:
            sc.skip()
            if sc.peek() == ",":
                sc.pos += 1
                items.append(sc.integer())
            elif sc.peek() == ")":
                sc.pos += 1
                break
            else:
                raise sc.error("expected ',' or ')' inside a tuple")
        out.append(items)


def import_gem(text: str, index_base: int = 0, node_count: int | None = None) -> ColouredGraph:
    """Parse graph-encoding text; colours must appear as ``0, 1, 2, ...``."""
    sc = _Scanner(text)
    colours: list[list[Arc]] = []
    while True:
        sc.skip()
        if not sc.peek():
            break
        if not sc.word("Colour"):
            raise sc.error("expected 'Colour <c>:'")
        c = sc.integer()
        if c != len(colours):
            raise sc.error(f"colour {c} out of order (expected {len(colours)})")
        sc.expect(":")
        sc.skip()
        wrapped = sc.peek() == "(" and sc.text[sc.pos + 1:].lstrip(" \t\r\n").startswith(("(", ")"))
        if wrapped:
            sc.pos += 1
            pairs = _tuples(sc, lambda: sc.peek() == ")")
            sc.pos += 1
        else:
            pairs = _tuples(sc, lambda: sc.peek() in ("", "C"))
        arcs = []
        for p in pairs:
            if len(p) != 2:
                raise sc.error(f"arc {tuple(p)} in colour {c} is not a pair")
            a, b = p[0] - index_base, p[1] - index_base
            if a < 0 or b < 0:
                raise sc.error(f"node id below index base {index_base}")
            arcs.append((a, b))
        colours.append(arcs)
    if not colours:
        raise sc.error("no colour blocks found")
    if node_count is None:
        node_count = 1 + max((max(a, b) for arcs in colours for a, b in arcs), default=-1)
    return ColouredGraph(node_count, tuple(tuple(a) for a in colours))


def parse_cycles(text: str, index_base: int = 1) -> list[tuple[int, ...]]:
    """Cycle notation ``(a,b)(c,d,e)...`` with arbitrary whitespace."""
    sc = _Scanner(text)
    cycles = _tuples(sc, lambda: sc.peek() == "")
    return [tuple(x - index_base for x in cyc) for cyc in cycles]


# ---------------------------------------------------------------- complexes


def complex_to_gem(c: GluedComplex) -> ColouredGraph:
    if not c.is_identity_glued:
        raise NotIdentityGlued("only identity-glued complexes have a graph encoding")
    nb = c.neighbors
    colours = []
    for i in range(c.dimension + 1):
        f = np.arange(c.facet_count)
        g = nb[:, i]
        keep = (g != FREE) & (f < g)
        colours.append(tuple(zip(f[keep].tolist(), g[keep].tolist())))
    return ColouredGraph(c.facet_count, tuple(colours))


def gem_to_complex(g: ColouredGraph) -> GluedComplex:
    return GluedComplex(g.dimension, g.partners().T.copy())


# ---------------------------------------------------------------- isomorphism


def _traversal(partner: list[list[int]], start: int, best: list[int] | None):
    """Colour-ordered BFS code from ``start``; None if it exceeds ``best``.

    Returns ``(code, order)``; ``order[k]`` is the node labelled ``k``.
    """
    label = {start: 0}
    order = [start]
    queue = deque([start])
    code: list[int] = []
    smaller = best is None
    while queue:
        x = queue.popleft()
        for row in partner:
            y = row[x]
            if y < 0:
                v = 0
            else:
                if y not in label:
                    label[y] = len(order)
                    order.append(y)
                    queue.append(y)
                v = label[y] + 1
            if not smaller:
                b = best[len(code)]
                if v > b:
                    return None, None
                if v < b:
                    smaller = True
            code.append(v)
    return code, order


def _partner_lists(g: ColouredGraph, reverse: bool) -> list[list[int]]:
    p = g.partners().tolist()
    return p[::-1] if reverse else p


def _check_connected(g: ColouredGraph) -> None:
    if g.node_count == 0:
        return
    _, order = _traversal(_partner_lists(g, False), 0, None)
    if len(order) != g.node_count:
        raise Disconnected(f"graph has {g.node_count} nodes but only {len(order)} are reachable from node 0")


def canonical_code(g: ColouredGraph, reverse: bool = False) -> bytes:
    """Isomorphism-invariant code of a connected coloured graph.

    The minimum over start nodes of a colour-ordered breadth-first traversal
    code.  With ``reverse`` the colours are first renamed ``c -> d - c``.
    """
    _check_connected(g)
    partner = _partner_lists(g, reverse)
    best = None
    for s in range(g.node_count):
        code, _ = _traversal(partner, s, best)
        if code is not None:
            best = code
    head = [g.node_count, len(g.colours)]
    return b"".join(int(x).to_bytes(4, "big") for x in head + (best or []))


def find_isomorphism(g: ColouredGraph, h: ColouredGraph, reverse: bool = False) -> tuple[int, ...] | None:
    """Node map ``phi`` with ``phi(g) == h`` (colours of ``h`` renamed ``c -> d-c``
    when ``reverse``), or None."""
    if g.node_count != h.node_count or len(g.colours) != len(h.colours):
        return None
    if g.node_count == 0:
        return ()
    _check_connected(g)
    pg = _partner_lists(g, False)
    ph = _partner_lists(h, reverse)
    code_g, order_g = _traversal(pg, 0, None)
    for s in range(h.node_count):
        code_h, order_h = _traversal(ph, s, code_g)
        if code_h is not None and code_h == code_g:
            phi = [0] * g.node_count
            for x, y in zip(order_g, order_h):
                phi[x] = y
            return tuple(phi)
    return None


def verify_automorphism(g: ColouredGraph, a: GraphAutomorphismData) -> Certificate:
    """Check that ``a`` maps colour ``c`` arcs onto colour ``c`` (or ``d - c``
    when reversing) and has order at most two."""
    p = a.perm
    if sorted(p) != list(range(g.node_count)):
        return Certificate(False, None, "not a permutation of the nodes")
    d = g.dimension
    for c, arcs in enumerate(g.colours):
        target = set(g.colours[d - c if a.reversing else c])
        for x, y in arcs:
            img = (min(p[x], p[y]), max(p[x], p[y]))
            if img not in target:
                return Certificate(False, (c, (x, y)), f"arc ({x},{y}) of colour {c} maps to non-arc {img}")
    for x in range(g.node_count):
        if p[p[x]] != x:
            return Certificate(False, ("order", x), f"node {x} is not fixed by the square")
    return Certificate(True)


def conjugate_automorphism(a: GraphAutomorphismData, phi: Sequence[int]) -> GraphAutomorphismData:
    """Transport ``a`` along the isomorphism ``phi``: returns ``phi a phi^-1``."""
    inv = [0] * len(phi)
    for x, y in enumerate(phi):
        inv[y] = x
    return GraphAutomorphismData(tuple(phi[a.perm[inv[y]]] for y in range(len(phi))), a.reversing)


# ---------------------------------------------------------------- reference data


def reference_text(name: str) -> str:
    return resources.files("cpncells").joinpath("data", "reference", name).read_text(encoding="utf-8")


def load_reference_gem(name: str) -> ColouredGraph:
    """``"s2xs2"`` or ``"cp2"``: a full listing with 0-based ids."""
    return import_gem(reference_text(f"{name}.gem"))


@dataclass(frozen=True)
class Expansion:
    graph: ColouredGraph
    index_base: int
    closure_arcs: int
    representative_arcs: int
    preserving: GraphAutomorphismData
    reversing: GraphAutomorphismData


def _close(colours: list[set[Arc]], autos: Iterable[GraphAutomorphismData]) -> list[set[Arc]]:
    d = len(colours) - 1
    autos = list(autos)
    changed = True
    while changed:
        changed = False
        for a in autos:
            p = a.perm
            for c in range(d + 1):
                tc = d - c if a.reversing else c
                new = {(min(p[x], p[y]), max(p[x], p[y])) for x, y in colours[c]} - colours[tc]
                if new:
                    colours[tc] |= new
                    changed = True
    return colours


def expand_representatives(rep_text: str, preserving_text: str, reversing_text: str,
                           node_count: int, dimension: int) -> Expansion:
    """Full graph from orbit-representative arcs and the two automorphisms.

    Automorphism cycles are 1-based.  Representative ids are tried as 1-based,
    then 0-based; the first offset whose closure is a perfect matching in every
    colour is used.  Raises MatchingViolation if neither validates.
    """
    pres = GraphAutomorphismData.from_cycles(parse_cycles(preserving_text, 1), node_count, False)
    rev = GraphAutomorphismData.from_cycles(parse_cycles(reversing_text, 1), node_count, True)
    failures = []
    for base in (1, 0):
        try:
            reps = import_gem(rep_text, index_base=base, node_count=node_count)
        except MatchingViolation as exc:
            failures.append(f"base {base}: {exc}")
            continue
        colours = [set(arcs) for arcs in reps.colours]
        colours += [set() for _ in range(dimension + 1 - len(colours))]
        colours = _close(colours, (pres, rev))
        try:
            g = ColouredGraph(node_count, tuple(tuple(s) for s in colours))
        except MatchingViolation as exc:
            failures.append(f"base {base}: {exc}")
            continue
        if not g.is_perfect():
            sizes = [len(s) for s in colours]
            failures.append(f"base {base}: closure arc counts {sizes} are not perfect matchings")
            continue
        return Expansion(g, base, sum(len(s) for s in colours), sum(len(a) for a in reps.colours), pres, rev)
    raise MatchingViolation("no index base validates: " + "; ".join(failures))


_EXPANSIONS = {"cp3": (120, 6), "cp4": (1680, 8)}


def load_expanded(name: str) -> Expansion:
    """``"cp3"`` or ``"cp4"`` expanded from the shipped representative data."""
    n, d = _EXPANSIONS[name]
    return expand_representatives(
        reference_text(f"{name}_representatives.gem"),
        reference_text(f"{name}_preserving.cycles"),
        reference_text(f"{name}_reversing.cycles"),
        n, d,
    )
