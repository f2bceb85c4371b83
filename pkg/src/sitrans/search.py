"""Bounded enumeration of free cells, used to look for inverses.

Cells are built bottom-up by size (number of leaf cells), keeping one
representative per flattened port graph and boundary.  Objects on the way are
limited to short words and short exchanges, which keeps every level finite.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from . import _portgraph as pg
from .cornering import (
    IN,
    OUT,
    AbsorbLeft,
    AbsorbRight,
    Cell,
    Crossing,
    EmitLeft,
    EmitRight,
    Exchange,
    HComp,
    HIdCell,
    MorCell,
    VComp,
    VIdCell,
    cell_equal,
    exchange_cell,
    flatten,
)
from .resource_theory import FreeTheory, ObjWord, Verdict, obj_tensor


@dataclass
class Bounds:
    max_size: int = 8
    max_word: int = 2
    max_exchange: int = 2

    def admits(self, c: Cell) -> bool:
        b = c.boundary
        return (
            len(b.top) <= self.max_word
            and len(b.bottom) <= self.max_word
            and len(b.left) <= self.max_exchange
            and len(b.right) <= self.max_exchange
        )


def leaf_cells(theory: FreeTheory, letters) -> list[Cell]:
    """Single-letter corners, identities and crossings, the generators, and
    symmetries between letters."""
    words = [theory.word(a) for a in letters]
    entries = [Exchange(((w, p),)) for w in words for p in (OUT, IN)]
    out: list[Cell] = []
    for w in words:
        out += [EmitRight(w), AbsorbLeft(w), EmitLeft(w), AbsorbRight(w), VIdCell(w)]
    out += [HIdCell(x, ObjWord()) for x in entries]
    out += [Crossing(w, x) for w in words for x in entries]
    for g in theory.sig.morphism_generators:
        if set(g.dom) | set(g.cod) <= set(letters):
            out.append(MorCell(theory.generator(g.name)))
    for a, b in itertools.product(words, repeat=2):
        out.append(MorCell(theory.symmetry(a, b)))
    return out


def _key(c: Cell, graph=None):
    b = c.boundary
    key, _ = (graph or flatten(c)).canonical()
    return ((b.top, b.bottom, b.left, b.right), key)


def enumerate_cells(theory: FreeTheory, letters, bounds: Bounds = Bounds()) -> tuple[dict[int, list[Cell]], set]:
    """Cells by size, one per flattened class, within ``bounds``, together
    with the set of class keys."""
    seen: set = set()
    levels: dict[int, list[Cell]] = {}
    by_top: dict[int, dict] = {}
    by_left: dict[int, dict] = {}
    graphs: dict[int, pg.PortGraph] = {}  # flattened graph of each kept cell, by id

    def keep(n: int, c: Cell, graph) -> None:
        graphs[id(c)] = graph
        levels.setdefault(n, []).append(c)
        by_top.setdefault(n, {}).setdefault(c.top, []).append(c)
        by_left.setdefault(n, {}).setdefault(c.left, []).append(c)

    for c in leaf_cells(theory, letters):
        if bounds.admits(c):
            graph = flatten(c)
            k = _key(c, graph)
            if k not in seen:
                seen.add(k)
                keep(1, c, graph)
    mx, mw = bounds.max_exchange, bounds.max_word
    for n in range(2, bounds.max_size + 1):
        for i in range(1, n):
            j = n - i
            tops, lefts = by_top.get(j, {}), by_left.get(j, {})
            for c1 in levels.get(i, ()):
                b1 = c1.boundary
                g1 = graphs[id(c1)]
                for c2 in tops.get(b1.bottom, ()):
                    b2 = c2.boundary
                    if len(b1.left) + len(b2.left) > mx or len(b1.right) + len(b2.right) > mx:
                        continue
                    graph = pg.vcompose(g1, graphs[id(c2)])
                    key, exact = graph.canonical()
                    k = ((b1.top, b2.bottom, b1.left.tensor(b2.left), b1.right.tensor(b2.right)), key)
                    if exact and k in seen:
                        continue
                    seen.add(k)
                    keep(n, VComp(c1, c2), graph)
                for c2 in lefts.get(b1.right, ()):
                    b2 = c2.boundary
                    if len(b1.top) + len(b2.top) > mw or len(b1.bottom) + len(b2.bottom) > mw:
                        continue
                    graph = pg.hcompose(g1, graphs[id(c2)])
                    key, exact = graph.canonical()
                    k = ((obj_tensor(b1.top, b2.top), obj_tensor(b1.bottom, b2.bottom), b1.left, b2.right), key)
                    if exact and k in seen:
                        continue
                    seen.add(k)
                    keep(n, HComp(c1, c2), graph)
    return levels, seen


@dataclass
class InverseSearch:
    forward: Cell
    bounds: Bounds
    classes: int = 0
    forward_found: bool = False
    candidates: list[Cell] = field(default_factory=list)
    inverses: list[Cell] = field(default_factory=list)
    unknown: int = 0

    @property
    def no_inverse(self) -> bool:
        return not self.inverses and self.unknown == 0


def search_inverse(forward: Cell, theory: FreeTheory, letters, bounds: Bounds = Bounds(), budget: int = 500) -> InverseSearch:
    """Look for a two-sided horizontal inverse of ``forward`` among bounded cells."""
    b = forward.boundary
    levels, keys = enumerate_cells(theory, letters, bounds)
    report = InverseSearch(forward, bounds, classes=len(keys))
    report.forward_found = _key(forward) in keys
    unit = forward.top
    for cells in levels.values():
        for c in cells:
            cb = c.boundary
            if (cb.top, cb.bottom, cb.left, cb.right) != (b.bottom, b.top, b.right, b.left):
                continue
            report.candidates.append(c)
            one = cell_equal(HComp(forward, c), HIdCell(b.left, unit), budget)
            two = cell_equal(HComp(c, forward), HIdCell(b.right, unit), budget)
            if one is Verdict.TRUE and two is Verdict.TRUE:
                report.inverses.append(c)
            elif Verdict.UNKNOWN in (one, two):
                report.unknown += 1
    return report


def bread_asymmetry(bounds: Bounds = Bounds(), theory: FreeTheory | None = None) -> InverseSearch:
    """The exchange flour°⊗bread• -> bread•⊗flour° and its (absent) inverse."""
    from .fixtures import bread_theory

    theory = theory or bread_theory()
    a, b = theory.word("flour"), theory.word("bread")
    return search_inverse(exchange_cell(a, b, theory), theory, ("flour", "bread"), bounds)
