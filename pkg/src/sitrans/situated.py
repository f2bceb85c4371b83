"""Situated transition systems.

A situated boundary labels each edge of a reflexive graph with an exchange; a
situated system is a span between two such boundaries whose states carry
objects and whose transitions carry cells, so that every cell agrees with the
states it connects and with the boundary events it projects to.
"""
from __future__ import annotations

import itertools
from collections import OrderedDict
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import _portgraph as pg
from . import rgraph_span as rs
from .cornering import (
    Cell,
    I_EX,
    Exchange,
    HComp,
    HIdCell,
    MorCell,
    VComp,
    VIdCell,
    cell_equal,
    cell_tensor,
    exchange_dual,
    h_dual_witness,
    yank_normalize,
)
from .resource_theory import (
    DEFAULT_BUDGET,
    CompositionTypeError,
    Diagram,
    IntegerTheory,
    Obj,
    ObjWord,
    UnsupportedStructure,
    Verdict,
    Violation,
    ZMor,
    ZObj,
    obj_tensor,
)

TRIVIAL_ALIASES = ("", "eps", "ε", "_")
MAX_PERM_WORD = 6


class SituatedError(Exception):
    pass


class PathError(SituatedError):
    pass


# -- boundaries ------------------------------------------------------------------------

@dataclass
class SituatedBoundary:
    graph: rs.RGraph
    labels: dict
    theory: object = None

    def label(self, e: str) -> Exchange:
        x = self.labels.get(e)
        if x is None:
            if self.graph.is_trivial(e):
                return I_EX
            raise KeyError(e)
        return x

    def problems(self) -> list[Violation]:
        out = [Violation("graph", "graph", p) for p in self.graph.problems()]
        for e in self.graph.edges:
            if self.graph.is_trivial(e):
                if not self.label(e).is_unit:
                    out.append(Violation(f"labels.{e}", "trivial-label", "trivial edges must be labeled I"))
            elif e not in self.labels:
                out.append(Violation(f"labels.{e}", "missing-label", f"edge {e!r} has no exchange"))
        return out

    def same_as(self, other: "SituatedBoundary") -> bool:
        return self.graph == other.graph and all(self.label(e) == other.label(e) for e in self.graph.edges)


def unit_boundary(theory) -> SituatedBoundary:
    """The one-vertex boundary with only its trivial edge."""
    g = rs.unit_graph()
    return SituatedBoundary(g, {e: Exchange() for e in g.edges}, theory)


_TENSORS: OrderedDict = OrderedDict()


def boundary_tensor(a: SituatedBoundary, b: SituatedBoundary) -> SituatedBoundary:
    # memoized by identity, like graph products; boundaries are not mutated
    key = (id(a), id(b))
    hit = _TENSORS.get(key)
    if hit is not None and hit[0] is a and hit[1] is b:
        return hit[2]
    P, p0, p1 = rs.product(a.graph, b.graph)
    la, lb = a.label, b.label
    labels = {e: la(p0.emap[e]).tensor(lb(p1.emap[e])) for e in P.edges}
    out = SituatedBoundary(P, labels, a.theory or b.theory)
    _TENSORS[key] = (a, b, out)
    if len(_TENSORS) > 64:
        _TENSORS.popitem(last=False)
    return out


def s_dual(b: SituatedBoundary) -> SituatedBoundary:
    _require_compact(b.theory)
    return SituatedBoundary(b.graph, {e: exchange_dual(b.label(e), b.theory) for e in b.graph.edges}, b.theory)


def _require_compact(theory) -> None:
    if theory is None or not theory.compact_closed:
        raise UnsupportedStructure("this construction needs a compact closed theory")


# -- systems ----------------------------------------------------------------------------

@dataclass
class SituatedSystem:
    span: rs.Span
    vlabels: dict
    elabels: dict
    src: SituatedBoundary
    tgt: SituatedBoundary
    theory: object = None
    name: str = field(default="", compare=False)

    @property
    def apex(self) -> rs.RGraph:
        return self.span.apex

    @property
    def unit(self) -> Obj:
        return self.theory.unit


def validate_situated(sys: SituatedSystem) -> list[Violation]:
    out: list[Violation] = []
    for p in sys.span.problems():
        out.append(Violation("span", "span", p))
    if out:
        return out
    out += [Violation(f"src.{v.path}", v.kind, v.message) for v in sys.src.problems()]
    out += [Violation(f"tgt.{v.path}", v.kind, v.message) for v in sys.tgt.problems()]
    if sys.src.graph != sys.span.left:
        out.append(Violation("src", "left-boundary", "source boundary graph is not the left foot of the span"))
    if sys.tgt.graph != sys.span.right:
        out.append(Violation("tgt", "right-boundary", "target boundary graph is not the right foot of the span"))
    if out:
        return out
    g = sys.apex
    for vtx in g.vertices:
        if vtx not in sys.vlabels:
            out.append(Violation(f"vlabels.{vtx}", "missing-label", f"state {vtx!r} has no object"))
    if out:
        return out
    for e in g.edges.values():
        path = f"elabels.{e.id}"
        c = sys.elabels.get(e.id)
        if c is None:
            if g.is_trivial(e.id):
                continue  # implicit vertical identity
            out.append(Violation(path, "missing-label", f"transition {e.id!r} has no cell"))
            continue
        b = c.boundary
        if b.top != sys.vlabels[e.src]:
            out.append(Violation(path, "top-boundary",
                                 f"top {b.top.pretty()} != label {sys.vlabels[e.src].pretty()} of {e.src!r}"))
        if b.bottom != sys.vlabels[e.tgt]:
            out.append(Violation(path, "bottom-boundary",
                                 f"bottom {b.bottom.pretty()} != label {sys.vlabels[e.tgt].pretty()} of {e.tgt!r}"))
        want_l = sys.src.label(sys.span.leg0.emap[e.id])
        if b.left != want_l:
            out.append(Violation(path, "left-boundary", f"left {b.left.pretty()} != boundary label {want_l.pretty()}"))
        want_r = sys.tgt.label(sys.span.leg1.emap[e.id])
        if b.right != want_r:
            out.append(Violation(path, "right-boundary", f"right {b.right.pretty()} != boundary label {want_r.pretty()}"))
        if g.is_trivial(e.id) and yank_normalize(c) != VIdCell(sys.vlabels[e.src]):
            out.append(Violation(path, "trivial-edge", "trivial transition is not labeled by a vertical identity"))
    return out


def elabel(sys: SituatedSystem, e: str) -> Cell:
    c = sys.elabels.get(e)
    if c is None and sys.apex.is_trivial(e):
        return VIdCell(sys.vlabels[sys.apex.edges[e].src])
    if c is None:
        raise SituatedError(f"transition {e!r} has no cell")
    return c


def _theory(*systems) -> object:
    for s in systems:
        if s.theory is not None:
            return s.theory
    return None


def s_compose(r: SituatedSystem, s: SituatedSystem) -> SituatedSystem:
    """Synchronize ``r`` and ``s`` on their shared boundary; composite transitions
    carry the horizontal composite of the component cells."""
    if not r.tgt.same_as(s.src):
        raise SituatedError("cannot compose: target boundary of the first differs from source of the second")
    span, p0, p1 = rs.compose_parts(r.span, s.span)
    vlabels = {
        v: obj_tensor(r.vlabels[p0.vmap[v]], s.vlabels[p1.vmap[v]]) for v in span.apex.vertices
    }
    elabels = {}
    for e in span.apex.edges:
        if span.apex.is_trivial(e):
            elabels[e] = VIdCell(vlabels[span.apex.edges[e].src])
        else:
            elabels[e] = HComp(elabel(r, p0.emap[e]), elabel(s, p1.emap[e]))
    return SituatedSystem(span, vlabels, elabels, r.src, s.tgt, _theory(r, s))


def s_identity(b: SituatedBoundary) -> SituatedSystem:
    theory = b.theory
    unit = theory.unit if theory is not None else ObjWord()
    span = rs.span_identity(b.graph)
    vlabels = {v: unit for v in b.graph.vertices}
    elabels = {
        e: VIdCell(unit) if b.graph.is_trivial(e) else HIdCell(b.label(e), unit) for e in b.graph.edges
    }
    return SituatedSystem(span, vlabels, elabels, b, b, theory)


def s_tensor(r: SituatedSystem, s: SituatedSystem) -> SituatedSystem:
    span, p0, p1 = rs.tensor_parts(r.span, s.span)
    vlabels = {
        v: obj_tensor(r.vlabels[p0.vmap[v]], s.vlabels[p1.vmap[v]]) for v in span.apex.vertices
    }
    elabels = {}
    for e in span.apex.edges:
        if span.apex.is_trivial(e):
            elabels[e] = VIdCell(vlabels[span.apex.edges[e].src])
        else:
            elabels[e] = cell_tensor(elabel(r, p0.emap[e]), elabel(s, p1.emap[e]))
    return SituatedSystem(
        span, vlabels, elabels, boundary_tensor(r.src, s.src), boundary_tensor(r.tgt, s.tgt), _theory(r, s)
    )


def iso_system(f: rs.GraphHom, src: SituatedBoundary, tgt: SituatedBoundary, reverse: bool = False) -> SituatedSystem:
    """The system of a boundary isomorphism ``f : src -> tgt`` (or its inverse
    when ``reverse``), with every transition a horizontal identity."""
    theory = src.theory or tgt.theory
    unit = theory.unit if theory is not None else ObjWord()
    # the span and its identity cells are coherent by construction; only the
    # labels can disagree
    for e in f.dom.edges:
        if src.label(e) != tgt.label(f.emap[e]):
            raise SituatedError(f"edge {e!r}: hom does not preserve exchange labels")
    if reverse:
        span = rs.span_from_hom_op(f)
        left, right = tgt, src
    else:
        span = rs.span_from_hom(f)
        left, right = src, tgt
    g = span.apex
    vlabels = {v: unit for v in g.vertices}
    elabels = {e: VIdCell(unit) if g.is_trivial(e) else HIdCell(src.label(e), unit) for e in g.edges}
    return SituatedSystem(span, vlabels, elabels, left, right, theory)


# -- equivalence -----------------------------------------------------------------------------

@dataclass
class SituatedEquivalence:
    alpha: rs.SpanIso
    iota: dict  # apex vertex of r -> iso (permutation diagram or Z identity)


def _word_perms(a: Obj, b: Obj, theory) -> list:
    """Permutation isos ``a -> b`` (Z and empty words: only the identity)."""
    if isinstance(a, ZObj):
        return [ZMor(a.value)] if a == b else []
    if sorted(a.letters) != sorted(b.letters):
        return []
    if len(a.letters) > MAX_PERM_WORD:
        # beyond the search bound only the identity is tried (sound, incomplete)
        return [Diagram.identity(a, theory)] if a == b else []
    n = len(a.letters)
    out, seen = [], set()
    for perm in itertools.permutations(range(n)):
        if any(a.letters[perm[j]] != b.letters[j] for j in range(n)) or perm in seen:
            continue
        seen.add(perm)
        out.append(Diagram(a, b, pg.permutation_graph(a.letters, perm), theory))
    # identity first keeps the search deterministic and cheap
    out.sort(key=lambda d: 0 if d.is_identity() else 1)
    return out


def s_equiv(
    r: SituatedSystem,
    s: SituatedSystem,
    budget: int = DEFAULT_BUDGET,
    size_cap: int = rs.DEFAULT_SIZE_CAP,
) -> SituatedEquivalence | None:
    """Search for a span isomorphism plus a natural family of isos between
    situations.  Unknown cell comparisons count as failures."""
    if not (r.src.same_as(s.src) and r.tgt.same_as(s.tgt)):
        return None
    theory = _theory(r, s)
    gr, gs = r.apex, s.apex
    cache: dict = {}

    def square(t: str, u: str, iota: dict) -> bool:
        et = gr.edges[t]
        ia, ib = iota[et.src], iota[et.tgt]
        key = (t, u, id(ia), id(ib))
        if key not in cache:
            lhs = _vthen(elabel(r, t), ib)
            rhs = _vfirst(ia, elabel(s, u))
            try:
                cache[key] = cell_equal(lhs, rhs, budget) is Verdict.TRUE
            except CompositionTypeError:
                cache[key] = False
        return cache[key]

    # transitions of s grouped by endpoints and leg images: the only
    # candidates for the partner of a transition of r
    by_key: dict = {}
    for u in gs.edges.values():
        by_key.setdefault((u.src, u.tgt, s.span.leg0.emap[u.id], s.span.leg1.emap[u.id]), []).append(u.id)
    incident: dict = {v: [] for v in gr.vertices}
    for e in gr.edges.values():
        incident[e.src].append(e)
        if e.tgt != e.src:
            incident[e.tgt].append(e)

    perms: dict = {}  # kept alive: the square cache keys on iso identity

    def decorate(v: str, w: str) -> list:
        key = (r.vlabels[v], s.vlabels[w])
        if key not in perms:
            perms[key] = _word_perms(*key, theory)
        return perms[key]

    def accept(v: str, vmap: dict, iota: dict) -> bool:
        # every transition between placed vertices needs a partner whose
        # naturality square commutes
        for e in incident[v]:
            if e.src not in vmap or e.tgt not in vmap:
                continue
            key = (vmap[e.src], vmap[e.tgt], r.span.leg0.emap[e.id], r.span.leg1.emap[e.id])
            if not any(square(e.id, u, iota) for u in by_key.get(key, ())):
                return False
        return True

    for vmap, iota in rs.iter_decorated_isos(r.span, s.span, decorate, accept, size_cap):
        emap = rs.match_edges(r.span, s.span, vmap, lambda t, u: square(t, u, iota))
        if emap is not None:
            return SituatedEquivalence(rs.SpanIso(vmap, emap), iota)
    return None


def _vthen(c: Cell, m) -> Cell:
    return c if m.is_identity() else VComp(c, MorCell(m))


def _vfirst(m, c: Cell) -> Cell:
    return c if m.is_identity() else VComp(MorCell(m), c)


# -- runs --------------------------------------------------------------------------------------

def resolve_path(sys: SituatedSystem, path: Sequence[str], start: str | None = None) -> tuple[list[str], str]:
    """Check a path of edge ids, resolving trivial-edge aliases, and return it
    with its start vertex."""
    g = sys.apex
    cur = start
    out = []
    for i, e in enumerate(path):
        if e in TRIVIAL_ALIASES:
            if cur is None:
                raise PathError(f"step {i}: a trivial step needs a known current state")
            e = g.trivial[cur]
        if e not in g.edges:
            raise PathError(f"step {i}: unknown transition {e!r}")
        edge = g.edges[e]
        if cur is not None and edge.src != cur:
            raise PathError(f"step {i}: transition {e!r} starts at {edge.src!r}, not at {cur!r}")
        if start is None and i == 0:
            start = edge.src
        cur = edge.tgt
        out.append(e)
    if start is None:
        raise PathError("an empty path needs a start state")
    if start not in g.vertices:
        raise PathError(f"unknown state {start!r}")
    return out, start


def run(sys: SituatedSystem, path: Sequence[str], start: str | None = None) -> Cell:
    """Material history of a path: the vertical composite of its cells."""
    edges, start = resolve_path(sys, path, start)
    if not edges:
        return VIdCell(sys.vlabels[start])
    out = elabel(sys, edges[0])
    for e in edges[1:]:
        out = VComp(out, elabel(sys, e))
    return out


def pair_index(comp: SituatedSystem, r: SituatedSystem, s: SituatedSystem) -> dict:
    """Composite edge id for each pair of component edge ids."""
    _, p0, p1 = rs.compose_parts(r.span, s.span)
    return {(p0.emap[e], p1.emap[e]): e for e in comp.apex.edges}


def resolve_pairs(
    r: SituatedSystem,
    s: SituatedSystem,
    pairs: Iterable[tuple[str, str]],
    start: tuple[str, str] | None = None,
) -> tuple[list[str], list[str], str | None, str | None]:
    """Split a path of pairs into component paths, resolving trivial aliases."""
    left, right = [], []
    cur_r, cur_s = start if start else (None, None)
    for i, (t, u) in enumerate(pairs):
        if t in TRIVIAL_ALIASES:
            if cur_r is None:
                raise PathError(f"step {i}: cannot resolve a trivial step before the left state is known")
            t = r.apex.trivial[cur_r]
        if u in TRIVIAL_ALIASES:
            if cur_s is None:
                raise PathError(f"step {i}: cannot resolve a trivial step before the right state is known")
            u = s.apex.trivial[cur_s]
        for sys, e, side in ((r, t, "left"), (s, u, "right")):
            if e not in sys.apex.edges:
                raise PathError(f"step {i}: unknown {side} transition {e!r}")
        if i == 0 and start is None:
            start = (r.apex.edges[t].src, s.apex.edges[u].src)
        cur_r, cur_s = r.apex.edges[t].tgt, s.apex.edges[u].tgt
        left.append(t)
        right.append(u)
    return left, right, start[0] if start else None, start[1] if start else None


def compositionality_check(
    r: SituatedSystem,
    s: SituatedSystem,
    pairs: Sequence[tuple[str, str]],
    comp: SituatedSystem | None = None,
    start: tuple[str, str] | None = None,
    budget: int = DEFAULT_BUDGET,
) -> Verdict:
    """Compare the composite system's history with the horizontal composite
    of the component histories."""
    comp = comp or s_compose(r, s)
    left, right, a, b = resolve_pairs(r, s, pairs, start)
    index = pair_index(comp, r, s)
    path = []
    for i, key in enumerate(zip(left, right)):
        if key not in index:
            raise PathError(f"step {i}: {key} is not a synchronized transition of the composite")
        path.append(index[key])
    cstart = rs.pair_id(a, b) if a is not None else None
    whole = run(comp, path, cstart)
    parts = HComp(run(r, left, a), run(s, right, b))
    return cell_equal(whole, parts, budget)


# -- compact structure ----------------------------------------------------------------------------

def s_cc_unit(b: SituatedBoundary, dual: SituatedBoundary | None = None) -> SituatedSystem:
    """``1 -> b† ⊗ b`` over the span ``1 <- U -> U × U``."""
    _require_compact(b.theory)
    theory = b.theory
    span = rs.cc_unit(b.graph)
    tgt = boundary_tensor(dual or s_dual(b), b)
    g = span.apex
    unit = theory.unit
    elabels = {}
    for e in g.edges:
        if g.is_trivial(e):
            elabels[e] = VIdCell(unit)
        else:
            elabels[e] = h_dual_witness(b.label(e), theory, unit)[0]
    return SituatedSystem(span, {v: unit for v in g.vertices}, elabels, unit_boundary(theory), tgt, theory)


def s_cc_counit(b: SituatedBoundary, dual: SituatedBoundary | None = None) -> SituatedSystem:
    """``b ⊗ b† -> 1`` over the span ``U × U <- U -> 1``."""
    _require_compact(b.theory)
    theory = b.theory
    span = rs.cc_counit(b.graph)
    src = boundary_tensor(b, dual or s_dual(b))
    g = span.apex
    unit = theory.unit
    elabels = {}
    for e in g.edges:
        if g.is_trivial(e):
            elabels[e] = VIdCell(unit)
        else:
            elabels[e] = h_dual_witness(b.label(e), theory, unit)[1]
    return SituatedSystem(span, {v: unit for v in g.vertices}, elabels, src, unit_boundary(theory), theory)


def s_snakes(b: SituatedBoundary) -> tuple[SituatedSystem, SituatedSystem]:
    """Both zig-zag composites, with unitors and associators made explicit.
    The first should be equivalent to the identity on ``b``, the second to
    the identity on its dual."""
    bd = s_dual(b)
    one = unit_boundary(b.theory)
    eta, eps = s_cc_unit(b, bd), s_cc_counit(b, bd)
    x = b.graph

    def chain(items):
        out = items[0]
        for it in items[1:]:
            out = s_compose(out, it)
        return out

    b1 = boundary_tensor(b, one)
    b_dd = boundary_tensor(b, boundary_tensor(bd, b))
    bd_d = boundary_tensor(boundary_tensor(b, bd), b)
    first = chain([
        iso_system(rs.right_unitor(x), b1, b, reverse=True),
        s_tensor(s_identity(b), eta),
        iso_system(rs.associator(x, x, x), bd_d, b_dd, reverse=True),
        s_tensor(eps, s_identity(b)),
        iso_system(rs.left_unitor(x), boundary_tensor(one, b), b),
    ])
    d1 = boundary_tensor(one, bd)
    dd_d = boundary_tensor(boundary_tensor(bd, b), bd)
    d_dd = boundary_tensor(bd, boundary_tensor(b, bd))
    second = chain([
        iso_system(rs.left_unitor(x), d1, bd, reverse=True),
        s_tensor(eta, s_identity(bd)),
        iso_system(rs.associator(x, x, x), dd_d, d_dd),
        s_tensor(s_identity(bd), eps),
        iso_system(rs.right_unitor(x), boundary_tensor(bd, one), bd),
    ])
    return first, second


def is_z(sys: SituatedSystem) -> bool:
    return isinstance(sys.theory, IntegerTheory)


__all__ = [
    "SituatedBoundary",
    "SituatedSystem",
    "SituatedEquivalence",
    "SituatedError",
    "PathError",
    "validate_situated",
    "s_compose",
    "s_identity",
    "s_tensor",
    "s_equiv",
    "s_dual",
    "s_cc_unit",
    "s_cc_counit",
    "s_snakes",
    "run",
    "compositionality_check",
    "boundary_tensor",
    "unit_boundary",
    "iso_system",
    "elabel",
]
