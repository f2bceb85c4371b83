"""Reflexive graphs, their homomorphisms, and spans composed by pullback.

Vertex and edge ids are strings and every container keeps insertion order, so
all enumerations (products, pullbacks, isomorphism search) are deterministic.
Trivial edges are named ``eps:<vertex>``; vertices and edges of products and
pullbacks are named ``<left>|<right>``.  Components that contain ``|`` are
parenthesized, in pair names and in trivial edge names alike.
"""
from __future__ import annotations

import functools
from collections import Counter, OrderedDict
from dataclasses import dataclass
from typing import Callable, Iterator

DEFAULT_SIZE_CAP = 64
UNIT_VERTEX = "*"


class GraphError(Exception):
    pass


class SizeCapError(GraphError):
    pass


def trivial_id(v: str) -> str:
    return f"eps:({v})" if "|" in v else f"eps:{v}"


@functools.lru_cache(maxsize=1 << 16)
def pair_id(a: str, b: str) -> str:
    if "|" in a:
        a = f"({a})"
    if "|" in b:
        b = f"({b})"
    return f"{a}|{b}"


@dataclass(frozen=True)
class Edge:
    id: str
    src: str
    tgt: str


class RGraph:
    """Finite reflexive graph."""

    __slots__ = ("vertices", "edges", "trivial", "_tri_set")

    def __init__(self, vertices, edges, trivial: dict[str, str]):
        self.vertices: tuple[str, ...] = tuple(vertices)
        self.edges: dict[str, Edge] = {}
        for e in edges:
            if e.id in self.edges:
                raise GraphError(f"duplicate edge id {e.id!r}")
            self.edges[e.id] = e
        self.trivial: dict[str, str] = dict(trivial)
        self._tri_set = frozenset(self.trivial.values())

    @classmethod
    def build(cls, vertices, edges=()) -> "RGraph":
        """Graph with the given nontrivial edges ``(id, src, tgt)`` and implicit trivial edges."""
        vertices = tuple(vertices)
        all_edges = [Edge(trivial_id(v), v, v) for v in vertices]
        all_edges += [e if isinstance(e, Edge) else Edge(*e) for e in edges]
        g = cls(vertices, all_edges, {v: trivial_id(v) for v in vertices})
        problems = g.problems()
        if problems:
            raise GraphError("; ".join(problems))
        return g

    def is_trivial(self, e: str) -> bool:
        return e in self._tri_set

    def nontrivial_edges(self) -> list[Edge]:
        return [e for e in self.edges.values() if e.id not in self._tri_set]

    def out_edges(self, v: str) -> list[Edge]:
        return [e for e in self.edges.values() if e.src == v]

    def problems(self) -> list[str]:
        out = []
        vs = set(self.vertices)
        if len(vs) != len(self.vertices):
            out.append("duplicate vertex ids")
        for e in self.edges.values():
            if e.src not in vs or e.tgt not in vs:
                out.append(f"edge {e.id!r} has an endpoint outside the vertex set")
        for v in self.vertices:
            t = self.trivial.get(v)
            if t is None:
                out.append(f"vertex {v!r} has no trivial edge")
            elif t not in self.edges or self.edges[t].src != v or self.edges[t].tgt != v:
                out.append(f"trivial edge of {v!r} is not a loop at {v!r}")
        if len(set(self.trivial.values())) != len(self.trivial):
            out.append("trivial edges are not distinct")
        return out

    def __eq__(self, other):
        if not isinstance(other, RGraph):
            return NotImplemented
        return (
            set(self.vertices) == set(other.vertices)
            and self.edges == other.edges
            and self.trivial == other.trivial
        )

    def __hash__(self):
        return hash((frozenset(self.vertices), frozenset(self.edges.values())))

    def __repr__(self):
        return f"RGraph({len(self.vertices)} vertices, {len(self.nontrivial_edges())} nontrivial edges)"

    def to_dict(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "edges": [{"id": e.id, "src": e.src, "tgt": e.tgt} for e in self.nontrivial_edges()],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RGraph":
        return cls.build(
            data["vertices"],
            [Edge(e["id"], e["src"], e["tgt"]) for e in data.get("edges", ())],
        )


def unit_graph() -> RGraph:
    """The one-vertex graph with no nontrivial edges."""
    return RGraph.build([UNIT_VERTEX])


class GraphHom:
    """Homomorphism of reflexive graphs."""

    __slots__ = ("dom", "cod", "vmap", "emap")

    def __init__(self, dom: RGraph, cod: RGraph, vmap: dict[str, str], emap: dict[str, str]):
        self.dom = dom
        self.cod = cod
        self.vmap = dict(vmap)
        self.emap = dict(emap)

    @classmethod
    def build(cls, dom: RGraph, cod: RGraph, vmap: dict, emap: dict | None = None) -> "GraphHom":
        """Fill in the images of trivial edges, then validate."""
        emap = dict(emap or {})
        for v in dom.vertices:
            emap.setdefault(dom.trivial[v], cod.trivial.get(vmap.get(v), ""))
        f = cls(dom, cod, vmap, emap)
        problems = f.problems()
        if problems:
            raise GraphError("; ".join(problems))
        return f

    def problems(self) -> list[str]:
        out = []
        for v in self.dom.vertices:
            if self.vmap.get(v) not in self.cod.vertices:
                out.append(f"vertex {v!r} is not mapped into the codomain")
        for e in self.dom.edges.values():
            fe = self.emap.get(e.id)
            if fe not in self.cod.edges:
                out.append(f"edge {e.id!r} is not mapped into the codomain")
                continue
            ce = self.cod.edges[fe]
            if ce.src != self.vmap.get(e.src) or ce.tgt != self.vmap.get(e.tgt):
                out.append(f"edge {e.id!r} -> {fe!r} does not preserve endpoints")
        for v in self.dom.vertices:
            if self.emap.get(self.dom.trivial[v]) != self.cod.trivial.get(self.vmap.get(v)):
                out.append(f"trivial edge of {v!r} is not sent to a trivial edge")
        return out

    def then(self, other: "GraphHom") -> "GraphHom":
        return hom_compose(self, other)

    def to_dict(self) -> dict:
        return {
            "vmap": dict(self.vmap),
            "emap": {e: self.emap[e] for e in self.emap if not self.dom.is_trivial(e)},
        }

    @classmethod
    def from_dict(cls, data: dict, dom: RGraph, cod: RGraph) -> "GraphHom":
        return cls.build(dom, cod, data["vmap"], data.get("emap", {}))

    def __repr__(self):
        return f"GraphHom({self.vmap})"


def identity_hom(g: RGraph) -> GraphHom:
    return GraphHom(g, g, {v: v for v in g.vertices}, {e: e for e in g.edges})


def terminal_hom(g: RGraph, one: RGraph | None = None) -> GraphHom:
    one = one or unit_graph()
    return GraphHom(g, one, {v: UNIT_VERTEX for v in g.vertices}, {e: trivial_id(UNIT_VERTEX) for e in g.edges})


def hom_compose(f: GraphHom, g: GraphHom) -> GraphHom:
    """``f`` then ``g``."""
    return GraphHom(
        f.dom,
        g.cod,
        {v: g.vmap[f.vmap[v]] for v in f.dom.vertices},
        {e: g.emap[f.emap[e]] for e in f.dom.edges},
    )


def _paired(pairs_v, pairs_e) -> tuple[RGraph, dict, dict]:
    vertices = [pair_id(a, b) for a, b in pairs_v]
    vsrc = {pair_id(a, b): (a, b) for a, b in pairs_v}
    edges, esrc, trivial = [], {}, {}
    for (e1, e2), (tri, src, tgt) in pairs_e:
        if tri:
            eid = trivial_id(src)
            trivial[src] = eid
        else:
            eid = pair_id(e1.id, e2.id)
        edges.append(Edge(eid, src, tgt))
        esrc[eid] = (e1.id, e2.id)
    return RGraph(vertices, edges, trivial), vsrc, esrc


def _limit(g: RGraph, h: RGraph, vkey_g, vkey_h, ekey_g, ekey_h):
    """Pairs whose keys agree, joined by hashing on the key."""
    by_v: dict = {}
    for b in h.vertices:
        by_v.setdefault(vkey_h(b), []).append(b)
    pairs_v = [(a, b) for a in g.vertices for b in by_v.get(vkey_g(a), ())]
    by_e: dict = {}
    for e2 in h.edges.values():
        by_e.setdefault(ekey_h(e2.id), []).append(e2)
    pairs_e = []
    tri_g, tri_h = g._tri_set, h._tri_set
    for e1 in g.edges.values():
        t1 = e1.id in tri_g
        for e2 in by_e.get(ekey_g(e1.id), ()):
            src, tgt = pair_id(e1.src, e2.src), pair_id(e1.tgt, e2.tgt)
            pairs_e.append(((e1, e2), (t1 and e2.id in tri_h, src, tgt)))
    P, vsrc, esrc = _paired(pairs_v, pairs_e)
    p0 = GraphHom(P, g, {v: vsrc[v][0] for v in P.vertices}, {e: esrc[e][0] for e in P.edges})
    p1 = GraphHom(P, h, {v: vsrc[v][1] for v in P.vertices}, {e: esrc[e][1] for e in P.edges})
    return P, p0, p1


_PRODUCTS: OrderedDict = OrderedDict()
_PRODUCT_CACHE_SIZE = 256


def product(g: RGraph, h: RGraph) -> tuple[RGraph, GraphHom, GraphHom]:
    """Cartesian product with its two projections.

    Graphs are never mutated after construction, so products are memoized by
    the identity of their factors (the cache keeps the factors alive).
    """
    key = (id(g), id(h))
    hit = _PRODUCTS.get(key)
    if hit is not None and hit[0] is g and hit[1] is h:
        _PRODUCTS.move_to_end(key)
        return hit[2]
    const = lambda _: 0  # noqa: E731
    out = _limit(g, h, const, const, const, const)
    _PRODUCTS[key] = (g, h, out)
    if len(_PRODUCTS) > _PRODUCT_CACHE_SIZE:
        _PRODUCTS.popitem(last=False)
    return out


def pullback(f: GraphHom, g: GraphHom) -> tuple[RGraph, GraphHom, GraphHom]:
    """Pairs of vertices and edges that agree in the common codomain."""
    if f.cod != g.cod:
        raise GraphError("pullback needs homomorphisms with a common codomain")
    return _limit(f.dom, g.dom, f.vmap.__getitem__, g.vmap.__getitem__, f.emap.__getitem__, g.emap.__getitem__)


def pair_hom(f: GraphHom, g: GraphHom, target: tuple[RGraph, GraphHom, GraphHom] | None = None) -> GraphHom:
    """The mediating map ``<f, g>`` into the product of the codomains."""
    P, p0, p1 = target or product(f.cod, g.cod)
    vback = {(p0.vmap[v], p1.vmap[v]): v for v in P.vertices}
    eback = {(p0.emap[e], p1.emap[e]): e for e in P.edges}
    return GraphHom(
        f.dom,
        P,
        {v: vback[(f.vmap[v], g.vmap[v])] for v in f.dom.vertices},
        {e: eback[(f.emap[e], g.emap[e])] for e in f.dom.edges},
    )


def hom_product(f: GraphHom, g: GraphHom, dom=None, cod=None) -> GraphHom:
    """``f × g`` between the products of domains and codomains."""
    D, d0, d1 = dom or product(f.dom, g.dom)
    target = cod or product(f.cod, g.cod)
    return pair_hom(hom_compose(d0, f), hom_compose(d1, g), target)


# -- spans -------------------------------------------------------------------------

@dataclass
class Span:
    left: RGraph
    apex: RGraph
    right: RGraph
    leg0: GraphHom
    leg1: GraphHom

    def problems(self) -> list[str]:
        out = []
        for name, g in (("left", self.left), ("apex", self.apex), ("right", self.right)):
            out += [f"{name}: {p}" for p in g.problems()]
        out += [f"leg0: {p}" for p in self.leg0.problems()]
        out += [f"leg1: {p}" for p in self.leg1.problems()]
        if self.leg0.dom is not self.apex and self.leg0.dom != self.apex:
            out.append("leg0 does not start at the apex")
        if self.leg1.dom is not self.apex and self.leg1.dom != self.apex:
            out.append("leg1 does not start at the apex")
        if self.leg0.cod != self.left:
            out.append("leg0 does not land in the left boundary")
        if self.leg1.cod != self.right:
            out.append("leg1 does not land in the right boundary")
        return out

    def to_dict(self) -> dict:
        return {
            "left": self.left.to_dict(),
            "apex": self.apex.to_dict(),
            "right": self.right.to_dict(),
            "leg0": self.leg0.to_dict(),
            "leg1": self.leg1.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Span":
        left = RGraph.from_dict(data["left"])
        apex = RGraph.from_dict(data["apex"])
        right = RGraph.from_dict(data["right"])
        return cls(
            left, apex, right,
            GraphHom.from_dict(data["leg0"], apex, left),
            GraphHom.from_dict(data["leg1"], apex, right),
        )


def span_identity(g: RGraph) -> Span:
    return Span(g, g, g, identity_hom(g), identity_hom(g))


def compose_parts(r: Span, s: Span) -> tuple[Span, GraphHom, GraphHom]:
    """Composite span together with the projections of its apex."""
    if r.right != s.left:
        raise GraphError("cannot compose spans: right boundary of the first is not the left of the second")
    P, p0, p1 = pullback(r.leg1, s.leg0)
    return Span(r.left, P, s.right, hom_compose(p0, r.leg0), hom_compose(p1, s.leg1)), p0, p1


def span_compose(r: Span, s: Span) -> Span:
    """``s`` after ``r``: the apex is the pullback over the shared boundary."""
    return compose_parts(r, s)[0]


def tensor_parts(r: Span, s: Span) -> tuple[Span, GraphHom, GraphHom]:
    """Tensor span together with the projections of its apex."""
    L = product(r.left, s.left)
    A = product(r.apex, s.apex)
    R = product(r.right, s.right)
    span = Span(L[0], A[0], R[0], hom_product(r.leg0, s.leg0, A, L), hom_product(r.leg1, s.leg1, A, R))
    return span, A[1], A[2]


def span_tensor(r: Span, s: Span) -> Span:
    return tensor_parts(r, s)[0]


def span_from_hom(f: GraphHom) -> Span:
    """The span ``dom <- dom -> cod`` of a homomorphism (an iso span when f is iso)."""
    return Span(f.dom, f.dom, f.cod, identity_hom(f.dom), f)


def span_from_hom_op(f: GraphHom) -> Span:
    """The span ``cod <- dom -> dom`` (reverse direction of an iso)."""
    return Span(f.cod, f.dom, f.dom, f, identity_hom(f.dom))


def cc_unit(x: RGraph) -> Span:
    """``1 <- X -> X × X`` with legs ``!`` and the diagonal."""
    one = unit_graph()
    idx = identity_hom(x)
    return Span(one, x, product(x, x)[0], terminal_hom(x, one), pair_hom(idx, idx))


def cc_counit(x: RGraph) -> Span:
    """``X × X <- X -> 1``."""
    one = unit_graph()
    idx = identity_hom(x)
    return Span(product(x, x)[0], x, one, pair_hom(idx, idx), terminal_hom(x, one))


def left_unitor(x: RGraph) -> GraphHom:
    """Projection ``1 × X -> X``."""
    _, _, p1 = product(unit_graph(), x)
    return p1


def right_unitor(x: RGraph) -> GraphHom:
    """Projection ``X × 1 -> X``."""
    _, p0, _ = product(x, unit_graph())
    return p0


def associator(x: RGraph, y: RGraph, z: RGraph) -> GraphHom:
    """``(X × Y) × Z -> X × (Y × Z)``."""
    XY = product(x, y)
    left = product(XY[0], z)
    _, q0, q1 = left
    yz = pair_hom(hom_compose(q0, XY[2]), q1)
    return pair_hom(hom_compose(q0, XY[1]), yz)


def snake_spans(x: RGraph) -> tuple[Span, Span]:
    """Both zig-zag composites of ``cc_unit``/``cc_counit``, unitors included."""
    eta, eps = cc_unit(x), cc_counit(x)
    idx = span_identity(x)
    # X -> X×1 -> X×(X×X) -> (X×X)×X -> 1×X -> X
    first = _chain([
        span_from_hom_op(right_unitor(x)),
        span_tensor(idx, eta),
        span_from_hom_op(associator(x, x, x)),
        span_tensor(eps, idx),
        span_from_hom(left_unitor(x)),
    ])
    # X -> 1×X -> (X×X)×X -> X×(X×X) -> X×1 -> X
    second = _chain([
        span_from_hom_op(left_unitor(x)),
        span_tensor(eta, idx),
        span_from_hom(associator(x, x, x)),
        span_tensor(idx, eps),
        span_from_hom(right_unitor(x)),
    ])
    return first, second


def _chain(spans: list[Span]) -> Span:
    out = spans[0]
    for s in spans[1:]:
        out = span_compose(out, s)
    return out


# -- isomorphism search ------------------------------------------------------------------

@dataclass(frozen=True)
class SpanIso:
    vmap: dict
    emap: dict


def _vertex_signature(s: Span, v: str) -> tuple:
    g = s.apex
    outs = sorted(
        (s.leg0.emap[e.id], s.leg1.emap[e.id], g.is_trivial(e.id), e.tgt == v)
        for e in g.edges.values() if e.src == v
    )
    ins = sorted(
        (s.leg0.emap[e.id], s.leg1.emap[e.id], g.is_trivial(e.id))
        for e in g.edges.values() if e.tgt == v and e.src != v
    )
    return (s.leg0.vmap[v], s.leg1.vmap[v], tuple(outs), tuple(ins))


def _check_cap(r: Span, s: Span, size_cap: int) -> None:
    for sp in (r, s):
        if len(sp.apex.vertices) > size_cap:
            raise SizeCapError(f"apex has {len(sp.apex.vertices)} vertices, above the cap of {size_cap}")


def _refine(r: Span, s: Span, rounds: int = 3) -> tuple[dict, dict]:
    """Colour refinement of vertex signatures, shared between both apexes so
    that equal colours are comparable."""
    spans = (r, s)
    first: dict = {}
    colours = [
        {v: first.setdefault(_vertex_signature(sp, v), len(first)) for v in sp.apex.vertices} for sp in spans
    ]
    for _ in range(rounds):
        table: dict = {}
        nxt = []
        for sp, col in zip(spans, colours):
            g = sp.apex
            keyed = {}
            for v in g.vertices:
                around = sorted(
                    [(0, sp.leg0.emap[e.id], sp.leg1.emap[e.id], col[e.tgt]) for e in g.edges.values() if e.src == v]
                    + [(1, sp.leg0.emap[e.id], sp.leg1.emap[e.id], col[e.src]) for e in g.edges.values() if e.tgt == v]
                )
                keyed[v] = (col[v], tuple(around))
            nxt.append({v: table.setdefault(k, len(table)) for v, k in keyed.items()})
        if all(len(set(a.values())) == len(set(b.values())) for a, b in zip(colours, nxt)):
            colours = nxt
            break
        colours = nxt
    return colours[0], colours[1]


def iter_decorated_isos(
    r: Span,
    s: Span,
    decorate: Callable[[str, str], list],
    accept: Callable[[str, dict, dict], bool],
    size_cap: int = DEFAULT_SIZE_CAP,
) -> Iterator[tuple[dict, dict]]:
    """Vertex bijections together with one decoration per vertex.

    ``decorate(v, w)`` lists the decorations allowed when ``v`` maps to ``w``;
    ``accept(v, vmap, decs)`` is asked right after ``v`` is assigned and may
    prune the partial assignment.  Enumeration order is deterministic."""
    _check_cap(r, s, size_cap)
    if r.left != s.left or r.right != s.right:
        return
    vr, vs = r.apex.vertices, s.apex.vertices
    if len(vr) != len(vs) or len(r.apex.edges) != len(s.apex.edges):
        return
    sig_r, sig_s = _refine(r, s)
    if Counter(sig_r.values()) != Counter(sig_s.values()):
        return
    cands = {v: [w for w in vs if sig_s[w] == sig_r[v]] for v in vr}
    adj_r = _edge_counts(r)
    adj_s = _edge_counts(s)
    order = _search_order(r.apex, cands)

    def extend(i: int, vmap: dict, decs: dict, used: set) -> Iterator[tuple[dict, dict]]:
        if i == len(order):
            yield dict(vmap), dict(decs)
            return
        v = order[i]
        for w in cands[v]:
            if w in used:
                continue
            if adj_r.get((v, v)) != adj_s.get((w, w)):
                continue
            if any(adj_r.get((v, u)) != adj_s.get((w, x)) or adj_r.get((u, v)) != adj_s.get((x, w))
                   for u, x in vmap.items()):
                continue
            vmap[v] = w
            used.add(w)
            for d in decorate(v, w):
                decs[v] = d
                if accept(v, vmap, decs):
                    yield from extend(i + 1, vmap, decs, used)
                del decs[v]
            del vmap[v]
            used.discard(w)

    yield from extend(0, {}, {}, set())


def _search_order(g: RGraph, cands: dict) -> list:
    """Fewest candidates first, then stay connected to what is already placed
    so that adjacency checks prune early."""
    nbrs: dict = {v: set() for v in g.vertices}
    for e in g.edges.values():
        nbrs[e.src].add(e.tgt)
        nbrs[e.tgt].add(e.src)
    order: list = []
    placed: set = set()
    rest = list(g.vertices)
    while rest:
        v = min(rest, key=lambda u: (-len(nbrs[u] & placed), len(cands[u]), g.vertices.index(u)))
        order.append(v)
        placed.add(v)
        rest.remove(v)
    return order


def iter_vertex_isos(r: Span, s: Span, size_cap: int = DEFAULT_SIZE_CAP) -> Iterator[dict]:
    """Vertex bijections between apexes compatible with legs and edge profiles,
    enumerated in a deterministic order."""
    for vmap, _ in iter_decorated_isos(r, s, lambda v, w: [None], lambda v, m, d: True, size_cap):
        yield vmap


def _edge_counts(s: Span) -> dict:
    c: dict = {}
    for e in s.apex.edges.values():
        key = (e.src, e.tgt)
        c.setdefault(key, Counter())[(s.leg0.emap[e.id], s.leg1.emap[e.id], s.apex.is_trivial(e.id))] += 1
    return c


def match_edges(
    r: Span,
    s: Span,
    vmap: dict,
    edge_ok: Callable[[str, str], bool] | None = None,
) -> dict | None:
    """Edge bijection over a vertex bijection, commuting with legs and
    satisfying ``edge_ok``; None if there is none."""
    groups_s: dict = {}
    for e in s.apex.edges.values():
        key = (e.src, e.tgt, s.leg0.emap[e.id], s.leg1.emap[e.id], s.apex.is_trivial(e.id))
        groups_s.setdefault(key, []).append(e.id)
    groups_r: dict = {}
    for e in r.apex.edges.values():
        key = (vmap[e.src], vmap[e.tgt], r.leg0.emap[e.id], r.leg1.emap[e.id], r.apex.is_trivial(e.id))
        groups_r.setdefault(key, []).append(e.id)
    emap = {}
    for key, es in groups_r.items():
        ts = groups_s.get(key, [])
        if len(ts) != len(es):
            return None
        m = _bipartite(es, ts, edge_ok)
        if m is None:
            return None
        emap.update(m)
    return emap


def _bipartite(left: list, right: list, ok) -> dict | None:
    if ok is None:
        return dict(zip(left, right))
    match: dict = {}

    def augment(a, seen) -> bool:
        for b in right:
            if b in seen or not ok(a, b):
                continue
            seen.add(b)
            if b not in match or augment(match[b], seen):
                match[b] = a
                return True
        return False

    # a greedy pass settles most edges; augmenting paths fix the rest
    free = list(right)
    pending = []
    for a in left:
        b = next((b for b in free if ok(a, b)), None)
        if b is None:
            pending.append(a)
        else:
            match[b] = a
            free.remove(b)
    for a in pending:
        if not augment(a, set()):
            return None
    return {a: b for b, a in match.items()}


def iter_span_isos(
    r: Span,
    s: Span,
    edge_ok: Callable[[str, str], bool] | None = None,
    size_cap: int = DEFAULT_SIZE_CAP,
) -> Iterator[SpanIso]:
    for vmap in iter_vertex_isos(r, s, size_cap):
        emap = match_edges(r, s, vmap, edge_ok)
        if emap is not None:
            yield SpanIso(vmap, emap)


def span_iso(r: Span, s: Span, size_cap: int = DEFAULT_SIZE_CAP, edge_ok=None) -> SpanIso | None:
    """First apex isomorphism commuting with both legs, or None."""
    return next(iter_span_isos(r, s, edge_ok, size_cap), None)
