"""Brute-force reference implementations used to check the library.

None of these share code with the package: they enumerate everything and
compare plain tuples.
"""
from __future__ import annotations

import itertools

from sitrans.cornering import (
    IN,
    OUT,
    AbsorbLeft,
    AbsorbRight,
    Crossing,
    EmitLeft,
    EmitRight,
    HComp,
    HIdCell,
    MorCell,
    VComp,
    VIdCell,
)


# -- graphs ---------------------------------------------------------------------

def edge_triples(g):
    """All edges, trivial ones included, as (id, src, tgt)."""
    return {(e.id, e.src, e.tgt) for e in g.edges.values()}


def brute_product_pairs(g, h):
    """Every pair of edges of g and h, with the endpoints it must connect."""
    return {
        ((e, f), (s1, s2), (t1, t2))
        for e, s1, t1 in edge_triples(g)
        for f, s2, t2 in edge_triples(h)
    }


def brute_pullback_pairs(f, g):
    """Pairs of domain edges of two homs that land on the same edge."""
    out = set()
    for e1, s1, t1 in edge_triples(f.dom):
        for e2, s2, t2 in edge_triples(g.dom):
            if f.emap[e1] == g.emap[e2]:
                out.add(((e1, e2), (s1, s2), (t1, t2)))
    return out


def brute_pullback_vertices(f, g):
    return {(a, b) for a in f.dom.vertices for b in g.dom.vertices if f.vmap[a] == g.vmap[b]}


def observed_pairs(apex, p0, p1):
    """The same description read off a computed limit and its projections."""
    return {
        ((p0.emap[e.id], p1.emap[e.id]), (p0.vmap[e.src], p1.vmap[e.src]), (p0.vmap[e.tgt], p1.vmap[e.tgt]))
        for e in apex.edges.values()
    }


def brute_span_iso(r, s) -> bool:
    """Try every vertex bijection and every edge bijection."""
    gr, gs = r.apex, s.apex
    if len(gr.vertices) != len(gs.vertices) or len(gr.edges) != len(gs.edges):
        return False
    er, es = list(gr.edges.values()), list(gs.edges.values())
    for perm in itertools.permutations(gs.vertices):
        vmap = dict(zip(gr.vertices, perm))
        if any(r.leg0.vmap[v] != s.leg0.vmap[vmap[v]] or r.leg1.vmap[v] != s.leg1.vmap[vmap[v]] for v in gr.vertices):
            continue
        # edges: greedy is not enough in general, so try all matchings
        for eperm in itertools.permutations(es):
            if all(
                vmap[a.src] == b.src and vmap[a.tgt] == b.tgt
                and r.leg0.emap[a.id] == s.leg0.emap[b.id]
                and r.leg1.emap[a.id] == s.leg1.emap[b.id]
                and gr.is_trivial(a.id) == gs.is_trivial(b.id)
                for a, b in zip(er, eperm)
            ):
                return True
    return False


# -- Z value flow ---------------------------------------------------------------

def _left(a, p):
    # value entering across the left side counts positive
    return a.value if p is OUT else -a.value


def _right(a, p):
    return a.value if p is IN else -a.value


def flow_oracle(c):
    """(top, bottom, left postings, right postings) of a Z cell from first principles."""
    if isinstance(c, VComp):
        t1, _, l1, r1 = flow_oracle(c.first)
        _, b2, l2, r2 = flow_oracle(c.second)
        return t1, b2, l1 + l2, r1 + r2
    if isinstance(c, HComp):
        t1, b1, l1, r1 = flow_oracle(c.first)
        t2, b2, l2, r2 = flow_oracle(c.second)
        assert [x + y for x, y in zip(r1, l2)] == [0] * len(r1) and len(r1) == len(l2)
        return t1 + t2, b1 + b2, l1, r2
    if isinstance(c, EmitRight):
        return c.obj.value, 0, [], [-c.obj.value]
    if isinstance(c, EmitLeft):
        return c.obj.value, 0, [-c.obj.value], []
    if isinstance(c, AbsorbLeft):
        return 0, c.obj.value, [c.obj.value], []
    if isinstance(c, AbsorbRight):
        return 0, c.obj.value, [], [c.obj.value]
    if isinstance(c, VIdCell):
        return c.obj.value, c.obj.value, [], []
    if isinstance(c, HIdCell):
        return 0, 0, [_left(a, p) for a, p in c.x.entries], [_right(a, p) for a, p in c.x.entries]
    if isinstance(c, Crossing):
        return (c.obj.value, c.obj.value,
                [_left(a, p) for a, p in c.x.entries], [_right(a, p) for a, p in c.x.entries])
    if isinstance(c, MorCell):
        return c.mor.value, c.mor.value, [], []
    raise TypeError(type(c).__name__)


def flow_tuple(f):
    return f.top, f.bottom, list(f.left_postings), list(f.right_postings)


# -- accounts -------------------------------------------------------------------

def balance_after(opening, moves):
    """Running balances of an account under a list of signed amounts."""
    out = [opening]
    for m in moves:
        out.append(out[-1] + m)
    return out
