from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import (
    brute_product_pairs,
    brute_pullback_pairs,
    brute_pullback_vertices,
    brute_span_iso,
    observed_pairs,
)
from sitrans import fixtures
from sitrans import rgraph_span as rs


@st.composite
def graphs(draw, max_vertices=3, max_edges=3):
    n = draw(st.integers(1, max_vertices))
    vs = [f"v{i}" for i in range(n)]
    k = draw(st.integers(0, max_edges))
    edges = [(f"e{i}", draw(st.sampled_from(vs)), draw(st.sampled_from(vs))) for i in range(k)]
    return rs.RGraph.build(vs, edges)


@st.composite
def homs(draw, cod, max_vertices=3, max_edges=3):
    """A random graph with a random homomorphism into ``cod``."""
    n = draw(st.integers(1, max_vertices))
    vs = [f"a{i}" for i in range(n)]
    vmap = {v: draw(st.sampled_from(cod.vertices)) for v in vs}
    edges, emap = [], {}
    for i in range(draw(st.integers(0, max_edges))):
        s = draw(st.sampled_from(vs))
        choices = [e for e in cod.out_edges(vmap[s])]
        target = draw(st.sampled_from(choices))
        cands = [v for v in vs if vmap[v] == target.tgt]
        if not cands:
            continue
        e = f"t{i}"
        edges.append((e, s, draw(st.sampled_from(cands))))
        emap[e] = target.id
    g = rs.RGraph.build(vs, edges)
    return rs.GraphHom.build(g, cod, vmap, emap)


# -- graphs -----------------------------------------------------------------------

def test_trivial_edges_exist():
    g = rs.RGraph.build(["a", "b"], [("x", "a", "b")])
    assert g.trivial == {"a": "eps:a", "b": "eps:b"}
    assert [e.id for e in g.nontrivial_edges()] == ["x"]


def test_bad_graph_rejected():
    with pytest.raises(rs.GraphError):
        rs.RGraph.build(["a"], [("x", "a", "b")])


def test_bad_hom_rejected():
    m = fixtures.gear_boundary()
    g = rs.RGraph.build(["a", "b"], [("x", "a", "b")])
    with pytest.raises(rs.GraphError):
        rs.GraphHom.build(g, m, {"a": "m", "b": "m"}, {"x": "nope"})


def test_graph_dict_round_trip():
    g = fixtures.baker_span().apex
    assert rs.RGraph.from_dict(g.to_dict()) == g


# -- products ---------------------------------------------------------------------

def test_unit_is_neutral_for_product():
    g = fixtures.baker_span().apex
    p, p0, p1 = rs.product(rs.unit_graph(), g)
    assert len(p.vertices) == len(g.vertices)
    assert len(p.edges) == len(g.edges)
    assert observed_pairs(p, p0, p1) == brute_product_pairs(rs.unit_graph(), g)


def test_gear_boundary_squared():
    m = fixtures.gear_boundary()
    p, p0, p1 = rs.product(m, m)
    assert len(p.vertices) == 1
    assert len(p.edges) == 9
    assert observed_pairs(p, p0, p1) == brute_product_pairs(m, m)


@settings(max_examples=60, deadline=None)
@given(graphs(), graphs())
def test_product_matches_oracle(g, h):
    p, p0, p1 = rs.product(g, h)
    assert len(p.edges) == len(g.edges) * len(h.edges)
    assert observed_pairs(p, p0, p1) == brute_product_pairs(g, h)
    assert not p.problems()
    # the trivial edges of the product are exactly the pairs of trivial edges
    for e in p.edges:
        assert p.is_trivial(e) == (g.is_trivial(p0.emap[e]) and h.is_trivial(p1.emap[e]))


# -- pullbacks ---------------------------------------------------------------------

def test_pullback_along_identities_is_product_shaped():
    g = fixtures.baker_span().apex
    idg = rs.identity_hom(g)
    pb, q0, q1 = rs.pullback(idg, idg)
    assert len(pb.vertices) == len(g.vertices)
    assert observed_pairs(pb, q0, q1) == brute_pullback_pairs(idg, idg)


def test_gear_pullback():
    gear = fixtures.gear_span()
    pb, q0, q1 = rs.pullback(gear.leg1, gear.leg0)
    assert len(pb.vertices) == 1
    pairs = {(q0.emap[e.id], q1.emap[e.id]) for e in pb.nontrivial_edges()}
    assert pairs == {("cw", "ccw"), ("ccw", "cw")}


def test_baker_eater_pullback():
    b, e = fixtures.baker_span(), fixtures.eater_span()
    pb, q0, q1 = rs.pullback(b.leg1, e.leg0)
    assert {(q0.vmap[v], q1.vmap[v]) for v in pb.vertices} == brute_pullback_vertices(b.leg1, e.leg0)
    assert observed_pairs(pb, q0, q1) == brute_pullback_pairs(b.leg1, e.leg0)
    sells = {(q0.emap[x.id], q1.emap[x.id]) for x in pb.nontrivial_edges() if q0.emap[x.id] == "sell"}
    assert sells == {("sell", "buy")}


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_pullback_matches_oracle(data):
    base = data.draw(graphs(2, 2))
    f = data.draw(homs(base))
    g = data.draw(homs(base))
    pb, q0, q1 = rs.pullback(f, g)
    assert {(q0.vmap[v], q1.vmap[v]) for v in pb.vertices} == brute_pullback_vertices(f, g)
    assert observed_pairs(pb, q0, q1) == brute_pullback_pairs(f, g)
    # the square commutes
    for e in pb.edges:
        assert f.emap[q0.emap[e]] == g.emap[q1.emap[e]]


# -- spans ------------------------------------------------------------------------

def test_gear_composite_is_identity():
    gear = fixtures.gear_span()
    gg = rs.span_compose(gear, gear)
    assert rs.span_iso(gg, rs.span_identity(gear.left)) is not None
    assert brute_span_iso(gg, rs.span_identity(gear.left))
    assert len(gg.apex.vertices) == 1
    assert len(gg.apex.nontrivial_edges()) == 2


def test_baker_eater_composite():
    comp = rs.span_compose(fixtures.baker_span(), fixtures.eater_span())
    assert len(comp.apex.vertices) == 4


def test_composite_keeps_unsynchronized_steps():
    comp, p0, p1 = rs.compose_parts(fixtures.baker_span(), fixtures.eater_span())
    pairs = {(p0.emap[e], p1.emap[e]) for e in comp.apex.edges}
    assert ("bake", "eps:hungry") in pairs
    assert ("eps:open", "eat") in pairs
    assert ("sell", "eps:hungry") not in pairs


def test_gear_tensor():
    gear = fixtures.gear_span()
    t = rs.span_tensor(gear, gear)
    assert len(t.apex.vertices) == 1
    assert len(t.apex.edges) == 9


def test_tensor_with_unit_span():
    r = fixtures.baker_span()
    one = rs.span_identity(rs.unit_graph())
    t = rs.span_tensor(r, one)
    assert len(t.apex.vertices) == len(r.apex.vertices)
    assert len(t.apex.edges) == len(r.apex.edges)


def test_identity_is_a_unit():
    r = fixtures.baker_span()
    assert rs.span_iso(rs.span_compose(r, rs.span_identity(r.right)), r) is not None
    assert rs.span_iso(rs.span_compose(rs.span_identity(r.left), r), r) is not None


def test_iso_reflexive_is_identity():
    r = fixtures.baker_span()
    iso = rs.span_iso(r, r)
    assert iso is not None
    assert all(k == v for k, v in iso.vmap.items())


def test_iso_rejects_different_sizes():
    assert rs.span_iso(fixtures.baker_span(), rs.span_identity(rs.unit_graph())) is None


def test_iso_respects_legs():
    gear = fixtures.gear_span()
    flipped = rs.Span(gear.left, gear.apex, gear.right, gear.leg1, gear.leg0)
    assert rs.span_iso(gear, flipped) is not None  # cw/ccw swap
    straight = rs.span_identity(gear.left)
    assert rs.span_iso(gear, straight) is None
    assert not brute_span_iso(gear, straight)


def test_size_cap():
    big = rs.span_identity(rs.RGraph.build([f"v{i}" for i in range(5)]))
    with pytest.raises(rs.SizeCapError):
        rs.span_iso(big, big, size_cap=3)


@pytest.mark.parametrize("g", [fixtures.gear_boundary(), rs.RGraph.build(["a", "b"], [("x", "a", "b")])])
def test_span_snakes(g):
    first, second = rs.snake_spans(g)
    assert rs.span_iso(first, rs.span_identity(g)) is not None
    assert rs.span_iso(second, rs.span_identity(g)) is not None


def test_cc_unit_shape():
    m = fixtures.gear_boundary()
    u = rs.cc_unit(m)
    assert u.apex == m
    assert len(u.left.vertices) == 1 and len(u.left.edges) == 1
    assert len(u.right.edges) == 9


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_iso_agrees_with_brute_force(data):
    base = data.draw(graphs(1, 1))
    f = data.draw(homs(base, 2, 2))
    g = data.draw(homs(base, 2, 2))
    r = rs.Span(base, f.dom, base, f, f)
    s = rs.Span(base, g.dom, base, g, g)
    assert (rs.span_iso(r, s) is not None) == brute_span_iso(r, s)


def test_span_dict_round_trip():
    r = fixtures.baker_span()
    back = rs.Span.from_dict(r.to_dict())
    assert rs.span_iso(back, r) is not None
