"""The running examples: gears, the bakery, and a small account."""
from __future__ import annotations

from . import rgraph_span as rs
from .accounts_z import mk_account, z_cell
from .cornering import AbsorbLeft, EmitRight, Exchange, HComp, MorCell, VComp, VIdCell
from .resource_theory import FreeTheory, Z, ZObj, bread_signature
from .situated import SituatedBoundary, SituatedSystem

DEFAULT_CAPACITY = 3

# Baker sells its one bread, the Eater eats it (digesting while the Baker
# bakes), and the new bread is sold: pairs of (Baker, Eater) transitions.
SCENARIO = (("sell_1", "buy_0"), ("eps", "eat_1"), ("bake_0", "digest_0"), ("sell_1", "buy_0"))
SCENARIO_START = ("open_1", "hungry_0")


def gear_boundary() -> rs.RGraph:
    return rs.RGraph.build(["m"], [("up", "m", "m"), ("down", "m", "m")])


def gear_span() -> rs.Span:
    m = gear_boundary()
    apex = rs.RGraph.build(["g"], [("cw", "g", "g"), ("ccw", "g", "g")])
    return rs.Span(
        m, apex, m,
        rs.GraphHom.build(apex, m, {"g": "m"}, {"cw": "up", "ccw": "down"}),
        rs.GraphHom.build(apex, m, {"g": "m"}, {"cw": "down", "ccw": "up"}),
    )


def gear_z_system() -> SituatedSystem:
    """The gear over Z: ``up`` carries one unit rightwards, ``down`` one unit
    back, so every rotation passes value straight through the gear."""
    span = gear_span()
    up = Exchange(((ZObj(1), "o"),))
    down = Exchange(((ZObj(-1), "*"),))
    b = SituatedBoundary(span.left, {"up": up, "down": down}, Z)
    elabels = {
        "cw": z_cell(0, up, down),
        "ccw": z_cell(0, down, up),
        "eps:g": VIdCell(ZObj(0)),
    }
    return SituatedSystem(span, {"g": ZObj(0)}, elabels, b, b, Z, "gear")


def baker_span() -> rs.Span:
    u = rs.RGraph.build(["u"], [("x", "u", "u")])
    v = rs.RGraph.build(["v"], [("y", "v", "v")])
    apex = rs.RGraph.build(
        ["open", "closed"],
        [("close", "open", "closed"), ("open", "closed", "open"), ("bake", "open", "open"), ("sell", "open", "open")],
    )
    return rs.Span(
        u, apex, v,
        rs.GraphHom.build(apex, u, {"open": "u", "closed": "u"}, {
            "close": "eps:u", "open": "eps:u", "bake": "x", "sell": "eps:u"}),
        rs.GraphHom.build(apex, v, {"open": "v", "closed": "v"}, {
            "close": "eps:v", "open": "eps:v", "bake": "eps:v", "sell": "y"}),
    )


def eater_span() -> rs.Span:
    v = rs.RGraph.build(["v"], [("y", "v", "v")])
    one = rs.unit_graph()
    apex = rs.RGraph.build(
        ["hungry", "full"],
        [("eat", "hungry", "full"), ("digest", "full", "hungry"), ("buy", "hungry", "hungry")],
    )
    return rs.Span(
        v, apex, one,
        rs.GraphHom.build(apex, v, {"hungry": "v", "full": "v"}, {"eat": "eps:v", "digest": "eps:v", "buy": "y"}),
        rs.terminal_hom(apex, one),
    )


def bread_theory() -> FreeTheory:
    return FreeTheory(bread_signature())


def bread_sift_theory() -> FreeTheory:
    return FreeTheory(bread_signature(sift=True))


def _boundaries(theory: FreeTheory):
    u = rs.RGraph.build(["u"], [("x", "u", "u")])
    v = rs.RGraph.build(["v"], [("y", "v", "v")])
    flour = Exchange(((theory.word("flour"), "o"),))
    bread = Exchange(((theory.word("bread"), "o"),))
    left = SituatedBoundary(u, {"x": flour}, theory)
    mid = SituatedBoundary(v, {"y": bread}, theory)
    one = rs.unit_graph()
    right = SituatedBoundary(one, {}, theory)
    return left, mid, right


def bake_cell(theory: FreeTheory, n: int):
    """Flour enters from the left, is kneaded and baked with the oven, and the
    new bread joins the stock."""
    stock = theory.word("oven", *["bread"] * n)
    knead_bake = theory.parse_mor("seq(par(gen[knead],id[oven]),gen[bake],sym[bread,oven])")
    rest = theory.identity(theory.word(*["bread"] * n))
    # the fresh loaf goes next to the oven, ahead of the existing stock
    mor = knead_bake.tensor(rest)
    return VComp(HComp(AbsorbLeft(theory.word("flour")), VIdCell(stock)), MorCell(mor))


def baker(capacity: int = DEFAULT_CAPACITY, theory: FreeTheory | None = None) -> SituatedSystem:
    """Situated Baker holding up to ``capacity`` loaves."""
    theory = theory or bread_theory()
    left, mid, _ = _boundaries(theory)
    vertices, edges, leg0, leg1, vlabels, elabels = [], [], {}, {}, {}, {}
    for n in range(capacity + 1):
        for state in ("open", "closed"):
            vertices.append(f"{state}_{n}")
            vlabels[f"{state}_{n}"] = theory.word("oven", *["bread"] * n)
    for n in range(capacity + 1):
        stock = vlabels[f"open_{n}"]
        edges.append((f"close_{n}", f"open_{n}", f"closed_{n}"))
        elabels[f"close_{n}"] = VIdCell(stock)
        edges.append((f"open_{n}", f"closed_{n}", f"open_{n}"))
        elabels[f"open_{n}"] = VIdCell(stock)
        if n < capacity:
            edges.append((f"bake_{n}", f"open_{n}", f"open_{n + 1}"))
            elabels[f"bake_{n}"] = bake_cell(theory, n)
            leg0[f"bake_{n}"] = "x"
        if n >= 1:
            edges.append((f"sell_{n}", f"open_{n}", f"open_{n - 1}"))
            elabels[f"sell_{n}"] = HComp(VIdCell(vlabels[f"open_{n - 1}"]), EmitRight(theory.word("bread")))
            leg1[f"sell_{n}"] = "y"
    apex = rs.RGraph.build(vertices, edges)
    for e in apex.edges:
        leg0.setdefault(e, "eps:u")
        leg1.setdefault(e, "eps:v")
    for v in vertices:
        elabels[apex.trivial[v]] = VIdCell(vlabels[v])
    span = rs.Span(
        left.graph, apex, mid.graph,
        rs.GraphHom.build(apex, left.graph, {v: "u" for v in vertices}, leg0),
        rs.GraphHom.build(apex, mid.graph, {v: "v" for v in vertices}, leg1),
    )
    return SituatedSystem(span, vlabels, elabels, left, mid, theory, "baker")


def eater(capacity: int = DEFAULT_CAPACITY, theory: FreeTheory | None = None) -> SituatedSystem:
    """Situated Eater holding up to ``capacity`` loaves."""
    theory = theory or bread_theory()
    _, mid, right = _boundaries(theory)
    vertices, edges, leg0, vlabels, elabels = [], [], {}, {}, {}
    for n in range(capacity + 1):
        for state in ("hungry", "full"):
            vertices.append(f"{state}_{n}")
            vlabels[f"{state}_{n}"] = theory.word(*["bread"] * n)
    bread = theory.word("bread")
    for n in range(capacity + 1):
        if n < capacity:
            edges.append((f"buy_{n}", f"hungry_{n}", f"hungry_{n + 1}"))
            elabels[f"buy_{n}"] = HComp(AbsorbLeft(bread), VIdCell(vlabels[f"hungry_{n}"]))
            leg0[f"buy_{n}"] = "y"
        if n >= 1:
            edges.append((f"eat_{n}", f"hungry_{n}", f"full_{n - 1}"))
            eat = theory.generator("eat").tensor(theory.identity(vlabels[f"hungry_{n - 1}"]))
            elabels[f"eat_{n}"] = MorCell(eat)
        edges.append((f"digest_{n}", f"full_{n}", f"hungry_{n}"))
        elabels[f"digest_{n}"] = VIdCell(vlabels[f"full_{n}"])
    apex = rs.RGraph.build(vertices, edges)
    for e in apex.edges:
        leg0.setdefault(e, "eps:v")
    for v in vertices:
        elabels[apex.trivial[v]] = VIdCell(vlabels[v])
    span = rs.Span(
        mid.graph, apex, right.graph,
        rs.GraphHom.build(apex, mid.graph, {v: "v" for v in vertices}, leg0),
        rs.terminal_hom(apex, right.graph),
    )
    return SituatedSystem(span, vlabels, elabels, mid, right, theory, "eater")


def demo_account() -> SituatedSystem:
    """Balances 0..5 with a deposit of 5 and a withdrawal of 3 on the left."""
    return mk_account(0, 5, [("deposit", 5, "left"), ("withdraw", -3, "left")], "account")
