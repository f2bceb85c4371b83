"""Law suites: property checks over generated and enumerated inputs.

Each check produces a ``LawResult`` with pass/unknown/fail counts.  Random
inputs come from a ``random.Random`` seeded by the caller, so a suite run is
reproducible.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from . import fixtures
from . import rgraph_span as rs
from .accounts_z import ledger_of_run, mk_account, trial_balance, z_cell
from .cornering import (
    I_EX,
    IN,
    OUT,
    AbsorbLeft,
    AbsorbRight,
    EmitLeft,
    EmitRight,
    Exchange,
    HComp,
    HIdCell,
    VComp,
    VIdCell,
    cell_equal,
    eval_flow,
    exchange_dual,
    dual_exchange_isos,
    postings_of,
    snake_composites,
    unit_like,
    yank_normalize,
)
from .resource_theory import (
    DEFAULT_BUDGET,
    FreeTheory,
    TheorySignature,
    Verdict,
    Z,
    ZObj,
)
from .situated import (
    SituatedBoundary,
    SituatedSystem,
    compositionality_check,
    run,
    s_compose,
    s_dual,
    s_equiv,
    s_identity,
    s_snakes,
    s_tensor,
    validate_situated,
)

SUITES = ("yanking", "span", "situated", "compact")

# systems in the random law samples have at most this many apex vertices
MAX_SAMPLE_VERTICES = 5


@dataclass
class LawResult:
    name: str
    passed: int = 0
    unknown: int = 0
    failed: int = 0
    failures: list[str] = field(default_factory=list)

    def record(self, verdict, note: str = "") -> None:
        if isinstance(verdict, bool):
            verdict = Verdict.of(verdict)
        if verdict is Verdict.TRUE:
            self.passed += 1
        elif verdict is Verdict.UNKNOWN:
            self.unknown += 1
            if note and len(self.failures) < 5:
                self.failures.append(f"unknown: {note}")
        else:
            self.failed += 1
            if note and len(self.failures) < 5:
                self.failures.append(note)

    @property
    def total(self) -> int:
        return self.passed + self.unknown + self.failed

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def to_dict(self) -> dict:
        return {
            "law": self.name,
            "pass": self.passed,
            "unknown": self.unknown,
            "fail": self.failed,
            "failures": list(self.failures),
        }

    def line(self) -> str:
        return f"{self.name:<40} pass {self.passed:>5}  unknown {self.unknown:>3}  fail {self.failed:>3}"


# -- random Z systems -----------------------------------------------------------------------

def random_label(rng: random.Random, k: int = 3, max_entries: int = 2) -> Exchange:
    n = rng.choice([0] + [1] * 3 + list(range(1, max_entries + 1)))
    return Exchange(tuple((ZObj(rng.randint(-k, k)), rng.choice((OUT, IN))) for _ in range(n)))


def random_z_boundary(rng: random.Random, max_vertices: int = 2, max_edges: int = 2, k: int = 3) -> SituatedBoundary:
    vs = [f"b{i}" for i in range(rng.randint(1, max_vertices))]
    edges, labels = [], {}
    for i in range(rng.randint(0, max_edges)):
        e = f"x{i}"
        edges.append((e, rng.choice(vs), rng.choice(vs)))
        labels[e] = random_label(rng, k)
    g = rs.RGraph.build(vs, edges)
    labels.update({t: I_EX for t in g.trivial.values()})
    return SituatedBoundary(g, labels, Z)


def random_z_system(
    rng: random.Random,
    src: SituatedBoundary,
    tgt: SituatedBoundary,
    max_vertices: int = MAX_SAMPLE_VERTICES,
    max_edges: int = 6,
    name: str = "",
) -> SituatedSystem:
    """A valid Z system between two boundaries, grown by random transitions."""
    vs: list[str] = []
    lab: dict[str, int] = {}
    m0: dict[str, str] = {}
    m1: dict[str, str] = {}

    def add_vertex(value: int, a: str, b: str) -> str:
        v = f"s{len(vs)}"
        vs.append(v)
        lab[v], m0[v], m1[v] = value, a, b
        return v

    for _ in range(rng.randint(1, 2)):
        add_vertex(rng.randint(-3, 3), rng.choice(src.graph.vertices), rng.choice(tgt.graph.vertices))
    edges, leg0, leg1, elabels = [], {}, {}, {}
    for _ in range(3 * max_edges):
        if len(edges) >= max_edges:
            break
        v = rng.choice(vs)
        ex = rng.choice(src.graph.out_edges(m0[v]))
        ey = rng.choice(tgt.graph.out_edges(m1[v]))
        x, y = src.label(ex.id), tgt.label(ey.id)
        bottom = lab[v] + sum(postings_of(x, "left")) + sum(postings_of(y, "right"))
        cands = [u for u in vs if lab[u] == bottom and m0[u] == ex.tgt and m1[u] == ey.tgt]
        if cands:
            u = rng.choice(cands)
        elif len(vs) < max_vertices:
            u = add_vertex(bottom, ex.tgt, ey.tgt)
        else:
            continue
        e = f"t{len(edges)}"
        edges.append((e, v, u))
        leg0[e], leg1[e] = ex.id, ey.id
        elabels[e] = z_cell(lab[v], x, y)
    apex = rs.RGraph.build(vs, edges)
    for v in vs:
        elabels[apex.trivial[v]] = VIdCell(ZObj(lab[v]))
    span = rs.Span(
        src.graph, apex, tgt.graph,
        rs.GraphHom.build(apex, src.graph, m0, leg0),
        rs.GraphHom.build(apex, tgt.graph, m1, leg1),
    )
    return SituatedSystem(span, {v: ZObj(lab[v]) for v in vs}, elabels, src, tgt, Z, name)


def random_walk(rng: random.Random, sys: SituatedSystem, max_len: int = 6, start: str | None = None):
    """A random path as ``(start, edge ids)``; trivial steps are allowed."""
    g = sys.apex
    cur = start or rng.choice(g.vertices)
    begin, path = cur, []
    for _ in range(rng.randint(0, max_len)):
        e = rng.choice(g.out_edges(cur))
        path.append(e.id)
        cur = e.tgt
    return begin, path


def random_account_pair(rng: random.Random) -> tuple[SituatedSystem, SituatedSystem]:
    """Two accounts sharing a transfer boundary: what the left one pays on its
    right the right one receives on its left."""
    amounts = rng.sample([1, 2, 3, 4, 5], rng.randint(1, 2))
    lo_r, hi_r = -rng.randint(0, 4), rng.randint(0, 4)
    lo_s, hi_s = -rng.randint(0, 4), rng.randint(0, 4)
    r_moves = [(f"pay{k}", -k, "right") for k in amounts]
    s_moves = [(f"recv{k}", k, "left") for k in amounts]
    if rng.random() < 0.5:
        r_moves.append(("income", rng.randint(1, 3), "left"))
    if rng.random() < 0.5:
        s_moves.append(("spend", rng.randint(1, 3), "right"))
    return mk_account(lo_r, hi_r, r_moves, "left"), mk_account(lo_s, hi_s, s_moves, "right")


def random_pairs(rng: random.Random, r: SituatedSystem, s: SituatedSystem, comp: SituatedSystem, max_len: int = 6):
    """A random composite path, returned as component pairs plus start pair."""
    _, p0, p1 = rs.compose_parts(r.span, s.span)
    begin, path = random_walk(rng, comp, max_len)
    pairs = [(p0.emap[e], p1.emap[e]) for e in path]
    return (p0.vmap[begin], p1.vmap[begin]), pairs


def _chain_boundaries(rng: random.Random, n: int) -> list[SituatedBoundary]:
    return [random_z_boundary(rng) for _ in range(n)]


# -- yanking --------------------------------------------------------------------------------

def yanking_theory() -> FreeTheory:
    return FreeTheory(TheorySignature("abc", ("a", "b", "c")))


def yanking_redexes(w) -> list[tuple[str, object, object]]:
    """Each zig-zag redex on ``w`` with the identity it must reduce to."""
    return [
        ("h(emitR, absL)", HComp(EmitRight(w), AbsorbLeft(w)), VIdCell(w)),
        ("h(absR, emitL)", HComp(AbsorbRight(w), EmitLeft(w)), VIdCell(w)),
        ("v(absL, emitR)", VComp(AbsorbLeft(w), EmitRight(w)), HIdCell(Exchange.out(w), unit_like(w))),
        ("v(absR, emitL)", VComp(AbsorbRight(w), EmitLeft(w)), HIdCell(Exchange.in_(w), unit_like(w))),
    ]


def check_yanking(max_len: int = 4) -> list[LawResult]:
    th = yanking_theory()
    res = LawResult(f"yanking (words of length <= {max_len})")
    for n in range(1, max_len + 1):
        for letters in itertools.product("abc", repeat=n):
            w = th.word(*letters)
            for name, redex, ident in yanking_redexes(w):
                res.record(yank_normalize(redex) == ident, f"{name} on {w}")
    return [res]


# -- spans ------------------------------------------------------------------------------------

def check_span(rng: random.Random, samples: int) -> list[LawResult]:
    gear = fixtures.gear_span()
    m = gear.left
    gg = rs.span_compose(gear, gear)
    gear_law = LawResult("gear: Gear;Gear ~ id_M")
    gear_law.record(
        rs.span_iso(gg, rs.span_identity(m)) is not None
        and len(gg.apex.vertices) == 1 and len(gg.apex.nontrivial_edges()) == 2,
        "Gear;Gear is not the identity",
    )
    tensor = LawResult("gear: Gear (x) Gear has 9 edges")
    tensor.record(len(rs.span_tensor(gear, gear).apex.edges) == 9, "wrong edge count")

    assoc = LawResult("span: associativity")
    unit = LawResult("span: unit")
    snakes = LawResult("span: snake equations")
    for i in range(samples):
        b = _chain_boundaries(rng, 4)
        r, s, t = (random_z_system(rng, b[j], b[j + 1]).span for j in range(3))
        lhs = rs.span_compose(rs.span_compose(r, s), t)
        rhs = rs.span_compose(r, rs.span_compose(s, t))
        cap = max(rs.DEFAULT_SIZE_CAP, len(lhs.apex.vertices))
        assoc.record(rs.span_iso(lhs, rhs, cap) is not None, f"sample {i}")
        unit.record(
            rs.span_iso(rs.span_compose(rs.span_identity(r.left), r), r) is not None
            and rs.span_iso(rs.span_compose(r, rs.span_identity(r.right)), r) is not None,
            f"sample {i}",
        )
        x = b[0].graph
        first, second = rs.snake_spans(x)
        snakes.record(
            rs.span_iso(first, rs.span_identity(x)) is not None
            and rs.span_iso(second, rs.span_identity(x)) is not None,
            f"sample {i}",
        )
    return [gear_law, tensor, assoc, unit, snakes]


# -- situated ------------------------------------------------------------------------------------

def _equiv_verdict(r: SituatedSystem, s: SituatedSystem, budget: int) -> bool:
    cap = max(rs.DEFAULT_SIZE_CAP, len(r.apex.vertices), len(s.apex.vertices))
    return s_equiv(r, s, budget, cap) is not None


def check_situated(rng: random.Random, samples: int, budget: int = DEFAULT_BUDGET) -> list[LawResult]:
    closure = LawResult("situated: outputs validate")
    assoc = LawResult("situated: associativity")
    unit = LawResult("situated: unit")
    interchange = LawResult("situated: interchange")
    refl = LawResult("situated: equivalence is reflexive")
    comp_law = LawResult("situated: composite history")
    conservation = LawResult("accounts: conservation")
    audit = LawResult("accounts: trial balance")

    for i in range(samples):
        b = _chain_boundaries(rng, 4)
        r, s, t = (random_z_system(rng, b[j], b[j + 1]) for j in range(3))
        rs_ = s_compose(r, s)
        lhs = s_compose(rs_, t)
        rhs = s_compose(r, s_compose(s, t))
        closure.record(not validate_situated(lhs) and not validate_situated(rhs), f"sample {i}")
        assoc.record(_equiv_verdict(lhs, rhs, budget), f"sample {i}")
        unit.record(
            _equiv_verdict(s_compose(s_identity(r.src), r), r, budget)
            and _equiv_verdict(s_compose(r, s_identity(r.tgt)), r, budget),
            f"sample {i}",
        )
        refl.record(_equiv_verdict(rs_, rs_, budget), f"sample {i}")

        # (r ; r') (x) (s ; s') against (r (x) s) ; (r' (x) s'), kept small
        c = _chain_boundaries(rng, 6)
        r1 = random_z_system(rng, c[0], c[1], 3, 4)
        r2 = random_z_system(rng, c[1], c[2], 3, 4)
        s1 = random_z_system(rng, c[3], c[4], 3, 4)
        s2 = random_z_system(rng, c[4], c[5], 3, 4)
        a = s_compose(s_tensor(r1, s1), s_tensor(r2, s2))
        z = s_tensor(s_compose(r1, r2), s_compose(s1, s2))
        interchange.record(_equiv_verdict(a, z, budget), f"sample {i}")

        for sys in (r, rs_):
            if not sys.apex.vertices:
                continue
            start, path = random_walk(rng, sys)
            f = eval_flow(run(sys, path, start))
            ledger = ledger_of_run(sys, path, start)
            conservation.record(f.conserved() and not ledger.problems(), f"sample {i}")

    for i in range(samples):
        left, right = random_account_pair(rng)
        comp = s_compose(left, right)
        start, pairs = random_pairs(rng, left, right, comp)
        comp_law.record(compositionality_check(left, right, pairs, comp, start, budget), f"pair {i}")
        audit.record(trial_balance(left, right, pairs, comp, start).passed, f"pair {i}")

    scenario = LawResult("situated: bakery scenario history")
    bk, et = fixtures.baker(), fixtures.eater()
    scenario.record(
        compositionality_check(bk, et, fixtures.SCENARIO, start=fixtures.SCENARIO_START, budget=budget),
        "scenario",
    )
    return [closure, assoc, unit, interchange, refl, comp_law, scenario, conservation, audit]


# -- compact structure ------------------------------------------------------------------------------

def small_boundary_shapes() -> list[rs.RGraph]:
    """Graphs with at most two nontrivial edges and no isolated vertices,
    one per isomorphism class, plus the one-vertex graph."""
    shapes = [
        ([], []),
        (["a"], [("a", "a")]),
        (["a", "b"], [("a", "b")]),
        (["a"], [("a", "a"), ("a", "a")]),
        (["a", "b"], [("a", "a"), ("a", "b")]),
        (["a", "b"], [("a", "a"), ("b", "a")]),
        (["a", "b"], [("a", "a"), ("b", "b")]),
        (["a", "b"], [("a", "b"), ("a", "b")]),
        (["a", "b"], [("a", "b"), ("b", "a")]),
        (["a", "b", "c"], [("a", "b"), ("b", "c")]),
        (["a", "b", "c"], [("a", "b"), ("a", "c")]),
        (["a", "b", "c"], [("a", "c"), ("b", "c")]),
        (["a", "b", "c"], [("a", "a"), ("b", "c")]),
        (["a", "b", "c", "d"], [("a", "b"), ("c", "d")]),
    ]
    out = []
    for vs, es in shapes:
        vs = vs or ["a"]
        out.append(rs.RGraph.build(vs, [(f"x{i}", s, t) for i, (s, t) in enumerate(es)]))
    return out


def single_labels(k: int = 3) -> list[Exchange]:
    out = [I_EX]
    for n in range(-k, k + 1):
        out += [Exchange(((ZObj(n), OUT),)), Exchange(((ZObj(n), IN),))]
    return out


def iter_small_boundaries(k: int = 3):
    labels = single_labels(k)
    for g in small_boundary_shapes():
        names = [e.id for e in g.nontrivial_edges()]
        for combo in itertools.product(labels, repeat=len(names)):
            lab = {t: I_EX for t in g.trivial.values()}
            lab.update(zip(names, combo))
            yield SituatedBoundary(g, lab, Z)


def check_snakes_on(b: SituatedBoundary, budget: int = DEFAULT_BUDGET) -> bool:
    first, second = s_snakes(b)
    return (
        s_equiv(first, s_identity(b), budget) is not None
        and s_equiv(second, s_identity(s_dual(b)), budget) is not None
    )


def check_compact(budget: int = DEFAULT_BUDGET, k: int = 3) -> list[LawResult]:
    duals = LawResult("compact: A° ≅ (A*)• over Z")
    for n in range(-5, 6):
        a = ZObj(n)
        phi, psi = dual_exchange_isos(a, Z)
        duals.record(
            eval_flow(HComp(phi, psi)) == eval_flow(HIdCell(Exchange.out(a), ZObj(0)))
            and eval_flow(HComp(psi, phi)) == eval_flow(HIdCell(Exchange.in_(ZObj(-n)), ZObj(0))),
            f"k={n}",
        )
    cells = LawResult("compact: cell snakes over Z")
    for x in single_labels(k)[1:]:
        first, second = snake_composites(x, Z)
        u = ZObj(0)
        cells.record(
            cell_equal(first, HIdCell(x, u), budget) is Verdict.TRUE
            and cell_equal(second, HIdCell(exchange_dual(x, Z), u), budget) is Verdict.TRUE,
            str(x),
        )
    snakes = LawResult(f"compact: system snakes (<= 2 edges, postings in [-{k},{k}])")
    for b in iter_small_boundaries(k):
        snakes.record(check_snakes_on(b, budget), _describe(b))
    return [duals, cells, snakes]


def _describe(b: SituatedBoundary) -> str:
    return ", ".join(f"{e.id}:{e.src}->{e.tgt}={b.label(e.id)}" for e in b.graph.nontrivial_edges())


# -- driver -------------------------------------------------------------------------------------------

def run_suites(
    suites=SUITES,
    seed: int = 0,
    samples: int = 20,
    budget: int = DEFAULT_BUDGET,
) -> list[LawResult]:
    out: list[LawResult] = []
    for name in suites:
        rng = random.Random(f"{seed}:{name}")
        if name == "yanking":
            out += check_yanking()
        elif name == "span":
            out += check_span(rng, samples)
        elif name == "situated":
            out += check_situated(rng, samples, budget)
        elif name == "compact":
            out += check_compact(budget)
        else:
            raise ValueError(f"unknown suite {name!r}")
    return out
