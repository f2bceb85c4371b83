"""Acceptance criteria, one test each.

Every test prints a single PASS/FAIL line (visible with ``pytest -s`` or in
the summary of ``pytest -v``).  Tolerances are exact throughout: term
equality, integer equality, or zero failures.  The whole module must finish
within ``TIME_LIMIT`` seconds.
"""
from __future__ import annotations

import itertools
import random
import time

import pytest

from oracles import brute_pullback_pairs, brute_pullback_vertices, flow_oracle, flow_tuple, observed_pairs
from sitrans import fixtures, io
from sitrans import rgraph_span as rs
from sitrans.accounts_z import ledger_of_run, trial_balance
from sitrans.cornering import (
    HComp,
    HIdCell,
    Exchange,
    VIdCell,
    eval_flow,
    dual_exchange_isos,
    yank_normalize,
)
from sitrans.laws import (
    check_snakes_on,
    iter_small_boundaries,
    random_account_pair,
    random_pairs,
    random_walk,
    random_z_boundary,
    random_z_system,
    yanking_redexes,
    yanking_theory,
)
from sitrans.resource_theory import Verdict, Z, ZObj
from sitrans.search import Bounds, bread_asymmetry
from sitrans.situated import (
    compositionality_check,
    run,
    s_compose,
    s_equiv,
    s_identity,
    s_tensor,
    validate_situated,
)

SEED = 20240601
TIME_LIMIT = 60.0
RANDOM_HISTORIES = 200
LAW_SAMPLES = 50
TRIAL_BALANCES = 100
SEARCH_BOUND = 8

_started = time.perf_counter()


def report(n: int, name: str, ok: bool, detail: str = "") -> None:
    line = f"criterion {n} {name}: {'PASS' if ok else 'FAIL'}"
    if detail:
        line += f" ({detail})"
    print("\n" + line)


def _equiv(r, s) -> bool:
    cap = max(rs.DEFAULT_SIZE_CAP, len(r.apex.vertices), len(s.apex.vertices))
    return s_equiv(r, s, size_cap=cap) is not None


def test_1_yanking_words_up_to_4():
    th = yanking_theory()
    checked, bad = 0, []
    for n in range(1, 5):
        for letters in itertools.product(("a", "b", "c"), repeat=n):
            w = th.word(*letters)
            for name, redex, ident in yanking_redexes(w):
                checked += 1
                if yank_normalize(redex) != ident:
                    bad.append(f"{name} on {w}")
    report(1, "yanking", not bad, f"{checked} redexes, {len(bad)} not normalized")
    assert not bad


def test_2_gear_law():
    gear = io.load_file(io.bundled_path("gear.json")).value
    gg = rs.span_compose(gear, gear)
    iso = rs.span_iso(gg, rs.span_identity(gear.left))
    shape = (len(gg.apex.vertices), len(gg.apex.nontrivial_edges()))
    ok = iso is not None and shape == (1, 2)
    report(2, "Gear;Gear = identity", ok, f"apex {shape[0]} vertex, {shape[1]} nontrivial edges")
    assert ok


def test_3_baker_eater_pullback():
    baker = io.load_file(io.bundled_path("baker_span.json")).value
    eater = io.load_file(io.bundled_path("eater_span.json")).value
    comp, p0, p1 = rs.compose_parts(baker, eater)
    got = observed_pairs(comp.apex, p0, p1)
    want = brute_pullback_pairs(baker.leg1, eater.leg0)
    sync = {pair for pair, _, _ in got if not baker.right.is_trivial(baker.leg1.emap[pair[0]])}
    want_sync = {pair for pair, _, _ in want if not baker.right.is_trivial(baker.leg1.emap[pair[0]])}
    vertices = {(p0.vmap[v], p1.vmap[v]) for v in comp.apex.vertices}
    ok = (
        len(comp.apex.vertices) == 4
        and vertices == brute_pullback_vertices(baker.leg1, eater.leg0)
        and got == want
        and sync == want_sync == {("sell", "buy")}
    )
    report(3, "Baker/Eater pullback", ok,
           f"{len(comp.apex.vertices)} vertices, {len(got)} edges (oracle {len(want)}), synchronized {sorted(sync)}")
    assert ok


def test_4_composite_history():
    baker, eater = fixtures.baker(3), fixtures.eater(3)
    bakery = s_compose(baker, eater)
    scenario = compositionality_check(baker, eater, fixtures.SCENARIO, bakery, fixtures.SCENARIO_START)
    rng = random.Random(f"{SEED}:histories")
    verdicts = {v: 0 for v in Verdict}
    for _ in range(RANDOM_HISTORIES):
        left, right = random_account_pair(rng)
        comp = s_compose(left, right)
        start, pairs = random_pairs(rng, left, right, comp, 6)
        verdicts[compositionality_check(left, right, pairs, comp, start)] += 1
    ok = scenario is Verdict.TRUE and verdicts[Verdict.TRUE] == RANDOM_HISTORIES
    report(4, "composite history", ok,
           f"scenario {scenario.value}; random paths true {verdicts[Verdict.TRUE]}, "
           f"false {verdicts[Verdict.FALSE]}, unknown {verdicts[Verdict.UNKNOWN]}")
    assert ok


def test_5_category_and_monoidal_laws():
    rng = random.Random(f"{SEED}:laws")
    failures = {"associativity": 0, "unit": 0, "interchange": 0}
    for _ in range(LAW_SAMPLES):
        b = [random_z_boundary(rng) for _ in range(4)]
        r, s, t = (random_z_system(rng, b[j], b[j + 1]) for j in range(3))
        if not _equiv(s_compose(s_compose(r, s), t), s_compose(r, s_compose(s, t))):
            failures["associativity"] += 1
        if not (_equiv(s_compose(s_identity(r.src), r), r) and _equiv(s_compose(r, s_identity(r.tgt)), r)):
            failures["unit"] += 1
        c = [random_z_boundary(rng) for _ in range(6)]
        r1, r2 = random_z_system(rng, c[0], c[1], 3, 4), random_z_system(rng, c[1], c[2], 3, 4)
        s1, s2 = random_z_system(rng, c[3], c[4], 3, 4), random_z_system(rng, c[4], c[5], 3, 4)
        lhs = s_compose(s_tensor(r1, s1), s_tensor(r2, s2))
        rhs = s_tensor(s_compose(r1, r2), s_compose(s1, s2))
        if validate_situated(lhs) or not _equiv(lhs, rhs):
            failures["interchange"] += 1
    ok = not any(failures.values())
    report(5, "associativity, unit, interchange", ok,
           f"{LAW_SAMPLES} samples each; failures " + ", ".join(f"{k} {v}" for k, v in failures.items()))
    assert ok


def test_6_dual_exchange_isos_over_z():
    bad = []
    for k in range(-5, 6):
        phi, psi = dual_exchange_isos(ZObj(k), Z)
        one = flow_tuple(eval_flow(HComp(phi, psi))) == flow_tuple(eval_flow(HIdCell(Exchange.out(ZObj(k)), ZObj(0))))
        two = flow_tuple(eval_flow(HComp(psi, phi))) == flow_tuple(eval_flow(HIdCell(Exchange.in_(ZObj(-k)), ZObj(0))))
        # the flow oracle must agree with eval_flow on both composites
        same = all(flow_tuple(eval_flow(c)) == flow_oracle(c) for c in (HComp(phi, psi), HComp(psi, phi)))
        if not (one and two and same):
            bad.append(k)
    report(6, "dual exchange witnesses over Z", not bad, f"k in [-5,5], failing {bad}")
    assert not bad


def test_7_compact_closure_small_boundaries():
    total, bad = 0, []
    for b in iter_small_boundaries(3):
        total += 1
        if not check_snakes_on(b):
            bad.append(b)
    report(7, "snake equations in S(Z)", not bad, f"{total} boundaries, {len(bad)} failures")
    assert not bad


def test_8_conservation_and_trial_balance():
    rng = random.Random(f"{SEED}:ledgers")
    flows = ledgers = audits = 0
    bad = []
    for i in range(TRIAL_BALANCES):
        left, right = random_account_pair(rng)
        comp = s_compose(left, right)
        start, pairs = random_pairs(rng, left, right, comp)
        rep = trial_balance(left, right, pairs, comp, start)
        audits += 1
        exact = all(c.left_posting + c.right_posting == 0 for c in rep.cancellations)
        additive = rep.composite.delta == rep.left.delta + rep.right.delta
        if not (rep.passed and exact and additive):
            bad.append(f"audit {i}")
        for ledger in (rep.left, rep.right, rep.composite):
            ledgers += 1
            if ledger.problems() or ledger.closing != ledger.opening + ledger.postings_total():
                bad.append(f"ledger {i}")
        # random runs on random Z systems: every step and every whole run conserves
        b = [random_z_boundary(rng) for _ in range(2)]
        sys_ = random_z_system(rng, b[0], b[1])
        begin, path = random_walk(rng, sys_)
        for cell in [run(sys_, path, begin)] + [sys_.elabels.get(e) or VIdCell(ZObj(0)) for e in path]:
            f = eval_flow(cell)
            flows += 1
            if f.bottom != f.top + sum(f.left_postings) + sum(f.right_postings):
                bad.append(f"flow {i}")
        ledger = ledger_of_run(sys_, path, begin)
        ledgers += 1
        if ledger.problems():
            bad.append(f"run ledger {i}")
    report(8, "conservation and double entry", not bad,
           f"{flows} flows, {ledgers} ledgers, {audits} trial balances, {len(bad)} failures")
    assert not bad


def test_9_asymmetry_no_inverse_up_to_8_generators():
    found = bread_asymmetry(Bounds(max_size=SEARCH_BOUND, max_word=2, max_exchange=2))
    ok = found.forward_found and not found.inverses and found.unknown == 0
    report(9, f"asymmetry, search bound {SEARCH_BOUND}", ok,
           f"{found.classes} cell classes, forward cell found {found.forward_found}, "
           f"{len(found.candidates)} candidates, {len(found.inverses)} inverses, {found.unknown} unknown")
    assert ok


def test_total_time_within_limit():
    elapsed = time.perf_counter() - _started
    ok = elapsed < TIME_LIMIT
    print(f"\nacceptance suite time: {elapsed:.1f}s (limit {TIME_LIMIT:.0f}s): {'PASS' if ok else 'FAIL'}")
    assert ok


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v", "-s"]))
