from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import balance_after, flow_oracle
from sitrans import fixtures
from sitrans.accounts_z import ledger_of_run, mk_account, move_label, trial_balance, z_cell
from sitrans.cornering import AbsorbLeft, AbsorbRight, EmitLeft, EmitRight, Exchange, eval_flow
from sitrans.laws import random_account_pair, random_pairs
from sitrans.resource_theory import UnsupportedStructure, ZObj
from sitrans.situated import s_compose


def seller_buyer():
    return (mk_account(-5, 5, [("sell", -5, "right")], "seller"),
            mk_account(-5, 5, [("buy", 5, "left")], "buyer"))


# -- ledgers ---------------------------------------------------------------------

def test_deposit_then_withdraw():
    acct = fixtures.demo_account()
    ledger = ledger_of_run(acct, ["deposit@0", "withdraw@5"])
    assert (ledger.opening, ledger.closing) == (0, 2)
    assert [r.left_postings for r in ledger.rows] == [(5,), (-3,)]
    assert [r.right_postings for r in ledger.rows] == [(), ()]
    # the same numbers from the flow oracle on the two cells
    flows = [flow_oracle(acct.elabels[e]) for e in ("deposit@0", "withdraw@5")]
    assert [f[2] for f in flows] == [[5], [-3]]
    assert balance_after(0, [5, -3]) == [0, 5, 2]
    assert ledger.problems() == []


def test_empty_ledger():
    acct = fixtures.demo_account()
    ledger = ledger_of_run(acct, [], "3")
    assert ledger.rows == ()
    assert ledger.opening == ledger.closing == 3


def test_trivial_step_row():
    acct = fixtures.demo_account()
    ledger = ledger_of_run(acct, ["eps"], "4")
    (row,) = ledger.rows
    assert row.opening_balance == row.closing_balance == 4
    assert row.left_postings == () and row.right_postings == ()


def test_ledger_needs_z():
    with pytest.raises(UnsupportedStructure):
        ledger_of_run(fixtures.baker(), [], "open_0")


def test_ledger_text_and_dict():
    ledger = ledger_of_run(fixtures.demo_account(), ["deposit@0"])
    assert "closing 5" in ledger.to_text()
    assert ledger.to_dict()["rows"][0]["left_postings"] == [5]


# -- trial balance -------------------------------------------------------------------

def test_seller_buyer_trial_balance():
    seller, buyer = seller_buyer()
    report = trial_balance(seller, buyer, [("sell@0", "buy@0")])
    assert report.passed
    assert report.left.delta == -5
    assert report.left.rows[0].right_postings == (-5,)
    assert report.right.delta == 5
    assert report.right.rows[0].left_postings == (5,)
    assert [(c.left_posting, c.right_posting) for c in report.cancellations] == [(-5, 5)]
    assert report.composite.delta == 0


def test_all_trivial_trial_balance():
    seller, buyer = seller_buyer()
    report = trial_balance(seller, buyer, [("eps", "eps"), ("eps", "eps")], start=("0", "0"))
    assert report.passed
    assert report.cancellations == []
    assert report.left.delta == report.right.delta == report.composite.delta == 0


def test_trial_balance_text():
    seller, buyer = seller_buyer()
    text = trial_balance(seller, buyer, [("sell@0", "buy@0")]).to_text()
    assert text.endswith("trial balance: PASS")


def test_negative_five_dollars():
    """Alice giving Bob -5 moves the same value as Bob giving Alice 5."""
    alice_gives, bob_takes = EmitRight(ZObj(-5)), AbsorbLeft(ZObj(-5))
    bob_gives, alice_takes = EmitLeft(ZObj(5)), AbsorbRight(ZObj(5))

    def delta_and_postings(c):
        top, bottom, left, right = flow_oracle(c)
        return bottom - top, sum(left) + sum(right)

    assert delta_and_postings(alice_gives) == delta_and_postings(alice_takes) == (5, 5)
    assert delta_and_postings(bob_takes) == delta_and_postings(bob_gives) == (-5, -5)
    for c in (alice_gives, alice_takes, bob_takes, bob_gives):
        f = eval_flow(c)
        assert (f.bottom - f.top, f.net) == delta_and_postings(c)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 100_000))
def test_random_trial_balances(seed):
    rng = random.Random(seed)
    left, right = random_account_pair(rng)
    comp = s_compose(left, right)
    start, pairs = random_pairs(rng, left, right, comp)
    report = trial_balance(left, right, pairs, comp, start)
    assert report.passed, report.problems
    assert report.composite.delta == report.left.delta + report.right.delta
    assert all(c.cancels for c in report.cancellations)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 100_000))
def test_closed_systems_keep_their_total(seed):
    rng = random.Random(seed)
    amounts = rng.sample([1, 2, 3], rng.randint(1, 2))
    payer = mk_account(-4, 4, [(f"pay{k}", -k, "right") for k in amounts], "payer")
    payee = mk_account(-4, 4, [(f"recv{k}", k, "left") for k in amounts], "payee")
    comp = s_compose(payer, payee)
    assert not comp.src.graph.nontrivial_edges() and not comp.tgt.graph.nontrivial_edges()
    start, pairs = random_pairs(rng, payer, payee, comp)
    report = trial_balance(payer, payee, pairs, comp, start)
    assert report.composite.delta == 0


# -- account construction -----------------------------------------------------------------

def test_counting():
    acct = mk_account(0, 2, [("deposit", 1, "left")])
    assert len(acct.apex.vertices) == 3
    assert len(acct.apex.nontrivial_edges()) == 2


def test_clamping():
    acct = mk_account(0, 0, [("deposit", 1, "left"), ("spend", -2, "right")])
    assert acct.apex.nontrivial_edges() == []


def test_bad_ranges_and_moves():
    with pytest.raises(ValueError):
        mk_account(2, 1, [])
    with pytest.raises(ValueError):
        mk_account(0, 3, [("nothing", 0, "left")])


def test_move_labels_match_across_a_transfer():
    assert move_label(-5, "right") == move_label(5, "left") == Exchange.out(ZObj(5))


def test_z_cell_is_conservative():
    c = z_cell(2, Exchange.out(ZObj(3)), Exchange.in_(ZObj(-1)))
    f = eval_flow(c)
    assert (f.top, f.bottom) == (2, 4)
    assert f.conserved()
