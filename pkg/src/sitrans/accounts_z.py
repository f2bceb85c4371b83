"""Account systems over Z and their double-entry ledgers.

Balances are vertex labels, every transition is a cell whose boundary postings
record the value that entered (positive) or left (negative) the account, and a
trial balance checks that postings across a shared boundary cancel step by step.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from . import rgraph_span as rs
from .cornering import (
    OUT,
    AbsorbLeft,
    AbsorbRight,
    Cell,
    EmitLeft,
    EmitRight,
    Exchange,
    HComp,
    VComp,
    VIdCell,
    eval_flow,
)
from .resource_theory import UnsupportedStructure, Z, ZObj
from .situated import (
    SituatedBoundary,
    SituatedSystem,
    elabel,
    pair_index,
    resolve_pairs,
    resolve_path,
    s_compose,
)


@dataclass(frozen=True)
class LedgerRow:
    transition_id: str
    opening_balance: int
    closing_balance: int
    left_postings: tuple[int, ...] = ()
    right_postings: tuple[int, ...] = ()

    @property
    def delta(self) -> int:
        return self.closing_balance - self.opening_balance

    def conserved(self) -> bool:
        return self.delta == sum(self.left_postings) + sum(self.right_postings)

    def to_dict(self) -> dict:
        return {
            "transition_id": self.transition_id,
            "opening_balance": self.opening_balance,
            "closing_balance": self.closing_balance,
            "left_postings": list(self.left_postings),
            "right_postings": list(self.right_postings),
        }


@dataclass(frozen=True)
class Ledger:
    rows: tuple[LedgerRow, ...]
    opening: int
    closing: int

    @property
    def delta(self) -> int:
        return self.closing - self.opening

    def postings_total(self) -> int:
        return sum(sum(r.left_postings) + sum(r.right_postings) for r in self.rows)

    def problems(self) -> list[str]:
        out = []
        for i, row in enumerate(self.rows):
            if not row.conserved():
                out.append(f"row {i} ({row.transition_id}) does not conserve value")
            if i and self.rows[i - 1].closing_balance != row.opening_balance:
                out.append(f"row {i} does not open at the previous closing balance")
        if self.rows:
            if self.rows[0].opening_balance != self.opening:
                out.append("ledger opening differs from the first row")
            if self.rows[-1].closing_balance != self.closing:
                out.append("ledger closing differs from the last row")
        elif self.opening != self.closing:
            out.append("empty ledger with differing opening and closing")
        if self.delta != self.postings_total():
            out.append("balance change differs from the sum of postings")
        return out

    def to_dict(self) -> dict:
        return {
            "opening": self.opening,
            "closing": self.closing,
            "rows": [r.to_dict() for r in self.rows],
        }

    def to_text(self, title: str = "") -> str:
        lines = [title] if title else []
        lines.append(f"{'transition':<28} {'open':>6} {'close':>6}  left      right")
        for r in self.rows:
            lines.append(
                f"{r.transition_id:<28} {r.opening_balance:>6} {r.closing_balance:>6}  "
                f"{_fmt_postings(r.left_postings):<9} {_fmt_postings(r.right_postings)}"
            )
        lines.append(f"opening {self.opening}, closing {self.closing}, change {self.delta:+d}")
        return "\n".join(lines)


def _fmt_postings(ps: Sequence[int]) -> str:
    return ",".join(f"{p:+d}" for p in ps) if ps else "-"


def _require_z(sys: SituatedSystem) -> None:
    if sys.theory is not Z:
        raise UnsupportedStructure("ledgers are defined for systems over Z")


def ledger_of_run(sys: SituatedSystem, path: Sequence[str], start: str | None = None) -> Ledger:
    _require_z(sys)
    edges, start = resolve_path(sys, path, start)
    rows = []
    for e in edges:
        f = eval_flow(elabel(sys, e))
        rows.append(LedgerRow(e, f.top, f.bottom, f.left_postings, f.right_postings))
    opening = sys.vlabels[start].value
    closing = rows[-1].closing_balance if rows else opening
    return Ledger(tuple(rows), opening, closing)


@dataclass(frozen=True)
class Cancellation:
    step: int
    index: int
    left_posting: int   # right-boundary posting of the left system
    right_posting: int  # left-boundary posting of the right system

    @property
    def cancels(self) -> bool:
        return self.left_posting == -self.right_posting


@dataclass
class AuditReport:
    left: Ledger
    right: Ledger
    composite: Ledger
    cancellations: list[Cancellation] = field(default_factory=list)
    problems: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.problems

    def to_dict(self) -> dict:
        return {
            "pass": self.passed,
            "problems": list(self.problems),
            "left": self.left.to_dict(),
            "right": self.right.to_dict(),
            "composite": self.composite.to_dict(),
            "cancellations": [
                {"step": c.step, "index": c.index, "left": c.left_posting, "right": c.right_posting,
                 "cancels": c.cancels}
                for c in self.cancellations
            ],
        }

    def to_text(self) -> str:
        parts = [
            self.left.to_text("left system"),
            self.right.to_text("right system"),
            self.composite.to_text("composite"),
            "cancellation table (step, index, left-system posting, right-system posting)",
        ]
        parts += [
            f"  {c.step:>3} {c.index:>3} {c.left_posting:+d} {c.right_posting:+d} {'ok' if c.cancels else 'MISMATCH'}"
            for c in self.cancellations
        ] or ["  (no internal postings)"]
        parts += [f"problem: {p}" for p in self.problems]
        parts.append("trial balance: " + ("PASS" if self.passed else "FAIL"))
        return "\n".join(parts)


def trial_balance(
    r: SituatedSystem,
    s: SituatedSystem,
    pairs: Sequence[tuple[str, str]],
    comp: SituatedSystem | None = None,
    start: tuple[str, str] | None = None,
) -> AuditReport:
    """Audit a composite run against the runs of its two components."""
    _require_z(r)
    _require_z(s)
    comp = comp or s_compose(r, s)
    left, right, a, b = resolve_pairs(r, s, pairs, start)
    index = pair_index(comp, r, s)
    path = [index[k] for k in zip(left, right)]
    lr = ledger_of_run(r, left, a)
    ls = ledger_of_run(s, right, b)
    cstart = rs.pair_id(a, b) if a is not None else None
    lc = ledger_of_run(comp, path, cstart)
    report = AuditReport(lr, ls, lc)
    for step, (x, y) in enumerate(zip(lr.rows, ls.rows)):
        if len(x.right_postings) != len(y.left_postings):
            report.problems.append(f"step {step}: seam postings have different lengths")
        for i, (p, q) in enumerate(zip(x.right_postings, y.left_postings)):
            c = Cancellation(step, i, p, q)
            report.cancellations.append(c)
            if not c.cancels:
                report.problems.append(f"step {step}: posting {p:+d} is not cancelled by {q:+d}")
    for name, ledger in (("left", lr), ("right", ls), ("composite", lc)):
        report.problems += [f"{name} ledger: {p}" for p in ledger.problems()]
    if lc.delta != lr.delta + ls.delta:
        report.problems.append(f"composite change {lc.delta:+d} != {lr.delta:+d} + {ls.delta:+d}")
    return report


# -- construction helpers ------------------------------------------------------------------

def z_cell(top: int, left: Exchange = Exchange(), right: Exchange = Exchange()) -> Cell:
    """A Z cell with the given top and side exchanges, built from corners.

    Left entries are handled first, then right entries, each in order; the
    bottom is forced by conservation.
    """
    cur = top
    c: Cell = VIdCell(ZObj(top))
    for a, p in left.entries:
        k = a.value
        if p is OUT:
            step = HComp(AbsorbLeft(ZObj(k)), VIdCell(ZObj(cur)))
            cur += k
        else:
            step = HComp(EmitLeft(ZObj(k)), VIdCell(ZObj(cur - k)))
            cur -= k
        c = VComp(c, step)
    for a, p in right.entries:
        k = a.value
        if p is OUT:
            step = HComp(VIdCell(ZObj(cur - k)), EmitRight(ZObj(k)))
            cur -= k
        else:
            step = HComp(VIdCell(ZObj(cur)), AbsorbRight(ZObj(k)))
            cur += k
        c = VComp(c, step)
    return c


def move_label(amount: int, side: str) -> Exchange:
    """Boundary label of a move that changes the balance by ``amount``.

    Both sides use the left-to-right polarity: a left move of ``a`` receives
    ``a°`` and a right move of ``a`` sends ``(-a)°``, so a seller's right
    boundary matches a buyer's left boundary.
    """
    if side == "left":
        return Exchange(((ZObj(amount), OUT),))
    if side == "right":
        return Exchange(((ZObj(-amount), OUT),))
    raise ValueError(f"side must be 'left' or 'right', got {side!r}")


def boundary_of_labels(labels: Sequence[Exchange]) -> SituatedBoundary:
    """One-vertex boundary with one edge per distinct label, named after it."""
    seen: list[Exchange] = []
    for x in labels:
        if x not in seen:
            seen.append(x)
    g = rs.RGraph.build([rs.UNIT_VERTEX], [(str(x), rs.UNIT_VERTEX, rs.UNIT_VERTEX) for x in seen])
    lab = {e: Exchange() for e in g.edges}
    lab.update({str(x): x for x in seen})
    return SituatedBoundary(g, lab, Z)


def mk_account(lo: int, hi: int, moves: Sequence[tuple[str, int, str]], name: str = "account") -> SituatedSystem:
    """Account with balances ``lo..hi`` and one edge per in-range move."""
    if lo > hi:
        raise ValueError(f"empty balance range [{lo}, {hi}]")
    if not lo <= 0 <= hi:
        raise ValueError("the balance range must contain 0")
    for mname, amount, side in moves:
        if amount == 0:
            raise ValueError(f"move {mname!r} has amount 0")
        if side not in ("left", "right"):
            raise ValueError(f"move {mname!r} has side {side!r}")
    left_b = boundary_of_labels([move_label(a, s) for _, a, s in moves if s == "left"])
    right_b = boundary_of_labels([move_label(a, s) for _, a, s in moves if s == "right"])
    vertices = [str(b) for b in range(lo, hi + 1)]
    edges, leg0, leg1, elabels = [], {}, {}, {}
    for mname, amount, side in moves:
        x = move_label(amount, side)
        for b in range(lo, hi + 1):
            if not lo <= b + amount <= hi:
                continue
            eid = f"{mname}@{b}"
            edges.append((eid, str(b), str(b + amount)))
            triv_l = rs.trivial_id(rs.UNIT_VERTEX)
            leg0[eid] = str(x) if side == "left" else triv_l
            leg1[eid] = str(x) if side == "right" else triv_l
            if side == "left":
                elabels[eid] = z_cell(b, left=x)
            else:
                elabels[eid] = z_cell(b, right=x)
    apex = rs.RGraph.build(vertices, edges)
    vmap = {v: rs.UNIT_VERTEX for v in vertices}
    span = rs.Span(
        left_b.graph, apex, right_b.graph,
        rs.GraphHom.build(apex, left_b.graph, vmap, leg0),
        rs.GraphHom.build(apex, right_b.graph, vmap, leg1),
    )
    vlabels = {str(b): ZObj(b) for b in range(lo, hi + 1)}
    for v in vertices:
        elabels[apex.trivial[v]] = VIdCell(vlabels[v])
    return SituatedSystem(span, vlabels, elabels, left_b, right_b, Z, name)

