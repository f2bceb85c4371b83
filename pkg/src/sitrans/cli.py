"""Command-line front end.

Exit codes: 0 success, 1 domain failure (violation, mismatch, failed law),
2 input error (unreadable or malformed files, bad arguments).
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import io
from . import rgraph_span as rs
from .accounts_z import Ledger, ledger_of_run, trial_balance
from .cornering import CellError, cell_equal, format_cell, parse_cell
from .fixtures import DEFAULT_CAPACITY
from .laws import SUITES, run_suites
from .resource_theory import (
    DEFAULT_BUDGET,
    TheoryError,
    Verdict,
    Violation,
    validate_signature,
)
from .situated import (
    TRIVIAL_ALIASES,
    PathError,
    SituatedError,
    SituatedSystem,
    compositionality_check,
    elabel,
    is_z,
    pair_index,
    resolve_pairs,
    resolve_path,
    run,
    s_compose,
    s_equiv,
    s_identity,
    s_tensor,
    validate_situated,
)
from .syntax import TermSyntaxError

OK, FAIL, INPUT = 0, 1, 2

INPUT_ERRORS = (io.FormatError, TermSyntaxError, TheoryError, CellError, rs.GraphError, OSError)


class InputError(Exception):
    pass


class DomainError(Exception):
    pass


@dataclass
class Workspace:
    """Loaded theory, files and configuration for one invocation."""

    theory: object = None
    seed: int = 0
    size_cap: int = rs.DEFAULT_SIZE_CAP
    budget: int = DEFAULT_BUDGET
    fmt: str = "text"
    systems: dict[str, SituatedSystem] = field(default_factory=dict)

    @classmethod
    def from_args(cls, args) -> "Workspace":
        theory = None
        if args.theory:
            try:
                theory = io.load_theory(args.theory)
            except INPUT_ERRORS as exc:
                raise InputError(f"--theory: {exc}") from exc
        return cls(theory, args.seed, args.size_cap, args.budget, args.format)

    def resolve(self, name: str) -> Path:
        """A path, or the name of a bundled example (with or without ``.json``)."""
        p = Path(name)
        if p.exists():
            return p
        for cand in (name, f"{name}.json"):
            b = io.bundled_path(cand)
            if b.exists():
                return b
        raise InputError(f"{name}: no such file or bundled example")

    def load(self, name: str) -> io.Loaded:
        try:
            return io.load_file(self.resolve(name), self.theory)
        except INPUT_ERRORS as exc:
            raise InputError(f"{name}: {exc}") from exc

    def system(self, name: str) -> SituatedSystem:
        """Load a situated system; it must pass validation."""
        if name in self.systems:
            return self.systems[name]
        loaded = self.load(name)
        if loaded.kind != "situated":
            raise InputError(f"{name}: expected a situated system, found a {loaded.kind}")
        problems = validate_situated(loaded.value)
        if problems:
            raise DomainError(f"{name}: invalid system: " + "; ".join(str(p) for p in problems))
        loaded.value.name = loaded.value.name or Path(name).stem
        self.systems[name] = loaded.value
        return loaded.value


# -- output helpers -------------------------------------------------------------------

def emit(ws: Workspace, text: str, data) -> None:
    if ws.fmt == "json":
        print(json.dumps(data, indent=2, ensure_ascii=False))
    else:
        print(text)


def _violations_json(vs: list[Violation]) -> list[dict]:
    return [{"path": v.path, "kind": v.kind, "message": v.message} for v in vs]


def _write(path: str | None, text: str) -> None:
    if path:
        Path(path).write_text(text)


def _apex_counts(apex: rs.RGraph) -> dict:
    return {
        "vertices": len(apex.vertices),
        "edges": len(apex.edges),
        "nontrivial_edges": len(apex.nontrivial_edges()),
    }


def _counts_line(label: str, c: dict) -> str:
    return f"{label}: {c['vertices']} vertices, {c['nontrivial_edges']} nontrivial edges ({c['edges']} with trivial)"


# -- paths ------------------------------------------------------------------------------

def _split_path(text: str | None) -> list[str]:
    if text is None or not text.strip():
        return []
    return [p.strip() for p in text.split(",")]


def _split_pair(step: str) -> tuple[str, str]:
    if "+" not in step:
        raise InputError(f"step {step!r}: expected LEFT+RIGHT for a pair of transitions")
    a, b = step.split("+", 1)
    return a.strip(), b.strip()


@dataclass
class Plan:
    """A run resolved against one system, or against two and their composite."""

    system: SituatedSystem
    path: list[str]
    start: str
    parts: tuple | None = None  # (r, s, left path, right path, left start, right start)


def plan_run(ws: Workspace, names: list[str], path_text: str | None, start: str | None) -> Plan:
    steps = _split_path(path_text)
    try:
        if len(names) == 1:
            sys_ = ws.system(names[0])
            edges, st = resolve_path(sys_, steps, start)
            return Plan(sys_, edges, st)
        r, s = ws.system(names[0]), ws.system(names[1])
        comp = s_compose(r, s)
        comp.name = f"{r.name};{s.name}"
        pairs = [_split_pair(p) for p in steps]
        start_pair = _split_pair(start) if start else None
        left, right, a, b = resolve_pairs(r, s, pairs, start_pair)
        index = pair_index(comp, r, s)
        path = []
        for i, key in enumerate(zip(left, right)):
            if key not in index:
                raise PathError(f"step {i}: {key[0]}+{key[1]} is not a synchronized transition")
            path.append(index[key])
        if a is None:
            raise PathError("an empty path needs --start LEFT+RIGHT")
        cstart = rs.pair_id(a, b)
        return Plan(comp, path, cstart, (r, s, left, right, a, b))
    except SituatedError as exc:
        raise DomainError(str(exc)) from exc


# -- commands ---------------------------------------------------------------------------

def cmd_validate(args, ws: Workspace) -> int:
    reports = []
    bad = False
    for name in args.files:
        loaded = ws.load(name)
        v = loaded.value
        if loaded.kind == "situated":
            violations = validate_situated(v)
        elif loaded.kind == "theory":
            violations = validate_signature(v)
        elif loaded.kind == "span":
            violations = [Violation("span", "span", p) for p in v.problems()]
        elif loaded.kind == "boundary":
            violations = v.problems()
        else:
            violations = [Violation("graph", "graph", p) for p in v.problems()]
        bad = bad or bool(violations)
        reports.append((name, loaded.kind, violations))
    lines = []
    for name, kind, violations in reports:
        status = "ok" if not violations else f"{len(violations)} violation(s)"
        lines.append(f"{name} ({kind}): {status}")
        lines += [f"  {x.path}: {x.kind}: {x.message}" for x in violations]
    emit(ws, "\n".join(lines), {
        "ok": not bad,
        "files": [{"file": n, "kind": k, "violations": _violations_json(vs)} for n, k, vs in reports],
    })
    return FAIL if bad else OK


def _load_pair(ws: Workspace, a: str, b: str):
    la, lb = ws.load(a), ws.load(b)
    if la.kind == "situated" and lb.kind == "situated":
        return ws.system(a), ws.system(b), True
    spans = []
    for name, loaded in ((a, la), (b, lb)):
        if loaded.kind == "situated":
            spans.append(loaded.value.span)
        elif loaded.kind == "span":
            spans.append(loaded.value)
        else:
            raise InputError(f"{name}: expected a span or situated system, found a {loaded.kind}")
    return spans[0], spans[1], False


def _combine(args, ws: Workspace, op: str) -> int:
    x, y, situated = _load_pair(ws, args.first, args.second)
    try:
        if situated:
            out = s_compose(x, y) if op == "compose" else s_tensor(x, y)
            apex = out.apex
        else:
            out = rs.span_compose(x, y) if op == "compose" else rs.span_tensor(x, y)
            apex = out.apex
    except (SituatedError, rs.GraphError) as exc:
        print(f"cannot {op}: {exc}", file=sys.stderr)
        return FAIL
    counts = _apex_counts(apex)
    data = {"operation": op, "apex": counts}
    lines = [_counts_line("apex", counts)]
    rc = OK
    if getattr(args, "check_identity", False):
        try:
            if situated:
                same = out.src.same_as(out.tgt)
                iso = same and s_equiv(out, s_identity(out.src), ws.budget, ws.size_cap) is not None
            else:
                iso = out.left == out.right and rs.span_iso(out, rs.span_identity(out.left), ws.size_cap) is not None
        except rs.SizeCapError as exc:
            print(f"identity check: {exc}", file=sys.stderr)
            return FAIL
        data["isomorphic_to_identity"] = iso
        lines.append("isomorphic to the identity: " + ("yes" if iso else "no"))
        rc = OK if iso else FAIL
    if args.out:
        _write(args.out, io.dumps(out))
        lines.append(f"wrote {args.out}")
        data["out"] = args.out
    emit(ws, "\n".join(lines), data)
    return rc


def cmd_compose(args, ws: Workspace) -> int:
    return _combine(args, ws, "compose")


def cmd_tensor(args, ws: Workspace) -> int:
    return _combine(args, ws, "tensor")


def _step_record(sys_: SituatedSystem, e: str) -> dict:
    c = elabel(sys_, e)
    b = c.boundary
    edge = sys_.apex.edges[e]
    rec = {
        "transition": e,
        "from": edge.src,
        "to": edge.tgt,
        "top": b.top.pretty(),
        "bottom": b.bottom.pretty(),
        "left": b.left.pretty(),
        "right": b.right.pretty(),
    }
    return rec


def _step_line(rec: dict) -> str:
    return (f"{rec['transition']}: {rec['from']} -> {rec['to']}   "
            f"top {rec['top']}  bottom {rec['bottom']}  left {rec['left']}  right {rec['right']}")


def _history(plan: Plan) -> dict:
    c = run(plan.system, plan.path, plan.start)
    b = c.boundary
    return {
        "term": format_cell(c),
        "boundary": {"top": b.top.pretty(), "bottom": b.bottom.pretty(),
                     "left": b.left.pretty(), "right": b.right.pretty()},
    }


def _expect(ws: Workspace, plan: Plan, path: str | None):
    if not path:
        return None
    try:
        text = Path(path).read_text().strip() if Path(path).exists() else io.bundled_path(path).read_text().strip()
        golden = parse_cell(text, plan.system.theory)
    except INPUT_ERRORS as exc:
        raise InputError(f"--expect: {exc}") from exc
    try:
        return cell_equal(run(plan.system, plan.path, plan.start), golden, ws.budget)
    except TheoryError:
        return Verdict.FALSE


def cmd_simulate(args, ws: Workspace) -> int:
    if args.interactive:
        return _interactive(args, ws)
    path_text = args.path
    if args.random is not None:
        if len(args.systems) != 1:
            raise InputError("--random needs a single system")
        sys_ = ws.system(args.systems[0])
        rng = random.Random(ws.seed)
        cur = args.start or sys_.apex.vertices[0]
        if cur not in sys_.apex.vertices:
            raise DomainError(f"unknown state {cur!r}")
        steps = []
        for _ in range(args.random):
            e = rng.choice(sys_.apex.out_edges(cur))
            steps.append(e.id)
            cur = e.tgt
        path_text, args.start = ",".join(steps), args.start or sys_.apex.vertices[0]
    plan = plan_run(ws, args.systems, path_text, args.start)
    steps = [_step_record(plan.system, e) for e in plan.path]
    data = {"system": plan.system.name, "start": plan.start, "steps": steps, "history": _history(plan)}
    lines = [f"start {plan.start}"] + [_step_line(r) for r in steps]
    lines.append("history: " + data["history"]["term"])
    if is_z(plan.system):
        ledger = ledger_of_run(plan.system, plan.path, plan.start)
        data["ledger"] = ledger.to_dict()
        lines.append(ledger.to_text("ledger"))
    rc = OK
    verdict = _expect(ws, plan, args.expect)
    if verdict is not None:
        data["matches_expected"] = verdict.value
        lines.append(f"matches expected history: {verdict.value}")
        rc = OK if verdict is Verdict.TRUE else FAIL
    emit(ws, "\n".join(lines), data)
    return rc


def _interactive(args, ws: Workspace) -> int:
    if len(args.systems) != 1:
        raise InputError("interactive mode steps a single system; compose first with `compose --out`")
    sys_ = ws.system(args.systems[0])
    g = sys_.apex
    cur = args.start or g.vertices[0]
    if cur not in g.vertices:
        raise DomainError(f"unknown state {cur!r}")
    start, path = cur, []
    out = sys.stdout
    while True:
        enabled = g.out_edges(cur)
        print(f"state {cur} [{sys_.vlabels[cur].pretty()}]", file=out)
        for i, e in enumerate(enabled):
            print(f"  {i}: {e.id} -> {e.tgt}", file=out)
        print("choose a transition (number or id), or q to quit> ", end="", file=out, flush=True)
        line = sys.stdin.readline()
        if not line or line.strip() in ("q", "quit", "exit"):
            print(file=out)
            break
        choice = line.strip()
        chosen = None
        if choice.isdigit() and int(choice) < len(enabled):
            chosen = enabled[int(choice)]
        else:
            if choice in TRIVIAL_ALIASES:
                choice = g.trivial[cur]
            chosen = next((e for e in enabled if e.id == choice), None)
        if chosen is None:
            print(f"not enabled here: {choice!r}", file=out)
            continue
        rec = _step_record(sys_, chosen.id)
        print(_step_line(rec), file=out)
        if is_z(sys_):
            row = ledger_of_run(sys_, [chosen.id], cur).rows[0]
            print(f"  ledger: {row.opening_balance} -> {row.closing_balance}  "
                  f"left {list(row.left_postings)} right {list(row.right_postings)}", file=out)
        path.append(chosen.id)
        cur = chosen.tgt
    plan = Plan(sys_, path, start)
    print("history: " + _history(plan)["term"], file=out)
    if is_z(sys_):
        print(ledger_of_run(sys_, path, start).to_text("ledger"), file=out)
    return OK


def cmd_history(args, ws: Workspace) -> int:
    plan = plan_run(ws, args.systems, args.path, args.start)
    data = {"system": plan.system.name, "start": plan.start, "path": plan.path, **_history(plan)}
    b = data["boundary"]
    lines = [
        f"history of {len(plan.path)} step(s) from {plan.start}",
        f"  term:   {data['term']}",
        f"  top {b['top']}  bottom {b['bottom']}  left {b['left']}  right {b['right']}",
    ]
    rc = OK
    if plan.parts is not None:
        r, s, left, right, a, c = plan.parts
        v = compositionality_check(r, s, list(zip(left, right)), plan.system, (a, c), ws.budget)
        data["compositional"] = v.value
        lines.append(f"composite history = component histories side by side: {v.value}")
        if v is Verdict.FALSE:
            rc = FAIL
    verdict = _expect(ws, plan, args.expect)
    if verdict is not None:
        data["matches_expected"] = verdict.value
        lines.append(f"matches expected history: {verdict.value}")
        if verdict is not Verdict.TRUE:
            rc = FAIL
    emit(ws, "\n".join(lines), data)
    return rc


def cmd_ledger(args, ws: Workspace) -> int:
    plan = plan_run(ws, args.systems, args.path, args.start)
    if not is_z(plan.system):
        raise DomainError("ledgers are defined for systems over Z")
    rc = OK
    if plan.parts is None:
        ledger = ledger_of_run(plan.system, plan.path, plan.start)
        problems = ledger.problems()
        data = {**ledger.to_dict(), "problems": problems}
        text = ledger.to_text(plan.system.name)
        ledgers: dict[str, Ledger] = {plan.system.name or "balance": ledger}
        rc = FAIL if problems else OK
    else:
        r, s, left, right, a, b = plan.parts
        report = trial_balance(r, s, list(zip(left, right)), plan.system, (a, b))
        data, text = report.to_dict(), report.to_text()
        ledgers = {r.name or "left": report.left, s.name or "right": report.right,
                   "composite": report.composite}
        rc = OK if report.passed else FAIL
    if args.plot:
        from .report import plot_balances

        plot_balances(ledgers, args.plot, title="balances")
        text += f"\nwrote {args.plot}"
        data["plot"] = args.plot
    emit(ws, text, data)
    return rc


def cmd_check_laws(args, ws: Workspace) -> int:
    suites = SUITES if args.suite == "all" else (args.suite,)
    results = run_suites(suites, seed=ws.seed, samples=args.samples, budget=ws.budget)
    failed = any(not r.ok for r in results)
    lines = [r.line() for r in results]
    for r in results:
        lines += [f"  {r.name}: {f}" for f in r.failures]
    lines.append("all laws hold" if not failed else "some laws FAILED")
    emit(ws, "\n".join(lines), {"ok": not failed, "laws": [r.to_dict() for r in results]})
    return FAIL if failed else OK


def cmd_export_dot(args, ws: Workspace) -> int:
    loaded = ws.load(args.file)
    if loaded.kind == "theory":
        raise InputError(f"{args.file}: a theory has no graph to export")
    text = io.to_dot(loaded.value, Path(args.file).stem)
    if args.out:
        _write(args.out, text)
        if ws.fmt == "json":
            emit(ws, "", {"out": args.out})
    else:
        sys.stdout.write(text)
    return OK


def cmd_examples(args, ws: Workspace) -> int:
    if args.capacity < 0:
        raise InputError("--capacity must be non-negative")
    paths = io.write_examples(args.dir, args.capacity)
    emit(ws, "\n".join(f"wrote {p}" for p in paths), {"files": [str(p) for p in paths]})
    return OK


# -- parser -------------------------------------------------------------------------------

def _global_flags(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--theory", default=d(None), help="built-in theory name (Z, bread, bread_sift) or theory file")
    p.add_argument("--seed", type=int, default=d(0), help="randomization seed")
    p.add_argument("--size-cap", type=int, default=d(rs.DEFAULT_SIZE_CAP), help="largest apex searched for isomorphisms")
    p.add_argument("--budget", type=int, default=d(DEFAULT_BUDGET), help="rewrite budget for equality checks")
    p.add_argument("--format", choices=("text", "json"), default=d("text"))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sitrans", description="Situated transition systems.")
    _global_flags(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="check theory, span and system files")
    p.add_argument("files", nargs="+")
    p.set_defaults(func=cmd_validate)

    for name, func, helptext in (
        ("compose", cmd_compose, "compose two systems along their shared boundary"),
        ("tensor", cmd_tensor, "put two systems side by side"),
    ):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("first")
        p.add_argument("second")
        p.add_argument("--out", help="write the result to this file")
        if name == "compose":
            p.add_argument("--check-identity", action="store_true",
                           help="report whether the composite is isomorphic to an identity")
        p.set_defaults(func=func)

    run_help = ("comma-separated transitions; with two systems each step is LEFT+RIGHT; "
                "eps (or an empty step) is the idle transition")
    p = sub.add_parser("simulate", parents=[common], help="replay a path and print each step")
    p.add_argument("systems", nargs="+", metavar="system")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--path", help=run_help)
    mode.add_argument("--interactive", action="store_true", help="choose transitions at a prompt")
    mode.add_argument("--random", type=int, metavar="N", help="take N random steps (uses --seed)")
    p.add_argument("--start", help="start state (LEFT+RIGHT with two systems)")
    p.add_argument("--expect", help="file holding the expected history term")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("history", parents=[common], help="print the material history of a path")
    p.add_argument("systems", nargs="+", metavar="system")
    p.add_argument("--path", help=run_help)
    p.add_argument("--start")
    p.add_argument("--expect", help="file holding the expected history term")
    p.set_defaults(func=cmd_history)

    p = sub.add_parser("ledger", parents=[common], help="ledger of a run over Z; trial balance for two systems")
    p.add_argument("systems", nargs="+", metavar="system")
    p.add_argument("--path", help=run_help)
    p.add_argument("--start")
    p.add_argument("--plot", metavar="FILE", help="save a balance plot (PNG, SVG or PDF by extension)")
    p.set_defaults(func=cmd_ledger)

    p = sub.add_parser("check-laws", parents=[common], help="run the law suites")
    p.add_argument("--suite", choices=SUITES + ("all",), default="all")
    p.add_argument("--samples", type=int, default=20, help="random samples per law")
    p.set_defaults(func=cmd_check_laws)

    p = sub.add_parser("export-dot", parents=[common], help="DOT text of a graph, boundary, span or system")
    p.add_argument("file")
    p.add_argument("--out")
    p.set_defaults(func=cmd_export_dot)

    p = sub.add_parser("examples", parents=[common], help="write the bundled example files")
    p.add_argument("dir", nargs="?", default=".")
    p.add_argument("--capacity", type=int, default=DEFAULT_CAPACITY, help="loaf capacity of the bakery systems")
    p.set_defaults(func=cmd_examples)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return INPUT if exc.code else OK
    if getattr(args, "command", None) in ("simulate", "history", "ledger"):
        if len(args.systems) > 2:
            print("sitrans: at most two systems", file=sys.stderr)
            return INPUT
        if args.command != "simulate" and args.path is None and args.start is None:
            print("sitrans: give --path (and --start for an empty path)", file=sys.stderr)
            return INPUT
    try:
        ws = Workspace.from_args(args)
        return args.func(args, ws)
    except InputError as exc:
        print(f"sitrans: {exc}", file=sys.stderr)
        return INPUT
    except DomainError as exc:
        print(f"sitrans: {exc}", file=sys.stderr)
        return FAIL
    except (SituatedError, TheoryError, CellError, rs.GraphError) as exc:
        print(f"sitrans: {exc}", file=sys.stderr)
        return FAIL


if __name__ == "__main__":
    sys.exit(main())
