"""JSON file formats, the bundled examples, and DOT export."""
from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from . import fixtures
from . import rgraph_span as rs
from .accounts_z import mk_account
from .cornering import Exchange, VIdCell, format_cell, parse_cell, parse_exchange
from .resource_theory import (
    FreeTheory,
    TheorySignature,
    Z,
    builtin_theory,
    theory_from_dict,
)
from .situated import SituatedBoundary, SituatedSystem


class FormatError(ValueError):
    """Input that cannot be read as one of the file formats."""


# -- theories -----------------------------------------------------------------------

def load_theory(ref, base: Path | None = None):
    """Resolve a theory reference: a built-in name, a file path, or an inline signature."""
    if isinstance(ref, dict):
        return _theory_from_data(ref)
    if ref is None:
        raise FormatError("missing theory reference")
    try:
        return builtin_theory(ref)
    except KeyError:
        pass
    path = Path(ref)
    if base is not None and not path.is_absolute():
        path = base / path
    if not path.exists():
        raise FormatError(f"unknown theory {ref!r} (not built in and no such file)")
    return _theory_from_data(_read_json(path))


def _theory_from_data(data: dict):
    if data.get("name") == "Z" and not data.get("objects"):
        return Z
    try:
        return theory_from_dict(data)
    except (KeyError, TypeError) as exc:
        raise FormatError(f"malformed theory: {exc}") from exc


def theory_ref(theory) -> object:
    if theory is Z:
        return "Z"
    if theory.name in ("bread", "bread_sift"):
        return theory.name
    return theory.sig.to_dict()


def _read_json(path: Path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"not valid JSON ({exc})") from exc


# -- boundaries and systems -------------------------------------------------------------

def boundary_to_dict(b: SituatedBoundary) -> dict:
    return {
        "graph": b.graph.to_dict(),
        "labels": {e: str(b.label(e)) for e in b.graph.edges if not b.graph.is_trivial(e)},
    }


def boundary_from_dict(data: dict, theory) -> SituatedBoundary:
    g = rs.RGraph.from_dict(data["graph"])
    labels = {e: Exchange() for e in g.edges if g.is_trivial(e)}
    for e, text in data.get("labels", {}).items():
        labels[e] = parse_exchange(text, theory)
    return SituatedBoundary(g, labels, theory)


def system_to_dict(sys: SituatedSystem) -> dict:
    g = sys.apex
    elabels = {}
    for e in g.edges:
        c = sys.elabels.get(e)
        if g.is_trivial(e) and (c is None or c == VIdCell(sys.vlabels[g.edges[e].src])):
            continue
        elabels[e] = format_cell(c)
    return {
        "kind": "situated",
        "name": sys.name,
        "theory": theory_ref(sys.theory),
        "src": boundary_to_dict(sys.src),
        "tgt": boundary_to_dict(sys.tgt),
        "span": sys.span.to_dict(),
        "vlabels": {v: str(sys.vlabels[v]) for v in g.vertices},
        "elabels": elabels,
    }


def system_from_dict(data: dict, base: Path | None = None) -> SituatedSystem:
    theory = load_theory(data.get("theory"), base)
    src = boundary_from_dict(data["src"], theory)
    tgt = boundary_from_dict(data["tgt"], theory)
    span_data = dict(data["span"])
    span_data.setdefault("left", data["src"]["graph"])
    span_data.setdefault("right", data["tgt"]["graph"])
    span = rs.Span.from_dict(span_data)
    vlabels = {v: theory.parse_obj(w) for v, w in data["vlabels"].items()}
    elabels = {e: parse_cell(t, theory) for e, t in data.get("elabels", {}).items()}
    for v in span.apex.vertices:
        if v in vlabels:
            elabels.setdefault(span.apex.trivial[v], VIdCell(vlabels[v]))
    return SituatedSystem(span, vlabels, elabels, src, tgt, theory, data.get("name", ""))


# -- generic loading ----------------------------------------------------------------------

@dataclass
class Loaded:
    kind: str  # "situated", "span", "theory", "boundary", "graph"
    value: object
    path: str = ""


def classify(data: dict) -> str:
    if not isinstance(data, dict):
        raise FormatError("top-level JSON value must be an object")
    if data.get("kind") in ("situated", "span", "theory", "boundary", "graph"):
        return data["kind"]
    if "elabels" in data or "vlabels" in data:
        return "situated"
    if "apex" in data:
        return "span"
    if "objects" in data:
        return "theory"
    if "graph" in data and "labels" in data:
        return "boundary"
    if "vertices" in data:
        return "graph"
    raise FormatError("unrecognized file: expected a theory, graph, boundary, span or situated system")


def load_data(data: dict, base: Path | None = None, theory=None) -> Loaded:
    kind = classify(data)
    try:
        if kind == "situated":
            return Loaded(kind, system_from_dict(data, base))
        if kind == "span":
            return Loaded(kind, rs.Span.from_dict(data))
        if kind == "theory":
            return Loaded(kind, TheorySignature.from_dict(data))
        if kind == "boundary":
            th = load_theory(data["theory"], base) if "theory" in data else theory
            return Loaded(kind, boundary_from_dict(data, th or Z))
        return Loaded(kind, rs.RGraph.from_dict(data))
    except FormatError:
        raise
    except (KeyError, TypeError, ValueError, rs.GraphError) as exc:
        raise FormatError(f"malformed {kind} file: {exc}") from exc


def load_file(path, theory=None) -> Loaded:
    path = Path(path)
    if not path.exists():
        raise FormatError("no such file")
    loaded = load_data(_read_json(path), path.parent, theory)
    loaded.path = str(path)
    return loaded


def dump(obj) -> dict:
    if isinstance(obj, SituatedSystem):
        return system_to_dict(obj)
    if isinstance(obj, rs.Span):
        return {"kind": "span", **obj.to_dict()}
    if isinstance(obj, TheorySignature):
        return obj.to_dict()
    if isinstance(obj, FreeTheory):
        return obj.sig.to_dict()
    if isinstance(obj, SituatedBoundary):
        return {"kind": "boundary", "theory": theory_ref(obj.theory), **boundary_to_dict(obj)}
    if isinstance(obj, rs.RGraph):
        return obj.to_dict()
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj) -> str:
    return json.dumps(dump(obj), indent=2, ensure_ascii=False) + "\n"


# -- bundled examples -----------------------------------------------------------------------

def example_objects(capacity: int = fixtures.DEFAULT_CAPACITY) -> dict[str, object]:
    return {
        "gear.json": fixtures.gear_span(),
        "gear_boundary.json": fixtures.gear_boundary(),
        "gear_z.json": fixtures.gear_z_system(),
        "baker_span.json": fixtures.baker_span(),
        "eater_span.json": fixtures.eater_span(),
        "baker.json": fixtures.baker(capacity),
        "eater.json": fixtures.eater(capacity),
        "bread_theory.json": fixtures.bread_theory(),
        "account.json": fixtures.demo_account(),
        "seller.json": mk_account(-5, 5, [("sell", -5, "right")], "seller"),
        "buyer.json": mk_account(-5, 5, [("buy", 5, "left")], "buyer"),
    }


def write_examples(directory, capacity: int = fixtures.DEFAULT_CAPACITY) -> list[Path]:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    out = []
    for name, obj in example_objects(capacity).items():
        p = directory / name
        p.write_text(dumps(obj))
        out.append(p)
    return out


def bundled_path(name: str) -> Path:
    return Path(str(resources.files("sitrans") / "data" / name))


# -- DOT export ---------------------------------------------------------------------------

def _q(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(obj, name: str = "G") -> str:
    """Deterministic DOT text; trivial edges are left out."""
    lines = [f"digraph {_q(name)} {{", "  rankdir=LR;"]
    if isinstance(obj, SituatedSystem):
        g = obj.apex
        for v in g.vertices:
            lines.append(f"  {_q(v)} [label={_q(obj.vlabels[v].pretty())}];")
        for e in g.nontrivial_edges():
            c = obj.elabels.get(e.id)
            lines.append(f"  {_q(e.src)} -> {_q(e.tgt)} [label={_q(e.id + ': ' + format_cell(c))}];")
    elif isinstance(obj, SituatedBoundary):
        g = obj.graph
        for v in g.vertices:
            lines.append(f"  {_q(v)};")
        for e in g.nontrivial_edges():
            lines.append(f"  {_q(e.src)} -> {_q(e.tgt)} [label={_q(str(obj.label(e.id)))}];")
    elif isinstance(obj, rs.Span):
        g = obj.apex
        for v in g.vertices:
            lines.append(f"  {_q(v)};")
        for e in g.nontrivial_edges():
            l0 = obj.leg0.emap[e.id]
            l1 = obj.leg1.emap[e.id]
            l0 = "ε" if obj.left.is_trivial(l0) else l0
            l1 = "ε" if obj.right.is_trivial(l1) else l1
            lines.append(f"  {_q(e.src)} -> {_q(e.tgt)} [label={_q(f'{e.id} ({l0} / {l1})')}];")
    elif isinstance(obj, rs.RGraph):
        for v in obj.vertices:
            lines.append(f"  {_q(v)};")
        for e in obj.nontrivial_edges():
            lines.append(f"  {_q(e.src)} -> {_q(e.tgt)} [label={_q(e.id)}];")
    else:
        raise TypeError(f"cannot export {type(obj).__name__} to DOT")
    lines.append("}")
    return "\n".join(lines) + "\n"
