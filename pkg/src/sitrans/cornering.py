"""The free cornering of a resource theory.

Cells are immutable terms built from corners, lifted morphisms, identities and
crossings by horizontal and vertical composition.  Every constructor computes
and checks its four-sided boundary on creation, so an ill-composed term cannot
be built.

Equality of free cells is decided on the flattened port graph of a term (corner
moves become wires to side anchors), falling back on the theory's bounded
rewriting when it has equations.  Over Z, cells are compared by flow summary.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Union

from . import _portgraph as pg
from .resource_theory import (
    DEFAULT_BUDGET,
    Diagram,
    FreeTheory,
    IntegerTheory,
    Obj,
    ObjWord,
    UnsupportedStructure,
    Verdict,
    Z,
    ZMor,
    ZObj,
    diagram_to_term,
    dual_obj,
    obj_tensor,
)
from .syntax import Term, TermSyntaxError, parse_term


class CellError(Exception):
    pass


class CompositionError(CellError):
    def __init__(self, message: str, first=None, second=None):
        super().__init__(message)
        self.first = first
        self.second = second


class SeamError(CellError):
    pass


class Polarity(enum.Enum):
    OUT = "o"  # written °, flows left to right
    IN = "*"   # written •, flows right to left

    @property
    def symbol(self) -> str:
        return "°" if self is Polarity.OUT else "•"


OUT = Polarity.OUT
IN = Polarity.IN


@dataclass(frozen=True)
class Exchange:
    """An element of the free monoid on polarized objects."""

    entries: tuple[tuple[Obj, Polarity], ...] = ()

    def __post_init__(self):
        if not all(type(p) is Polarity for _, p in self.entries):
            object.__setattr__(self, "entries", tuple((a, Polarity(p)) for a, p in self.entries))

    @classmethod
    def out(cls, a: Obj) -> "Exchange":
        return cls(((a, OUT),))

    @classmethod
    def in_(cls, a: Obj) -> "Exchange":
        return cls(((a, IN),))

    def tensor(self, other: "Exchange") -> "Exchange":
        if not other.entries:
            return self
        if not self.entries:
            return other
        return Exchange(self.entries + other.entries)

    @property
    def is_unit(self) -> bool:
        return not self.entries

    def __len__(self):
        return len(self.entries)

    def __str__(self):
        if not self.entries:
            return "i"
        return ".".join(f"{a}^{p.value}" for a, p in self.entries)

    def pretty(self) -> str:
        if not self.entries:
            return "I"
        return "⊗".join(
            f"({a.pretty()}){p.symbol}" if isinstance(a, ObjWord) and len(a) > 1 else f"{a.pretty()}{p.symbol}"
            for a, p in self.entries
        )


I_EX = Exchange()


@dataclass(frozen=True)
class CellBoundary:
    top: Obj
    bottom: Obj
    left: Exchange
    right: Exchange

    def pretty(self) -> str:
        return (
            f"top {self.top.pretty()}, bottom {self.bottom.pretty()}, "
            f"left {self.left.pretty()}, right {self.right.pretty()}"
        )


def unit_like(a: Obj) -> Obj:
    return ZObj(0) if isinstance(a, ZObj) else ObjWord((), a.theory)


def _is_unit(a: Obj) -> bool:
    return a.is_unit


# -- cell terms --------------------------------------------------------------------

class Cell:
    """Base class of cell terms; subclasses are frozen dataclasses."""

    @property
    def boundary(self) -> CellBoundary:
        return self._b  # type: ignore[attr-defined]

    @property
    def top(self) -> Obj:
        return self.boundary.top

    @property
    def bottom(self) -> Obj:
        return self.boundary.bottom

    @property
    def left(self) -> Exchange:
        return self.boundary.left

    @property
    def right(self) -> Exchange:
        return self.boundary.right

    def _set(self, top, bottom, left, right) -> None:
        object.__setattr__(self, "_b", CellBoundary(top, bottom, left, right))

    def __str__(self):
        return format_cell(self)


def _bfield():
    return field(init=False, repr=False, compare=False, hash=False, default=None)


@dataclass(frozen=True)
class MorCell(Cell):
    mor: Union[Diagram, ZMor]
    _b: CellBoundary = _bfield()

    def __post_init__(self):
        self._set(self.mor.dom, self.mor.cod, I_EX, I_EX)


@dataclass(frozen=True)
class VIdCell(Cell):
    obj: Obj
    _b: CellBoundary = _bfield()

    def __post_init__(self):
        self._set(self.obj, self.obj, I_EX, I_EX)


@dataclass(frozen=True)
class HIdCell(Cell):
    x: Exchange
    unit: Obj = field(default_factory=ObjWord)
    _b: CellBoundary = _bfield()

    def __post_init__(self):
        self._set(self.unit, self.unit, self.x, self.x)


@dataclass(frozen=True)
class EmitRight(Cell):
    """Top ``a``, right ``a°``."""

    obj: Obj
    _b: CellBoundary = _bfield()

    def __post_init__(self):
        self._set(self.obj, unit_like(self.obj), I_EX, Exchange.out(self.obj))


@dataclass(frozen=True)
class AbsorbLeft(Cell):
    """Left ``a°``, bottom ``a``."""

    obj: Obj
    _b: CellBoundary = _bfield()

    def __post_init__(self):
        self._set(unit_like(self.obj), self.obj, Exchange.out(self.obj), I_EX)


@dataclass(frozen=True)
class EmitLeft(Cell):
    """Top ``a``, left ``a•``."""

    obj: Obj
    _b: CellBoundary = _bfield()

    def __post_init__(self):
        self._set(self.obj, unit_like(self.obj), Exchange.in_(self.obj), I_EX)


@dataclass(frozen=True)
class AbsorbRight(Cell):
    """Right ``a•``, bottom ``a``."""

    obj: Obj
    _b: CellBoundary = _bfield()

    def __post_init__(self):
        self._set(unit_like(self.obj), self.obj, I_EX, Exchange.in_(self.obj))


@dataclass(frozen=True)
class Crossing(Cell):
    """An exchange ``x`` passing over a resident object ``b``."""

    obj: Obj
    x: Exchange
    _b: CellBoundary = _bfield()

    def __post_init__(self):
        self._set(self.obj, self.obj, self.x, self.x)


@dataclass(frozen=True)
class VComp(Cell):
    first: Cell
    second: Cell
    _b: CellBoundary = _bfield()

    def __post_init__(self):
        b1, b2 = self.first.boundary, self.second.boundary
        if b1.bottom != b2.top:
            raise CompositionError(
                f"vertical composite: bottom {b1.bottom.pretty()} of {format_cell(self.first)} "
                f"!= top {b2.top.pretty()} of {format_cell(self.second)}",
                b1, b2,
            )
        self._set(b1.top, b2.bottom, b1.left.tensor(b2.left), b1.right.tensor(b2.right))


@dataclass(frozen=True)
class HComp(Cell):
    first: Cell
    second: Cell
    _b: CellBoundary = _bfield()

    def __post_init__(self):
        b1, b2 = self.first.boundary, self.second.boundary
        if b1.right != b2.left:
            raise CompositionError(
                f"horizontal composite: right {b1.right.pretty()} of {format_cell(self.first)} "
                f"!= left {b2.left.pretty()} of {format_cell(self.second)}",
                b1, b2,
            )
        try:
            top, bottom = obj_tensor(b1.top, b2.top), obj_tensor(b1.bottom, b2.bottom)
        except Exception as exc:
            raise CompositionError(str(exc), b1, b2) from exc
        self._set(top, bottom, b1.left, b2.right)


def boundary(c: Cell) -> CellBoundary:
    return c.boundary


def vcomp(c1: Cell, c2: Cell) -> Cell:
    return VComp(c1, c2)


def hcomp(c1: Cell, c2: Cell) -> Cell:
    return HComp(c1, c2)


def v(*cells: Cell) -> Cell:
    """Left-nested vertical composite of one or more cells."""
    out = cells[0]
    for c in cells[1:]:
        out = VComp(out, c)
    return out


def h(*cells: Cell) -> Cell:
    """Left-nested horizontal composite of one or more cells."""
    out = cells[0]
    for c in cells[1:]:
        out = HComp(out, c)
    return out


def crossing(b: Obj, x: Exchange) -> Cell:
    return Crossing(b, x)


def cell_tensor(c1: Cell, c2: Cell) -> Cell:
    """Tensor of cells: a 2x2 grid whose off-diagonal crossings route c2's
    left exchange under c1 and c1's right exchange over c2."""
    b1, b2 = c1.boundary, c2.boundary
    return VComp(
        HComp(c1, Crossing(b2.top, b1.right)),
        HComp(Crossing(b1.bottom, b2.left), c2),
    )


def size(c: Cell) -> int:
    """Number of leaf cells in a term."""
    if isinstance(c, (VComp, HComp)):
        return size(c.first) + size(c.second)
    return 1


# -- normalization -------------------------------------------------------------------

def yank_normalize(c: Cell) -> Cell:
    """Rewrite with the yanking identities, identity absorption and morphism
    fusion until no rule applies.  The boundary is unchanged."""
    if isinstance(c, VComp):
        return _rebuild(VComp, _norm_chain(VComp, [yank_normalize(p) for p in _chain(VComp, c)]))
    if isinstance(c, HComp):
        return _rebuild(HComp, _norm_chain(HComp, [yank_normalize(p) for p in _chain(HComp, c)]))
    return _norm_leaf(c)


def _chain(kind, c: Cell) -> list[Cell]:
    if isinstance(c, kind):
        return _chain(kind, c.first) + _chain(kind, c.second)
    return [c]


def _rebuild(kind, parts: list[Cell]) -> Cell:
    out = parts[0]
    for p in parts[1:]:
        out = kind(out, p)
    return out


def _norm_leaf(c: Cell) -> Cell:
    if isinstance(c, MorCell):
        if isinstance(c.mor, ZMor):
            return VIdCell(c.mor.dom)
        if c.mor.is_identity():
            return VIdCell(c.mor.dom)
    if isinstance(c, Crossing):
        if c.x.is_unit:
            return VIdCell(c.obj)
        if _is_unit(c.obj):
            return HIdCell(c.x, c.obj)
    if isinstance(c, HIdCell) and c.x.is_unit:
        return VIdCell(c.unit)
    return c


def _norm_chain(kind, parts: list[Cell]) -> list[Cell]:
    changed = True
    while changed:
        changed = False
        flat: list[Cell] = []
        for p in parts:
            flat.extend(_chain(kind, p))
        parts = flat
        if len(parts) > 1:
            ident = VIdCell if kind is VComp else HIdCell
            kept = [
                p for p in parts
                if not isinstance(p, ident) and not (isinstance(p, VIdCell) and _is_unit(p.obj))
            ]
            if len(kept) != len(parts):
                parts = kept or parts[:1]
                changed = True
                continue
        for i in range(len(parts) - 1):
            rep = (_v_pair if kind is VComp else _h_pair)(parts[i], parts[i + 1])
            if rep is not None:
                parts = parts[:i] + [_norm_leaf(rep)] + parts[i + 2:]
                changed = True
                break
    return parts


def _v_pair(a: Cell, b: Cell) -> Cell | None:
    if isinstance(a, HIdCell) and isinstance(b, HIdCell):
        return HIdCell(a.x.tensor(b.x), a.unit)
    if isinstance(a, MorCell) and isinstance(b, MorCell):
        return MorCell(a.mor.then(b.mor))
    if isinstance(a, AbsorbLeft) and isinstance(b, EmitRight) and a.obj == b.obj:
        return HIdCell(Exchange.out(a.obj), unit_like(a.obj))
    if isinstance(a, AbsorbRight) and isinstance(b, EmitLeft) and a.obj == b.obj:
        return HIdCell(Exchange.in_(a.obj), unit_like(a.obj))
    return None


def _h_pair(a: Cell, b: Cell) -> Cell | None:
    if isinstance(a, VIdCell) and isinstance(b, VIdCell):
        return VIdCell(obj_tensor(a.obj, b.obj))
    if isinstance(a, MorCell) and isinstance(b, MorCell):
        return MorCell(a.mor.tensor(b.mor))
    if isinstance(a, MorCell) and isinstance(b, VIdCell) and isinstance(a.mor, Diagram):
        return MorCell(a.mor.tensor(Diagram.identity(b.obj, a.mor.theory)))
    if isinstance(a, VIdCell) and isinstance(b, MorCell) and isinstance(b.mor, Diagram):
        return MorCell(Diagram.identity(a.obj, b.mor.theory).tensor(b.mor))
    if isinstance(a, EmitRight) and isinstance(b, AbsorbLeft) and a.obj == b.obj:
        return VIdCell(a.obj)
    if isinstance(a, AbsorbRight) and isinstance(b, EmitLeft) and a.obj == b.obj:
        return VIdCell(a.obj)
    return None


# -- flattening and equality ------------------------------------------------------------

def _side_graph(x: Exchange, top: tuple[str, ...] = ()) -> tuple[dict, dict]:
    wires, anchors = {}, {}
    for i, (a, p) in enumerate(x.entries):
        for j, letter in enumerate(a.letters):
            anchors[("L", i, j)] = letter
            anchors[("R", i, j)] = letter
            if p is OUT:
                wires[("R", i, j)] = ("L", i, j)
            else:
                wires[("L", i, j)] = ("R", i, j)
    for j, letter in enumerate(top):
        anchors[("top", j)] = letter
        anchors[("bot", j)] = letter
        wires[("bot", j)] = ("top", j)
    return wires, anchors


def flatten(c: Cell) -> pg.PortGraph:
    """Port graph of a free cell: corners become wires to side anchors."""
    if isinstance(c, VComp):
        return pg.vcompose(flatten(c.first), flatten(c.second))
    if isinstance(c, HComp):
        return pg.hcompose(flatten(c.first), flatten(c.second))
    if isinstance(c.top, ZObj):
        raise UnsupportedStructure("cells over Z are compared by flow, not flattened")
    if isinstance(c, MorCell):
        return c.mor.graph
    if isinstance(c, VIdCell):
        return pg.identity_graph(c.obj.letters)
    if isinstance(c, (HIdCell, Crossing)):
        top = c.obj.letters if isinstance(c, Crossing) else ()
        wires, anchors = _side_graph(c.x, top)
        n = len(c.x)
        return pg.PortGraph((), wires, anchors, (len(top), len(top), n, n))
    letters = c.obj.letters
    n = len(letters)
    if isinstance(c, EmitRight):
        wires = {("R", 0, j): ("top", j) for j in range(n)}
        ends, shape = ("top", "R"), (n, 0, 0, 1)
    elif isinstance(c, AbsorbLeft):
        wires = {("bot", j): ("L", 0, j) for j in range(n)}
        ends, shape = ("bot", "L"), (0, n, 1, 0)
    elif isinstance(c, EmitLeft):
        wires = {("L", 0, j): ("top", j) for j in range(n)}
        ends, shape = ("top", "L"), (n, 0, 1, 0)
    elif isinstance(c, AbsorbRight):
        wires = {("bot", j): ("R", 0, j) for j in range(n)}
        ends, shape = ("bot", "R"), (0, n, 0, 1)
    else:
        raise CellError(f"unknown cell {c!r}")
    anchors = {}
    for j, letter in enumerate(letters):
        anchors[(ends[0], j)] = letter
        anchors[(ends[1], 0, j)] = letter
    return pg.PortGraph((), wires, anchors, shape)


def theory_of(c: Cell) -> FreeTheory | IntegerTheory | None:
    if isinstance(c.top, ZObj):
        return Z
    if isinstance(c, (VComp, HComp)):
        return theory_of(c.first) or theory_of(c.second)
    if isinstance(c, MorCell) and isinstance(c.mor, Diagram):
        return c.mor.theory
    return None


def is_z_cell(c: Cell) -> bool:
    return isinstance(c.top, ZObj)


def cell_equal(c1: Cell, c2: Cell, budget: int = DEFAULT_BUDGET) -> Verdict:
    """Three-valued equality of cells (always decided over Z)."""
    if c1.boundary != c2.boundary:
        return Verdict.FALSE
    if is_z_cell(c1):
        # well-typed Z cells conserve value, so the flow is read off the boundary
        return Verdict.of(boundary_flow(c1) == boundary_flow(c2))
    g1, g2 = flatten(c1), flatten(c2)
    if pg.find_iso(g1, g2) is not None:
        return Verdict.TRUE
    theory = theory_of(c1) or theory_of(c2)
    if isinstance(theory, FreeTheory) and (theory.rules or not theory.complete):
        return theory.graph_equal(g1, g2, budget)
    return Verdict.FALSE


# -- flow semantics over Z --------------------------------------------------------------

@dataclass(frozen=True)
class FlowSummary:
    """Value flow of a Z cell; postings are positive when value enters the cell."""

    top: int
    bottom: int
    left_postings: tuple[int, ...] = ()
    right_postings: tuple[int, ...] = ()

    @property
    def net(self) -> int:
        return sum(self.left_postings) + sum(self.right_postings)

    def conserved(self) -> bool:
        return self.bottom == self.top + self.net

    def to_dict(self) -> dict:
        return {
            "top": self.top,
            "bottom": self.bottom,
            "left_postings": list(self.left_postings),
            "right_postings": list(self.right_postings),
        }


def _left_posting(a: ZObj, p: Polarity) -> int:
    return a.value if p is OUT else -a.value


def _right_posting(a: ZObj, p: Polarity) -> int:
    return -a.value if p is OUT else a.value


def postings_of(x: Exchange, side: str) -> tuple[int, ...]:
    """Postings a boundary exchange induces on the given side of a cell."""
    f = _left_posting if side == "left" else _right_posting
    return tuple(f(a, p) for a, p in x.entries)


def boundary_flow(c: Cell) -> FlowSummary:
    b = c.boundary
    return FlowSummary(b.top.value, b.bottom.value, postings_of(b.left, "left"), postings_of(b.right, "right"))


def eval_flow(c: Cell) -> FlowSummary:
    """Flow of a Z cell, computed structurally from its leaves."""
    if not is_z_cell(c):
        raise UnsupportedStructure("flow semantics is defined only over Z")
    if isinstance(c, VComp):
        f1, f2 = eval_flow(c.first), eval_flow(c.second)
        return FlowSummary(f1.top, f2.bottom, f1.left_postings + f2.left_postings,
                           f1.right_postings + f2.right_postings)
    if isinstance(c, HComp):
        f1, f2 = eval_flow(c.first), eval_flow(c.second)
        if len(f1.right_postings) != len(f2.left_postings) or any(
            r != -l for r, l in zip(f1.right_postings, f2.left_postings)
        ):
            raise SeamError(f"postings do not cancel at seam: {f1.right_postings} vs {f2.left_postings}")
        return FlowSummary(f1.top + f2.top, f1.bottom + f2.bottom, f1.left_postings, f2.right_postings)
    if isinstance(c, (EmitRight, EmitLeft)):
        k = c.obj.value
        if isinstance(c, EmitRight):
            return FlowSummary(k, 0, (), (-k,))
        return FlowSummary(k, 0, (-k,), ())
    if isinstance(c, AbsorbLeft):
        return FlowSummary(0, c.obj.value, (c.obj.value,), ())
    if isinstance(c, AbsorbRight):
        return FlowSummary(0, c.obj.value, (), (c.obj.value,))
    b = c.boundary
    return FlowSummary(b.top.value, b.bottom.value, postings_of(b.left, "left"), postings_of(b.right, "right"))


# -- compact structure on horizontal cells ---------------------------------------------------

def _theory_for(a: Obj, theory):
    if isinstance(a, ZObj):
        return Z
    if theory is None or not theory.compact_closed:
        raise UnsupportedStructure("duals of exchanges need a compact closed theory")
    return theory


def exchange_dual(x: Exchange, theory=None) -> Exchange:
    """x† : reverse the entries and dualize each object, keeping polarity."""
    return Exchange(tuple((dual_obj(a, _theory_for(a, theory)), p) for a, p in reversed(x.entries)))


def h_dual_witness(x: Exchange, theory=None, unit: Obj | None = None) -> tuple[Cell, Cell]:
    """Horizontal cells ``eta : I -> x†⊗x`` and ``eps : x⊗x† -> I``."""
    if x.is_unit:
        u = unit if unit is not None else (ZObj(0) if theory is Z else ObjWord())
        return HIdCell(x, u), HIdCell(x, u)
    if len(x) == 1:
        return _single_dual(x.entries[0], theory)
    head = Exchange(x.entries[:1])
    rest = Exchange(x.entries[1:])
    eta_x, eps_x = _single_dual(x.entries[0], theory)
    eta_y, eps_y = h_dual_witness(rest, theory)
    u = unit_like(x.entries[0][0])
    hd, rd = exchange_dual(head, theory), exchange_dual(rest, theory)
    eta = HComp(eta_y, VComp(VComp(HIdCell(rd, u), eta_x), HIdCell(rest, u)))
    eps = HComp(VComp(VComp(HIdCell(head, u), eps_y), HIdCell(hd, u)), eps_x)
    return eta, eps


def _single_dual(entry: tuple[Obj, Polarity], theory) -> tuple[Cell, Cell]:
    a, p = entry
    t = _theory_for(a, theory)
    ad = dual_obj(a, t)
    eta_a = MorCell(t.unit_mor(a) if t is not Z else ZMor(0))
    eps_a = MorCell(t.counit_mor(a) if t is not Z else ZMor(0))
    if p is OUT:
        eta = v(eta_a, h(VIdCell(a), EmitRight(ad)), EmitRight(a))
        eps = v(AbsorbLeft(a), h(AbsorbLeft(ad), VIdCell(a)), eps_a)
    else:
        eta = v(AbsorbRight(ad), h(VIdCell(ad), AbsorbRight(a)), eps_a)
        eps = v(eta_a, h(EmitLeft(a), VIdCell(ad)), EmitLeft(ad))
    return eta, eps


def snake_composites(x: Exchange, theory=None) -> tuple[Cell, Cell]:
    """The two zig-zags built from ``h_dual_witness``; each should equal an identity."""
    eta, eps = h_dual_witness(x, theory)
    u = eta.top
    xd = exchange_dual(x, theory)
    first = HComp(VComp(HIdCell(x, u), eta), VComp(eps, HIdCell(x, u)))
    second = HComp(VComp(eta, HIdCell(xd, u)), VComp(HIdCell(xd, u), eps))
    return first, second


def dual_exchange_isos(a: Obj, theory=None) -> tuple[Cell, Cell]:
    """Horizontal isos ``a° -> (a*)•`` and back."""
    t = _theory_for(a, theory)
    ad = dual_obj(a, t)
    if t is Z:
        cap, cup = ZMor(0), ZMor(0)
    else:
        cap = t.symmetry(a, ad).then(t.counit_mor(a))
        cup = t.unit_mor(a).then(t.symmetry(a, ad))
    phi = VComp(HComp(AbsorbLeft(a), AbsorbRight(ad)), MorCell(cap))
    psi = VComp(MorCell(cup), HComp(EmitLeft(ad), EmitRight(a)))
    return phi, psi


def exchange_cell(a: Obj, b: Obj, theory: FreeTheory | None = None) -> Cell:
    """The canonical cell ``a°⊗b• -> b•⊗a°`` (present in every theory)."""
    if isinstance(a, ZObj):
        sym = ZMor(a.value + b.value)
    else:
        sym = Diagram.symmetry(a, b, theory)
    return v(h(AbsorbLeft(a), AbsorbRight(b)), MorCell(sym), h(EmitLeft(b), EmitRight(a)))


# -- text syntax ---------------------------------------------------------------------

def parse_exchange(text: str, theory) -> Exchange:
    text = text.strip()
    if text in ("", "i"):
        return I_EX
    entries = []
    for part in text.split("."):
        word, sep, pol = part.strip().rpartition("^")
        if not sep or pol not in ("o", "*"):
            raise TermSyntaxError(f"exchange entry {part!r} must end in ^o or ^*")
        entries.append((theory.parse_obj(word), Polarity(pol)))
    return Exchange(tuple(entries))


_CORNERS = {"emitR": EmitRight, "absL": AbsorbLeft, "emitL": EmitLeft, "absR": AbsorbRight}
_CORNER_NAMES = {v_: k for k, v_ in _CORNERS.items()}


def parse_cell(text: str | Term, theory) -> Cell:
    t = parse_term(text) if isinstance(text, str) else text
    if t.head in _CORNERS:
        return _CORNERS[t.head](theory.parse_obj(t.arg or ""))
    if t.head == "vid":
        return VIdCell(theory.parse_obj(t.arg or ""))
    if t.head == "hid":
        return HIdCell(parse_exchange(t.arg or "", theory), theory.unit)
    if t.head == "cross":
        w, sep, x = (t.arg or "").partition(";")
        if not sep:
            raise TermSyntaxError(f"cross needs 'word; exchange', got {t.arg!r}")
        return Crossing(theory.parse_obj(w), parse_exchange(x, theory))
    if t.head == "mor" and len(t.children) == 1:
        return MorCell(theory.parse_mor(t.children[0]))
    if t.head in ("v", "h") and t.children:
        parts = [parse_cell(c, theory) for c in t.children]
        return v(*parts) if t.head == "v" else h(*parts)
    raise TermSyntaxError(f"unknown cell term {t.head!r}")


def format_cell(c: Cell) -> str:
    if isinstance(c, VComp):
        return f"v({format_cell(c.first)},{format_cell(c.second)})"
    if isinstance(c, HComp):
        return f"h({format_cell(c.first)},{format_cell(c.second)})"
    if isinstance(c, MorCell):
        if isinstance(c.mor, ZMor):
            return f"mor(id[{c.mor.value}])"
        return f"mor({diagram_to_term(c.mor)})"
    if isinstance(c, VIdCell):
        return f"vid[{c.obj}]"
    if isinstance(c, HIdCell):
        return f"hid[{c.x}]"
    if isinstance(c, Crossing):
        return f"cross[{c.obj}; {c.x}]"
    return f"{_CORNER_NAMES[type(c)]}[{c.obj}]"
