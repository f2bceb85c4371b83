"""Resource theories: free symmetric strict monoidal categories and Z.

Objects of a free theory are words over object generators.  Morphisms are
:class:`Diagram` values, i.e. anchored acyclic port graphs, so the symmetric
monoidal axioms hold definitionally and equality in an equation-free theory is
boundary-preserving isomorphism.  Equations are handled by bounded rewriting
with a three-valued :class:`Verdict`.

The integer theory Z is thin and compact closed: its objects are integers
(tensor is addition) and there is a morphism ``m -> n`` exactly when ``m == n``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Union

from . import _portgraph as pg
from .syntax import Term, TermSyntaxError, parse_term

DEFAULT_BUDGET = 2000


class TheoryError(Exception):
    pass


class SignatureMismatch(TheoryError):
    pass


class CompositionTypeError(TheoryError):
    pass


class UnsupportedStructure(TheoryError):
    pass


class Verdict(enum.Enum):
    TRUE = "true"
    FALSE = "false"
    UNKNOWN = "unknown"

    def __bool__(self):
        if self is Verdict.UNKNOWN:
            raise ValueError("an unknown verdict has no truth value")
        return self is Verdict.TRUE

    @classmethod
    def of(cls, flag: bool) -> "Verdict":
        return cls.TRUE if flag else cls.FALSE


# -- objects -------------------------------------------------------------------

@dataclass(frozen=True)
class ObjWord:
    """Word of object generators; the empty word is the unit I."""

    letters: tuple[str, ...] = ()
    theory: str | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(self.letters))

    def tensor(self, other: "ObjWord") -> "ObjWord":
        return obj_tensor(self, other)

    def unit(self) -> "ObjWord":
        return ObjWord((), self.theory)

    @property
    def is_unit(self) -> bool:
        return not self.letters

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __str__(self):
        return ",".join(self.letters) if self.letters else "I"

    def pretty(self) -> str:
        """Human form with runs compressed, e.g. ``oven⊗bread^2``."""
        if not self.letters:
            return "I"
        parts = []
        i = 0
        while i < len(self.letters):
            j = i
            while j < len(self.letters) and self.letters[j] == self.letters[i]:
                j += 1
            n = j - i
            parts.append(self.letters[i] if n == 1 else f"{self.letters[i]}^{n}")
            i = j
        return "⊗".join(parts)


@dataclass(frozen=True)
class ZObj:
    """Object of Z: canonical representative of a group-of-differences pair."""

    value: int

    @classmethod
    def from_pair(cls, p: int, n: int) -> "ZObj":
        return cls(p - n)

    def tensor(self, other: "ZObj") -> "ZObj":
        return obj_tensor(self, other)

    def unit(self) -> "ZObj":
        return ZObj(0)

    @property
    def is_unit(self) -> bool:
        return self.value == 0

    def __str__(self):
        return str(self.value)

    def pretty(self) -> str:
        return str(self.value)


Obj = Union[ObjWord, ZObj]


def obj_tensor(a: Obj, b: Obj) -> Obj:
    if isinstance(a, ZObj) and isinstance(b, ZObj):
        return ZObj(a.value + b.value)
    if isinstance(a, ObjWord) and isinstance(b, ObjWord):
        if a.theory and b.theory and a.theory != b.theory:
            raise SignatureMismatch(f"cannot tensor words of {a.theory!r} and {b.theory!r}")
        return ObjWord(a.letters + b.letters, a.theory or b.theory)
    raise SignatureMismatch(f"cannot tensor {type(a).__name__} with {type(b).__name__}")


def z_hom_exists(m: ZObj, n: ZObj) -> bool:
    return m.value == n.value


def dual_obj(w: Obj, theory: "FreeTheory | None" = None) -> Obj:
    if isinstance(w, ZObj):
        return ZObj(-w.value)
    if theory is None or not theory.compact_closed:
        raise UnsupportedStructure("dual objects need a compact closed theory")
    return theory.dual(w)


# -- morphisms -------------------------------------------------------------------

class Diagram:
    """Morphism of a free theory as an anchored acyclic port graph."""

    __slots__ = ("dom", "cod", "graph", "theory")

    def __init__(self, dom: ObjWord, cod: ObjWord, graph: pg.PortGraph, theory=None):
        self.dom = dom
        self.cod = cod
        self.graph = graph
        self.theory = theory

    @classmethod
    def identity(cls, w: ObjWord, theory=None) -> "Diagram":
        return cls(w, w, pg.identity_graph(w.letters), theory)

    @classmethod
    def generator(cls, box: pg.Box, theory=None) -> "Diagram":
        tname = theory.name if theory is not None else None
        return cls(ObjWord(box.dom, tname), ObjWord(box.cod, tname), pg.box_graph(box), theory)

    @classmethod
    def symmetry(cls, a: ObjWord, b: ObjWord, theory=None) -> "Diagram":
        na, nb = len(a), len(b)
        perm = tuple(na + j for j in range(nb)) + tuple(range(na))
        g = pg.permutation_graph(a.letters + b.letters, perm)
        return cls(a.tensor(b), b.tensor(a), g, theory)

    @property
    def boxes(self) -> tuple[pg.Box, ...]:
        return self.graph.boxes

    def then(self, other: "Diagram") -> "Diagram":
        return diagram_compose(self, other)

    def tensor(self, other: "Diagram") -> "Diagram":
        return diagram_tensor(self, other)

    def is_identity(self) -> bool:
        return self.dom == self.cod and pg.find_iso(self.graph, pg.identity_graph(self.dom.letters)) is not None

    def __eq__(self, other):
        if not isinstance(other, Diagram):
            return NotImplemented
        return self.dom == other.dom and self.cod == other.cod and self.graph == other.graph

    def __hash__(self):
        return hash((self.dom, self.cod, self.graph))

    def __repr__(self):
        return f"Diagram({diagram_to_term(self)})"


@dataclass(frozen=True)
class ZMor:
    """The unique morphism ``value -> value`` of Z."""

    value: int

    @property
    def dom(self) -> ZObj:
        return ZObj(self.value)

    @property
    def cod(self) -> ZObj:
        return ZObj(self.value)

    def then(self, other: "ZMor") -> "ZMor":
        if other.value != self.value:
            raise CompositionTypeError(f"Z has no composite {self.value} -> {other.value}")
        return self

    def tensor(self, other: "ZMor") -> "ZMor":
        return ZMor(self.value + other.value)

    def is_identity(self) -> bool:
        return True


Mor = Union[Diagram, ZMor]


def identity_mor(a: Obj) -> Mor:
    if isinstance(a, ZObj):
        return ZMor(a.value)
    return Diagram.identity(a)


def _same_theory(d1: Diagram, d2: Diagram):
    t1, t2 = d1.theory, d2.theory
    if t1 is not None and t2 is not None and t1.name != t2.name:
        raise SignatureMismatch(f"diagrams from {t1.name!r} and {t2.name!r}")
    return t1 or t2


def diagram_compose(d1: Diagram, d2: Diagram) -> Diagram:
    theory = _same_theory(d1, d2)
    if d1.cod != d2.dom:
        raise CompositionTypeError(f"cannot compose: cod {d1.cod} != dom {d2.dom}")
    return Diagram(d1.dom, d2.cod, pg.vcompose(d1.graph, d2.graph), theory)


def diagram_tensor(d1: Diagram, d2: Diagram) -> Diagram:
    theory = _same_theory(d1, d2)
    return Diagram(d1.dom.tensor(d2.dom), d1.cod.tensor(d2.cod), pg.tensor(d1.graph, d2.graph), theory)


def diagram_equal(d1: Diagram, d2: Diagram, budget: int = DEFAULT_BUDGET) -> Verdict:
    """Equality of parallel morphisms in the ambient theory (three-valued)."""
    theory = _same_theory(d1, d2)
    if d1.dom != d2.dom or d1.cod != d2.cod:
        return Verdict.FALSE
    if theory is None:
        return Verdict.of(d1.graph == d2.graph)
    return theory.graph_equal(d1.graph, d2.graph, budget)


def diagram_to_term(d: Diagram) -> str:
    """Prefix term for a diagram: a topological layering of its boxes with
    adjacent swaps routing wires between layers."""
    g = d.graph
    order = g.topo_order()
    cur: list[tuple] = [("top", j) for j in range(g.shape[0])]
    layers: list[str] = []

    def types(ports):
        return [g.port_type(p) for p in ports]

    def route(src: list, dst: list) -> None:
        # bubble src into the order of dst with adjacent swaps
        work = list(src)
        pos = {p: i for i, p in enumerate(dst)}
        n = len(work)
        for i in range(n):
            for j in range(n - 1 - i):
                if pos[work[j]] > pos[work[j + 1]]:
                    ty = types(work)
                    layers.append(_par_terms([
                        _id_term(ty[:j]),
                        f"sym[{ty[j]},{ty[j + 1]}]",
                        _id_term(ty[j + 2:]),
                    ]))
                    work[j], work[j + 1] = work[j + 1], work[j]

    for b in order:
        box = g.boxes[b]
        inputs = [g.wires[("bi", b, k)] for k in range(len(box.dom))]
        rest = [p for p in cur if p not in inputs]
        route(cur, inputs + rest)
        layers.append(_par_terms([f"gen[{box.name}]", _id_term(types(rest))]))
        cur = [("bo", b, k) for k in range(len(box.cod))] + rest
    route(cur, [g.wires[("bot", j)] for j in range(g.shape[1])])
    if not layers:
        return _id_term(list(d.dom.letters)) or "id[I]"
    term = layers[0]
    for layer in layers[1:]:
        term = f"seq({term},{layer})"
    return term


def _id_term(letters) -> str:
    return f"id[{','.join(letters)}]" if letters else ""


def _par_terms(parts: list[str]) -> str:
    parts = [p for p in parts if p]
    if not parts:
        return "id[I]"
    term = parts[0]
    for p in parts[1:]:
        term = f"par({term},{p})"
    return term


# -- signatures --------------------------------------------------------------------

@dataclass(frozen=True)
class MorphismGenerator:
    name: str
    dom: tuple[str, ...]
    cod: tuple[str, ...]


@dataclass(frozen=True)
class Violation:
    path: str
    kind: str
    message: str

    def __str__(self):
        return f"{self.path}: {self.kind}: {self.message}"


@dataclass(frozen=True)
class TheorySignature:
    """Generating data of a free theory.

    Equations are kept as pairs of prefix terms; they are compiled to
    diagrams by :class:`FreeTheory` once the generators are known.
    """

    name: str
    object_generators: tuple[str, ...]
    morphism_generators: tuple[MorphismGenerator, ...] = ()
    equations: tuple[tuple[str, str], ...] = ()
    duals: dict | None = None

    @classmethod
    def from_dict(cls, data: dict) -> "TheorySignature":
        duals = data.get("duals")
        return cls(
            name=data["name"],
            object_generators=tuple(data.get("objects", ())),
            morphism_generators=tuple(
                MorphismGenerator(m["name"], tuple(m.get("dom", ())), tuple(m.get("cod", ())))
                for m in data.get("morphisms", ())
            ),
            equations=tuple((e["lhs"], e["rhs"]) for e in data.get("equations", ())),
            duals={k: tuple(v) for k, v in duals.items()} if duals is not None else None,
        )

    def to_dict(self) -> dict:
        out = {
            "name": self.name,
            "objects": list(self.object_generators),
            "morphisms": [
                {"name": m.name, "dom": list(m.dom), "cod": list(m.cod)} for m in self.morphism_generators
            ],
            "equations": [{"lhs": l, "rhs": r} for l, r in self.equations],
        }
        if self.duals is not None:
            out["duals"] = {k: list(v) for k, v in self.duals.items()}
        return out


def validate_signature(sig: TheorySignature) -> list[Violation]:
    out: list[Violation] = []
    seen: dict[str, str] = {}
    for i, name in enumerate(sig.object_generators):
        if name in seen:
            out.append(Violation(f"objects[{i}]", "duplicate-name", f"{name!r} already declared"))
        seen[name] = "object"
    objs = set(sig.object_generators)
    for i, m in enumerate(sig.morphism_generators):
        if m.name in seen:
            out.append(Violation(f"morphisms[{i}]", "duplicate-name", f"{m.name!r} already declared"))
        seen[m.name] = "morphism"
        for side in ("dom", "cod"):
            for j, x in enumerate(getattr(m, side)):
                if x not in objs:
                    out.append(Violation(f"morphisms[{i}].{side}[{j}]", "unknown-generator", f"undeclared object {x!r}"))
    if sig.duals is not None:
        for a in sig.object_generators:
            if a not in sig.duals:
                out.append(Violation(f"duals.{a}", "duals-not-total", f"no dual for {a!r}"))
        for a, w in sig.duals.items():
            if a not in objs:
                out.append(Violation(f"duals.{a}", "unknown-generator", f"undeclared object {a!r}"))
            for j, x in enumerate(w):
                if x not in objs:
                    out.append(Violation(f"duals.{a}[{j}]", "unknown-generator", f"undeclared object {x!r}"))
        if not out:
            for a in sig.object_generators:
                back = _dual_letters(sig.duals, _dual_letters(sig.duals, (a,)))
                if back != (a,):
                    out.append(Violation(f"duals.{a}", "duals-not-involutive", f"dual of dual of {a!r} is {back}"))
    if out:
        return out
    theory = FreeTheory(sig, _compile_equations=False)
    for i, (lhs, rhs) in enumerate(sig.equations):
        try:
            dl = theory.parse_mor(lhs)
            dr = theory.parse_mor(rhs)
        except (TermSyntaxError, TheoryError) as exc:
            out.append(Violation(f"equations[{i}]", "equation-parse-error", str(exc)))
            continue
        if dl.dom != dr.dom or dl.cod != dr.cod:
            out.append(Violation(
                f"equations[{i}]", "equation-type-mismatch",
                f"lhs {dl.dom}->{dl.cod} vs rhs {dr.dom}->{dr.cod}",
            ))
    return out


def _dual_letters(duals: dict, letters: tuple[str, ...]) -> tuple[str, ...]:
    out: tuple[str, ...] = ()
    for a in reversed(letters):
        out += tuple(duals[a])
    return out


class FreeTheory:
    """Free symmetric strict monoidal category on a signature."""

    def __init__(self, sig: TheorySignature, *, _compile_equations: bool = True):
        self.sig = sig
        self.name = sig.name
        self.compact_closed = sig.duals is not None
        self.objects = frozenset(sig.object_generators)
        self.generators: dict[str, pg.Box] = {
            m.name: pg.Box(m.name, m.dom, m.cod) for m in sig.morphism_generators
        }
        extra_eqs: list[tuple[Diagram, Diagram]] = []
        if self.compact_closed:
            for a in sig.object_generators:
                d = tuple(sig.duals[a])
                self.generators.setdefault(f"eta_{a}", pg.Box(f"eta_{a}", (), (a,) + d))
                self.generators.setdefault(f"eps_{a}", pg.Box(f"eps_{a}", d + (a,), ()))
        self.rules: list[tuple[pg.PortGraph, pg.PortGraph]] = []
        self.complete = True
        if not _compile_equations:
            return
        eqs = [(self.parse_mor(l), self.parse_mor(r)) for l, r in sig.equations]
        if self.compact_closed:
            for a in sig.object_generators:
                wa = self.word(a)
                wd = self.word(*sig.duals[a])
                eta = Diagram.generator(self.generators[f"eta_{a}"], self)
                eps = Diagram.generator(self.generators[f"eps_{a}"], self)
                ida, idd = Diagram.identity(wa, self), Diagram.identity(wd, self)
                extra_eqs.append((eta.tensor(ida).then(ida.tensor(eps)), ida))
                extra_eqs.append((idd.tensor(eta).then(eps.tensor(idd)), idd))
        for lhs, rhs in eqs + extra_eqs:
            if lhs.dom != rhs.dom or lhs.cod != rhs.cod:
                raise CompositionTypeError(f"equation sides differ in type: {lhs} vs {rhs}")
            gl, gr = pg.strip_common_through(lhs.graph, rhs.graph)
            for a, b in ((gl, gr), (gr, gl)):
                usable = a.boxes and not pg.Pattern(a).through()
                if usable:
                    self.rules.append((a, b))
                else:
                    self.complete = False

    # objects
    def word(self, *letters: str) -> ObjWord:
        for x in letters:
            if x not in self.objects:
                raise SignatureMismatch(f"{x!r} is not an object generator of {self.name!r}")
        return ObjWord(tuple(letters), self.name)

    @property
    def unit(self) -> ObjWord:
        return ObjWord((), self.name)

    def parse_obj(self, text: str) -> ObjWord:
        text = text.strip()
        if text in ("", "I"):
            return self.unit
        return self.word(*(x.strip() for x in text.split(",")))

    def format_obj(self, w: ObjWord) -> str:
        return str(w)

    def dual(self, w: ObjWord) -> ObjWord:
        if not self.compact_closed:
            raise UnsupportedStructure(f"theory {self.name!r} is not compact closed")
        return ObjWord(_dual_letters(self.sig.duals, w.letters), self.name)

    # morphisms
    def identity(self, w: ObjWord) -> Diagram:
        return Diagram.identity(w, self)

    def generator(self, name: str) -> Diagram:
        try:
            return Diagram.generator(self.generators[name], self)
        except KeyError:
            raise SignatureMismatch(f"{name!r} is not a morphism generator of {self.name!r}") from None

    def symmetry(self, a: ObjWord, b: ObjWord) -> Diagram:
        return Diagram.symmetry(a, b, self)

    def parse_mor(self, text: str | Term) -> Diagram:
        term = parse_term(text) if isinstance(text, str) else text
        return self._build(term)

    def _build(self, t: Term) -> Diagram:
        if t.head == "id":
            return self.identity(self.parse_obj(t.arg or ""))
        if t.head == "gen":
            return self.generator(t.arg)
        if t.head == "sym":
            a, b = _split_pair(t.arg)
            return self.symmetry(self.parse_obj(a), self.parse_obj(b))
        if t.head in ("seq", "par") and t.children:
            parts = [self._build(c) for c in t.children]
            out = parts[0]
            for p in parts[1:]:
                out = out.then(p) if t.head == "seq" else out.tensor(p)
            return out
        raise TermSyntaxError(f"unknown diagram term {t.head!r}")

    def format_mor(self, d: Diagram) -> str:
        return diagram_to_term(d)

    def unit_mor(self, w: ObjWord) -> Diagram:
        """eta_w : I -> w (x) w*."""
        if not self.compact_closed:
            raise UnsupportedStructure(f"theory {self.name!r} is not compact closed")
        if not w.letters:
            return self.identity(self.unit)
        a, rest = w.letters[0], ObjWord(w.letters[1:], self.name)
        inner = self.identity(self.word(a)).tensor(self.unit_mor(rest)).tensor(
            self.identity(self.word(*self.sig.duals[a]))
        )
        return self.generator(f"eta_{a}").then(inner)

    def counit_mor(self, w: ObjWord) -> Diagram:
        """eps_w : w* (x) w -> I."""
        if not self.compact_closed:
            raise UnsupportedStructure(f"theory {self.name!r} is not compact closed")
        if not w.letters:
            return self.identity(self.unit)
        a, rest = w.letters[0], ObjWord(w.letters[1:], self.name)
        outer = self.identity(self.dual(rest)).tensor(self.generator(f"eps_{a}")).tensor(self.identity(rest))
        return outer.then(self.counit_mor(rest))

    def mor_equal(self, d1: Diagram, d2: Diagram, budget: int = DEFAULT_BUDGET) -> Verdict:
        return diagram_equal(d1, d2, budget)

    def graph_equal(self, g1: pg.PortGraph, g2: pg.PortGraph, budget: int = DEFAULT_BUDGET) -> Verdict:
        if pg.find_iso(g1, g2) is not None:
            return Verdict.TRUE
        if not self.rules and self.complete:
            return Verdict.FALSE
        return Verdict(pg.closure_search(g1, g2, self.rules, budget, self.complete))

    def __repr__(self):
        return f"FreeTheory({self.name!r})"


def _split_pair(arg: str | None) -> tuple[str, str]:
    arg = arg or ""
    if ";" in arg:
        a, b = arg.split(";", 1)
        return a, b
    parts = arg.split(",")
    if len(parts) != 2:
        raise TermSyntaxError(f"sym needs two objects, got {arg!r} (use ';' to separate words)")
    return parts[0], parts[1]


class IntegerTheory:
    """The thin compact closed category Z of integers."""

    name = "Z"
    compact_closed = True
    complete = True

    @property
    def unit(self) -> ZObj:
        return ZObj(0)

    def parse_obj(self, text: str) -> ZObj:
        text = text.strip()
        if text in ("", "I"):
            return ZObj(0)
        try:
            return ZObj(int(text))
        except ValueError:
            raise SignatureMismatch(f"{text!r} is not an integer object of Z") from None

    def format_obj(self, a: ZObj) -> str:
        return str(a.value)

    def dual(self, a: ZObj) -> ZObj:
        return ZObj(-a.value)

    def identity(self, a: ZObj) -> ZMor:
        return ZMor(a.value)

    def parse_mor(self, text: str | Term) -> ZMor:
        t = parse_term(text) if isinstance(text, str) else text
        if t.head == "id":
            return ZMor(self.parse_obj(t.arg or "").value)
        if t.head == "sym":
            a, b = _split_pair(t.arg)
            return ZMor(self.parse_obj(a).value + self.parse_obj(b).value)
        if t.head in ("seq", "par") and t.children:
            parts = [self.parse_mor(c) for c in t.children]
            out = parts[0]
            for p in parts[1:]:
                out = out.then(p) if t.head == "seq" else out.tensor(p)
            return out
        raise TermSyntaxError(f"Z has no morphism term {t.head!r}")

    def format_mor(self, m: ZMor) -> str:
        return f"id[{m.value}]"

    def unit_mor(self, a: ZObj) -> ZMor:
        return ZMor(0)

    def counit_mor(self, a: ZObj) -> ZMor:
        return ZMor(0)

    def mor_equal(self, m1: ZMor, m2: ZMor, budget: int = DEFAULT_BUDGET) -> Verdict:
        return Verdict.of(m1.value == m2.value)

    def __repr__(self):
        return "IntegerTheory()"


Z = IntegerTheory()
Theory = Union[FreeTheory, IntegerTheory]


# -- built-in theories ------------------------------------------------------------

def bread_signature(sift: bool = False) -> TheorySignature:
    morphisms = [
        MorphismGenerator("knead", ("flour",), ("dough",)),
        MorphismGenerator("bake", ("dough", "oven"), ("bread", "oven")),
        MorphismGenerator("eat", ("bread",), ()),
    ]
    equations: tuple = ()
    if sift:
        morphisms.append(MorphismGenerator("sift", ("flour",), ("flour",)))
        equations = (("seq(gen[sift],gen[sift])", "gen[sift]"),)
    return TheorySignature(
        name="bread_sift" if sift else "bread",
        object_generators=("bread", "dough", "flour", "oven"),
        morphism_generators=tuple(morphisms),
        equations=equations,
    )


def builtin_theory(name: str) -> Theory:
    if name == "Z":
        return Z
    if name == "bread":
        return FreeTheory(bread_signature())
    if name == "bread_sift":
        return FreeTheory(bread_signature(sift=True))
    raise KeyError(name)


def theory_from_dict(data: dict) -> FreeTheory:
    sig = TheorySignature.from_dict(data)
    problems = validate_signature(sig)
    if problems:
        raise TheoryError("; ".join(str(v) for v in problems))
    return FreeTheory(sig)


def words(theory: FreeTheory, items: Iterable[str]) -> ObjWord:
    return theory.word(*items)
