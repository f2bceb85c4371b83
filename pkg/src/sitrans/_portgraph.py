"""Anchored port graphs.

A port graph is a set of boxes plus a linear wiring: every target port is fed
by exactly one source port.  Boundary ports ("anchors") are fixed names such as
``("top", j)``, ``("bot", j)``, ``("L", i, j)`` and ``("R", i, j)``; box ports
are ``("bi", b, k)`` (inputs, targets) and ``("bo", b, k)`` (outputs, sources).

Symmetries are not boxes: they live entirely in the wiring, so the axioms of a
symmetric strict monoidal category hold on the nose and equality of free
morphisms is isomorphism of port graphs fixing the anchors.
"""
from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator

Port = tuple


@dataclass(frozen=True)
class Box:
    name: str
    dom: tuple[str, ...]
    cod: tuple[str, ...]


def is_box_port(p: Port) -> bool:
    return p[0] in ("bi", "bo")


class PortGraph:
    """Immutable anchored port graph."""

    __slots__ = ("boxes", "wires", "anchors", "shape", "_rev", "_key")

    def __init__(self, boxes, wires, anchors, shape):
        self.boxes: tuple[Box, ...] = tuple(boxes)
        self.wires: dict[Port, Port] = dict(wires)
        self.anchors: dict[Port, str] = dict(anchors)
        # (n_top, n_bot, n_left_entries, n_right_entries)
        self.shape: tuple[int, int, int, int] = tuple(shape)
        self._rev = {s: t for t, s in self.wires.items()}
        self._key = None

    # -- basic structure -------------------------------------------------
    def source_of(self, target: Port) -> Port:
        return self.wires[target]

    def target_of(self, source: Port) -> Port:
        return self._rev[source]

    def port_type(self, p: Port) -> str:
        if p[0] == "bi":
            return self.boxes[p[1]].dom[p[2]]
        if p[0] == "bo":
            return self.boxes[p[1]].cod[p[2]]
        return self.anchors[p]

    def box_counts(self) -> Counter:
        return Counter(self.boxes)

    def problems(self) -> list[str]:
        """Structural invariant violations (empty when well formed)."""
        out = []
        targets = {a for a in self.anchors if a in self.wires}
        sources = set(self.anchors) - targets
        for b, box in enumerate(self.boxes):
            targets.update(("bi", b, k) for k in range(len(box.dom)))
            sources.update(("bo", b, k) for k in range(len(box.cod)))
        if set(self.wires) != targets:
            out.append("wiring does not cover every target port exactly once")
        seen = Counter(self.wires.values())
        if set(seen) != sources or any(n != 1 for n in seen.values()):
            out.append("wiring does not use every source port exactly once")
        for t, s in self.wires.items():
            try:
                if self.port_type(t) != self.port_type(s):
                    out.append(f"type mismatch on wire {s} -> {t}")
            except (KeyError, IndexError):
                out.append(f"dangling wire {s} -> {t}")
        if not self.is_acyclic():
            out.append("wiring has a directed cycle through boxes")
        return out

    def successors(self, b: int) -> list[int]:
        box = self.boxes[b]
        out = []
        for k in range(len(box.cod)):
            t = self._rev[("bo", b, k)]
            if t[0] == "bi":
                out.append(t[1])
        return out

    def is_acyclic(self) -> bool:
        return self.topo_order() is not None

    def topo_order(self) -> list[int] | None:
        indeg = [0] * len(self.boxes)
        for b in range(len(self.boxes)):
            for c in self.successors(b):
                indeg[c] += 1
        ready = [b for b, d in enumerate(indeg) if d == 0]
        order = []
        while ready:
            ready.sort()
            b = ready.pop(0)
            order.append(b)
            for c in self.successors(b):
                indeg[c] -= 1
                if indeg[c] == 0:
                    ready.append(c)
        return order if len(order) == len(self.boxes) else None

    # -- canonical form ---------------------------------------------------
    def canonical(self) -> tuple[tuple, bool]:
        """Return ``(key, exact)``.

        Boxes reachable from an anchor are numbered by breadth-first discovery
        from the sorted anchors, which is a complete invariant for that part.
        Closed components only contribute a multiset, so ``exact`` is False
        when any are present.
        """
        if self._key is not None:
            return self._key
        order: dict[int, int] = {}
        queue: deque[Port] = deque()

        def visit(p: Port) -> None:
            if is_box_port(p) and p[1] not in order:
                order[p[1]] = len(order)
                queue.append(p[1])

        for a in sorted(self.anchors):
            visit(self.wires[a] if a in self.wires else self._rev[a])
            while queue:
                b = queue.popleft()
                box = self.boxes[b]
                for k in range(len(box.dom)):
                    visit(self.wires[("bi", b, k)])
                for k in range(len(box.cod)):
                    visit(self._rev[("bo", b, k)])
        closed = sorted(
            (box.name, box.dom, box.cod)
            for b, box in enumerate(self.boxes)
            if b not in order
        )

        def rename(p: Port) -> Port:
            if is_box_port(p):
                return (p[0], order.get(p[1], -1), p[2])
            return p

        boxes = [None] * len(order)
        for b, i in order.items():
            box = self.boxes[b]
            boxes[i] = (box.name, box.dom, box.cod)
        wires = frozenset(
            (rename(t), rename(s))
            for t, s in self.wires.items()
            if not (is_box_port(t) and t[1] not in order)
        )
        anchors = frozenset(self.anchors.items())
        key = (self.shape, anchors, tuple(boxes), wires, tuple(closed))
        self._key = (key, not closed)
        return self._key

    def __eq__(self, other):
        if not isinstance(other, PortGraph):
            return NotImplemented
        return find_iso(self, other) is not None

    def __hash__(self):
        return hash(self.canonical()[0])

    def __repr__(self):
        return f"PortGraph(boxes={[b.name for b in self.boxes]}, shape={self.shape})"


def _port_sort_key(p: Port):
    return tuple((0, x) if isinstance(x, int) else (1, str(x)) for x in p)


# -- isomorphism -----------------------------------------------------------

def find_iso(g1: PortGraph, g2: PortGraph) -> dict[int, int] | None:
    """Box bijection witnessing an anchor-preserving isomorphism, or None."""
    if g1.shape != g2.shape or g1.anchors != g2.anchors:
        return None
    if len(g1.boxes) != len(g2.boxes) or g1.box_counts() != g2.box_counts():
        return None
    k1, exact1 = g1.canonical()
    k2, exact2 = g2.canonical()
    if exact1 and exact2:
        return _iso_from_canonical(g1, g2) if k1 == k2 else None
    start: dict[int, int] = {}
    pending = []
    for a in sorted(g1.anchors, key=_port_sort_key):
        if a in g1.wires:
            pending.append((g1.wires[a], g2.wires[a]))
        else:
            pending.append((g1._rev[a], g2._rev[a]))
    state = _propagate(g1, g2, start, pending)
    if state is None:
        return None
    return _search(g1, g2, state)


def _iso_from_canonical(g1: PortGraph, g2: PortGraph) -> dict[int, int]:
    state = _propagate(
        g1,
        g2,
        {},
        [
            (g1.wires[a], g2.wires[a]) if a in g1.wires else (g1._rev[a], g2._rev[a])
            for a in sorted(g1.anchors, key=_port_sort_key)
        ],
    )
    assert state is not None
    return state


def _propagate(g1, g2, mapping, pending) -> dict[int, int] | None:
    mapping = dict(mapping)
    used = set(mapping.values())
    stack = list(pending)
    while stack:
        p1, p2 = stack.pop()
        if is_box_port(p1) != is_box_port(p2):
            return None
        if not is_box_port(p1):
            if p1 != p2:
                return None
            continue
        if p1[0] != p2[0] or p1[2] != p2[2]:
            return None
        b1, b2 = p1[1], p2[1]
        if b1 in mapping:
            if mapping[b1] != b2:
                return None
            continue
        if b2 in used or g1.boxes[b1] != g2.boxes[b2]:
            return None
        mapping[b1] = b2
        used.add(b2)
        box = g1.boxes[b1]
        for k in range(len(box.dom)):
            stack.append((g1.wires[("bi", b1, k)], g2.wires[("bi", b2, k)]))
        for k in range(len(box.cod)):
            stack.append((g1._rev[("bo", b1, k)], g2._rev[("bo", b2, k)]))
    return mapping


def _search(g1, g2, mapping) -> dict[int, int] | None:
    free1 = [b for b in range(len(g1.boxes)) if b not in mapping]
    if not free1:
        return mapping
    b1 = free1[0]
    used = set(mapping.values())
    for b2 in range(len(g2.boxes)):
        if b2 in used or g2.boxes[b2] != g1.boxes[b1]:
            continue
        box = g1.boxes[b1]
        if box.dom:
            seed = [(("bi", b1, 0), ("bi", b2, 0))]
        elif box.cod:
            seed = [(("bo", b1, 0), ("bo", b2, 0))]
        else:
            seed = []
        state = _propagate(g1, g2, mapping, seed)
        if state is None:
            continue
        if b1 not in state:
            # box without ports
            state = {**state, b1: b2}
        found = _search(g1, g2, state)
        if found is not None:
            return found
    return None


# -- construction ------------------------------------------------------------

def identity_graph(letters: tuple[str, ...]) -> PortGraph:
    n = len(letters)
    return PortGraph(
        (),
        {("bot", j): ("top", j) for j in range(n)},
        {**{("top", j): x for j, x in enumerate(letters)}, **{("bot", j): x for j, x in enumerate(letters)}},
        (n, n, 0, 0),
    )


def box_graph(box: Box) -> PortGraph:
    wires = {("bi", 0, k): ("top", k) for k in range(len(box.dom))}
    wires.update({("bot", k): ("bo", 0, k) for k in range(len(box.cod))})
    anchors = {("top", k): x for k, x in enumerate(box.dom)}
    anchors.update({("bot", k): x for k, x in enumerate(box.cod)})
    return PortGraph((box,), wires, anchors, (len(box.dom), len(box.cod), 0, 0))


def permutation_graph(letters: tuple[str, ...], perm: tuple[int, ...]) -> PortGraph:
    """Wire top position ``perm[j]`` to bottom position ``j``."""
    n = len(letters)
    return PortGraph(
        (),
        {("bot", j): ("top", perm[j]) for j in range(n)},
        {**{("top", j): x for j, x in enumerate(letters)},
         **{("bot", j): letters[perm[j]] for j in range(n)}},
        (n, n, 0, 0),
    )


GLUE = "glue"


def merge(g1: PortGraph, g2: PortGraph, rename1: Callable, rename2: Callable, shape) -> PortGraph:
    """Disjoint union with anchors renamed; anchors renamed to ``("glue", k)``
    in one graph are fused with the same glue key in the other."""
    off = len(g1.boxes)

    def port1(p):
        return p if is_box_port(p) else rename1(p)

    def port2(p):
        if is_box_port(p):
            return (p[0], p[1] + off, p[2])
        return rename2(p)

    raw: dict[Port, Port] = {}
    for t, s in g1.wires.items():
        raw[port1(t)] = port1(s)
    for t, s in g2.wires.items():
        t2 = port2(t)
        if t2 in raw:
            raise ValueError(f"glue collision at {t2}")
        raw[t2] = port2(s)
    wires = {}
    for t, s in raw.items():
        if t[0] == GLUE:
            continue
        hops = 0
        while s[0] == GLUE:
            s = raw[s]
            hops += 1
            if hops > len(raw):
                raise ValueError("cyclic glue")
        wires[t] = s
    anchors = {}
    for a, x in g1.anchors.items():
        r = rename1(a)
        if r[0] != GLUE:
            anchors[r] = x
    for a, x in g2.anchors.items():
        r = rename2(a)
        if r[0] != GLUE:
            anchors[r] = x
    return PortGraph(g1.boxes + g2.boxes, wires, anchors, shape)


def vcompose(g1: PortGraph, g2: PortGraph) -> PortGraph:
    """Stack g2 below g1 (bottom of g1 glued to top of g2)."""
    nl, nr = g1.shape[2], g1.shape[3]

    def r1(a):
        if a[0] == "bot":
            return (GLUE, a[1])
        return a

    def r2(a):
        if a[0] == "top":
            return (GLUE, a[1])
        if a[0] == "L":
            return ("L", a[1] + nl, a[2])
        if a[0] == "R":
            return ("R", a[1] + nr, a[2])
        return a

    shape = (g1.shape[0], g2.shape[1], g1.shape[2] + g2.shape[2], g1.shape[3] + g2.shape[3])
    return merge(g1, g2, r1, r2, shape)


def hcompose(g1: PortGraph, g2: PortGraph) -> PortGraph:
    """Place g2 to the right of g1 (right side of g1 glued to left of g2)."""
    nt, nb = g1.shape[0], g1.shape[1]

    def r1(a):
        if a[0] == "R":
            return (GLUE, a[1], a[2])
        return a

    def r2(a):
        if a[0] == "L":
            return (GLUE, a[1], a[2])
        if a[0] == "top":
            return ("top", a[1] + nt)
        if a[0] == "bot":
            return ("bot", a[1] + nb)
        return a

    shape = (g1.shape[0] + g2.shape[0], g1.shape[1] + g2.shape[1], g1.shape[2], g2.shape[3])
    return merge(g1, g2, r1, r2, shape)


def tensor(g1: PortGraph, g2: PortGraph) -> PortGraph:
    """Side-by-side union of two diagrams without side anchors."""
    nt, nb = g1.shape[0], g1.shape[1]

    def r2(a):
        if a[0] == "top":
            return ("top", a[1] + nt)
        if a[0] == "bot":
            return ("bot", a[1] + nb)
        return a

    shape = (g1.shape[0] + g2.shape[0], g1.shape[1] + g2.shape[1], 0, 0)
    return merge(g1, g2, lambda a: a, r2, shape)


# -- subgraph matching and replacement -----------------------------------------

@dataclass(frozen=True)
class Pattern:
    """A diagram used as one side of an equation.

    ``inputs[i]`` is the port fed by top anchor i, ``outputs[j]`` the port
    feeding bottom anchor j; box-free through-wires are ``through`` pairs.
    """

    graph: PortGraph

    @property
    def n_in(self) -> int:
        return self.graph.shape[0]

    @property
    def n_out(self) -> int:
        return self.graph.shape[1]

    def through(self) -> list[tuple[int, int]]:
        g = self.graph
        return [(s[1], t[1]) for t, s in g.wires.items() if t[0] == "bot" and s[0] == "top"]


@dataclass(frozen=True)
class Match:
    boxes: dict  # pattern box -> host box
    inputs: tuple  # host source port for each pattern input
    outputs: tuple  # host target port for each pattern output


def iter_matches(pattern: PortGraph, host: PortGraph) -> Iterator[Match]:
    """Convex occurrences of a pattern with at least one box."""
    nb = len(pattern.boxes)
    if nb == 0:
        return
    host_by_box: dict[Box, list[int]] = {}
    for b, box in enumerate(host.boxes):
        host_by_box.setdefault(box, []).append(b)
    if any(pattern.box_counts()[bx] > len(host_by_box.get(bx, ())) for bx in pattern.box_counts()):
        return

    def extend(mapping: dict[int, int]) -> Iterator[dict[int, int]]:
        free = [b for b in range(nb) if b not in mapping]
        if not free:
            yield mapping
            return
        pb = free[0]
        used = set(mapping.values())
        for hb in host_by_box.get(pattern.boxes[pb], ()):
            if hb in used:
                continue
            m = _propagate_pattern(pattern, host, mapping, pb, hb)
            if m is not None:
                yield from extend(m)

    seen = set()
    for mapping in extend({}):
        fz = frozenset(mapping.items())
        if fz in seen:
            continue
        seen.add(fz)
        match = _interface(pattern, host, mapping)
        if match is not None:
            yield match


def _propagate_pattern(pattern, host, mapping, pb, hb):
    mapping = dict(mapping)
    used = set(mapping.values())
    stack = [(pb, hb)]
    while stack:
        p, h = stack.pop()
        if p in mapping:
            if mapping[p] != h:
                return None
            continue
        if h in used or pattern.boxes[p] != host.boxes[h]:
            return None
        mapping[p] = h
        used.add(h)
        box = pattern.boxes[p]
        for k in range(len(box.dom)):
            s = pattern.wires[("bi", p, k)]
            if s[0] == "bo":
                hs = host.wires[("bi", h, k)]
                if hs[0] != "bo" or hs[2] != s[2]:
                    return None
                stack.append((s[1], hs[1]))
        for k in range(len(box.cod)):
            t = pattern._rev[("bo", p, k)]
            if t[0] == "bi":
                ht = host._rev[("bo", h, k)]
                if ht[0] != "bi" or ht[2] != t[2]:
                    return None
                stack.append((t[1], ht[1]))
    return mapping


def _interface(pattern: PortGraph, host: PortGraph, mapping: dict[int, int]) -> Match | None:
    matched = set(mapping.values())
    inputs = []
    for i in range(pattern.shape[0]):
        t = pattern._rev[("top", i)]
        if t[0] == "bot":
            return None  # through-wires are stripped before matching
        hs = host.wires[("bi", mapping[t[1]], t[2])]
        if is_box_port(hs) and hs[1] in matched:
            return None
        inputs.append(hs)
    outputs = []
    for j in range(pattern.shape[1]):
        s = pattern.wires[("bot", j)]
        ht = host._rev[("bo", mapping[s[1]], s[2])]
        if is_box_port(ht) and ht[1] in matched:
            return None
        outputs.append(ht)
    # convexity: nothing leaving the match may re-enter it
    frontier = [t[1] for t in outputs if t[0] == "bi"]
    seen = set()
    while frontier:
        b = frontier.pop()
        if b in matched:
            return None
        if b in seen:
            continue
        seen.add(b)
        frontier.extend(host.successors(b))
    return Match(dict(mapping), tuple(inputs), tuple(outputs))


def replace(host: PortGraph, match: Match, rhs: PortGraph) -> PortGraph:
    """Substitute ``rhs`` for the matched occurrence."""
    removed = set(match.boxes.values())
    keep = [b for b in range(len(host.boxes)) if b not in removed]
    renum = {b: i for i, b in enumerate(keep)}
    off = len(keep)

    def hport(p):
        if is_box_port(p):
            return (p[0], renum[p[1]], p[2])
        return p

    wires = {}
    for t, s in host.wires.items():
        if is_box_port(t) and t[1] in removed:
            continue
        if is_box_port(s) and s[1] in removed:
            continue
        wires[hport(t)] = hport(s)
    for t, s in rhs.wires.items():
        if t[0] == "bot":
            tgt = hport(match.outputs[t[1]])
        else:
            tgt = (t[0], t[1] + off, t[2])
        if s[0] == "top":
            src = hport(match.inputs[s[1]])
        else:
            src = (s[0], s[1] + off, s[2])
        wires[tgt] = src
    boxes = tuple(host.boxes[b] for b in keep) + rhs.boxes
    return PortGraph(boxes, wires, host.anchors, host.shape)


def strip_common_through(lhs: PortGraph, rhs: PortGraph) -> tuple[PortGraph, PortGraph]:
    """Drop through-wires that both sides of an equation share."""
    common = set(Pattern(lhs).through()) & set(Pattern(rhs).through())
    if not common:
        return lhs, rhs
    drop_in = {i for i, _ in common}
    drop_out = {j for _, j in common}
    return _drop(lhs, drop_in, drop_out), _drop(rhs, drop_in, drop_out)


def _drop(g: PortGraph, drop_in: set[int], drop_out: set[int]) -> PortGraph:
    tin = {i: n for n, i in enumerate(i for i in range(g.shape[0]) if i not in drop_in)}
    tout = {j: n for n, j in enumerate(j for j in range(g.shape[1]) if j not in drop_out)}

    def ren(p):
        if p[0] == "top":
            return ("top", tin[p[1]])
        if p[0] == "bot":
            return ("bot", tout[p[1]])
        return p

    wires = {ren(t): ren(s) for t, s in g.wires.items() if not (t[0] == "bot" and t[1] in drop_out)}
    anchors = {}
    for a, x in g.anchors.items():
        if (a[0] == "top" and a[1] in drop_in) or (a[0] == "bot" and a[1] in drop_out):
            continue
        anchors[ren(a)] = x
    return PortGraph(g.boxes, wires, anchors, (len(tin), len(tout), 0, 0))


def rewrite_neighbours(host: PortGraph, rules: Iterable[tuple[PortGraph, PortGraph]]) -> Iterator[PortGraph]:
    for lhs, rhs in rules:
        for m in iter_matches(lhs, host):
            out = replace(host, m, rhs)
            if out.is_acyclic():
                yield out


def closure_search(
    g1: PortGraph,
    g2: PortGraph,
    rules: list[tuple[PortGraph, PortGraph]],
    budget: int,
    complete: bool,
) -> str:
    """Breadth-first search of both rewrite closures.

    Returns "true" when they meet, "false" when one closure is exhausted
    without meeting (only when ``complete``), else "unknown".
    """
    if find_iso(g1, g2) is not None:
        return "true"
    seen = [dict(), dict()]  # canonical key -> list of graphs
    frontier = [deque([g1]), deque([g2])]
    for side, g in ((0, g1), (1, g2)):
        seen[side].setdefault(g.canonical()[0], []).append(g)
    visited = 2
    while True:
        if not frontier[0] and not frontier[1]:
            return "false" if complete else "unknown"
        if complete and (not frontier[0] or not frontier[1]):
            return "false"
        if visited >= budget:
            return "unknown"
        if not frontier[0] or not frontier[1]:
            # one closure is exhausted; keep growing the other towards it
            side = 0 if frontier[0] else 1
        else:
            side = 0 if len(seen[0]) <= len(seen[1]) else 1
        g = frontier[side].popleft()
        for h in rewrite_neighbours(g, rules):
            key = h.canonical()[0]
            bucket = seen[side].setdefault(key, [])
            if any(find_iso(h, x) is not None for x in bucket):
                continue
            bucket.append(h)
            visited += 1
            other = seen[1 - side].get(key, ())
            if any(find_iso(h, x) is not None for x in other):
                return "true"
            frontier[side].append(h)
            if visited >= budget:
                return "unknown"
