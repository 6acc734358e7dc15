"""Generalized Heegaard splittings over a dual graph of blocks.

A splitting of each block is recorded by the ports it puts on its V
(black) side and on its W (white) side, plus its genus.  Gluing surfaces
become graph edges; an edge is valid when its two sides get different
colours, and the edges, oriented from black to white, must form a DAG.  The
genus of the amalgamation follows from the block genera, the surface genera
and the Euler characteristic of the dual graph.

On the block graph of a CNF formula the colours read as truth values: a
gluing surface is true when its input-side compression body is white.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from graphlib import CycleError, TopologicalSorter
from typing import Hashable, Optional

from . import formula as fm
from .blockgraph import (
    CAPABILITY_GENUS,
    UNLISTED_GENUS_LOWER_BOUND,
    BlockGraph,
    BlockType,
    capability,
    structural_check,
)

__all__ = [
    "GluingEdge",
    "GluingGraph",
    "SplittingChoice",
    "GeneralizedSplitting",
    "SplittingError",
    "ColorClash",
    "Cycle",
    "validate",
    "is_valid",
    "handle_number",
    "amalgamated_genus",
    "sequential_amalgamation_genus",
    "gluing_graph",
    "coloring_from_assignment",
    "assignment_from_coloring",
    "flip_colors",
    "GenusResult",
    "min_genus",
    "MIN_GENUS_GUARD",
]

MIN_GENUS_GUARD = 16


@dataclass(frozen=True)
class GluingEdge:
    a: Hashable
    port_a: str
    b: Hashable
    port_b: str
    genus: int = 1


@dataclass
class GluingGraph:
    """Blocks with named boundary ports and the surfaces gluing them.
    Multi-edges and self-loops are allowed."""

    ports: dict[Hashable, tuple[str, ...]]
    edges: list[GluingEdge]
    port_genus: dict[tuple[Hashable, str], int] = field(default_factory=dict)

    def __post_init__(self):
        seen = set()
        for e in self.edges:
            if e.genus < 1:
                raise ValueError(f"gluing surface genus must be >= 1: {e}")
            for x, p in ((e.a, e.port_a), (e.b, e.port_b)):
                if x not in self.ports or p not in self.ports[x]:
                    raise ValueError(f"edge {e} uses unknown port {p!r} of {x!r}")
                if (x, p) in seen:
                    raise ValueError(f"port {p!r} of {x!r} is glued twice")
                seen.add((x, p))

    @property
    def euler_characteristic(self) -> int:
        return len(self.ports) - len(self.edges)


@dataclass(frozen=True)
class SplittingChoice:
    v_side: frozenset
    w_side: frozenset
    genus: int

    def __post_init__(self):
        object.__setattr__(self, "v_side", frozenset(self.v_side))
        object.__setattr__(self, "w_side", frozenset(self.w_side))
        if self.v_side & self.w_side:
            raise ValueError("a port cannot lie on both sides")

    def color(self, port: str) -> str:
        if port in self.v_side:
            return "V"
        if port in self.w_side:
            return "W"
        raise KeyError(port)

    def flipped(self) -> "SplittingChoice":
        return SplittingChoice(self.w_side, self.v_side, self.genus)


@dataclass
class GeneralizedSplitting:
    graph: GluingGraph
    choices: dict[Hashable, SplittingChoice]

    def to_dict(self) -> list[dict]:
        return [
            {
                "block": x,
                "v_side": sorted(c.v_side),
                "w_side": sorted(c.w_side),
                "genus": c.genus,
            }
            for x, c in sorted(self.choices.items(), key=lambda kv: str(kv[0]))
        ]


class SplittingError(ValueError):
    pass


class ColorClash(SplittingError):
    def __init__(self, edge: GluingEdge):
        super().__init__(f"both sides of the surface {edge} have the same colour")
        self.edge = edge


class Cycle(SplittingError):
    def __init__(self, edges: list[GluingEdge]):
        super().__init__(f"black-to-white orientation has a directed cycle through {edges}")
        self.edges = edges


def _oriented(gs: GeneralizedSplitting, e: GluingEdge) -> tuple:
    """(tail, head) of ``e``: from the block holding it on its V side to the
    block holding it on its W side; raises ColorClash if both agree."""
    ca = gs.choices[e.a].color(e.port_a)
    cb = gs.choices[e.b].color(e.port_b)
    if ca == cb:
        raise ColorClash(e)
    return (e.a, e.b) if ca == "V" else (e.b, e.a)


def validate(gs: GeneralizedSplitting) -> None:
    """Check the colour and acyclicity conditions; raise :class:`ColorClash`
    or :class:`Cycle` on the first failure."""
    g = gs.graph
    missing = set(g.ports) - set(gs.choices)
    if missing:
        raise SplittingError(f"no splitting chosen for {sorted(map(str, missing))}")
    for x, c in gs.choices.items():
        if set(c.v_side | c.w_side) != set(g.ports[x]):
            raise SplittingError(f"choice for {x!r} does not bipartition its ports")
    arcs = [(_oriented(gs, e), e) for e in g.edges]
    for (tail, head), e in arcs:
        if tail == head:
            raise Cycle([e])
    preds: dict = {x: set() for x in g.ports}
    for (tail, head), _ in arcs:
        preds[head].add(tail)
    try:
        tuple(TopologicalSorter(preds).static_order())
    except CycleError as exc:
        nodes = exc.args[1]
        ring = set(zip(nodes, nodes[1:]))
        raise Cycle([e for (t, h), e in arcs if (t, h) in ring]) from None


def is_valid(gs: GeneralizedSplitting) -> bool:
    try:
        validate(gs)
    except SplittingError:
        return False
    return True


def handle_number(genus_plus: int, minus_genera) -> int:
    """One-handles of a compression body with the given boundary genera.

    For an empty negative boundary (a handlebody) this is ``genus_plus``.
    """
    minus_genera = list(minus_genera)
    if not minus_genera:
        value = genus_plus
    else:
        value = genus_plus - sum(minus_genera) + len(minus_genera) - 1
    if value < 0:
        raise ValueError(f"no compression body has g+ = {genus_plus} and g- = {minus_genera}")
    return value


def _require_connected(g: GluingGraph):
    nodes = list(g.ports)
    if not nodes:
        raise SplittingError("empty gluing graph")
    adj = {x: set() for x in nodes}
    for e in g.edges:
        adj[e.a].add(e.b)
        adj[e.b].add(e.a)
    seen, stack = {nodes[0]}, [nodes[0]]
    while stack:
        for y in adj[stack.pop()]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    if len(seen) != len(nodes):
        raise SplittingError("gluing graph is disconnected")


def amalgamated_genus(gs: GeneralizedSplitting) -> int:
    """Genus of the amalgamation: block genera minus surface genera, plus
    ``1 - chi`` of the dual graph."""
    validate(gs)
    g = gs.graph
    _require_connected(g)
    return (
        sum(c.genus for c in gs.choices.values())
        - sum(e.genus for e in g.edges)
        + 1
        - g.euler_characteristic
    )


def sequential_amalgamation_genus(gs: GeneralizedSplitting) -> int:
    """Genus obtained by amalgamating one block at a time in DAG order.

    Sources come first; each new block meets the pieces built so far only
    along surfaces on its white side, and contributes the handle number of
    that compression body relative to those surfaces, less one for every
    extra piece it fuses together.
    """
    validate(gs)
    g = gs.graph
    _require_connected(g)
    preds: dict = {x: [] for x in g.ports}
    for e in g.edges:
        tail, head = _oriented(gs, e)
        preds[head].append((tail, e))
    order = TopologicalSorter({x: {t for t, _ in ps} for x, ps in preds.items()}).static_order()

    piece = {}  # block -> representative
    genus = {}  # representative -> genus of its amalgamated splitting

    def find(x):
        while piece[x] != x:
            piece[x] = piece[piece[x]]
            x = piece[x]
        return x

    for y in order:
        piece[y] = y
        incoming = preds[y]
        if not incoming:
            genus[y] = gs.choices[y].genus
            continue
        roots = {find(t) for t, _ in incoming}
        handles = handle_number(gs.choices[y].genus, [e.genus for _, e in incoming])
        total = sum(genus.pop(r) for r in roots) + handles - (len(roots) - 1)
        for r in roots:
            piece[r] = y
        genus[y] = total
    (result,) = genus.values()
    return result


# ------------------------------------------------------- block graph layer


def gluing_graph(bg: BlockGraph) -> GluingGraph:
    ports = {b.id: tuple(p.name for p in b.ports) for b in bg.blocks}
    edges = [GluingEdge(e.src, e.src_port, e.dst, e.dst_port, 1) for e in bg.edges]
    return GluingGraph(ports, edges)


def _capability_choices(btype: BlockType) -> list[SplittingChoice]:
    out = []
    for a, b, genus in capability(btype):
        out.append(SplittingChoice(a, b, genus))
        if a != b:
            out.append(SplittingChoice(b, a, genus))
    return out


def _matches_capability(btype: BlockType, c: SplittingChoice) -> bool:
    return any(
        {c.v_side, c.w_side} == {a, b} and c.genus == genus for a, b, genus in capability(btype)
    )


def _edge_values(bg: BlockGraph, assignment) -> list[bool]:
    values = []
    for e in bg.edges:
        text = e.label
        # labels are unicode renderings of subformulas of Q
        node = fm.parse_expr(text)
        values.append(fm.evaluate(node, assignment))
    return values


def coloring_from_assignment(bg: BlockGraph, assignment) -> GeneralizedSplitting:
    """Minimal-genus splitting of every block whose colours encode a
    satisfying assignment (true surfaces: white on the input side, black on
    the output side)."""
    if bg.formula is None or not fm.evaluate(bg.formula, assignment):
        raise ValueError("assignment does not satisfy the formula")
    values = _edge_values(bg, assignment)
    port_color: dict[tuple[int, str], str] = {}
    for e, val in zip(bg.edges, values):
        port_color[(e.dst, e.dst_port)] = "W" if val else "V"
        port_color[(e.src, e.src_port)] = "V" if val else "W"
    choices = {}
    for b in bg.blocks:
        v = {p.name for p in b.ports if port_color[(b.id, p.name)] == "V"}
        w = {p.name for p in b.ports if port_color[(b.id, p.name)] == "W"}
        c = SplittingChoice(v, w, CAPABILITY_GENUS)
        if not _matches_capability(b.type, c):
            raise AssertionError(
                f"no genus-two splitting of {b.type.value} block {b.id} separates {sorted(v)} from {sorted(w)}"
            )
        choices[b.id] = c
    gs = GeneralizedSplitting(gluing_graph(bg), choices)
    validate(gs)
    return gs


def flip_colors(gs: GeneralizedSplitting) -> GeneralizedSplitting:
    return GeneralizedSplitting(gs.graph, {x: c.flipped() for x, c in gs.choices.items()})


def assignment_from_coloring(bg: BlockGraph, gs: GeneralizedSplitting) -> dict[str, bool]:
    """Read a satisfying assignment off a minimal generalized splitting."""
    validate(gs)
    for b in bg.blocks:
        c = gs.choices[b.id]
        if c.genus != CAPABILITY_GENUS or not _matches_capability(b.type, c):
            raise ValueError(f"block {b.id} is not split at minimal genus {CAPABILITY_GENUS}")
    end = bg.end_block()
    if gs.choices[end.id].color("in") == "V":
        gs = flip_colors(gs)
    assignment = {}
    for b in bg.blocks:
        if b.type == BlockType.VAR:
            name = b.port("out").label
            assignment[name] = gs.choices[b.id].color("out") == "V"
    if bg.formula is not None and not fm.evaluate(bg.formula, assignment):
        raise AssertionError("extracted assignment does not satisfy the formula")
    return assignment


@dataclass(frozen=True)
class GenusResult:
    """Minimal amalgamated genus: exact ``|Q|+2`` with a witness, or the
    lower bound ``|Q|+3`` when no all-minimal splitting exists."""

    value: int
    exact: bool
    witness: Optional[GeneralizedSplitting] = None

    def __str__(self):
        return str(self.value) if self.exact else f"≥ {self.value}"


def min_genus(bg: BlockGraph, guard: int = MIN_GENUS_GUARD) -> GenusResult:
    """Search the genus-two capability choices of every block (the END
    block's input fixed white) for a valid generalized splitting."""
    problems = structural_check(bg)
    if problems:
        raise ValueError("block graph fails structural check: " + "; ".join(problems))
    n = len(bg.blocks)
    if n > guard:
        raise ValueError(f"{n} blocks exceed the exhaustive-search guard {guard}")
    q = n - 1
    graph = gluing_graph(bg)

    # depth-first order from END so each block's parent edge is fixed first
    end = bg.end_block()
    nbrs = {b.id: [] for b in bg.blocks}
    for e in bg.edges:
        nbrs[e.src].append((e.src_port, e.dst, e.dst_port))
        nbrs[e.dst].append((e.dst_port, e.src, e.src_port))
    order, parent_link, seen = [], {}, {end.id}
    stack = [end.id]
    while stack:
        x = stack.pop()
        order.append(x)
        for port, y, yport in nbrs[x]:
            if y not in seen:
                seen.add(y)
                parent_link[y] = (yport, x, port)
                stack.append(y)

    options = {b.id: _capability_choices(b.type) for b in bg.blocks}
    options[end.id] = [c for c in options[end.id] if c.color("in") == "W"]
    chosen: dict = {}

    def search(i):
        if i == len(order):
            gs = GeneralizedSplitting(graph, dict(chosen))
            return gs if is_valid(gs) else None
        x = order[i]
        for c in options[x]:
            if x in parent_link:
                port, p, pport = parent_link[x]
                if c.color(port) == chosen[p].color(pport):
                    continue
            chosen[x] = c
            found = search(i + 1)
            if found is not None:
                return found
            del chosen[x]
        return None

    witness = search(0)
    if witness is not None:
        return GenusResult(amalgamated_genus(witness), True, witness)
    return GenusResult(q + 2 + (UNLISTED_GENUS_LOWER_BOUND - CAPABILITY_GENUS), False, None)
