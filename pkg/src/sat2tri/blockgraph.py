"""The graph of gadget blocks that a CNF formula compiles to.

Every block has a fixed port signature.  Ports are addressed by name:

    VAR  out                 NOT  in, out
    REP  in*, out0, out1     AND  in0, in1, out*
    OR   in0, in1, out       END  in

(* marks the preferred port.)  Each gluing edge joins an output port to an
input port carrying the same subformula label.
"""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from graphlib import CycleError, TopologicalSorter

from . import formula as fm

__all__ = [
    "BlockType",
    "Port",
    "Block",
    "Edge",
    "BlockGraph",
    "PORTS",
    "capability",
    "build_block_graph",
    "structural_check",
    "CAPABILITY_GENUS",
    "UNLISTED_GENUS_LOWER_BOUND",
]


class BlockType(str, Enum):
    VAR = "VAR"
    REP = "REP"
    NOT = "NOT"
    AND = "AND"
    OR = "OR"
    END = "END"


# port name -> (role, preferred)
PORTS: dict[BlockType, tuple[tuple[str, str, bool], ...]] = {
    BlockType.VAR: (("out", "output", False),),
    BlockType.REP: (("in", "input", True), ("out0", "output", False), ("out1", "output", False)),
    BlockType.NOT: (("in", "input", False), ("out", "output", False)),
    BlockType.AND: (("in0", "input", False), ("in1", "input", False), ("out", "output", True)),
    BlockType.OR: (("in0", "input", False), ("in1", "input", False), ("out", "output", False)),
    BlockType.END: (("in", "input", False),),
}

CAPABILITY_GENUS = 2
UNLISTED_GENUS_LOWER_BOUND = 3

# Unordered bipartitions of the ports realized by genus-two splittings.
_CAPABILITY = {
    BlockType.VAR: [(("out",), ())],
    BlockType.END: [(("in",), ())],
    BlockType.REP: [(("out0", "out1"), ("in",))],
    BlockType.AND: [(("in0", "in1"), ("out",))],
    BlockType.NOT: [(("in", "out"), ())],
    BlockType.OR: [
        (("in0", "in1"), ("out",)),
        (("in0", "out"), ("in1",)),
        (("in1", "out"), ("in0",)),
    ],
}


def capability(t: BlockType) -> list[tuple[frozenset, frozenset, int]]:
    """Port bipartitions realized at minimal genus, as ``(side, side, genus)``.

    Anything not listed costs at least :data:`UNLISTED_GENUS_LOWER_BOUND`.
    """
    return [(frozenset(a), frozenset(b), CAPABILITY_GENUS) for a, b in _CAPABILITY[BlockType(t)]]


@dataclass(frozen=True)
class Port:
    name: str
    role: str
    label: str
    preferred: bool = False


@dataclass(frozen=True)
class Block:
    id: int
    type: BlockType
    ports: tuple[Port, ...]

    def port(self, name: str) -> Port:
        for p in self.ports:
            if p.name == name:
                return p
        raise KeyError(f"block {self.id} ({self.type.value}) has no port {name!r}")


@dataclass(frozen=True)
class Edge:
    src: int
    src_port: str
    dst: int
    dst_port: str
    label: str


@dataclass
class BlockGraph:
    blocks: list[Block]
    edges: list[Edge]
    formula: fm.Formula | None = None
    q_length: int | None = None

    def block(self, bid: int) -> Block:
        return self.blocks[bid]

    def census(self) -> dict[str, int]:
        c = Counter(b.type.value for b in self.blocks)
        return {t.value: c.get(t.value, 0) for t in BlockType}

    def end_block(self) -> Block:
        return next(b for b in self.blocks if b.type == BlockType.END)

    def edge_at(self, bid: int, port: str) -> Edge:
        for e in self.edges:
            if (e.src, e.src_port) == (bid, port) or (e.dst, e.dst_port) == (bid, port):
                return e
        raise KeyError((bid, port))

    def to_dot(self) -> str:
        lines = ["digraph M_Q {"]
        for b in self.blocks:
            lines.append(f'  b{b.id} [label="{b.type.value} {b.id}"];')
        for e in self.edges:
            lab = e.label.replace('"', r"\"")
            lines.append(f'  b{e.src} -> b{e.dst} [label="{lab}", taillabel="{e.src_port}", headlabel="{e.dst_port}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {
            "q_length": self.q_length,
            "blocks": [
                {
                    "id": b.id,
                    "type": b.type.value,
                    "ports": [
                        {"name": p.name, "role": p.role, "label": p.label, "preferred": p.preferred}
                        for p in b.ports
                    ],
                }
                for b in self.blocks
            ],
            "edges": [
                {"src": e.src, "src_port": e.src_port, "dst": e.dst, "dst_port": e.dst_port, "label": e.label}
                for e in self.edges
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False)


class _Builder:
    def __init__(self):
        self.blocks: list[Block] = []
        self.edges: list[Edge] = []

    def add(self, btype: BlockType, labels: dict[str, str]) -> int:
        bid = len(self.blocks)
        ports = tuple(Port(n, role, labels[n], pref) for n, role, pref in PORTS[btype])
        self.blocks.append(Block(bid, btype, ports))
        return bid

    def glue(self, src, dst, label):
        self.edges.append(Edge(src[0], src[1], dst[0], dst[1], label))


def build_block_graph(f: fm.Formula) -> BlockGraph:
    """Translate a CNF formula into its block graph (``length(f) + 1`` blocks).

    Occurrences of a variable are served by a left comb of REP blocks hanging
    off the VAR block; a NOT block sits on the occurrence it negates.  With a
    single occurrence the VAR (or NOT) output is used directly.
    """
    fm.normalize_cnf(f)
    B = _Builder()
    label = lambda node: fm.to_expr(node, unicode=True)

    # occurrence order of literals, left to right
    occurrences: dict[str, int] = Counter()

    def count(node):
        if isinstance(node, fm.Var):
            occurrences[node.name] += 1
        elif isinstance(node, fm.Not):
            count(node.child)
        else:
            count(node.left)
            count(node.right)

    count(f)

    # supply[name] = list of output ports carrying the variable, in use order
    supply: dict[str, list[tuple[int, str]]] = {}
    for name in fm.variables(f):
        var = B.add(BlockType.VAR, {"out": name})
        k = occurrences[name]
        if k == 1:
            supply[name] = [(var, "out")]
            continue
        outs = []
        feed = (var, "out")
        for i in range(k - 1):
            rep = B.add(BlockType.REP, {"in": name, "out0": name, "out1": name})
            B.glue(feed, (rep, "in"), name)
            outs.append((rep, "out1"))
            feed = (rep, "out0")
        outs.append(feed)
        supply[name] = outs
    cursor = {name: 0 for name in supply}

    def take(name):
        port = supply[name][cursor[name]]
        cursor[name] += 1
        return port

    def emit(node) -> tuple[int, str]:
        """Create blocks for ``node``; return the output port carrying it."""
        if isinstance(node, fm.Var):
            return take(node.name)
        if isinstance(node, fm.Not):
            src = take(node.child.name)
            neg = B.add(BlockType.NOT, {"in": label(node.child), "out": label(node)})
            B.glue(src, (neg, "in"), label(node.child))
            return (neg, "out")
        left, right = emit(node.left), emit(node.right)
        btype = BlockType.AND if isinstance(node, fm.And) else BlockType.OR
        blk = B.add(btype, {"in0": label(node.left), "in1": label(node.right), "out": label(node)})
        B.glue(left, (blk, "in0"), label(node.left))
        B.glue(right, (blk, "in1"), label(node.right))
        return (blk, "out")

    root = emit(f)
    end = B.add(BlockType.END, {"in": label(f)})
    B.glue(root, (end, "in"), label(f))
    return BlockGraph(B.blocks, B.edges, f, fm.length(f))


# ------------------------------------------------------------------ checking

_ALLOWED_CONSUMERS = {
    BlockType.AND: {BlockType.AND, BlockType.END},
    BlockType.OR: {BlockType.AND, BlockType.OR, BlockType.END},
    BlockType.NOT: {BlockType.AND, BlockType.OR, BlockType.END},
    BlockType.VAR: {BlockType.REP, BlockType.NOT, BlockType.AND, BlockType.OR, BlockType.END},
    BlockType.REP: {BlockType.REP, BlockType.NOT, BlockType.AND, BlockType.OR, BlockType.END},
}


def _preds(succ):
    preds = {}
    for x, ys in succ.items():
        for y in ys:
            preds.setdefault(y, set()).add(x)
    return preds


def structural_check(g: BlockGraph) -> list[str]:
    """Violations of the CNF wiring rules, connectivity and block count; an
    empty list means the graph passes.

    The dual graph is not a tree once a variable repeats: each REP block
    closes one cycle, so ``edges = blocks - 1 + #REP``.  Oriented from
    outputs to inputs it must still be acyclic.
    """
    problems = []
    n = len(g.blocks)
    for i, b in enumerate(g.blocks):
        if b.id != i:
            problems.append(f"block at position {i} has id {b.id}")
    if problems:
        return problems

    used = Counter()
    for k, e in enumerate(g.edges):
        try:
            src, dst = g.block(e.src), g.block(e.dst)
            sp, dp = src.port(e.src_port), dst.port(e.dst_port)
        except (IndexError, KeyError) as exc:
            problems.append(f"edge {k}: dangling endpoint ({exc})")
            continue
        used[(e.src, e.src_port)] += 1
        used[(e.dst, e.dst_port)] += 1
        if sp.role != "output" or dp.role != "input":
            problems.append(f"edge {k}: must join an output to an input (blocks {e.src}->{e.dst})")
        if not (sp.label == dp.label == e.label):
            problems.append(f"edge {k}: label mismatch {sp.label!r} / {e.label!r} / {dp.label!r}")
        allowed = _ALLOWED_CONSUMERS.get(src.type, set())
        if dst.type not in allowed:
            problems.append(
                f"edge {k}: {src.type.value} block {src.id} output feeds "
                f"{dst.type.value} block {dst.id} (CNF wiring rule)"
            )
        if src.type == BlockType.NOT and e.label != sp.label:
            problems.append(f"edge {k}: NOT block {src.id} output must carry its literal")
    for b in g.blocks:
        for p in b.ports:
            if used[(b.id, p.name)] != 1:
                problems.append(f"block {b.id} port {p.name} used {used[(b.id, p.name)]} times")

    # connected, no directed output->input cycle, one independent cycle per REP
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    succ = {i: [] for i in range(n)}
    for e in g.edges:
        if 0 <= e.src < n and 0 <= e.dst < n:
            parent[find(e.src)] = find(e.dst)
            succ[e.src].append(e.dst)
    if n and len({find(i) for i in range(n)}) != 1:
        problems.append("block graph is disconnected")
    try:
        tuple(TopologicalSorter({i: set() for i in range(n)} | _preds(succ)).static_order())
    except CycleError as exc:
        problems.append(f"directed cycle through blocks {sorted(set(exc.args[1]))}")
    reps = sum(b.type == BlockType.REP for b in g.blocks)
    if len(g.edges) - n + 1 != reps:
        problems.append(f"cycle rank {len(g.edges) - n + 1} differs from the {reps} REP blocks")

    if g.formula is not None:
        want = fm.length(g.formula) + 1
        if n != want:
            problems.append(f"{n} blocks, expected |Q|+1 = {want}")
    return problems
