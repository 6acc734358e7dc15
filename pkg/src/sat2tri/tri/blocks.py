"""Block manifolds as data: a triangulation plus a frame per boundary torus.

A block file is JSON::

    {"block": "OR",
     "triangulation": "tri 3\\n...",
     "boundary": [{"faces": [[t, f, [r0, r1, r2]], [t, f, [r0, r1, r2]]],
                   "slopes": ["0/1", "1/0", "1/1"], "alpha": "-2/1",
                   "chi_S": -1, "meridian": null, "port": "out"}, ...],
     "declared_h1": {"rank": 3, "torsion": []},
     "synthetic": false}

``faces`` lists the two boundary triangles with vertex roles (P00, P11, P10)
and (P00, P11, P01); ``slopes`` gives the two sides and the diagonal.  An
optional ``edges`` entry ``[[t, a, b], ...]`` (sides then diagonal) is
checked against the faces when present.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .. import farey as fy
from ..blockgraph import PORTS, BlockType
from .core import Triangulation, disjoint_union, edge_class_of, edge_classes, validate
from .frames import BoundaryFrame, check_frame, frame_from_slopes, layered_solid_torus
from .homology import H1, homology_h1

__all__ = [
    "BlockData",
    "GateError",
    "LibraryError",
    "EXPECTED_H1",
    "KNOT_PORT",
    "block_ports",
    "load_block",
    "save_block",
    "load_library",
    "abstract_block",
    "abstract_library",
    "synthetic_library",
    "check_gates",
]

KNOT_PORT = "knot"

# H1 of the link exteriors each block type is cut from
EXPECTED_H1 = {
    BlockType.VAR: H1(1),
    BlockType.END: H1(1),
    BlockType.OR: H1(3),
    BlockType.AND: H1(3),
    BlockType.REP: H1(3),
    BlockType.NOT: H1(3),
}


class GateError(ValueError):
    pass


class LibraryError(ValueError):
    pass


def block_ports(btype: BlockType, abstract: bool = False) -> tuple[str, ...]:
    names = tuple(name for name, _, _ in PORTS[BlockType(btype)])
    if BlockType(btype) == BlockType.NOT and not abstract:
        names += (KNOT_PORT,)
    return names


@dataclass
class BlockData:
    block: BlockType
    triangulation: Triangulation
    declared_h1: H1
    synthetic: bool = False
    source: Optional[str] = None
    notes: dict = field(default_factory=dict)

    @property
    def tet_count(self) -> int:
        return self.triangulation.tet_count

    @property
    def frames(self) -> dict[str, BoundaryFrame]:
        return self.triangulation.frames

    def to_dict(self) -> dict:
        boundary = []
        for fr in self.frames.values():
            d = fr.to_dict()
            d.pop("vectors")
            d["slopes"] = [str(fr.su), str(fr.sv), str(fr.sd)]
            boundary.append(d)
        return {
            "block": self.block.value,
            "triangulation": self.triangulation.to_text(),
            "boundary": boundary,
            "declared_h1": self.declared_h1.to_dict(),
            "synthetic": self.synthetic,
        }


def _frame_from_json(entry: dict) -> BoundaryFrame:
    try:
        (ta, fa, ra), (tb, fb, rb) = entry["faces"]
        slopes = entry["slopes"]
    except (KeyError, ValueError, TypeError) as exc:
        raise GateError(f"malformed boundary entry {entry!r}: {exc}") from None
    opt = lambda k: None if entry.get(k) is None else fy.parse_slope(str(entry[k]))
    return frame_from_slopes(
        (int(ta), int(fa), tuple(int(x) for x in ra)),
        (int(tb), int(fb), tuple(int(x) for x in rb)),
        slopes,
        alpha=opt("alpha"),
        chi_s=int(entry.get("chi_S", -1)),
        meridian=opt("meridian"),
        port=str(entry.get("port", "")),
    )


def block_from_dict(d: dict, source: Optional[str] = None) -> BlockData:
    try:
        btype = BlockType(str(d["block"]).upper())
        tri = Triangulation.from_text(d["triangulation"])
        entries = d["boundary"]
        declared = H1.from_dict(d["declared_h1"])
    except (KeyError, ValueError, TypeError) as exc:
        raise GateError(f"{source or 'block'}: malformed manifest ({exc})") from None
    try:
        tri = tri.oriented()
    except ValueError as exc:
        raise GateError(f"{source or btype.value}: {exc}") from None
    ec = edge_classes(tri)
    for entry in entries:
        fr = _frame_from_json(entry)
        if not fr.port:
            raise GateError(f"{source or btype.value}: boundary entry without a port name")
        if fr.port in tri.frames:
            raise GateError(f"{source or btype.value}: port {fr.port!r} listed twice")
        if "edges" in entry:
            (ta, _, (a0, a1, a2)) = fr.a
            want = [(ta, a0, a2), (ta, a2, a1), (ta, a0, a1)]
            for (t, a, b), (t2, x, y) in zip(entry["edges"], want):
                if edge_class_of(ec, int(t), int(a), int(b))[0] != edge_class_of(ec, t2, x, y)[0]:
                    raise GateError(f"{source or btype.value}: listed edges of port {fr.port!r} do not match its faces")
        tri.frames[fr.port] = fr
    return BlockData(btype, tri, declared, bool(d.get("synthetic", False)), source)


def load_block(path) -> BlockData:
    path = Path(path)
    with open(path, encoding="utf-8") as fh:
        return block_from_dict(json.load(fh), str(path))


def save_block(path, data: BlockData) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(data.to_dict(), fh, indent=2)
        fh.write("\n")


def load_library(directory=None) -> dict[BlockType, BlockData]:
    """Read ``<type>.json`` files (e.g. ``or.json``) from ``directory`` or
    from ``$SAT2TRI_BLOCKS``.  Missing types are simply absent."""
    directory = directory or os.environ.get("SAT2TRI_BLOCKS")
    if not directory:
        raise LibraryError("no block directory given and SAT2TRI_BLOCKS is unset")
    directory = Path(directory)
    if not directory.is_dir():
        raise LibraryError(f"{directory} is not a directory")
    lib = {}
    for btype in BlockType:
        path = directory / f"{btype.value.lower()}.json"
        if path.exists():
            lib[btype] = load_block(path)
    return lib


def check_gates(data: BlockData, abstract: bool = False) -> list[str]:
    """Authenticity gates: a valid orientable triangulation with torus
    boundary, one frame per boundary torus named after the block's ports,
    and computed H1 equal to the declared (and expected) group."""
    problems = []
    name = data.source or data.block.value
    rep = validate(data.triangulation)
    problems += [f"{name}: {v}" for v in rep.violations]
    want_ports = set(block_ports(data.block, abstract))
    if set(data.frames) != want_ports:
        problems.append(f"{name}: frames {sorted(data.frames)} do not match ports {sorted(want_ports)}")
    if len(rep.boundary) != len(data.frames):
        problems.append(f"{name}: {len(rep.boundary)} boundary components but {len(data.frames)} frames")
    for comp in rep.boundary:
        if len(comp.faces) != 2 or comp.vertices != 1:
            problems.append(f"{name}: boundary torus through {comp.faces[0]} is not a one-vertex two-triangle torus")
    covered = set()
    for port, fr in data.frames.items():
        for msg in check_frame(data.triangulation, fr):
            problems.append(f"{name}: port {port}: {msg}")
        covered |= {fr.a[:2], fr.b[:2]}
    for comp in rep.boundary:
        if not set(comp.faces) <= covered:
            problems.append(f"{name}: boundary torus through {comp.faces[0]} has no frame")
    if not problems:
        h = homology_h1(data.triangulation)
        if h != data.declared_h1:
            problems.append(f"{name}: computed H1 {h} differs from declared {data.declared_h1}")
        expected = H1(len(want_ports)) if abstract else EXPECTED_H1[data.block]
        if data.declared_h1 != expected:
            problems.append(f"{name}: declared H1 {data.declared_h1} is not the expected {expected}")
    return problems


def _solid_tori(btype: BlockType, ports, synthetic: bool) -> BlockData:
    parts = [layered_solid_torus(port=p, frame_id=p) for p in ports]
    tri, _ = disjoint_union(*parts)
    return BlockData(btype, tri, H1(len(ports)), synthetic=synthetic)


def abstract_block(btype: BlockType) -> BlockData:
    """Stand-in block: one one-tetrahedron solid torus per logical port, with
    reference slope the solid torus meridian.  Not topologically authentic."""
    btype = BlockType(btype)
    return _solid_tori(btype, block_ports(btype, abstract=True), synthetic=True)


def abstract_library() -> dict[BlockType, BlockData]:
    return {b: abstract_block(b) for b in BlockType}


def synthetic_library() -> dict[BlockType, BlockData]:
    """Concrete-mode library with the right port signatures and H1 (NOT
    blocks keep a knotted port) built from solid tori.  Marked synthetic."""
    return {b: _solid_tori(b, block_ports(b), synthetic=True) for b in BlockType}
