"""CNF formula -> triangulated manifold assembled from blocks, with a
certificate of the bookkeeping behind it."""
from __future__ import annotations

import hashlib
import json
import time
import warnings
from dataclasses import asdict, dataclass, field, replace
from typing import Optional

from . import formula as fm
from .blockgraph import BlockType, build_block_graph
from .splitting import MIN_GENUS_GUARD, min_genus
from .tri.blocks import KNOT_PORT, BlockData, GateError, LibraryError, abstract_library, check_gates
from .tri.core import disjoint_union, validate
from .tri.frames import (
    EXACT_DISTANCE_LIMIT,
    MIN_FILL_DISTANCE,
    BoundaryFrame,
    _glue_high_distance_inplace,
    _normalized,
    layered_solid_torus,
)

__all__ = [
    "Certificate",
    "compute_K",
    "K_from_chi",
    "tet_budget",
    "compile_formula",
    "compile",
    "DEFAULT_CHI",
    "CURVE_COMPLEX_NOTE",
]

DEFAULT_CHI = -1
CURVE_COMPLEX_NOTE = (
    "The curve complex of a torus is the Farey graph, so Farey distance between "
    "reference slopes is the surface distance used by the amalgamation bound."
)


def K_from_chi(chi_minus: int, chi_plus: int) -> int:
    if chi_minus > 0 or chi_plus > 0:
        raise ValueError("Euler characteristics of the reference surfaces must be non-positive")
    if chi_minus == 0 and chi_plus == 0:
        warnings.warn("both reference surfaces have chi = 0; K = 24 is a degenerate bound", stacklevel=2)
    return 24 * (1 - 3 * chi_minus - 3 * chi_plus)


def compute_K(frame_minus: BoundaryFrame, frame_plus: BoundaryFrame) -> int:
    """24 (1 - 3 chi(S-) - 3 chi(S+)) for the surfaces recorded on two frames."""
    return K_from_chi(frame_minus.chi_s, frame_plus.chi_s)


def tet_budget(q_len: int, T: int, K: int) -> int:
    """T(|Q|+1) + 3K(|Q|+1)(|Q|+2)."""
    return T * (q_len + 1) + 3 * K * (q_len + 1) * (q_len + 2)


@dataclass
class Certificate:
    formula: str
    formula_sha256: str
    q_length: int
    mode: str
    authentic: bool
    census: dict
    gluings: list
    fillings: list
    tet_count: int
    T: int
    K_max: int
    budget: int
    genus_claim: dict
    notes: list = field(default_factory=list)
    seconds: float = 0.0
    validation: Optional[dict] = None

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False)


def _genus_claim(bg, q: int) -> dict:
    claim = {"statement": f"g(M_Q) = {q + 2} iff Q is satisfiable", "target": q + 2}
    if len(bg.blocks) > MIN_GENUS_GUARD:
        claim.update(min_genus=None, status=f"not searched ({len(bg.blocks)} blocks > guard {MIN_GENUS_GUARD})")
        return claim
    res = min_genus(bg)
    claim.update(
        min_genus=str(res),
        exact=res.exact,
        status="witness" if res.exact else "lower bound",
        witness=res.witness.to_dict() if res.witness else None,
    )
    return claim


def _prepare_library(bg, library, mode: str) -> dict:
    if mode not in ("abstract", "concrete"):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == "abstract":
        return abstract_library() if library is None else library
    if library is None:
        raise LibraryError("concrete mode needs a block library")
    used = {b.type for b in bg.blocks}
    missing = sorted(t.value for t in used if t not in library)
    if missing:
        raise LibraryError(f"block library lacks {', '.join(missing)}")
    for t in sorted(used, key=lambda x: x.value):
        if library[t].block != t:
            raise GateError(f"library entry for {t.value} holds a {library[t].block.value} block")
        problems = check_gates(library[t])
        if problems:
            raise GateError("; ".join(problems))
    return library


def compile_formula(
    f: fm.Formula,
    library: Optional[dict[BlockType, BlockData]] = None,
    mode: str = "abstract",
    k_override: Optional[int] = None,
    exact_limit: int = EXACT_DISTANCE_LIMIT,
    check_output: bool = True,
):
    """Assemble the triangulation for ``f`` and its certificate.

    Every block-graph edge becomes a gluing at distance ``D = K(|Q|+2)``
    with ``2D`` tetrahedra layered on the output-port side.  In concrete
    mode the knotted port of each NOT block is first filled by a solid torus
    at distance ``max(11, K(|Q|+2))``.
    """
    start = time.perf_counter()
    f = fm.normalize_cnf(f)
    bg = build_block_graph(f)
    q = fm.length(f)
    lib = _prepare_library(bg, library, mode)

    parts = [lib[b.type].triangulation for b in bg.blocks]
    tri, _ = disjoint_union(*parts, prefixes=[f"{b.id}:" for b in bg.blocks])
    size = {b.id: lib[b.type].tet_count for b in bg.blocks}
    fillings, gluings, Ks = [], [], []

    if mode == "concrete":
        for b in bg.blocks:
            if b.type != BlockType.NOT:
                continue
            fid = f"{b.id}:{KNOT_PORT}"
            fr = tri.frames[fid]
            if fr.meridian is None:
                raise GateError(f"NOT block data has no meridian on port {KNOT_PORT!r}")
            K = k_override or K_from_chi(fr.chi_s, DEFAULT_CHI)
            dist = max(MIN_FILL_DISTANCE, K * (q + 2))
            normal = _normalized(fr, "meridian")
            tri.frames[fid] = replace(normal, alpha=normal.meridian)
            solid = layered_solid_torus(frame_id=f"{b.id}:fill")
            before = tri.tet_count
            tri, _ = disjoint_union(tri, solid)
            rec = _glue_high_distance_inplace(tri, fid, f"{b.id}:fill", dist, exact_limit)
            size[b.id] += tri.tet_count - before
            fillings.append(
                {
                    "block": b.id,
                    "port": KNOT_PORT,
                    "K": K,
                    "min_dist": dist,
                    "bound": "11" if dist == MIN_FILL_DISTANCE else "K(|Q|+2)",
                    "added_tetrahedra": tri.tet_count - before,
                    **rec.to_dict(),
                }
            )

    for fid, fr in list(tri.frames.items()):
        if fr.alpha is None:
            raise GateError(f"frame {fid} has no reference slope alpha")
        tri.frames[fid] = _normalized(fr, "alpha")

    for e in bg.edges:
        out_id, in_id = f"{e.src}:{e.src_port}", f"{e.dst}:{e.dst_port}"
        K = k_override or compute_K(tri.frames[out_id], tri.frames[in_id])
        D = K * (q + 2)
        Ks.append(K)
        rec = _glue_high_distance_inplace(tri, out_id, in_id, D, exact_limit)
        gluings.append({"edge": [e.src, e.dst], "label": e.label, "K": K, **rec.to_dict()})

    if tri.frames:
        raise AssertionError(f"unglued boundary tori remain: {sorted(tri.frames)}")
    T = max(size.values())
    K_max = max(Ks, default=k_override or 0)
    budget = tet_budget(q, T, K_max)
    if tri.tet_count > budget:
        raise AssertionError(f"{tri.tet_count} tetrahedra exceed the budget {budget}")

    authentic = mode == "concrete" and not any(lib[b.type].synthetic for b in bg.blocks)
    notes = [CURVE_COMPLEX_NOTE]
    if mode == "abstract":
        notes.append("abstract blocks: solid tori stand in for the block manifolds; not topologically authentic")
    elif not authentic:
        notes.append("block data marked synthetic; not topologically authentic")
    text = fm.to_expr(f)
    cert = Certificate(
        formula=text,
        formula_sha256=hashlib.sha256(text.encode()).hexdigest(),
        q_length=q,
        mode=mode,
        authentic=authentic,
        census=bg.census(),
        gluings=gluings,
        fillings=fillings,
        tet_count=tri.tet_count,
        T=T,
        K_max=K_max,
        budget=budget,
        genus_claim=_genus_claim(bg, q),
        notes=notes,
    )
    if check_output:
        rep = validate(tri)
        cert.validation = rep.summary()
        if not rep.ok:
            raise GateError("emitted triangulation fails validation: " + "; ".join(rep.violations[:5]))
    cert.seconds = round(time.perf_counter() - start, 3)
    return tri, cert


compile = compile_formula
