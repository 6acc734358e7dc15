"""Gluing tables of tetrahedra and the combinatorial checks run on them.

Tetrahedron vertices are 0..3 and face ``f`` is the face opposite vertex
``f``.  A gluing ``(t, f) -> (t', f', p)`` uses a permutation ``p`` of
``0..3`` sending the vertices of ``t`` to those of ``t'`` with ``p[f] = f'``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, permutations
from typing import Optional

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

__all__ = [
    "Perm",
    "perm_inverse",
    "perm_sign",
    "Triangulation",
    "ValidationReport",
    "BoundaryComponent",
    "TriangulationError",
    "validate",
    "disjoint_union",
    "EdgeClasses",
    "edge_classes",
]

Perm = tuple[int, int, int, int]
Gluing = Optional[tuple[int, int, Perm]]


class TriangulationError(ValueError):
    pass


def perm_inverse(p: Perm) -> Perm:
    inv = [0] * 4
    for i, j in enumerate(p):
        inv[j] = i
    return tuple(inv)


_SIGN = {
    p: (-1 if sum(1 for i, j in combinations(range(4), 2) if p[i] > p[j]) % 2 else 1)
    for p in permutations(range(4))
}


def perm_sign(p: Perm) -> int:
    return _SIGN[tuple(p)]


def _check_perm(p) -> Perm:
    p = tuple(int(x) for x in p)
    if sorted(p) != [0, 1, 2, 3]:
        raise TriangulationError(f"{p} is not a permutation of 0..3")
    return p


class Triangulation:
    """A finite set of tetrahedra with some faces identified in pairs.

    ``orientation`` holds a sign per tetrahedron when the operations that
    built the complex kept one; ``frames`` maps a frame id to the
    :class:`~sat2tri.tri.frames.BoundaryFrame` of a boundary torus.
    Public operations in this package return new objects; the underscore
    methods mutate and are meant for builders that have already copied.
    """

    def __init__(self, tet_count: int = 0):
        self.gluing: list[list[Gluing]] = [[None] * 4 for _ in range(tet_count)]
        self.orientation: Optional[list[int]] = [1] * tet_count
        self.frames: dict = {}

    @property
    def tet_count(self) -> int:
        return len(self.gluing)

    def __len__(self):
        return len(self.gluing)

    def copy(self) -> "Triangulation":
        t = Triangulation()
        t.gluing = [list(row) for row in self.gluing]
        t.orientation = None if self.orientation is None else list(self.orientation)
        t.frames = dict(self.frames)
        return t

    def __eq__(self, other):
        return isinstance(other, Triangulation) and self.gluing == other.gluing

    def __repr__(self):
        return f"<Triangulation {self.tet_count} tets, {len(self.open_faces())} open faces>"

    # ---- mutation (builders only)

    def _add_tets(self, k: int, signs=None) -> int:
        first = self.tet_count
        self.gluing.extend([None] * 4 for _ in range(k))
        if self.orientation is not None:
            self.orientation.extend(signs if signs is not None else [1] * k)
        return first

    def _glue(self, t: int, f: int, t2: int, p: Perm) -> None:
        p = _check_perm(p)
        f2 = p[f]
        if (t, f) == (t2, f2):
            raise TriangulationError(f"face {f} of tet {t} cannot be glued to itself")
        if self.gluing[t][f] is not None or self.gluing[t2][f2] is not None:
            raise TriangulationError(f"face ({t},{f}) or ({t2},{f2}) is already glued")
        self.gluing[t][f] = (t2, f2, p)
        self.gluing[t2][f2] = (t, f, perm_inverse(p))

    def glued(self, t: int, f: int, t2: int, p: Perm) -> "Triangulation":
        out = self.copy()
        out._glue(t, f, t2, p)
        out.orientation = None
        return out

    def oriented(self) -> "Triangulation":
        """Copy carrying a consistent sign per tetrahedron; raises if the
        complex is not orientable."""
        signs = _orient(self)
        if signs is None:
            raise TriangulationError("triangulation is not orientable")
        out = self.copy()
        out.orientation = signs
        return out

    # ---- queries

    def open_faces(self) -> list[tuple[int, int]]:
        return [(t, f) for t, row in enumerate(self.gluing) for f in range(4) if row[f] is None]

    def is_closed(self) -> bool:
        return not self.open_faces()

    # ---- text format

    def to_text(self) -> str:
        lines = [f"tri {self.tet_count}"]
        for row in self.gluing:
            cells = []
            for f, g in enumerate(row):
                if g is None:
                    cells.append("-")
                    continue
                t2, f2, p = g
                inv = perm_inverse(p)
                word = "".join(str(inv[w]) for w in range(4) if w != f2)
                cells.append(f"{t2}:{f2}:{word}")
            lines.append(" ".join(cells))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Triangulation":
        lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
        if not lines or not lines[0].startswith("tri "):
            raise TriangulationError("missing 'tri <n>' header")
        try:
            n = int(lines[0].split()[1])
        except (IndexError, ValueError):
            raise TriangulationError(f"bad header {lines[0]!r}") from None
        if len(lines) != n + 1:
            raise TriangulationError(f"header says {n} tetrahedra, found {len(lines) - 1} rows")
        t = cls(n)
        for i, line in enumerate(lines[1:]):
            cells = line.split()
            if len(cells) != 4:
                raise TriangulationError(f"row {i}: expected 4 entries, got {len(cells)}")
            for f, cell in enumerate(cells):
                if cell == "-":
                    continue
                try:
                    t2s, f2s, word = cell.split(":")
                    t2, f2 = int(t2s), int(f2s)
                except ValueError:
                    raise TriangulationError(f"row {i}: bad entry {cell!r}") from None
                if not (0 <= t2 < n and 0 <= f2 < 4):
                    raise TriangulationError(f"row {i}: entry {cell!r} out of range")
                targets = [w for w in range(4) if w != f2]
                if len(word) != 3 or not word.isdigit():
                    raise TriangulationError(f"row {i}: bad vertex word in {cell!r}")
                p = [None] * 4
                p[f] = f2
                for src, dst in zip(map(int, word), targets):
                    if not 0 <= src < 4 or p[src] is not None:
                        raise TriangulationError(f"row {i}: vertex word {word!r} is not a bijection")
                    p[src] = dst
                p = _check_perm(p)
                t.gluing[i][f] = (t2, f2, p)
        t.orientation = None
        return t


def disjoint_union(*parts: Triangulation, prefixes=None) -> tuple[Triangulation, list[int]]:
    """Concatenate triangulations; returns the union and each part's offset.
    Frame ids are prefixed with ``prefixes[i]`` when given."""
    out = Triangulation()
    offsets = []
    signs: Optional[list[int]] = []
    for i, part in enumerate(parts):
        off = out.tet_count
        offsets.append(off)
        for row in part.gluing:
            out.gluing.append([None if g is None else (g[0] + off, g[1], g[2]) for g in row])
        if signs is not None and part.orientation is not None:
            signs.extend(part.orientation)
        else:
            signs = None
        prefix = "" if prefixes is None else prefixes[i]
        for fid, fr in part.frames.items():
            key = f"{prefix}{fid}"
            if key in out.frames:
                raise TriangulationError(f"duplicate frame id {key!r}")
            out.frames[key] = fr.shifted(off)
    out.orientation = signs
    return out, offsets


# ------------------------------------------------------------------ classes


_EDGE = {}
for _k, (_a, _b) in enumerate(combinations(range(4), 2)):
    _EDGE[(_a, _b)] = _EDGE[(_b, _a)] = _k
_EDGE_TABLE = np.zeros((4, 4), dtype=np.int64)
for (_a, _b), _k in _EDGE.items():
    _EDGE_TABLE[_a, _b] = _k
_FACE_EDGES = [[(a, b) for a, b in combinations([v for v in range(4) if v != f], 2)] for f in range(4)]


@dataclass
class _Arrays:
    """The gluing table as flat arrays: glued face (I[k], F[k]) goes to
    (J[k], G[k]) by permutation row P[k]."""

    n: int
    I: np.ndarray
    F: np.ndarray
    J: np.ndarray
    G: np.ndarray
    P: np.ndarray
    open_I: np.ndarray
    open_F: np.ndarray


def _arrays(t: Triangulation) -> _Arrays:
    src, dst, perms, opn = [], [], [], []
    for i, row in enumerate(t.gluing):
        for f, g in enumerate(row):
            if g is None:
                opn.append((i, f))
            else:
                src.append((i, f))
                dst.append((g[0], g[1]))
                perms.append(g[2])
    src = np.array(src, dtype=np.int64).reshape(-1, 2)
    dst = np.array(dst, dtype=np.int64).reshape(-1, 2)
    opn = np.array(opn, dtype=np.int64).reshape(-1, 2)
    P = np.array(perms, dtype=np.int64).reshape(-1, 4)
    return _Arrays(t.tet_count, src[:, 0], src[:, 1], dst[:, 0], dst[:, 1], P, opn[:, 0], opn[:, 1])


def _classes(size: int, a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, int]:
    """Connected components of the graph on 0..size-1 with edges a[k]-b[k]."""
    if size == 0:
        return np.zeros(0, dtype=np.int64), 0
    g = coo_matrix((np.ones(len(a), dtype=np.int8), (a, b)), shape=(size, size))
    count, labels = connected_components(g, directed=False)
    return labels.astype(np.int64), int(count)


def _relabel(labels: np.ndarray) -> tuple[np.ndarray, int]:
    """Dense labels 0..k-1 in order of first appearance."""
    _, first, inverse = np.unique(labels, return_index=True, return_inverse=True)
    order = np.argsort(np.argsort(first))
    return order[inverse].astype(np.int64), len(first)


def _vertex_labels(t: Triangulation, arr: Optional[_Arrays] = None) -> tuple[np.ndarray, int]:
    """Class of corner (t, v) at index 4t+v, and the number of classes."""
    arr = arr or _arrays(t)
    a, b = [], []
    for v in range(4):
        m = arr.F != v
        a.append(4 * arr.I[m] + v)
        b.append(4 * arr.J[m] + arr.P[m, v])
    labels, _ = _classes(4 * arr.n, np.concatenate(a) if a else np.zeros(0, int), np.concatenate(b) if b else np.zeros(0, int))
    return _relabel(labels)


@dataclass
class EdgeClasses:
    """Oriented edge classes, indexed by ``6t + k`` for the k-th edge a<b of
    tet t: ``label`` is the class and ``sign`` is +1 when a->b runs along
    the class direction."""

    label: np.ndarray
    sign: np.ndarray
    count: int
    conflicts: list


def edge_classes(t: Triangulation, arr: Optional[_Arrays] = None) -> EdgeClasses:
    """Edge classes via the orientation double cover: node 2e is edge e
    read low->high and 2e+1 the reverse."""
    arr = arr or _arrays(t)
    a, b = [], []
    for f in range(4):
        m = arr.F == f
        I, J, P = arr.I[m], arr.J[m], arr.P[m]
        for x, y in _FACE_EDGES[f]:
            px, py = P[:, x], P[:, y]
            flip = (px > py).astype(np.int64)
            e1 = 6 * I + _EDGE[(x, y)]
            e2 = 6 * J + _EDGE_TABLE[px, py]
            a += [2 * e1, 2 * e1 + 1]
            b += [2 * e2 + flip, 2 * e2 + 1 - flip]
    cat = lambda xs: np.concatenate(xs) if xs else np.zeros(0, dtype=np.int64)
    labels, _ = _classes(12 * arr.n, cat(a), cat(b))
    up, down = labels[0::2], labels[1::2]
    bad = np.nonzero(up == down)[0]
    conflicts = [(int(e) // 6, *[(x, y) for (x, y), k in _EDGE.items() if k == int(e) % 6 and x < y][0]) for e in bad]
    rep = np.minimum(up, down)
    sign = np.where(up == rep, 1, -1)
    label, count = _relabel(rep)
    return EdgeClasses(label, sign, count, conflicts)


def edge_class_of(ec: EdgeClasses, tet: int, a: int, b: int) -> tuple[int, int]:
    """(class, sign) of the edge of ``tet`` running from vertex a to b."""
    k = 6 * tet + _EDGE[(a, b)]
    s = int(ec.sign[k])
    return int(ec.label[k]), (s if a < b else -s)


# --------------------------------------------------------------- validation


@dataclass
class BoundaryComponent:
    faces: list
    vertices: int
    edges: int

    @property
    def euler_characteristic(self) -> int:
        return self.vertices - self.edges + len(self.faces)

    @property
    def is_torus(self) -> bool:
        return self.euler_characteristic == 0


@dataclass
class ValidationReport:
    tet_count: int
    vertices: int = 0
    edges: int = 0
    faces: int = 0
    components: int = 0
    orientable: bool = False
    orientation: Optional[list[int]] = None
    boundary: list = field(default_factory=list)
    vertex_link_euler: dict = field(default_factory=dict)
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def euler_characteristic(self) -> int:
        return self.vertices - self.edges + self.faces - self.tet_count

    def summary(self) -> dict:
        return {
            "ok": self.ok,
            "tetrahedra": self.tet_count,
            "vertices": self.vertices,
            "edges": self.edges,
            "faces": self.faces,
            "euler_characteristic": self.euler_characteristic,
            "components": self.components,
            "orientable": self.orientable,
            "boundary": [
                {"faces": len(b.faces), "vertices": b.vertices, "euler_characteristic": b.euler_characteristic}
                for b in self.boundary
            ],
            "violations": list(self.violations),
        }


def _components(t: Triangulation, arr: Optional[_Arrays] = None) -> np.ndarray:
    arr = arr or _arrays(t)
    labels, _ = _classes(arr.n, arr.I, arr.J)
    return labels


_SIGN_ARRAY = np.zeros(256, dtype=np.int64)
for _p, _s in _SIGN.items():
    _SIGN_ARRAY[_p[0] * 64 + _p[1] * 16 + _p[2] * 4 + _p[3]] = _s


def _orient(t: Triangulation, arr: Optional[_Arrays] = None) -> Optional[list[int]]:
    """Signs from the orientation double cover (node 2i: tet i positive)."""
    arr = arr or _arrays(t)
    P = arr.P
    sg = _SIGN_ARRAY[P[:, 0] * 64 + P[:, 1] * 16 + P[:, 2] * 4 + P[:, 3]]
    # s_j = -s_i * sign  ->  same sheet when sign = -1
    same = (sg < 0).astype(np.int64)
    a = np.concatenate([2 * arr.I, 2 * arr.I + 1])
    b = np.concatenate([2 * arr.J + 1 - same, 2 * arr.J + same])
    labels, _ = _classes(2 * arr.n, a, b)
    pos, neg = labels[0::2], labels[1::2]
    if np.any(pos == neg):
        return None
    return np.where(pos < neg, 1, -1).tolist()


def validate(t: Triangulation, require_torus_boundary: bool = True) -> ValidationReport:
    """Run every combinatorial check and collect the violations."""
    n = t.tet_count
    rep = ValidationReport(n)
    bad = rep.violations

    for i, row in enumerate(t.gluing):
        for f, g in enumerate(row):
            if g is None:
                continue
            j, f2, p = g
            if not (0 <= j < n) or p[f] != f2:
                bad.append(f"({i},{f}) has an inconsistent target {g}")
                continue
            if t.gluing[j][f2] != (i, f, perm_inverse(p)):
                bad.append(f"involution broken at ({i},{f}) -> ({j},{f2})")
    if bad:
        return rep

    arr = _arrays(t)
    signs = _orient(t, arr)
    rep.orientable = signs is not None
    rep.orientation = signs
    if signs is None:
        bad.append("not orientable")

    vlabel, rep.vertices = _vertex_labels(t, arr)
    ec = edge_classes(t, arr)
    for i, a, b in ec.conflicts:
        bad.append(f"edge {a}{b} of tet {i} is identified with itself reversed")
    n_open = len(arr.open_I)
    rep.edges = ec.count
    rep.faces = (4 * n - n_open) // 2 + n_open
    rep.components = len(np.unique(_components(t, arr))) if n else 0
    if rep.euler_characteristic != 0:
        bad.append(f"Euler characteristic {rep.euler_characteristic} != 0")

    # boundary surfaces: open faces linked through shared edge classes
    open_faces = list(zip(arr.open_I.tolist(), arr.open_F.tolist()))
    face_edges = [[int(ec.label[6 * tt + _EDGE[e]]) for e in _FACE_EDGES[f]] for tt, f in open_faces]
    by_edge: dict[int, list] = {}
    for k, es in enumerate(face_edges):
        for e in es:
            by_edge.setdefault(e, []).append(k)
    link_a, link_b = [], []
    for e, fs in by_edge.items():
        if len(fs) != 2:
            bad.append(f"boundary edge class {e} lies in {len(fs)} boundary faces")
        for other in fs[1:]:
            link_a.append(fs[0])
            link_b.append(other)
    blabel, _ = _classes(len(open_faces), np.array(link_a, dtype=np.int64), np.array(link_b, dtype=np.int64))
    groups: dict = {}
    for k, tf in enumerate(open_faces):
        groups.setdefault(int(blabel[k]), []).append(k)
    boundary_vertices = set()
    for ks in groups.values():
        vs, es = set(), set()
        for k in ks:
            tt, f = open_faces[k]
            vs.update(int(vlabel[4 * tt + v]) for v in range(4) if v != f)
            es.update(face_edges[k])
        boundary_vertices |= vs
        faces = sorted(open_faces[k] for k in ks)
        comp_ = BoundaryComponent(faces, len(vs), len(es))
        rep.boundary.append(comp_)
        if require_torus_boundary and not comp_.is_torus:
            bad.append(
                f"boundary component through face {faces[0]} has Euler characteristic "
                f"{comp_.euler_characteristic}, not a torus"
            )

    # vertex links: triangles are corners (t, v), edges are face corners
    # (t, f, v) at 16t+4f+v, vertices are edge ends (t, v, w) at 16t+4v+w
    ca, cb, ea, eb = [], [], [], []
    for f in range(4):
        m = arr.F == f
        I, J, G, P = arr.I[m], arr.J[m], arr.G[m], arr.P[m]
        for v in range(4):
            if v == f:
                continue
            ca.append(16 * I + 4 * f + v)
            cb.append(16 * J + 4 * G + P[:, v])
            for w in range(4):
                if w != v and w != f:
                    ea.append(16 * I + 4 * v + w)
                    eb.append(16 * J + 4 * P[:, v] + P[:, w])
    cat = lambda xs: np.concatenate(xs) if xs else np.zeros(0, dtype=np.int64)
    corner_label, _ = _classes(16 * n, cat(ca), cat(cb))
    end_label, _ = _classes(16 * n, cat(ea), cat(eb))
    idx = np.arange(16 * n)
    x, y = (idx // 4) % 4, idx % 4
    valid = x != y
    tet = idx // 16
    # face corner (face x, vertex y) belongs to vertex (tet, y); edge end (x -> y) to (tet, x)
    corner_v = vlabel[4 * tet + y][valid]
    end_v = vlabel[4 * tet + x][valid]
    nv = rep.vertices
    corner_count = np.bincount(corner_v[np.unique(corner_label[valid], return_index=True)[1]], minlength=nv)
    end_count = np.bincount(end_v[np.unique(end_label[valid], return_index=True)[1]], minlength=nv)
    tri_count = np.bincount(vlabel, minlength=nv)
    for vc in range(nv):
        chi = int(end_count[vc] - corner_count[vc] + tri_count[vc])
        rep.vertex_link_euler[vc] = chi
        want = 1 if vc in boundary_vertices else 2
        if chi != want:
            kind = "disk" if want == 1 else "sphere"
            bad.append(f"link of vertex {vc} has Euler characteristic {chi}, expected a {kind}")
    return rep
