"""One-vertex torus boundaries: frames, layering and high-distance gluings.

A frame describes a boundary torus made of two triangles as a unit square
with corners P00, P10, P11, P01 (all the same vertex).  Triangle ``a`` has
vertex roles (P00, P11, P10), triangle ``b`` has (P00, P11, P01); each role
triple is ``(tet, face, (r0, r1, r2))``.  The sides P00->P10 and P00->P01
carry the homology vectors ``u`` and ``v`` in the frame's basis and the
diagonal P00->P11 carries ``u + v``.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

from .. import farey as fy
from ..farey import Slope
from .core import Triangulation, TriangulationError, disjoint_union, perm_sign, edge_classes, edge_class_of

__all__ = [
    "BoundaryFrame",
    "FrameError",
    "GluingRecord",
    "EXACT_DISTANCE_LIMIT",
    "MIN_FILL_DISTANCE",
    "LST_MERIDIAN",
    "layered_solid_torus",
    "check_frame",
    "normalize_frame",
    "is_normalized",
    "layer",
    "layer_fibonacci",
    "glue_high_distance",
    "fill_by_layered_solid_torus",
]

EXACT_DISTANCE_LIMIT = 12
MIN_FILL_DISTANCE = 11
LST_MERIDIAN = Slope(-2, 1)

Vec = tuple[int, int]
Tri = tuple[int, int, tuple[int, int, int]]


class FrameError(TriangulationError):
    pass


def _slope(w: Vec) -> Slope:
    return fy.reduce(*w)


def _add(x: Vec, y: Vec) -> Vec:
    return (x[0] + y[0], x[1] + y[1])


def _neg(x: Vec) -> Vec:
    return (-x[0], -x[1])


def _mat_vec(m, w: Vec) -> Vec:
    (a, b), (c, d) = m
    return (a * w[0] + b * w[1], c * w[0] + d * w[1])


def _mat_mul(m, n):
    (a, b), (c, d) = m
    (e, f), (g, h) = n
    return ((a * e + b * g, a * f + b * h), (c * e + d * g, c * f + d * h))


def _det(m) -> int:
    (a, b), (c, d) = m
    return a * d - b * c


def _inv(m):
    """Inverse of a unimodular integer matrix."""
    (a, b), (c, d) = m
    det = a * d - b * c
    if det not in (1, -1):
        raise FrameError(f"matrix {m} is not invertible over the integers")
    return ((d * det, -b * det), (-c * det, a * det))


def _columns(x: Vec, y: Vec):
    return ((x[0], y[0]), (x[1], y[1]))


@dataclass(frozen=True)
class BoundaryFrame:
    a: Tri
    b: Tri
    u: Vec
    v: Vec
    triple: tuple[Slope, Slope, Slope]  # oldest first
    alpha: Optional[Slope] = None
    chi_s: int = -1
    meridian: Optional[Slope] = None
    port: str = ""
    basis: tuple = ((1, 0), (0, 1))  # accumulated change of basis

    def __post_init__(self):
        if abs(_det(_columns(self.u, self.v))) != 1:
            raise FrameError(f"side vectors {self.u}, {self.v} do not form a basis")
        if set(self.triple) != {self.su, self.sv, self.sd}:
            raise FrameError(f"slope triple {self.triple} does not match the frame edges")
        if self.chi_s > 0:
            raise FrameError("chi_S must be non-positive")

    @property
    def d(self) -> Vec:
        return _add(self.u, self.v)

    @property
    def su(self) -> Slope:
        return _slope(self.u)

    @property
    def sv(self) -> Slope:
        return _slope(self.v)

    @property
    def sd(self) -> Slope:
        return _slope(self.d)

    def shifted(self, off: int) -> "BoundaryFrame":
        if not off:
            return self
        return replace(self, a=(self.a[0] + off,) + self.a[1:], b=(self.b[0] + off,) + self.b[1:])

    # re-labellings of the same two triangles

    def _swapped(self) -> "BoundaryFrame":
        return replace(self, a=self.b, b=self.a, u=self.v, v=self.u)

    def _u_to_diagonal(self) -> "BoundaryFrame":
        (ta, fa, (a0, a1, a2)), (tb, fb, (b0, b1, b2)) = self.a, self.b
        return replace(self, a=(ta, fa, (a0, a2, a1)), b=(tb, fb, (b2, b1, b0)), u=self.d, v=_neg(self.v))

    def with_diagonal(self, s: Slope) -> "BoundaryFrame":
        """The same frame relabelled so that the edge of slope ``s`` is the
        diagonal."""
        if s == self.sd:
            return self
        if s == self.su:
            return self._u_to_diagonal()
        if s == self.sv:
            return self._swapped()._u_to_diagonal()
        raise FrameError(f"slope {s} is not an edge of this boundary (edges {self.triple})")

    def _relabellings(self):
        base = [self, self._u_to_diagonal(), self._swapped()._u_to_diagonal()]
        return base + [f._swapped() for f in base]

    def transformed(self, m) -> "BoundaryFrame":
        """Express the frame in a new basis, ``m`` acting on column vectors."""
        u, v = _mat_vec(m, self.u), _mat_vec(m, self.v)
        sl = lambda s: None if s is None else fy.apply_matrix(m, s)
        return replace(
            self,
            u=u,
            v=v,
            triple=tuple(fy.apply_matrix(m, s) for s in self.triple),
            alpha=sl(self.alpha),
            meridian=sl(self.meridian),
            basis=_mat_mul(m, self.basis),
        )

    def to_dict(self) -> dict:
        return {
            "faces": [[self.a[0], self.a[1], list(self.a[2])], [self.b[0], self.b[1], list(self.b[2])]],
            "vectors": [list(self.u), list(self.v)],
            "slopes": [str(s) for s in self.triple],
            "alpha": None if self.alpha is None else str(self.alpha),
            "chi_S": self.chi_s,
            "meridian": None if self.meridian is None else str(self.meridian),
            "port": self.port,
        }


def _vectors_from_slopes(su: Slope, sv: Slope, sd: Slope) -> tuple[Vec, Vec]:
    u, v = su.vector(), sv.vector()
    if _slope(_add(u, v)) == sd:
        return u, v
    if _slope(_add(u, _neg(v))) == sd:
        return u, _neg(v)
    raise FrameError(f"{sd} is neither the mediant nor the anti-mediant of {su} and {sv}")


def frame_from_slopes(a: Tri, b: Tri, slopes, **kw) -> BoundaryFrame:
    """Frame with side slopes ``slopes[0]`` (u), ``slopes[1]`` (v) and
    diagonal ``slopes[2]``."""
    su, sv, sd = (s if isinstance(s, Slope) else fy.parse_slope(s) for s in slopes)
    u, v = _vectors_from_slopes(su, sv, sd)
    return BoundaryFrame(tuple(a[:2]) + (tuple(a[2]),), tuple(b[:2]) + (tuple(b[2]),), u, v, (su, sv, sd), **kw)


def check_frame(t: Triangulation, fr: BoundaryFrame) -> list[str]:
    """Combinatorial consistency of a frame with the triangulation."""
    problems = []
    for name, (tet, face, roles) in (("a", fr.a), ("b", fr.b)):
        if not 0 <= tet < t.tet_count:
            return [f"triangle {name} refers to tet {tet} of {t.tet_count}"]
        if sorted(roles + (face,)) != [0, 1, 2, 3]:
            return [f"triangle {name} roles {roles} do not fill face {face}"]
        if t.gluing[tet][face] is not None:
            problems.append(f"triangle {name} ({tet},{face}) is not a boundary face")
    if problems:
        return problems
    ec = edge_classes(t)
    (ta, _, (a0, a1, a2)), (tb, _, (b0, b1, b2)) = fr.a, fr.b
    pairs = {
        "diagonal": ((ta, a0, a1), (tb, b0, b1)),
        "u side": ((ta, a0, a2), (tb, b2, b1)),
        "v side": ((ta, a2, a1), (tb, b0, b2)),
    }
    seen = set()
    for name, (x, y) in pairs.items():
        cx, cy = edge_class_of(ec, *x), edge_class_of(ec, *y)
        if cx != cy:
            problems.append(f"{name} of triangle a and triangle b are different edges")
        seen.add(cx[0])
    if len(seen) != 3:
        problems.append("boundary torus does not have three distinct edges")
    return problems


def layered_solid_torus(port: str = "", frame_id: str = "lst", **kw) -> Triangulation:
    """The one-tetrahedron solid torus: face 012 glued to face 123 by
    i -> i+1.  Its boundary frame has slopes 0/1, 1/0, 1/1 and meridian -2/1."""
    t = Triangulation(1)
    t._glue(0, 3, 0, (1, 2, 3, 0))
    kw.setdefault("alpha", LST_MERIDIAN)
    kw.setdefault("meridian", LST_MERIDIAN)
    t.frames[frame_id] = BoundaryFrame(
        a=(0, 1, (0, 3, 2)), b=(0, 2, (0, 3, 1)), u=(0, 1), v=(1, 0), triple=(fy.ZERO, fy.INF, fy.ONE), port=port, **kw
    )
    return t


# -------------------------------------------------------------- normalizing

_STANDARD = (fy.ZERO, fy.INF, fy.ONE)


def _reference(fr: BoundaryFrame, use: str) -> Slope:
    ref = fr.meridian if use == "meridian" else fr.alpha
    if ref is None:
        raise FrameError(f"frame has no {use} slope")
    return ref


def is_normalized(fr: BoundaryFrame, use: str = "alpha") -> bool:
    ref = _reference(fr, use)
    return fr.triple == _STANDARD and fr.u == (0, 1) and fr.v == (1, 0) and ref.q > 0 and ref.p <= 0


def _normalized(fr: BoundaryFrame, use: str) -> BoundaryFrame:
    ref = _reference(fr, use)
    candidates = []
    for g in fr._relabellings():
        # m sends u to (0, 1) and v to (1, 0)
        m = _inv(_columns(g.v, g.u))
        img = fy.apply_matrix(m, ref)
        if img.q > 0 and img.p <= 0:
            candidates.append((_det(m) != 1, len(candidates), g, m))
    if not candidates:
        raise FrameError(f"no relabelling puts {ref} at a non-positive slope")
    _, _, g, m = min(candidates, key=lambda c: c[:2])
    out = g.transformed(m)
    return replace(out, triple=_STANDARD)


def normalize_frame(t: Triangulation, frame_id: str, use: str = "alpha") -> Triangulation:
    """Change the frame's basis (and relabel its triangles) so that its
    slopes read (0/1, 1/0, 1/1) and the reference slope (``alpha`` or
    ``meridian``) is finite and non-positive.  Orientation-preserving bases
    are preferred; the change of basis is kept in ``frame.basis``."""
    out = t.copy()
    out.frames[frame_id] = _normalized(t.frames[frame_id], use)
    return out


# ----------------------------------------------------------------- layering


def _tet_sign(t: Triangulation, tet: int) -> int:
    if t.orientation is None:
        raise FrameError("triangulation carries no orientation; validate it first")
    return t.orientation[tet]


def _cross(x: Vec, y: Vec) -> int:
    return x[0] * y[1] - x[1] * y[0]


# how the role names of the running triple change under each relabelling
_U_TO_DIAG = {"u": "d", "v": "v", "d": "u"}
_V_TO_DIAG = {"u": "v", "v": "d", "d": "u"}


def _layer_run(t: Triangulation, frame_id: str, targets) -> None:
    """Layer once per entry of ``targets`` (in place).

    Each entry is a slope to flip, or ``None`` for the oldest slope of the
    running triple.  The triple is tracked by edge role (``u``, ``v``, ``d``)
    so long runs never compare or reduce large slopes.
    """
    if frame_id not in t.frames:
        raise FrameError(f"no frame {frame_id!r}")
    fr = t.frames[frame_id]
    (ta, fa, (a0, a1, a2)), (tb, fb, (b0, b1, b2)) = fr.a, fr.b
    u, v = fr.u, fr.v
    roles = {fr.su: "u", fr.sv: "v", fr.sd: "d"}
    triple = [roles[x] for x in fr.triple]
    gluing, signs = t.gluing, t.orientation
    if signs is None:
        raise FrameError("triangulation carries no orientation; validate it first")
    for target in targets:
        if target is None:
            role = triple[0]
        else:
            w = target.vector()
            d = (u[0] + v[0], u[1] + v[1])
            role = next((r for r, x in (("d", d), ("u", u), ("v", v)) if _cross(w, x) == 0), None)
            if role is None:
                raise FrameError(f"slope {target} is not an edge of this boundary")
        if role == "u":
            a1, a2, b0, b2 = a2, a1, b2, b0
            u, v = (u[0] + v[0], u[1] + v[1]), (-v[0], -v[1])
            triple = [_U_TO_DIAG[r] for r in triple]
        elif role == "v":
            (ta, fa, a0, a1, a2), (tb, fb, b0, b1, b2) = (tb, fb, b0, b2, b1), (ta, fa, a2, a1, a0)
            u, v = (u[0] + v[0], u[1] + v[1]), (-u[0], -u[1])
            triple = [_V_TO_DIAG[r] for r in triple]
        n = len(gluing)
        p_a = [0, 0, 0, 0]
        p_a[0], p_a[1], p_a[2], p_a[3] = a0, a1, a2, fa
        p_b = [0, 0, 0, 0]
        p_b[0], p_b[1], p_b[3], p_b[2] = b0, b1, b2, fb
        p_a, p_b = tuple(p_a), tuple(p_b)
        sg = -signs[ta] * perm_sign(p_a)
        if sg * signs[tb] * perm_sign(p_b) != -1:
            raise FrameError("frame triangles are inconsistently oriented")
        if gluing[ta][fa] is not None or gluing[tb][fb] is not None:
            raise FrameError("frame triangles are no longer on the boundary")
        gluing.append([None, None, (tb, fb, p_b), (ta, fa, p_a)])
        signs.append(sg)
        gluing[ta][fa] = (n, 3, _inverse(p_a))
        gluing[tb][fb] = (n, 2, _inverse(p_b))
        # the diagonal u+v is flipped to v-u; after u -> -u that is the new u+v
        triple = [r for r in triple if r != "d"] + ["d"]
        ta, fa, a0, a1, a2 = n, 1, 2, 3, 0
        tb, fb, b0, b1, b2 = n, 0, 2, 3, 1
        u = (-u[0], -u[1])
    vec = {"u": u, "v": v, "d": (u[0] + v[0], u[1] + v[1])}
    t.frames[frame_id] = replace(
        fr, a=(ta, fa, (a0, a1, a2)), b=(tb, fb, (b0, b1, b2)), u=u, v=v, triple=tuple(_slope(vec[r]) for r in triple)
    )


def _inverse(p):
    inv = [0, 0, 0, 0]
    for i, j in enumerate(p):
        inv[j] = i
    return tuple(inv)


def _layer_inplace(t: Triangulation, frame_id: str, s: Slope) -> None:
    _layer_run(t, frame_id, [s])


def layer(t: Triangulation, frame_id: str, s: Slope) -> Triangulation:
    """Layer one tetrahedron on the boundary edge of slope ``s``: the edge
    is flipped to the other Farey neighbour of the remaining two."""
    out = t.copy()
    _layer_inplace(out, frame_id, s)
    return out


def _layer_fibonacci_inplace(t: Triangulation, frame_id: str, k: int) -> None:
    if frame_id not in t.frames:
        raise FrameError(f"no frame {frame_id!r}")
    if t.frames[frame_id].triple != _STANDARD:
        raise FrameError(f"frame {frame_id!r} does not start at (0/1, 1/0, 1/1)")
    _layer_run(t, frame_id, [None] * k)


def layer_fibonacci(t: Triangulation, frame_id: str, k: int) -> Triangulation:
    """``k`` layerings, each flipping the oldest slope; from (0/1, 1/0, 1/1)
    this ends at (F_{k-1}/F_{k-2}, F_k/F_{k-1}, F_{k+1}/F_k)."""
    if k < 0:
        raise ValueError("k must be non-negative")
    out = t.copy()
    _layer_fibonacci_inplace(out, frame_id, k)
    return out


# ------------------------------------------------------------------ gluing


@dataclass(frozen=True)
class GluingRecord:
    frame_a: str
    frame_b: str
    port_a: str
    port_b: str
    D: int
    layered: int
    matrix: tuple  # slopes of b's basis -> slopes of a's basis
    alpha_a: Optional[Slope]
    alpha_b_image: Optional[Slope]
    distance: Optional[int]  # exact Farey distance when D is small
    status: str

    @property
    def verified(self) -> bool:
        return self.status == "exact" and self.distance is not None and self.distance > self.D

    def to_dict(self) -> dict:
        short = lambda s: None if s is None else (str(s) if len(str(s)) <= 64 else f"<{len(str(s))} chars>")
        return {
            "frames": [self.frame_a, self.frame_b],
            "ports": [self.port_a, self.port_b],
            "D": self.D,
            "layered_tetrahedra": self.layered,
            "alpha_a": short(self.alpha_a),
            "alpha_b_image": short(self.alpha_b_image),
            "distance": self.distance,
            "distance_status": self.status,
        }


# (first triangle of a -> which triangle of b, role order), then for b's
# triangle; role orders index the target roles; square map on (x, y) coords
_IDENT = (0, 1, 2)
_FLIP = (1, 0, 2)
_CANDIDATES = (
    (("a", _IDENT), ("b", _IDENT), ((1, 0), (0, 1))),
    (("b", _FLIP), ("a", _FLIP), ((-1, 0), (0, -1))),
    (("b", _IDENT), ("a", _IDENT), ((0, 1), (1, 0))),
    (("a", _FLIP), ("b", _FLIP), ((0, -1), (-1, 0))),
)


def _face_perm(src: Tri, dst: Tri, order) -> tuple:
    (_, fs, rs), (_, fd, rd) = src, dst
    p = [0] * 4
    p[fs] = fd
    for i, k in enumerate(order):
        p[rs[i]] = rd[k]
    return tuple(p)


def _glue_frames_inplace(t: Triangulation, id_a: str, id_b: str):
    """Identify two boundary tori, the diagonal of ``id_a`` onto the diagonal
    of ``id_b``, by the first orientation-compatible simplicial map.  Returns
    the matrix taking slopes in b's basis to slopes in a's basis."""
    fa, fb = t.frames[id_a], t.frames[id_b]
    for (tgt1, ord1), (tgt2, ord2), sq in _CANDIDATES:
        d1 = fb.a if tgt1 == "a" else fb.b
        d2 = fb.a if tgt2 == "a" else fb.b
        p1, p2 = _face_perm(fa.a, d1, ord1), _face_perm(fa.b, d2, ord2)
        ok = all(
            _tet_sign(t, src[0]) * _tet_sign(t, dst[0]) * perm_sign(p) == -1
            for src, dst, p in ((fa.a, d1, p1), (fa.b, d2, p2))
        )
        if ok:
            break
    else:
        raise FrameError("no orientation-compatible identification of the two tori")
    if fa.a[:2] == d1[:2] or fa.b[:2] == d2[:2] or {fa.a[:2], fa.b[:2]} & {fb.a[:2], fb.b[:2]}:
        raise FrameError("cannot glue a boundary torus to itself")
    t._glue(fa.a[0], fa.a[1], d1[0], p1)
    t._glue(fa.b[0], fa.b[1], d2[0], p2)
    del t.frames[id_a], t.frames[id_b]
    # homology: x u_a + y v_a  <->  sq (x, y) in (u_b, v_b) coordinates
    Ua, Ub = _columns(fa.u, fa.v), _columns(fb.u, fb.v)
    return _mat_mul(_mat_mul(Ua, _inv(sq)), _inv(Ub))


def _glue_high_distance_inplace(t: Triangulation, id_a: str, id_b: str, D: int, exact_limit: int) -> GluingRecord:
    if D < 1:
        raise ValueError("D must be positive")
    for fid, use in ((id_a, "alpha"), (id_b, "alpha")):
        if fid not in t.frames:
            raise FrameError(f"no frame {fid!r}")
        if not is_normalized(t.frames[fid], use):
            raise FrameError(f"frame {fid!r} is not normalized; call normalize_frame first")
    fa0, fb0 = t.frames[id_a], t.frames[id_b]
    _layer_fibonacci_inplace(t, id_a, 2 * D)
    t.frames[id_b] = t.frames[id_b].with_diagonal(fy.ZERO)
    m = _glue_frames_inplace(t, id_a, id_b)
    image = fy.apply_matrix(m, fb0.alpha)
    if D <= exact_limit:
        dist, status = fy.farey_distance(fa0.alpha, image), "exact"
        if dist <= D:
            raise AssertionError(f"gluing distance {dist} does not exceed D = {D}")
    else:
        dist, status = None, "symbolic"
    return GluingRecord(id_a, id_b, fa0.port, fb0.port, D, 2 * D, m, fa0.alpha, image, dist, status)


def glue_high_distance(
    ta: Triangulation,
    id_a: str,
    tb: Optional[Triangulation],
    id_b: str,
    D: int,
    exact_limit: int = EXACT_DISTANCE_LIMIT,
) -> tuple[Triangulation, GluingRecord]:
    """Layer ``2D`` tetrahedra on frame ``id_a`` and glue its boundary torus
    to frame ``id_b`` so the reference slopes end up more than ``D`` apart.

    ``tb`` may be ``None`` (or ``ta`` itself) when both frames live in ``ta``;
    otherwise the two triangulations are joined first and ``id_b`` refers to
    ``tb``'s frame, renamed ``"b:" + id_b`` if the ids clash.
    """
    if tb is None or tb is ta:
        out = ta.copy()
    else:
        clash = set(ta.frames) & set(tb.frames)
        prefix = "b:" if clash else ""
        out, _ = disjoint_union(ta, tb, prefixes=["", prefix])
        id_b = prefix + id_b
    if out.orientation is None:
        raise FrameError("triangulation carries no orientation; validate it first")
    record = _glue_high_distance_inplace(out, id_a, id_b, D, exact_limit)
    return out, record


def fill_by_layered_solid_torus(
    t: Triangulation, frame_id: str, min_dist: int = MIN_FILL_DISTANCE, exact_limit: int = EXACT_DISTANCE_LIMIT
) -> tuple[Triangulation, GluingRecord]:
    """Dehn fill a boundary torus with a one-tetrahedron solid torus whose
    meridian lands more than ``min_dist`` from the recorded meridian."""
    if min_dist < MIN_FILL_DISTANCE:
        raise ValueError(f"filling distance must be at least {MIN_FILL_DISTANCE}")
    fr = t.frames.get(frame_id)
    if fr is None:
        raise FrameError(f"no frame {frame_id!r}")
    if fr.meridian is None:
        raise FrameError(f"frame {frame_id!r} has no meridian")
    out = t.copy()
    normal = _normalized(fr, "meridian")
    out.frames[frame_id] = replace(normal, alpha=normal.meridian)
    solid = layered_solid_torus(frame_id="fill")
    key = "fill"
    while key in out.frames:
        key = "_" + key
    joined, _ = disjoint_union(out, solid, prefixes=["", key[: -len("fill")]])
    record = _glue_high_distance_inplace(joined, frame_id, key, min_dist, exact_limit)
    return joined, record
