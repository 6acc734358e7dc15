"""First homology of a triangulation with integer coefficients."""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .core import Triangulation, _components, _vertex_labels, edge_class_of, edge_classes

__all__ = ["H1", "smith_invariants", "invariant_factors", "homology_h1", "boundary_matrix_2"]


@dataclass(frozen=True)
class H1:
    rank: int
    torsion: tuple[int, ...] = ()

    def __str__(self):
        parts = []
        if self.rank:
            parts.append("Z" if self.rank == 1 else f"Z^{self.rank}")
        parts += [f"Z/{k}" for k in self.torsion]
        return " + ".join(parts) if parts else "0"

    def to_dict(self) -> dict:
        return {"rank": self.rank, "torsion": list(self.torsion)}

    @classmethod
    def from_dict(cls, d) -> "H1":
        return cls(int(d["rank"]), tuple(int(k) for k in d.get("torsion", ())))


def invariant_factors(diagonal) -> list[int]:
    """Rewrite a list of diagonal entries as invariant factors d1 | d2 | ...
    (units dropped)."""
    ds = [abs(d) for d in diagonal if d and abs(d) != 1]
    changed = True
    while changed:
        changed = False
        for i in range(len(ds)):
            for j in range(i + 1, len(ds)):
                a, b = ds[i], ds[j]
                g = gcd(a, b)
                if (a, b) != (g, a * b // g):
                    ds[i], ds[j] = g, a * b // g
                    changed = True
    return sorted(d for d in ds if d != 1)


def smith_invariants(rows: dict) -> list[int]:
    """Nonzero diagonal of a Smith form of a sparse integer matrix.

    ``rows`` maps a row key to ``{column key: value}``; it is consumed.  The
    result is a list of positive integers whose product structure gives the
    cokernel torsion; pass it through :func:`invariant_factors` to normalize.
    """
    rows = {r: {c: v for c, v in cols.items() if v} for r, cols in rows.items()}
    rows = {r: cols for r, cols in rows.items() if cols}
    cols: dict = {}
    for r, entries in rows.items():
        for c in entries:
            cols.setdefault(c, set()).add(r)

    def set_entry(r, c, v):
        if v:
            rows[r][c] = v
            cols.setdefault(c, set()).add(r)
        else:
            rows[r].pop(c, None)
            s = cols.get(c)
            if s is not None:
                s.discard(r)
                if not s:
                    del cols[c]

    def eliminate(r, c):
        # clear column c with row r, then row r with column c
        smaller = None
        while True:
            p = rows[r][c]
            smaller = None
            for r2 in list(cols.get(c, ())):
                if r2 == r:
                    continue
                q = rows[r2][c] // p
                for c2, v in list(rows[r].items()):
                    set_entry(r2, c2, rows[r2].get(c2, 0) - q * v)
                rem = rows[r2].get(c, 0)
                if rem and (smaller is None or abs(rem) < abs(smaller[2])):
                    smaller = (r2, c, rem)
            if abs(p) != 1:
                for c2 in list(rows[r]):
                    if c2 == c:
                        continue
                    q = rows[r][c2] // p
                    for r2 in list(cols.get(c, ())):
                        set_entry(r2, c2, rows[r2].get(c2, 0) - q * rows[r2][c])
                    rem = rows[r].get(c2, 0)
                    if rem and (smaller is None or abs(rem) < abs(smaller[2])):
                        smaller = (r, c2, rem)
            if smaller is None:
                break
            r, c, _ = smaller
        diagonal.append(abs(rows[r][c]))
        # with column c cleared, the rest of row r is removed by column operations
        for c2 in list(rows[r]):
            set_entry(r, c2, 0)
        del rows[r]

    diagonal: list[int] = []
    while rows:
        # sweep unit pivots first, picking the sparsest column in each row
        progress = False
        for r in list(rows):
            entries = rows.get(r)
            if not entries:
                rows.pop(r, None)
                continue
            units = [c for c, v in entries.items() if abs(v) == 1]
            if units:
                eliminate(r, min(units, key=lambda c: len(cols[c])))
                progress = True
        for r in [r for r, e in rows.items() if not e]:
            del rows[r]
        if progress or not rows:
            continue
        r, c, _ = min(((r, c, v) for r, e in rows.items() for c, v in e.items()), key=lambda x: abs(x[2]))
        eliminate(r, c)
        for r2 in [r2 for r2, e in rows.items() if not e]:
            del rows[r2]
    return diagonal


def boundary_matrix_2(t: Triangulation, ec=None) -> dict:
    """Columns of the face-to-edge boundary map, keyed by a face representative."""
    ec = ec or edge_classes(t)
    matrix = {}
    for i, row in enumerate(t.gluing):
        for f, g in enumerate(row):
            if g is not None and (g[0], g[1]) < (i, f):
                continue
            a, b, c = [v for v in range(4) if v != f]
            col: dict[int, int] = {}
            for (x, y), s in (((b, c), 1), ((a, c), -1), ((a, b), 1)):
                e, sg = edge_class_of(ec, i, x, y)
                col[e] = col.get(e, 0) + s * sg
            matrix[(i, f)] = col
    return matrix


def homology_h1(t: Triangulation) -> H1:
    """H1(M; Z) from the cellular chain complex of the identified simplices."""
    ec = edge_classes(t)
    if ec.conflicts:
        raise ValueError("an edge is identified with itself reversed; not a manifold")
    _, vertices = _vertex_labels(t)
    components = len(set(_components(t)))
    d2 = boundary_matrix_2(t, ec)
    diag = smith_invariants(d2)
    rank_d2 = len(diag)
    rank = ec.count - (vertices - components) - rank_d2
    return H1(rank, tuple(invariant_factors(diag)))
