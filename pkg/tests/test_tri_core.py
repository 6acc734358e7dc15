import pytest
from hypothesis import given
import hypothesis.strategies as st
from itertools import permutations

from sat2tri.tri import core
from sat2tri.tri.core import Triangulation, TriangulationError, disjoint_union, perm_inverse, perm_sign, validate
from sat2tri.tri.frames import glue_high_distance, layered_solid_torus

LST_TEXT = "tri 1\n0:3:123 - - 0:0:012\n"


def test_perm_helpers():
    assert perm_inverse((1, 2, 3, 0)) == (3, 0, 1, 2)
    assert perm_sign((0, 1, 2, 3)) == 1
    assert perm_sign((1, 0, 2, 3)) == -1
    assert perm_sign((1, 2, 3, 0)) == -1
    with pytest.raises(TriangulationError):
        Triangulation(1)._glue(0, 0, 0, (0, 0, 1, 2))


@given(st.sampled_from(list(permutations(range(4)))), st.sampled_from(list(permutations(range(4)))))
def test_sign_is_a_homomorphism(p, q):
    pq = tuple(p[q[i]] for i in range(4))
    assert perm_sign(pq) == perm_sign(p) * perm_sign(q)
    assert perm_sign(perm_inverse(p)) == perm_sign(p)


def test_lst_text_roundtrip():
    t = layered_solid_torus()
    assert t.to_text() == LST_TEXT
    back = Triangulation.from_text(LST_TEXT)
    assert back == t and back.orientation is None
    assert back.oriented().orientation == [1]


def test_lst_report():
    rep = validate(layered_solid_torus())
    assert rep.ok
    assert (rep.vertices, rep.edges, rep.faces, rep.tet_count) == (1, 3, 3, 1)
    assert len(rep.boundary) == 1 and rep.boundary[0].is_torus
    assert rep.vertex_link_euler == {0: 1}


def test_text_errors():
    for bad in ["", "tri 2\n- - - -\n", "tri 1\n0:3:12 - - -\n", "tri 1\n5:0:123 - - -\n", "tri 1\n0:3:113 - - -\n"]:
        with pytest.raises(TriangulationError):
            Triangulation.from_text(bad)


def test_glue_errors():
    t = Triangulation(2)
    t._glue(0, 0, 1, (0, 1, 2, 3))
    with pytest.raises(TriangulationError):
        t._glue(0, 0, 1, (1, 0, 2, 3))
    with pytest.raises(TriangulationError):
        t._glue(0, 1, 0, (0, 1, 2, 3))


def test_open_tetrahedra_fail():
    rep = validate(Triangulation(2))
    assert not rep.ok
    assert "Euler characteristic 2 != 0" in rep.violations
    assert sum("not a torus" in v for v in rep.violations) == 2


def test_broken_involution_detected():
    t = layered_solid_torus()
    t.gluing[0][0] = (0, 3, (3, 1, 0, 2))
    rep = validate(t)
    assert any("involution" in v or "inconsistent" in v for v in rep.violations)


def test_non_orientable_detected():
    # the one-tet complex glued by an even permutation is not orientable
    t = Triangulation(1)
    t._glue(0, 3, 0, (2, 1, 3, 0))
    assert perm_sign((2, 1, 3, 0)) == 1
    rep = validate(t, require_torus_boundary=False)
    assert not rep.orientable
    assert "not orientable" in rep.violations
    with pytest.raises(TriangulationError):
        t.oriented()


def test_disjoint_union_offsets_and_frames():
    a, b = layered_solid_torus(frame_id="x"), layered_solid_torus(frame_id="y")
    u, offsets = disjoint_union(a, b, prefixes=["A:", "B:"])
    assert offsets == [0, 1]
    assert set(u.frames) == {"A:x", "B:y"}
    assert u.frames["B:y"].a[0] == 1
    rep = validate(u)
    assert rep.ok and rep.components == 2 and len(rep.boundary) == 2


@pytest.mark.parametrize("D", [1, 2, 3, 4, 5])
def test_closed_gluings_validate(D):
    tri, _ = glue_high_distance(layered_solid_torus(frame_id="a"), "a", layered_solid_torus(frame_id="b"), "b", D)
    rep = validate(tri)
    assert rep.ok and tri.is_closed()
    assert rep.tet_count == 2 + 2 * D
    assert rep.euler_characteristic == 0
    assert set(rep.vertex_link_euler.values()) == {2}


def test_edge_class_signs_are_consistent():
    tri, _ = glue_high_distance(layered_solid_torus(frame_id="a"), "a", layered_solid_torus(frame_id="b"), "b", 3)
    ec = core.edge_classes(tri)
    assert not ec.conflicts
    for i in range(tri.tet_count):
        for a in range(4):
            for b in range(4):
                if a != b:
                    c1, s1 = core.edge_class_of(ec, i, a, b)
                    c2, s2 = core.edge_class_of(ec, i, b, a)
                    assert c1 == c2 and s1 == -s2
