import pytest

from sat2tri import farey as fy
from sat2tri.farey import Slope
from sat2tri.tri import frames as fr
from sat2tri.tri.core import validate
from sat2tri.tri.homology import H1, homology_h1

S = fy.parse_slope


def triple(*xs):
    return tuple(map(S, xs))


def test_layer_single_steps():
    t = fr.layered_solid_torus()
    t1 = fr.layer(t, "lst", S("0/1"))
    assert t1.frames["lst"].triple == triple("1/0", "1/1", "2/1")
    t2 = fr.layer(t1, "lst", S("1/0"))
    assert t2.frames["lst"].triple == triple("1/1", "2/1", "3/2")
    assert t2.tet_count == 3
    assert fr.check_frame(t2, t2.frames["lst"]) == []
    with pytest.raises(fr.FrameError):
        fr.layer(t, "lst", S("5/3"))


@pytest.mark.parametrize("k", [0, 1, 2, 6, 17, 30])
def test_fibonacci_layering(k):
    t = fr.layer_fibonacci(fr.layered_solid_torus(), "lst", k)
    F = fy.fibonacci
    want = tuple(fy.reduce(F(j + 1), F(j)) for j in (k - 2, k - 1, k))
    assert t.frames["lst"].triple == want
    assert t.tet_count == 1 + k
    assert validate(t).ok
    assert homology_h1(t) == H1(1)
    assert fr.check_frame(t, t.frames["lst"]) == []


def test_frozen_layering_endpoints():
    t = fr.layer_fibonacci(fr.layered_solid_torus(), "lst", 6)
    assert t.frames["lst"].triple == triple("8/5", "13/8", "21/13")


def test_normalization():
    t = fr.layer_fibonacci(fr.layered_solid_torus(), "lst", 5)
    n = fr.normalize_frame(t, "lst")
    f = n.frames["lst"]
    assert fr.is_normalized(f)
    assert f.triple == triple("0/1", "1/0", "1/1")
    assert f.alpha.q > 0 and f.alpha.p <= 0
    assert fr.check_frame(n, f) == []


@pytest.mark.parametrize("D, order", [(1, 15), (2, 40), (3, 105), (4, 275), (5, 720), (6, 1885), (7, 4935), (8, 12920)])
def test_lens_space_gluings(D, order):
    ta, tb = fr.layered_solid_torus(frame_id="a"), fr.layered_solid_torus(frame_id="b")
    tri, rec = fr.glue_high_distance(ta, "a", tb, "b", D)
    assert tri.tet_count == 2 + 2 * D
    assert rec.layered == 2 * D
    assert rec.distance == D + 2 and rec.verified
    assert homology_h1(tri) == H1(0, (order,))
    # H1 of a lens space is cyclic of order the intersection of the meridians
    assert fy.intersection_number(rec.alpha_a, rec.alpha_b_image) == order


def test_symbolic_record_above_limit():
    ta, tb = fr.layered_solid_torus(frame_id="a"), fr.layered_solid_torus(frame_id="b")
    _, rec = fr.glue_high_distance(ta, "a", tb, "b", 20, exact_limit=8)
    assert rec.status == "symbolic" and rec.distance is None
    assert rec.to_dict()["layered_tetrahedra"] == 40


def test_glue_requires_normalized_frames():
    t = fr.layer(fr.layered_solid_torus(frame_id="a"), "a", S("0/1"))
    with pytest.raises(fr.FrameError):
        fr.glue_high_distance(t, "a", fr.layered_solid_torus(frame_id="b"), "b", 1)


def test_fill_solid_torus():
    from sat2tri.tri.core import disjoint_union

    parts = [fr.layered_solid_torus(frame_id=x) for x in "xyz"]
    t, _ = disjoint_union(*parts)
    assert homology_h1(t) == H1(3)
    filled, rec = fr.fill_by_layered_solid_torus(t, "x", min_dist=11)
    assert filled.tet_count == 3 + 23
    assert rec.distance == 13
    assert homology_h1(filled) == H1(2, (231840,))
    assert validate(filled).ok
    with pytest.raises(ValueError):
        fr.fill_by_layered_solid_torus(t, "x", min_dist=10)


@pytest.mark.parametrize("k", [1, 4, 9])
def test_single_layer_keeps_two_slopes(k):
    t = fr.layer_fibonacci(fr.layered_solid_torus(), "lst", k)
    before = t.frames["lst"].triple
    for s in before:
        after = fr.layer(t, "lst", s).frames["lst"].triple
        assert len(set(before) & set(after)) == 2
        assert fy.is_farey_triple(*after)
        assert homology_h1(fr.layer(t, "lst", s)) == H1(1)


def test_gluing_drops_two_boundary_tori():
    from sat2tri.tri.core import disjoint_union

    t, _ = disjoint_union(*(fr.layered_solid_torus(frame_id=x) for x in "xyz"))
    assert len(validate(t).boundary) == 3
    glued, _ = fr.glue_high_distance(t, "x", None, "y", 2)
    rep = validate(glued)
    assert rep.ok and len(rep.boundary) == 1
    assert glued.tet_count == 3 + 4
