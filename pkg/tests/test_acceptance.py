"""The ten acceptance criteria.  Run alone with ``pytest tests/test_acceptance.py``;
a PASS/FAIL line per criterion is printed at the end of the session."""
import random
from itertools import combinations

import numpy as np
import pytest

from sat2tri import farey as fy
from sat2tri import formula as fm
from sat2tri import splitting as sp
from sat2tri.blockgraph import build_block_graph
from sat2tri.compiler import compile_formula, tet_budget
from sat2tri.splitting import GeneralizedSplitting, GluingEdge, GluingGraph, SplittingChoice
from sat2tri.tri import blocks as bl
from sat2tri.tri import frames as fr
from sat2tri.tri.core import disjoint_union, validate
from sat2tri.tri.homology import H1, homology_h1
from conftest import EXAMPLE_Q
from test_splitting import random_splitting

crit = pytest.mark.criterion


# 1 ------------------------------------------------------------------------


@crit(1, "min genus is |Q|+2 exactly for satisfiable CNFs over <= 3 variables, |Q| <= 8")
def test_c1_sat_iff_minimal_genus():
    mismatches, count = [], 0
    for f in fm.enumerate_cnf("abc", 8):
        count += 1
        res = sp.min_genus(build_block_graph(f))
        genus_says = res.exact and res.value == fm.length(f) + 2
        if genus_says != bool(fm.brute_force_sat(f)):
            mismatches.append(fm.to_expr(f))
    assert count == 9879
    assert mismatches == []


# 2 ------------------------------------------------------------------------


@pytest.fixture(scope="module")
def example_graph():
    return build_block_graph(fm.parse_expr(EXAMPLE_Q))


@crit(2, "example formula: 13 blocks, 12 gluings, genus 14, satisfying witness")
def test_c2_block_count(example_graph):
    assert len(example_graph.blocks) == 13


@crit(2, "example formula: 13 blocks, 12 gluings, genus 14, satisfying witness")
def test_c2_gluing_count(example_graph):
    # three REP blocks each close a cycle, so the graph has 15 gluings
    assert len(example_graph.edges) == 12, f"{len(example_graph.edges)} gluings: each REP block closes a cycle"


@crit(2, "example formula: 13 blocks, 12 gluings, genus 14, satisfying witness")
def test_c2_genus_and_witness(example_graph):
    q = fm.length(example_graph.formula)
    res = sp.min_genus(example_graph)
    assert q == 12 and res.exact and res.value == q + 2 == 14
    assignment = sp.assignment_from_coloring(example_graph, res.witness)
    assert fm.evaluate(example_graph.formula, assignment)


# 3 ------------------------------------------------------------------------


@crit(3, "Farey distance of F_{k+1}/F_k to 1/0 is floor(k/2)+1 for k <= 30")
def test_c3_fibonacci_distances():
    assert [fy.farey_distance(fy.parse_slope(s), fy.INF) for s in ("1/1", "2/1", "3/2")] == [1, 1, 2]
    for k in range(31):
        s = fy.fibonacci_slope(k)
        assert fy.farey_distance(s, fy.INF) == k // 2 + 1
        if k <= 12:
            assert fy.farey_distance_bfs(s, fy.INF) == k // 2 + 1


# 4 ------------------------------------------------------------------------


@crit(4, "k-fold layering gives Fibonacci triples, k tetrahedra, same H1 (k <= 30)")
def test_c4_layering():
    base = fr.layered_solid_torus()
    h = homology_h1(base)
    F = fy.fibonacci
    for k in range(31):
        t = fr.layer_fibonacci(base, "lst", k)
        assert t.frames["lst"].triple == tuple(fy.reduce(F(j + 1), F(j)) for j in (k - 2, k - 1, k))
        assert t.tet_count - base.tet_count == k
        assert homology_h1(t) == h
        assert validate(t).ok


# 5 ------------------------------------------------------------------------


@crit(5, "glue_high_distance adds 2D tetrahedra and separates slopes by more than D (D <= 8)")
def test_c5_gluing_budget():
    for D in range(1, 9):
        ta, tb = fr.layered_solid_torus(frame_id="a"), fr.layered_solid_torus(frame_id="b")
        tri, rec = fr.glue_high_distance(ta, "a", tb, "b", D)
        assert tri.tet_count - ta.tet_count - tb.tet_count == 2 * D
        assert rec.status == "exact"
        assert fy.farey_distance(rec.alpha_a, rec.alpha_b_image) > D
    # also between normalized, non-trivially framed tori
    for D in range(1, 9):
        ta = fr.normalize_frame(fr.layer_fibonacci(fr.layered_solid_torus(frame_id="a"), "a", 3), "a")
        tb = fr.normalize_frame(fr.layer_fibonacci(fr.layered_solid_torus(frame_id="b"), "b", 4), "b")
        tri, rec = fr.glue_high_distance(ta, "a", tb, "b", D)
        assert tri.tet_count - ta.tet_count - tb.tet_count == 2 * D
        assert rec.distance > D


# 6 ------------------------------------------------------------------------


@crit(6, "non-amalgamation examples give ColorClash and Cycle")
def test_c6_counterexamples():
    # a product T^2 x I glued end to end: both ends on the same side
    loop = GluingGraph({"P": ("top", "bottom")}, [GluingEdge("P", "top", "P", "bottom")])
    with pytest.raises(sp.ColorClash):
        sp.validate(GeneralizedSplitting(loop, {"P": SplittingChoice({"top", "bottom"}, (), 1)}))
    # two blocks with V = {T0}, W = {T1}, glued crosswise
    cross = GluingGraph(
        {"A": ("T0", "T1"), "B": ("T0", "T1")},
        [GluingEdge("A", "T0", "B", "T1"), GluingEdge("A", "T1", "B", "T0")],
    )
    c = SplittingChoice({"T0"}, {"T1"}, 2)
    with pytest.raises(sp.Cycle):
        sp.validate(GeneralizedSplitting(cross, {"A": c, "B": c}))


# 7 ------------------------------------------------------------------------


@crit(7, "amalgamated genus matches sequential amalgamation on 200 random splittings")
def test_c7_genus_formula():
    rng = random.Random(20261016)
    trees = multi = 0
    for _ in range(200):
        gs = random_splitting(rng)
        n = len(gs.graph.ports)
        assert n <= 12
        if len(gs.graph.edges) == n - 1:
            trees += 1
        else:
            multi += 1
        assert sp.amalgamated_genus(gs) == sp.sequential_amalgamation_genus(gs)
    assert trees and multi


# 8 ------------------------------------------------------------------------


def _distinct_variable_formula(q):
    k = (q + 1) // 2
    lits = [fm.Var(f"x{i}") for i in range(1, k + 1)]
    if q % 2 == 0:
        lits[0] = fm.Not(lits[0])
    f = lits[0]
    for x in lits[1:]:
        f = fm.Or(f, x)
    assert fm.length(f) == q
    return f


@crit(8, "tetrahedron count within budget and quadratic in |Q| (K = 168)")
def test_c8_quadratic_bound():
    qs, counts = list(range(1, 13)), []
    for q in qs:
        tri, cert = compile_formula(_distinct_variable_formula(q))
        assert cert.K_max == 168
        assert tri.tet_count <= tet_budget(q, cert.T, 168) == cert.budget
        counts.append(tri.tet_count)
    coef = np.polyfit(qs, counts, 3)
    assert abs(coef[0]) < 1e-6 * np.abs(coef).max()
    quad = np.polyfit(qs, counts, 2)
    assert np.allclose(np.polyval(quad, qs), counts, rtol=0, atol=1e-6 * max(counts))


# 9 ------------------------------------------------------------------------


@crit(9, "models of compile_bipartitions(P, n) biject with P for n <= 3")
def test_c9_bipartitions():
    for n in (1, 2, 3):
        universe = fm.all_bipartitions(n)
        for r in range(1, len(universe) + 1):
            for P in combinations(universe, r):
                models = fm.brute_force_sat(fm.compile_bipartitions(P, n))
                image = [fm.assignment_to_bipartition(m, n) for m in models]
                assert len(image) == len(set(image)) == len(P)
                assert set(image) == set(P)


# 10 -----------------------------------------------------------------------


HYGIENE_FORMULAS = ["a", "~a", "a | b", "a & ~a", "(a | ~b) & (b | c)", EXAMPLE_Q]


@crit(10, "emitted complexes pass involution, orientability, chi = 0 and link checks; block H1 gates")
def test_c10_emitted_complexes():
    for text in HYGIENE_FORMULAS:
        f = fm.parse_expr(text)
        for mode, lib, k in (("abstract", None, None), ("concrete", bl.synthetic_library(), 1)):
            if mode == "abstract" and text == EXAMPLE_Q:
                k = None
            elif mode == "abstract":
                k = 2
            tri, cert = compile_formula(f, library=lib, mode=mode, k_override=k, check_output=False)
            rep = validate(tri)
            assert rep.ok, (text, mode, rep.violations[:3])
            assert rep.orientable and rep.euler_characteristic == 0
            assert tri.is_closed() and set(rep.vertex_link_euler.values()) == {2}


@crit(10, "emitted complexes pass involution, orientability, chi = 0 and link checks; block H1 gates")
def test_c10_building_blocks():
    parts = [fr.layered_solid_torus(frame_id=x) for x in "xyz"]
    t, _ = disjoint_union(*parts)
    filled, _ = fr.fill_by_layered_solid_torus(t, "x")
    for tri in (fr.layered_solid_torus(), fr.layer_fibonacci(fr.layered_solid_torus(), "lst", 12), filled):
        rep = validate(tri)
        assert rep.ok and rep.euler_characteristic == 0


@crit(10, "emitted complexes pass involution, orientability, chi = 0 and link checks; block H1 gates")
def test_c10_block_files(tmp_path):
    import os

    directory = os.environ.get("SAT2TRI_BLOCKS")
    if not directory:
        for btype, data in bl.synthetic_library().items():
            bl.save_block(tmp_path / f"{btype.value.lower()}.json", data)
        directory = tmp_path
    lib = bl.load_library(directory)
    assert lib
    for btype, data in lib.items():
        assert bl.check_gates(data) == []
        assert homology_h1(data.triangulation) == bl.EXPECTED_H1[btype] == data.declared_h1
    assert {h for h in bl.EXPECTED_H1.values()} == {H1(1), H1(3)}


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
