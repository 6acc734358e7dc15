"""Gluing two solid tori far apart in the Farey graph gives lens spaces;
H1 is cyclic of order the intersection number of the two meridians."""
from sat2tri import farey as fy
from sat2tri.tri import frames as fr
from sat2tri.tri.core import validate
from sat2tri.tri.homology import homology_h1

print(" D  tets  distance  |a.b|     H1")
for D in range(1, 9):
    a = fr.layered_solid_torus(frame_id="a")
    b = fr.layered_solid_torus(frame_id="b")
    tri, rec = fr.glue_high_distance(a, "a", b, "b", D)
    assert validate(tri).ok
    i = fy.intersection_number(rec.alpha_a, rec.alpha_b_image)
    print(f"{D:2d}  {tri.tet_count:4d}  {rec.distance:8d}  {i:6d}  {homology_h1(tri)}")

# the same machinery Dehn fills one boundary torus of a block
from sat2tri.tri.core import disjoint_union

three, _ = disjoint_union(*(fr.layered_solid_torus(frame_id=x) for x in "xyz"))
filled, rec = fr.fill_by_layered_solid_torus(three, "x")
print("\nfilling one of three solid tori at distance > 11:")
print("   added", filled.tet_count - three.tet_count, "tetrahedra, distance", rec.distance, " H1 =", homology_h1(filled))
