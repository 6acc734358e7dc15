"""Slopes, the Farey graph and layered solid tori."""
import numpy as np

from sat2tri import farey as fy
from sat2tri.tri import frames as fr
from sat2tri.tri.homology import homology_h1

print("Farey distance to 1/0 of the Fibonacci slopes F(k+1)/F(k):")
ks = np.arange(0, 21)
d = np.array([fy.farey_distance(fy.fibonacci_slope(int(k)), fy.INF) for k in ks])
print("   k :", ks)
print("   d :", d)
print("   closed form agrees:", bool(np.all(d == ks // 2 + 1)))

print("\nOne tetrahedron, face 012 glued to 123:")
t = fr.layered_solid_torus()
print(t.to_text(), end="")
print("   boundary slopes:", [str(s) for s in t.frames["lst"].triple], " H1 =", homology_h1(t))

print("\nLayering flips the oldest edge each time:")
for k in (1, 2, 3, 6, 10):
    tk = fr.layer_fibonacci(t, "lst", k)
    print(f"   k={k:2d}  tets={tk.tet_count:2d}  slopes={[str(s) for s in tk.frames['lst'].triple]}  H1={homology_h1(tk)}")
