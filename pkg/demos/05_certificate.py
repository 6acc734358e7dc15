"""The certificate that goes with a compiled triangulation."""
import json

from sat2tri import formula as fm
from sat2tri.compiler import compile_formula
from sat2tri.tri.blocks import synthetic_library

tri, cert = compile_formula(fm.parse_expr("(a | ~b) & b"), k_override=1)
d = cert.to_dict()
print(json.dumps({k: d[k] for k in ("formula", "q_length", "mode", "authentic", "census", "tet_count", "budget")}, indent=2))
print("first gluing:", json.dumps(d["gluings"][0]))
print("genus claim :", d["genus_claim"]["statement"], "->", d["genus_claim"]["min_genus"])
print("validation  :", d["validation"]["ok"], "chi =", d["validation"]["euler_characteristic"])

# concrete mode needs block data; the synthetic library has the right ports
# and homology but is flagged as not authentic
tri, cert = compile_formula(fm.parse_expr("~a"), library=synthetic_library(), mode="concrete", k_override=1)
print("\nconcrete ~a :", cert.tet_count, "tetrahedra, fillings:", [(f["block"], f["min_dist"], f["distance"]) for f in cert.fillings])
print("notes       :", cert.notes)
