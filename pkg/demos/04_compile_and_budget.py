"""Compile formulas to closed triangulations and watch the tetrahedron count
grow quadratically with |Q|."""
import numpy as np

from sat2tri import formula as fm
from sat2tri.compiler import compile_formula, tet_budget
from sat2tri.tri.homology import homology_h1

tri, cert = compile_formula(fm.Var("a"), k_override=1)
print("Var(a), K=1 :", tri.tet_count, "tetrahedra, H1 =", homology_h1(tri))
print(tri.to_text())

qs, counts, budgets = [], [], []
for q in range(1, 11):
    k = (q + 1) // 2
    lits = [fm.Var(f"x{i}") for i in range(1, k + 1)]
    if q % 2 == 0:
        lits[0] = fm.Not(lits[0])
    f = lits[0]
    for x in lits[1:]:
        f = fm.Or(f, x)
    tri, cert = compile_formula(f, check_output=False)
    qs.append(q)
    counts.append(tri.tet_count)
    budgets.append(cert.budget)
    print(f"|Q|={q:2d}  tets={tri.tet_count:6d}  budget={cert.budget:6d}  {fm.to_expr(f)}")

coef = np.polyfit(qs, counts, 3)
print("\ncubic fit coefficients:", np.round(coef, 6))
print("counts / budget       :", np.round(np.array(counts) / np.array(budgets), 3))
print("budget at |Q|=12, T=10:", tet_budget(12, 10, 168))
