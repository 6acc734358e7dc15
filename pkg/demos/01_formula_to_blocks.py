"""From a CNF formula to its block graph and a minimal splitting."""
from sat2tri import formula as fm
from sat2tri import splitting as sp
from sat2tri.blockgraph import build_block_graph, structural_check

Q = fm.parse_expr("((a | c) & (~a | b)) & (b | c)")
print("formula :", fm.to_expr(Q, unicode=True))
print("|Q|     :", fm.length(Q))
print("models  :", fm.brute_force_sat(Q))

bg = build_block_graph(Q)
print("\nblocks  :", bg.census())
print("gluings :", len(bg.edges), "(one extra cycle per REP block)")
for e in bg.edges:
    print(f"   {e.src:2d}.{e.src_port:<5s} -> {e.dst:2d}.{e.dst_port:<4s}  {e.label}")
print("check   :", structural_check(bg) or "ok")

res = sp.min_genus(bg)
print("\nminimal amalgamated genus:", res)
print("colours of the witness (V = black, W = white):")
for b in bg.blocks:
    c = res.witness.choices[b.id]
    print(f"   {b.type.value:<4s} {b.id:2d}  V={sorted(c.v_side)}  W={sorted(c.w_side)}")
print("assignment read back:", sp.assignment_from_coloring(bg, res.witness))

# an unsatisfiable formula has no genus-two colouring at all
bad = build_block_graph(fm.parse_expr("a & ~a"))
print("\na & ~a  :", sp.min_genus(bad))
