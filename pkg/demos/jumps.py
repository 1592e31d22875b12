"""Verifying arrows in the 3-dimensional bilinear graph by explicit curves.

An arrow X -> Y is witnessed by a direction E with D + tE congruent to a
member of Y for all small nonzero t.  Missing arrows come with an invariant
that cannot change along any such curve.
"""
from matstrata import bilinear as bl
from matstrata.linalg import Matrix

# 2 x 2: from the symplectic form A(1) one step along E_11 lands in B(1:-1)
print("A(1) -> B(1:-1):", bl.verify_jump(bl.form_a(1), [Matrix.unit(2, 0, 0)], bl.form_b(1, -1)))
print("A(1) -> B(1:1): ", bl.verify_jump(bl.form_a(1), [Matrix.unit(2, 0, 0)], bl.form_b(1, 1)))

g = bl.bilinear_deformation_graph_3()
print(f"\n{len(g.node_ids())} nodes, {len(g.edge_set())} arrows")
for src, dst in sorted(g.edge_set()):
    check = bl.check_edge(src, dst)
    print(f"  {src:10s} -> {dst:10s} {'verified' if check.ok else 'UNVERIFIED'}")

print("\nabsent arrows and why")
for src, dst in bl.FIGURE4_NON_EDGES:
    print(f"  {src:10s} -/> {dst:10s} {bl.check_non_edge(src, dst)}")
