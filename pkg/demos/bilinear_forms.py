"""Bilinear forms under congruence in dimensions 2 and 3."""
from matstrata import bilinear as bl
from matstrata.linalg import Matrix

# 2 x 2: every form is A(p) (antisymmetric) or B(p:q)
for rows in ([[0, 5], [-5, 0]], [[1, 0], [0, 1]], [[2, 1], [-1, 0]], [[0, 1], [0, 0]]):
    m = Matrix.from_rows(rows)
    print(rows, "->", bl.classify_bilinear_2(m), bl.cogredient_invariants(m).ranks)

# The constructive reduction returns a change of basis G and a scale s
m = Matrix.from_rows([[1, 3], [-1, 2]])
g, s, cls = bl.reduction_2(m)
if g.eps is not None:
    # irrational eigenvalue ratios push the reduction onto the float backend
    m = m.to_float(g.eps)
print("\nreduction gives", cls, "with scale", s)
print("G^T M G =")
print(g.T @ m @ g)

# The dictionary between the two normal-form lists, every item certified
report = bl.dictionary_check()
for item in report.items:
    print(f"{item.number}. {item.left} ~ {item.right}: {'ok' if item.ok else 'FAILED'}")

# 3 x 3: certificates G with G^T A G = B
cert = bl.congruent(bl.c_family(2), bl.b_family(3))
print("\nC2 ~ B3 via G =")
print(cert.g)
print("residual", cert.residual)

# Inequivalent forms are separated by invariants, no search needed
print("C3 vs C6:", bl.congruent(bl.c_family(3), bl.c_family(6)))
print("classify B6:", bl.classify_bilinear_3(bl.b_family(6)))
