"""A walk through the projective strata of n x n matrices.

Run with ``python3 demos/strata_tour.py``.
"""
from matstrata.deformation import arnold_count, centralizer_dim, scalar_similarity_param_count
from matstrata.jordan import jordan_structure
from matstrata.strata import (canonical_matrix, stratum_letter, canonical_projective_rep, classify_scalar_similarity,
                              enumerate_strata, format_point, merges_to)

# One stratum per partition of n.  The index lists block multiplicities.
for n in range(1, 5):
    print(f"n = {n}")
    for st in enumerate_strata(n):
        print(f"  {stratum_letter(n, st.index)}  {st}  {st.param_count} parameters  {st.orbifold}")

# The canonical matrix for D(p1:p2:p3) at a generic point
m = canonical_matrix([2, 1, 1, 0], [1, 2, 3])
print("\nD(1:2:3) =")
print(m)

# Scaling does not change the class; the projective point is normalised
st, point = classify_scalar_similarity(m.scale(5))
print("classified after scaling by 5:", st, format_point(point))

# Points are taken up to the symmetric group acting on equal blocks
print("(3:1) and (1:3) in B:", format_point(canonical_projective_rep([3, 1], [[0, 1]])),
      format_point(canonical_projective_rep([1, 3], [[0, 1]])))

# Centralizer dimension matches the Arnold count; scalar similarity loses one parameter
js = jordan_structure(m)
print("\ncentralizer", centralizer_dim(m), "arnold", arnold_count(js),
      "scalar-similarity parameters", scalar_similarity_param_count(m))

# Merging eigenvalues moves to a more special stratum
print("\nE merges to A:", merges_to([1, 1, 1, 1], [4, 0, 0, 0]))
print("A merges to E:", merges_to([4, 0, 0, 0], [1, 1, 1, 1]))
