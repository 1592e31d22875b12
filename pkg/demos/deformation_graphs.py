"""Deformation graphs of small matrix sizes, written out as DOT.

Run with ``python3 demos/deformation_graphs.py [outdir]``; render with
``dot -Tpng graph_4.dot -o graph_4.png`` if graphviz is around.
"""
import sys
from pathlib import Path

from matstrata.deformation import FIGURE_EDGES, deformation_graph, degenerates_to
from matstrata.linalg import Matrix

out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(".")

for n in (2, 3, 4):
    g = deformation_graph(n)
    edges = g.edge_set()
    print(f"n = {n}: {len(g.node_ids())} nodes, {len(edges)} edges")
    for src, dst in sorted(edges):
        print(f"  {src} -> {dst}")
    # the hand-drawn reference omits one arrow at n = 4
    extra = edges - FIGURE_EDGES[n]
    if extra:
        print("  not in the reference drawing:", sorted(extra))
    (out / f"graph_{n}.dot").write_text(g.to_dot())

# degenerates_to(a, b) asks whether a lies in the closure of the orbit of b.
# Zero is in the closure of the nilpotent block's orbit, not the other way round.
j = Matrix.from_rows([[0, 1], [0, 0]])
z = Matrix.zeros(2)
print("\n0 in the closure of J2(0):", degenerates_to(z, j))
print("J2(0) in the closure of 0:", degenerates_to(j, z))
