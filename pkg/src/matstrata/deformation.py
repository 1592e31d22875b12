"""Parameter counts, tangent spaces, miniversal complements and jump deformations.

The jump relation is orbit-closure membership for the scalar-similarity
action: A jumps to B when A is a limit of matrices equivalent to B.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction

from .jordan import JordanStructure, conjugate_partition, jordan_matrix, jordan_structure
from .linalg import (Matrix, column_space_basis, commutator_operator, kernel_basis,
                     linear_operator, rank)
from .strata import (Stratum, canonical_matrix, classify_scalar_similarity, enumerate_strata,
                     merge_groupings, scale_candidates, stratum_letter)

SIMILARITY = "similarity"
COGREDIENT = "cogredient"

JUMP_FAMILY = "jump-to-family"
JUMP_POINT = "jump-to-point"


def arnold_count(js: JordanStructure) -> int:
    """Sum over eigenvalues of n_1 + 3 n_2 + 5 n_3 + ... (block sizes nonincreasing)."""
    return sum((2 * i + 1) * b for _, blocks in js.entries for i, b in enumerate(blocks))


def centralizer_dim(a: Matrix) -> int:
    n = a.rows
    return n * n - rank(commutator_operator(a))


def _action_map(a: Matrix, action: str):
    if action == SIMILARITY:
        return lambda x: a @ x - x @ a
    if action == COGREDIENT:
        return lambda x: x.T @ a + a @ x
    raise ValueError(f"unknown action {action!r}")


def tangent_space(a: Matrix, action: str = SIMILARITY) -> list:
    """Basis (as matrices) of the tangent space to the orbit at A."""
    if not a.is_square:
        raise ValueError("tangent space needs a square matrix")
    n = a.rows
    op = linear_operator(_action_map(a, action), n, a.eps)
    return [Matrix.unvec(v, n, n, a.eps) for v in column_space_basis(op)]


def miniversal_complement(a: Matrix, action: str = SIMILARITY) -> list:
    """Basis of the orthogonal complement of the tangent space (pairing tr(X^* Y))."""
    n = a.rows
    tangent = tangent_space(a, action)
    if not tangent:
        return [Matrix.unit(n, i, j, a.eps) for j in range(n) for i in range(n)]
    rows = [[x.conj() for x in t.vec()] for t in tangent]
    constraint = Matrix.from_rows(rows, a.eps)
    return [Matrix.unvec(v, n, n, a.eps) for v in kernel_basis(constraint)]


def scalar_similarity_param_count(a: Matrix) -> int:
    """Arnold's count minus one for the scalar direction, except at the zero matrix."""
    count = arnold_count(jordan_structure(a))
    return count if a.is_zero() else count - 1


def induced_partition(js: JordanStructure) -> list:
    """Nilpotent type of the limit cone: the i-th parts of all eigenvalues added up."""
    depth = max(len(b) for _, b in js.entries)
    return [sum(b[i] for _, b in js.entries if i < len(b)) for i in range(depth)]


def _rank_profile(m: Matrix, lam, depth: int):
    shifted = m - Matrix.identity(m.rows, m.eps).scale(lam)
    out = []
    power = Matrix.identity(m.rows, m.eps)
    for _ in range(depth):
        power = power @ shifted
        out.append(rank(power))
    return out


def degenerates_to(a: Matrix, b: Matrix) -> bool:
    """Whether A lies in the closure of the scalar-similarity orbit of B (reflexive)."""
    if a.rows != b.rows:
        raise ValueError("size mismatch")
    n = a.rows
    ja, jb = jordan_structure(a), jordan_structure(b)
    if ja.is_nilpotent():
        # the cone over B's orbit reaches the nilpotent orbit of the induced type
        zero = ja.values()[0]
        limit = jordan_matrix([(zero, induced_partition(jb))], a.eps)
        return all(x <= y for x, y in zip(_rank_profile(a, zero, n), _rank_profile(limit, zero, n)))
    if jb.is_nilpotent():
        return False
    for u in scale_candidates(ja, jb):
        ub = b.scale(u)
        jub = jb.scaled(u)
        if sorted(sum(bl) for _, bl in ja.entries) != sorted(sum(bl) for _, bl in jub.entries):
            continue
        if not all(sum(jub.blocks(lam)) == sum(bl) for lam, bl in ja.entries):
            continue
        if all(x <= y for lam, _ in ja.entries
               for x, y in zip(_rank_profile(a, lam, n), _rank_profile(ub, lam, n))):
            return True
    return False


def same_class(a: Matrix, b: Matrix) -> bool:
    return classify_scalar_similarity(a) == classify_scalar_similarity(b)


SAMPLE_STEPS = (Fraction(1), Fraction(1, 2), Fraction(1, 4))


def sampled_jump(d: Matrix, e: Matrix, target: Matrix, steps=SAMPLE_STEPS) -> bool:
    """D + tE is in the class of target for each sampled t != 0, and D is not."""
    if same_class(d, target):
        return False
    return all(same_class(d + e.scale(t), target) for t in steps)


def chain_curve(index, params, toward: str):
    """(D, E) along the canonical matrix of a stratum.

    ``toward="generic"`` splits off the diagonal: D is the nilpotent chain
    part, so D + tE is t times a conjugate of the canonical matrix.
    ``toward="semisimple"`` splits off the superdiagonal: D is diagonal and
    D + tE is conjugate to the canonical matrix by a diagonal rescaling.
    """
    full = canonical_matrix(index, params)
    n = full.rows
    diag = Matrix.diag([full[i, i] for i in range(n)], full.eps)
    upper = full - diag
    if toward == "generic":
        return upper, diag
    if toward == "semisimple":
        return diag, upper
    raise ValueError(toward)


# graphs


@dataclass(frozen=True)
class GraphNode:
    id: str
    label: str
    cluster: str | None = None
    family: bool = False


@dataclass
class DeformationGraph:
    name: str
    nodes: list = field(default_factory=list)
    edges: list = field(default_factory=list)

    def node_ids(self):
        return sorted(n.id for n in self.nodes)

    def edge_set(self) -> set:
        return {(s, d) for s, d, _ in self.edges}

    def reachability(self) -> set:
        closure = set(self.edge_set())
        while True:
            extra = {(a, d) for a, b in closure for c, d in closure if b == c and a != d} - closure
            if not extra:
                return closure
            closure |= extra

    def two_cycles(self) -> list:
        es = self.edge_set()
        return sorted((a, b) for a, b in es if (b, a) in es and a < b)

    def is_acyclic(self) -> bool:
        return all(a != b for a, b in self.reachability()) and not any(
            (b, a) in self.reachability() for a, b in self.reachability())

    def to_dot(self) -> str:
        out = [f'digraph "{self.name}" {{', "  node [shape=box];"]
        clusters = sorted({n.cluster for n in self.nodes if n.cluster})
        for c in clusters:
            out.append(f'  subgraph "cluster_{c}" {{')
            out.append(f'    label="{c}";')
            out.append("    style=rounded;")
            for n in sorted((n for n in self.nodes if n.cluster == c), key=lambda n: n.id):
                shape = ", shape=ellipse" if n.family else ""
                out.append(f'    "{n.id}" [label="{n.label}"{shape}];')
            out.append("  }")
        for n in sorted((n for n in self.nodes if not n.cluster), key=lambda n: n.id):
            shape = ", shape=ellipse" if n.family else ""
            out.append(f'  "{n.id}" [label="{n.label}"{shape}];')
        for s, d, kind in sorted(self.edges):
            out.append(f'  "{s}" -> "{d}" [style=solid, kind="{kind}"];')
        out.append("}")
        return "\n".join(out) + "\n"

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "nodes": [{"id": n.id, "label": n.label, "cluster": n.cluster, "family": n.family}
                      for n in sorted(self.nodes, key=lambda n: n.id)],
            "edges": [{"from": s, "to": d, "kind": k} for s, d, k in sorted(self.edges)],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n"


# nodes of the scalar-similarity graph are (index, pattern); pattern assigns a
# symbol to each parameter, None marks the generic point (0:...:0)

def canonical_pattern(pattern, blocks) -> tuple:
    blocks = [[i - 1 for i in b] for b in blocks]
    best = None
    for perms in itertools.product(*[itertools.permutations(b) for b in blocks]):
        arranged = list(pattern)
        for b, p in zip(blocks, perms):
            for dst, src in zip(b, p):
                arranged[dst] = pattern[src]
        names = {}
        relabeled = tuple(names.setdefault(s, len(names)) for s in arranged)
        if best is None or relabeled < best:
            best = relabeled
    return best


def _pattern_text(pattern) -> str:
    if pattern is None:
        return "0"
    if len(set(pattern)) == 1:
        return ":".join("1" for _ in pattern)
    return ":".join(f"p{s + 1}" for s in pattern)


@dataclass(frozen=True)
class Locus:
    index: tuple
    pattern: tuple | None

    @property
    def is_family(self) -> bool:
        return self.pattern is not None and len(set(self.pattern)) == len(self.pattern) > 1

    def node_id(self) -> str:
        return f"{stratum_letter(len(self.index), self.index)}({_pattern_text(self.pattern)})"

    def label(self) -> str:
        return "[" + ",".join(map(str, self.index)) + "] (" + _pattern_text(self.pattern) + ")"

    def representative(self, values=None) -> Matrix:
        """Canonical matrix with symbol s set to values[s] (default s + 1); zeros if generic."""
        count = sum(1 for p in self.index if p)
        if self.pattern is None:
            return canonical_matrix(self.index, [0] * count)
        values = values or [Fraction(s + 1) for s in range(count)]
        return canonical_matrix(self.index, [values[s] for s in self.pattern])


# coincidence loci drawn in the published pictures for n = 2, 3, 4
FIGURE_LOCI = {
    2: {(1, 1): [(0, 0)]},
    3: {(2, 1, 0): [(0, 0)], (1, 1, 1): [(0, 0, 1)]},
    4: {(3, 1, 0, 0): [(0, 0)], (2, 2, 0, 0): [(0, 0)],
        (2, 1, 1, 0): [(0, 0, 1)], (1, 1, 1, 1): [(0, 0, 1, 2), (0, 0, 1, 1)]},
}


# arrows as drawn in the published pictures, by node id
FIGURE_EDGES = {
    2: {("A(0)", "A(1)"), ("A(0)", "B(p1:p2)"), ("A(1)", "B(1:1)")},
    3: {("A(0)", "A(1)"), ("A(0)", "B(p1:p2)"), ("A(0)", "C(p1:p2:p3)"), ("A(1)", "B(1:1)"),
        ("B(p1:p2)", "C(p1:p1:p2)")},
    # no arrow from A(0) to the E family is drawn for n = 4
    4: {("A(0)", "A(1)"), ("A(0)", "B(p1:p2)"), ("A(0)", "C(p1:p2)"), ("A(0)", "D(p1:p2:p3)"),
        ("A(1)", "B(1:1)"), ("A(1)", "C(1:1)"), ("B(p1:p2)", "D(p1:p1:p2)"),
        ("C(p1:p2)", "E(p1:p1:p2:p2)"), ("D(p1:p2:p3)", "E(p1:p1:p2:p3)")},
}


def induced_patterns(source: Locus, target_index) -> list:
    """Patterns on target_index obtained by merging its columns into source's index."""
    out = []
    st = Stratum(target_index)
    for grouping in merge_groupings(target_index, source.index):
        pattern = [None] * st.param_count
        for group, pos in grouping:
            for j in group:
                pattern[j] = source.pattern[pos]
        out.append(canonical_pattern(pattern, st.symmetry_blocks))
    return sorted(set(out))


def _top_nodes(n: int) -> list:
    nodes = []
    for st in enumerate_strata(n):
        if st.param_count == 1:
            nodes += [Locus(st.index, None), Locus(st.index, (0,))]
        else:
            nodes.append(Locus(st.index, tuple(range(st.param_count))))
    return nodes


def single_split_loci(n: int) -> dict:
    """Loci reached from families and the nonzero scalar point by splitting one part."""
    loci = {}
    for src in _top_nodes(n):
        if src.pattern is None:
            continue
        parts = [p for p in src.index if p]
        for st in enumerate_strata(n):
            if st.param_count != len(parts) + 1:
                continue
            for pat in induced_patterns(src, st.index):
                loci.setdefault(st.index, [])
                if pat not in loci[st.index]:
                    loci[st.index].append(pat)
    return loci


def graph_nodes(n: int, loci=None) -> list:
    loci = FIGURE_LOCI.get(n) if loci is None else loci
    if loci is None:
        loci = single_split_loci(n)
    nodes = _top_nodes(n)
    for index, pats in sorted(loci.items(), reverse=True):
        idx = Stratum(index).index
        for pat in pats:
            nodes.append(Locus(idx, canonical_pattern(pat, Stratum(idx).symmetry_blocks)))
    return nodes


def deformation_graph(n: int, loci=None) -> DeformationGraph:
    """Jump deformations among stratum families and distinguished coincidence loci.

    Edges: the generic point of the scalar stratum jumps to its nonzero point
    and to every family; a node jumps to a locus of another stratum when
    merging columns of that stratum's multi-index yields the node's index
    with the locus's coincidence pattern.
    """
    if not 1 <= n <= 6:
        raise ValueError("deformation graphs are built for 1 <= n <= 6")
    nodes = graph_nodes(n, loci)
    graph = DeformationGraph(f"scalar_similarity_{n}")
    for loc in nodes:
        letter = stratum_letter(n, loc.index)
        cluster = None if Stratum(loc.index).param_count == 1 else letter
        graph.nodes.append(GraphNode(loc.node_id(), loc.label(), cluster, loc.is_family))
    scalar_generic = next(x for x in nodes if x.pattern is None)
    edges = set()
    for dst in nodes:
        if dst is scalar_generic:
            continue
        if dst.is_family or (dst.index == scalar_generic.index):
            edges.add((scalar_generic.node_id(), dst.node_id(), JUMP_FAMILY if dst.is_family else JUMP_POINT))
    for src in nodes:
        if src.pattern is None:
            continue
        for dst in nodes:
            if dst.index == src.index or dst.pattern is None or dst.is_family:
                continue
            if dst.pattern in induced_patterns(src, dst.index):
                edges.add((src.node_id(), dst.node_id(), JUMP_POINT))
    graph.edges = sorted(edges)
    return graph


def locus_by_id(n: int, node_id: str, loci=None) -> Locus:
    for loc in graph_nodes(n, loci):
        if loc.node_id() == node_id:
            return loc
    raise KeyError(node_id)


def edge_is_degeneration(n: int, src_id: str, dst_id: str, loci=None) -> bool:
    """Check one graph edge with the rank test on representative matrices.

    The source uses distinct values 1, 2, 3, ...; the target's symbols are
    matched to the source's values through each merge of columns.
    """
    src = locus_by_id(n, src_id, loci)
    dst = locus_by_id(n, dst_id, loci)
    a = src.representative()
    if src.pattern is None:
        return degenerates_to(a, dst.representative())
    st = Stratum(dst.index)
    for grouping in merge_groupings(dst.index, src.index):
        pattern = [None] * st.param_count
        for group, pos in grouping:
            for j in group:
                pattern[j] = src.pattern[pos]
        if canonical_pattern(pattern, st.symmetry_blocks) != dst.pattern:
            continue
        b = canonical_matrix(dst.index, [Fraction(s + 1) for s in pattern])
        if degenerates_to(a, b) and not same_class(a, b):
            return True
    return False


def nilpotent_of_type(partition) -> Matrix:
    return jordan_matrix([(0, list(partition))])


def generic_point_partition(index) -> list:
    return conjugate_partition(index)


def merge_witness(k, m):
    """Parameters q for stratum k with M_m(p) in the closure of the orbit of M_k(q).

    p are the generic values 1, 2, ... of m and q is drawn from them; the
    spectra must agree with multiplicity, which prunes most assignments.
    Returns None when no assignment works.
    """
    k_st, m_st = Stratum(k), Stratum(m)
    p = [Fraction(i) for i in range(1, m_st.param_count + 1)]
    gm = canonical_matrix(m_st.index, p)
    want = sorted((x, mult) for x, mult in zip(p, m_st.index))
    for q in itertools.product(range(len(p)), repeat=k_st.param_count):
        counts = {}
        for j, mult in zip(q, k_st.index):
            counts[j] = counts.get(j, 0) + mult
        if sorted((p[j], c) for j, c in counts.items()) != want:
            continue
        values = [p[j] for j in q]
        if degenerates_to(gm, canonical_matrix(k_st.index, values)):
            return values
    return None
