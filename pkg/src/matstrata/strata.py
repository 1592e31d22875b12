"""Multi-index strata of n x n matrices under scalar similarity A ~ c G^-1 A G.

A stratum is a partition of n padded with zeros to length n.  Its canonical
matrix is a direct sum of upper bidiagonal "chain" blocks whose diagonals
read p_1, p_2, ...; the chain sizes form the conjugate partition.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .jordan import JordanStructure, conjugate_partition, jordan_structure
from .linalg import (Matrix, Scalar, exact, flt, kernel_basis, linear_operator, rank)


class Unclassifiable(ArithmeticError):
    pass


class AmbiguousClassification(ArithmeticError):
    pass


class WitnessSearchFailed(ArithmeticError):
    pass


def partitions(n: int):
    """Partitions of n in lexicographically decreasing order."""
    def rec(rest, cap):
        if rest == 0:
            yield ()
            return
        for first in range(min(rest, cap), 0, -1):
            for tail in rec(rest - first, first):
                yield (first,) + tail
    return list(rec(n, n))


def normalize_index(parts, n: int | None = None) -> tuple:
    parts = [int(p) for p in parts]
    n = sum(parts) if n is None else n
    if any(p < 0 for p in parts) or sorted(parts, reverse=True) != parts:
        raise ValueError(f"multi-index must be nonincreasing and nonnegative: {parts}")
    if sum(parts) != n:
        raise ValueError(f"multi-index {parts} does not sum to {n}")
    nz = [p for p in parts if p]
    return tuple(nz + [0] * (n - len(nz)))


def symmetry_group(index) -> list:
    """Maximal runs of equal nonzero parts, as lists of 1-based positions."""
    blocks = []
    for i, p in enumerate(index, start=1):
        if p == 0:
            break
        if blocks and index[blocks[-1][0] - 1] == p:
            blocks[-1].append(i)
        else:
            blocks.append([i])
    return blocks


def orbifold_label(index) -> str:
    n_params = sum(1 for p in index if p)
    groups = [f"Sigma_{len(b)}" for b in symmetry_group(index) if len(b) > 1]
    label = f"P^{n_params - 1}"
    if groups:
        label += "/" + "x".join(groups)
    return label


@dataclass(frozen=True)
class Stratum:
    index: tuple
    param_count: int = field(init=False)
    symmetry_blocks: tuple = field(init=False)

    def __post_init__(self):
        idx = normalize_index(self.index)
        object.__setattr__(self, "index", idx)
        object.__setattr__(self, "param_count", sum(1 for p in idx if p))
        object.__setattr__(self, "symmetry_blocks", tuple(tuple(b) for b in symmetry_group(idx)))

    @property
    def n(self) -> int:
        return len(self.index)

    @property
    def orbifold(self) -> str:
        return orbifold_label(self.index)

    def chain_sizes(self):
        return conjugate_partition(self.index)

    def to_json(self) -> dict:
        return {"index": list(self.index), "param_count": self.param_count,
                "symmetry_blocks": [list(b) for b in self.symmetry_blocks],
                "orbifold": self.orbifold}

    def __str__(self):
        return "[" + ",".join(str(p) for p in self.index) + "]"


def enumerate_strata(n: int) -> list:
    if n < 1:
        raise ValueError("n must be positive")
    return [Stratum(normalize_index(p, n)) for p in partitions(n)]


def stratum_letter(n: int, index) -> str:
    """Letter naming used in the small tables: A for [n,0,...], then B, C, ..."""
    idx = normalize_index(index, n)
    pos = [s.index for s in enumerate_strata(n)].index(idx)
    return chr(ord("A") + pos) if pos < 26 else f"S{pos}"


def chain_layout(index):
    """Sizes of the chain blocks in construction order."""
    cur = [p for p in index if p]
    layout = []
    while cur:
        top = cur[0]
        k = sum(1 for p in cur if p == top)
        nxt = cur[k] if k < len(cur) else 0
        layout += [k] * (top - nxt)
        cur = [nxt] * k + cur[k:]
        cur = [p for p in cur if p]
    return layout


def _as_scalars(params):
    params = list(params)
    eps = next((p.eps for p in params if isinstance(p, Scalar) and p.eps is not None), None)
    out = []
    for p in params:
        if isinstance(p, Scalar):
            out.append(p)
        elif eps is None:
            out.append(exact(p))
        else:
            out.append(flt(p, eps))
    return out, eps


def canonical_matrix(index, params) -> Matrix:
    idx = normalize_index(index)
    n_params = sum(1 for p in idx if p)
    params, eps = _as_scalars(params)
    if len(params) != n_params:
        raise ValueError(f"stratum {list(idx)} takes {n_params} parameters, got {len(params)}")
    n = len(idx)
    rows = [[0] * n for _ in range(n)]
    pos = 0
    for k in chain_layout(idx):
        for a in range(k):
            rows[pos + a][pos + a] = params[a]
            if a + 1 < k:
                rows[pos + a][pos + a + 1] = 1
        pos += k
    return Matrix.from_rows(rows, eps)


# projective points


def _block_perm_zero_based(blocks, n_coords):
    if blocks is None:
        return [[i] for i in range(n_coords)]
    return [[i - 1 for i in b] for b in blocks]


def canonical_projective_rep(coords, blocks=None) -> tuple:
    """Normal form of (p_1:...:p_N) modulo scaling and the block permutation group.

    The generic point (all zeros) is returned unchanged.  Otherwise every
    scaling that makes the first nonzero coordinate 1 is tried; within it
    the first nonzero block is arranged zeros, then 1, then the rest
    ascending, and later blocks are sorted ascending.  The smallest tuple
    under the (Re, Im) order wins.
    """
    coords, _ = _as_scalars(coords)
    if all(c.is_zero() for c in coords):
        return tuple(coords)
    bl = _block_perm_zero_based(blocks, len(coords))
    key = lambda s: s.sort_key()  # noqa: E731
    first = next(b for b in bl if any(not coords[i].is_zero() for i in b))
    best = None
    for v in [coords[i] for i in first if not coords[i].is_zero()]:
        inv = v.inverse()
        scaled = [c * inv for c in coords]
        out = list(scaled)
        for b in bl:
            vals = [scaled[i] for i in b]
            if b is first:
                zeros = [x for x in vals if x.is_zero()]
                rest = [x for x in vals if not x.is_zero()]
                one = next(j for j, x in enumerate(rest) if x == 1)
                rest.pop(one)
                arranged = zeros + [scaled[first[0]] * 0 + 1] + sorted(rest, key=key)
            else:
                arranged = sorted(vals, key=key)
            for i, x in zip(b, arranged):
                out[i] = x
        cand = tuple(out)
        if best is None or [key(x) for x in cand] < [key(x) for x in best]:
            best = cand
    return best


def format_point(coords) -> str:
    return "(" + ":".join(str(c) for c in coords) + ")"


# merge order


def set_partitions(items):
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]
        yield [[first]] + part


def merge_groupings(k, m):
    """All set partitions of k's nonzero positions whose group sums give m.

    Each result maps group -> the 0-based position of m it becomes.
    """
    k = [p for p in k if p]
    target = [p for p in m if p]
    out = []
    for part in set_partitions(range(len(k))):
        sums = [sum(k[i] for i in g) for g in part]
        if sorted(sums, reverse=True) != target:
            continue
        # assign groups to positions of m; equal sums are interchangeable
        order = sorted(range(len(part)), key=lambda g: -sums[g])
        out.append([(part[g], pos) for pos, g in enumerate(order)])
    return out


def merges_to(k, m) -> bool:
    """True when m arises from k by adding some columns of k together."""
    if sum(k) != sum(m):
        raise ValueError("multi-indices of different size")
    return bool(merge_groupings(k, m))


# classification


def _segre_point(js: JordanStructure):
    """Stratum index and parameter tuple realising the given Jordan data."""
    entries = list(js.entries)
    depth = max(len(b) for _, b in entries)
    padded = [(lam, list(b) + [0] * (depth - len(b))) for lam, b in entries]
    chains = [sum(b[c] for _, b in padded) for c in range(depth)]
    index = conjugate_partition(chains)
    n = js.n
    # positions (chains[c+1], chains[c]] carry eigenvalues with b[c] - b[c+1] copies
    params = [None] * chains[0]
    for c in range(depth):
        lo = chains[c + 1] if c + 1 < depth else 0
        fill = []
        for lam, b in padded:
            nxt = b[c + 1] if c + 1 < depth else 0
            fill += [lam] * (b[c] - nxt)
        fill.sort(key=lambda s: s.sort_key())
        for j, lam in enumerate(fill):
            params[lo + j] = lam
    return normalize_index(index, n), params


def classify_jordan(js: JordanStructure):
    index, params = _segre_point(js)
    st = Stratum(index)
    return st, canonical_projective_rep(params, st.symmetry_blocks)


def classify_scalar_similarity(m: Matrix):
    """(stratum, canonical projective point) of a square matrix."""
    js = jordan_structure(m)
    st, point = classify_jordan(js)
    check = jordan_structure(canonical_matrix(st.index, point))
    if not same_up_to_scale(check, js):
        raise Unclassifiable("canonical matrix does not reproduce the Jordan data")
    return st, point


def scale_candidates(a: JordanStructure, b: JordanStructure):
    """Scalars u with u * spectrum(b) possibly equal to spectrum(a)."""
    nz_a = [lam for lam in a.values() if not lam.is_zero()]
    nz_b = [lam for lam in b.values() if not lam.is_zero()]
    if not nz_a and not nz_b:
        return [None]
    if not nz_a or not nz_b:
        return []
    out = []
    ref = max(nz_b, key=lambda lam: (sum(b.blocks(lam)), lam.sort_key()))
    for lam in nz_a:
        u = lam / ref
        if not any(u == v for v in out):
            out.append(u)
    return out


def matching_scale(a: JordanStructure, b: JordanStructure):
    """A scalar u with b.scaled(u) == a, 1 for two nilpotent structures, else None."""
    for u in scale_candidates(a, b):
        if u is None:
            return a.values()[0] * 0 + 1 if a == b else None
        if b.scaled(u) == a:
            return u
    return None


def same_up_to_scale(a: JordanStructure, b: JordanStructure) -> bool:
    return matching_scale(a, b) is not None


def _rng(seed: int):
    return np.random.Generator(np.random.Philox(seed))


def scalar_similar(a: Matrix, b: Matrix, seed: int = 0, attempts: int = 64):
    """Witness (c, G) with c G^-1 A G = B, or None when the classes differ."""
    if a.rows != b.rows or not a.is_square or not b.is_square:
        raise ValueError("scalar_similar needs two square matrices of equal size")
    ja, jb = jordan_structure(a), jordan_structure(b)
    c = matching_scale(jb, ja)
    if c is None:
        return None
    n = a.rows
    op = linear_operator(lambda x: x @ b - (a @ x).scale(c), n, a.eps)
    basis = kernel_basis(op)
    rng = _rng(seed)
    one = c * 0 + 1
    for _ in range(attempts):
        coeffs = rng.integers(-3, 4, size=len(basis))
        vec = [one * 0] * (n * n)
        for w, v in zip(coeffs, basis):
            if w:
                vec = [x + y * int(w) for x, y in zip(vec, v)]
        g = Matrix.unvec(vec, n, n, a.eps)
        if rank(g) == n:
            if (g.inverse() @ a @ g).scale(c) != b:
                continue
            return c, g
    raise WitnessSearchFailed("no invertible solution found in the random combinations")


def generic_params(count: int) -> list:
    """Distinct small integers 1..count, used as generic representatives."""
    return [Fraction(i) for i in range(1, count + 1)]

