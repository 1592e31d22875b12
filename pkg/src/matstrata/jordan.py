"""Eigenvalues and Segre characteristics (Jordan block sizes per eigenvalue)."""
from __future__ import annotations

from dataclasses import dataclass

import math

import mpmath
import numpy as np

from .linalg import (Matrix, NonSquareError, Scalar, char_poly, exact, flt, rank)


class IrreducibleFactor(ArithmeticError):
    """The characteristic polynomial does not split over the Gaussian rationals."""


class NotAnEigenvalue(ValueError):
    pass


# polynomial helpers, coefficient lists highest degree first

def _poly_trim(p):
    i = 0
    while i < len(p) - 1 and p[i].is_zero():
        i += 1
    return p[i:]


def _poly_divmod(p, d):
    p = list(p)
    d = _poly_trim(d)
    if len(p) < len(d):
        return [p[0] * 0], p
    lead_inv = d[0].inverse()
    q = []
    for i in range(len(p) - len(d) + 1):
        c = p[i] * lead_inv
        q.append(c)
        if not c.is_zero():
            for j in range(len(d)):
                p[i + j] = p[i + j] - c * d[j]
    rem = _poly_trim(p[len(p) - len(d) + 1:] or [p[0] * 0])
    return q, rem


def _poly_gcd(a, b):
    a, b = _poly_trim(a), _poly_trim(b)
    while not (len(b) == 1 and b[0].is_zero()):
        _, r = _poly_divmod(a, b)
        a, b = b, r
    inv = a[0].inverse()
    return [c * inv for c in a]


def _poly_deriv(p):
    n = len(p) - 1
    return [c * (n - i) for i, c in enumerate(p[:-1])] or [p[0] * 0]


def _poly_eval(p, x):
    acc = x * 0
    for c in p:
        acc = acc * x + c
    return acc


def _gaussian_integer_scale(p) -> int:
    """Common denominator that makes every coefficient a Gaussian integer."""
    den = 1
    for c in p:
        for part in (c.re, c.im):
            den = den * part.denominator // math.gcd(den, part.denominator)
    return den


def _exact_roots(p):
    """Roots of an exact polynomial over Q(i) with multiplicity, or IrreducibleFactor."""
    p = _poly_trim(p)
    if len(p) == 1:
        return []
    sqf = p
    g = _poly_gcd(p, _poly_deriv(p))
    if len(g) > 1:
        sqf, _ = _poly_divmod(p, g)
    # a root a/b of an integral polynomial has b | leading coefficient
    scale = _gaussian_integer_scale(sqf)
    ints = [c * scale for c in sqf]
    lead = ints[0]
    with mpmath.workdps(60):
        coeffs = [mpmath.mpc(mpmath.mpf(c.re.numerator) / c.re.denominator,
                             mpmath.mpf(c.im.numerator) / c.im.denominator) for c in sqf]
        approx = mpmath.polyroots(coeffs, maxsteps=400, extraprec=200) if len(sqf) > 2 else [-coeffs[1] / coeffs[0]]
        candidates = []
        for z in approx:
            w = mpmath.mpc(z) * mpmath.mpc(int(lead.re), int(lead.im))
            candidates.append((int(mpmath.nint(w.real)), int(mpmath.nint(w.imag))))
    roots = []
    rest = list(p)
    for gr, gi in candidates:
        r = exact(gr, gi) / lead
        if any(r == s for s, _ in roots):
            continue
        mult = 0
        while len(rest) > 1 and _poly_eval(rest, r).is_zero():
            rest, _ = _poly_divmod(rest, [exact(1), -r])
            mult += 1
        if mult:
            roots.append((r, mult))
    if len(_poly_trim(rest)) > 1:
        raise IrreducibleFactor("characteristic polynomial does not split over Q(i)")
    return roots


def _single_linkage(values, radius: float):
    clusters = []
    for v in sorted(values, key=lambda z: (z.real, z.imag)):
        near = [c for c in clusters if min(abs(v - w) for w in c) <= radius]
        merged = [v]
        for c in near:
            merged += c
            clusters.remove(c)
        clusters.append(merged)
    return clusters


def _float_eigenvalues(m: Matrix):
    """Numeric eigenvalues clustered by single linkage.

    The base threshold is eps*max(1, scale).  A defective m-fold eigenvalue
    scatters computed roots over a radius near (n*u)**(1/m), so a looser
    grouping is tried first and kept only when the rank sequence at the
    cluster mean accounts for the whole cluster.
    """
    n = m.rows
    values = list(np.linalg.eigvals(m.to_numpy()))
    scale = max(1.0, max(abs(v) for v in values))
    base = m.eps * scale
    loose = max(base, 10.0 * (n * 2.2e-16) ** (1.0 / n) * scale)
    out = []
    for group in _single_linkage(values, loose):
        mu = complex(np.mean(group))
        if len(group) > 1:
            seq = rank_sequence(m, flt(mu, m.eps))
            if seq[0] - seq[-1] == len(group):
                out.append((flt(mu, m.eps), len(group)))
                continue
            for sub in _single_linkage(group, base):
                out.append((flt(complex(np.mean(sub)), m.eps), len(sub)))
        else:
            out.append((flt(mu, m.eps), 1))
    return sorted(out, key=lambda e: e[0].sort_key())


def eigenvalues(m: Matrix):
    """Distinct eigenvalues with algebraic multiplicity, as (Scalar, int) pairs."""
    if not m.is_square:
        raise NonSquareError("eigenvalues of a non-square matrix")
    if m.rows == 0:
        return []
    if m.eps is None:
        roots = _exact_roots(char_poly(m))
        return sorted(roots, key=lambda rm: rm[0].sort_key())
    return _float_eigenvalues(m)


def rank_sequence(m: Matrix, lam: Scalar):
    """[r_0, r_1, ...] with r_k = rank((M - lam I)^k), stopping once stationary."""
    n = m.rows
    shifted = m - Matrix.identity(n, m.eps).scale(lam)
    seq = [n]
    power = Matrix.identity(n, m.eps)
    while True:
        power = power @ shifted
        r = rank(power)
        if r == seq[-1]:
            return seq
        seq.append(r)


def blocks_from_ranks(seq):
    """Block sizes (nonincreasing) from a rank sequence: #blocks of size >= k is r_{k-1} - r_k."""
    counts = [seq[k - 1] - seq[k] for k in range(1, len(seq))]
    sizes = []
    for k, c in enumerate(counts, start=1):
        nxt = counts[k] if k < len(counts) else 0
        sizes += [k] * (c - nxt)
    return sorted(sizes, reverse=True)


def segre(m: Matrix, lam: Scalar):
    if not m.is_square:
        raise NonSquareError("segre characteristic of a non-square matrix")
    seq = rank_sequence(m, lam)
    if len(seq) == 1:
        raise NotAnEigenvalue(f"{lam} is not an eigenvalue")
    return blocks_from_ranks(seq)


@dataclass(frozen=True)
class JordanStructure:
    """Eigenvalue -> nonincreasing Jordan block sizes."""

    entries: tuple

    def __post_init__(self):
        fixed = tuple((lam, tuple(sorted(blocks, reverse=True))) for lam, blocks in self.entries)
        fixed = tuple(sorted(fixed, key=lambda e: (-sum(e[1]), e[0].sort_key())))
        object.__setattr__(self, "entries", fixed)

    @property
    def n(self) -> int:
        return sum(sum(b) for _, b in self.entries)

    def blocks(self, lam: Scalar):
        for mu, b in self.entries:
            if mu == lam:
                return b
        return ()

    def values(self):
        return [lam for lam, _ in self.entries]

    def is_nilpotent(self) -> bool:
        return all(lam.is_zero() for lam, _ in self.entries)

    def scaled(self, u: Scalar) -> "JordanStructure":
        return JordanStructure(tuple((u * lam, b) for lam, b in self.entries))

    def __eq__(self, other):
        if not isinstance(other, JordanStructure) or len(self.entries) != len(other.entries):
            return False
        used = set()
        for lam, b in self.entries:
            hit = None
            for j, (mu, c) in enumerate(other.entries):
                if j not in used and b == c and lam == mu:
                    hit = j
                    break
            if hit is None:
                return False
            used.add(hit)
        return True

    def __hash__(self):
        return hash(tuple(b for _, b in self.entries))

    def to_json(self) -> dict:
        return {"spectrum": [{"value": lam.to_json(), "blocks": list(b)} for lam, b in self.entries]}

    def __str__(self):
        return "{" + ", ".join(f"{lam}: {list(b)}" for lam, b in self.entries) + "}"


def jordan_structure(m: Matrix) -> JordanStructure:
    out = []
    for lam, mult in eigenvalues(m):
        b = segre(m, lam)
        if sum(b) != mult and m.eps is None:
            raise ArithmeticError("block sizes disagree with algebraic multiplicity")
        out.append((lam, b))
    return JordanStructure(tuple(out))


def jordan_block(lam, size: int, eps: float | None = None) -> Matrix:
    rows = [[lam if i == j else (1 if j == i + 1 else 0) for j in range(size)] for i in range(size)]
    return Matrix.from_rows(rows, eps)


def jordan_matrix(data, eps: float | None = None) -> Matrix:
    """Block-diagonal Jordan matrix from [(eigenvalue, [sizes...]), ...]."""
    out = None
    for lam, sizes in data:
        for s in sizes:
            blk = jordan_block(lam, s, eps)
            out = blk if out is None else out.direct_sum(blk)
    return out if out is not None else Matrix(0, 0, [], eps)


def conjugate_partition(parts):
    parts = [p for p in parts if p > 0]
    if not parts:
        return []
    return [sum(1 for p in parts if p >= k) for k in range(1, max(parts) + 1)]


def dominates(a, b) -> bool:
    """True when partition b dominates a (partial sums of a never exceed those of b)."""
    if sum(a) != sum(b):
        return False
    sa = sb = 0
    for i in range(max(len(a), len(b))):
        sa += a[i] if i < len(a) else 0
        sb += b[i] if i < len(b) else 0
        if sa > sb:
            return False
    return True

