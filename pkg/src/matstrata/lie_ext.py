"""Lie algebra extensions from matrices and associative extensions from bilinear forms.

A matrix A = (a^i_j) gives the (n+1)-dimensional Lie algebra with
[e_j, e_{n+1}] = sum_i a^i_j e_i, all other basis brackets zero.  A bilinear
form A gives the associative algebra e_i e_j = a_ij e_1 on a space whose
distinguished vector e_1 comes first.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass

from .linalg import Matrix, Scalar, SingularMatrixError, rank

LIE = "lie"
ASSOC = "assoc"


class JacobiViolation(ArithmeticError):
    pass


class AssociativityViolation(ArithmeticError):
    pass


class ZeroScalar(ValueError):
    pass


@dataclass(frozen=True)
class StructureConstants:
    """Products of basis vectors: table[(i, j)] is the coefficient list of e_i e_j (0-based)."""

    dim: int
    kind: str
    table: dict
    eps: float | None = None

    def _zero(self) -> Scalar:
        return Scalar(0, 0, self.eps)

    def product(self, i: int, j: int) -> list:
        return self.table.get((i, j)) or [self._zero()] * self.dim

    def multiply(self, x, y) -> list:
        """Bilinear extension of the basis products to coordinate vectors."""
        out = [self._zero()] * self.dim
        for i, xi in enumerate(x):
            if xi.is_zero():
                continue
            for j, yj in enumerate(y):
                if yj.is_zero() or (i, j) not in self.table:
                    continue
                w = xi * yj
                out = [o + w * c for o, c in zip(out, self.table[(i, j)])]
        return out

    def basis(self, i: int) -> list:
        return [Scalar(1 if k == i else 0, 0, self.eps) for k in range(self.dim)]

    def entries(self):
        """Nonzero (i, j, k, c) with 0-based indices, sorted."""
        out = []
        for (i, j), vec in self.table.items():
            for k, c in enumerate(vec):
                if not c.is_zero():
                    out.append((i, j, k, c))
        return sorted(out, key=lambda e: e[:3])

    def __eq__(self, other):
        if not isinstance(other, StructureConstants):
            return NotImplemented
        if (self.dim, self.kind) != (other.dim, other.kind):
            return False
        for i, j in itertools.product(range(self.dim), repeat=2):
            if any(a != b for a, b in zip(self.product(i, j), other.product(i, j))):
                return False
        return True

    __hash__ = None

    def to_json(self) -> dict:
        return {"dim": self.dim, "kind": self.kind,
                "table": [{"i": i + 1, "j": j + 1, "k": k + 1, "c": c.to_json()}
                          for i, j, k, c in self.entries()]}

    def dumps(self) -> str:
        return json.dumps(self.to_json())


def antisymmetry_failures(sc: StructureConstants) -> list:
    bad = []
    for i, j in itertools.product(range(sc.dim), repeat=2):
        if any(not (a + b).is_zero() for a, b in zip(sc.product(i, j), sc.product(j, i))):
            bad.append((i, j))
    return bad


def jacobi_failures(sc: StructureConstants) -> list:
    """Basis triples where [x,[y,z]] + [y,[z,x]] + [z,[x,y]] is nonzero."""
    bad = []
    for i, j, k in itertools.product(range(sc.dim), repeat=3):
        x, y, z = sc.basis(i), sc.basis(j), sc.basis(k)
        total = [a + b + c for a, b, c in zip(sc.multiply(x, sc.multiply(y, z)),
                                              sc.multiply(y, sc.multiply(z, x)),
                                              sc.multiply(z, sc.multiply(x, y)))]
        if any(not t.is_zero() for t in total):
            bad.append((i, j, k))
    return bad


def associativity_failures(sc: StructureConstants) -> list:
    bad = []
    for i, j, k in itertools.product(range(sc.dim), repeat=3):
        x, y, z = sc.basis(i), sc.basis(j), sc.basis(k)
        left = sc.multiply(sc.multiply(x, y), z)
        right = sc.multiply(x, sc.multiply(y, z))
        if any(not (a - b).is_zero() for a, b in zip(left, right)):
            bad.append((i, j, k))
    return bad


def lie_from_matrix(a: Matrix) -> StructureConstants:
    if not a.is_square:
        raise ValueError("lie_from_matrix needs a square matrix")
    n = a.rows
    zero = Scalar(0, 0, a.eps)
    table = {}
    for j in range(n):
        col = [a[i, j] for i in range(n)] + [zero]
        if all(c.is_zero() for c in col):
            continue
        table[(j, n)] = col
        table[(n, j)] = [-c for c in col]
    sc = StructureConstants(n + 1, LIE, table, a.eps)
    if antisymmetry_failures(sc) or jacobi_failures(sc):
        raise JacobiViolation("extension bracket fails the Lie axioms")
    return sc


def assoc_from_form(a: Matrix) -> StructureConstants:
    if not a.is_square:
        raise ValueError("assoc_from_form needs a square matrix")
    n = a.rows
    zero = Scalar(0, 0, a.eps)
    table = {}
    for i in range(n):
        for j in range(n):
            if not a[i, j].is_zero():
                table[(i + 1, j + 1)] = [a[i, j]] + [zero] * n
    sc = StructureConstants(n + 1, ASSOC, table, a.eps)
    if associativity_failures(sc):
        raise AssociativityViolation("extension product is not associative")
    return sc


def change_basis(sc: StructureConstants, p: Matrix) -> StructureConstants:
    """Structure constants in the basis f_b = sum_a P[a, b] e_a."""
    pinv = p.inverse()
    d = sc.dim
    table = {}
    for a_, b_ in itertools.product(range(d), repeat=2):
        fa = [p[r, a_] for r in range(d)]
        fb = [p[r, b_] for r in range(d)]
        prod = sc.multiply(fa, fb)
        coords = [sum((pinv[r, k] * prod[k] for k in range(d)), Scalar(0, 0, sc.eps)) for r in range(d)]
        if any(not c.is_zero() for c in coords):
            table[(a_, b_)] = coords
    return StructureConstants(d, sc.kind, table, sc.eps)


def iso_transport(a: Matrix, g: Matrix, c) -> Matrix:
    """c G^-1 A G, the matrix of the same Lie algebra in the basis diag(G, c)."""
    c = c if isinstance(c, Scalar) else Scalar(c, 0, a.eps)
    if c.is_zero():
        raise ZeroScalar("scalar must be nonzero")
    if rank(g) < g.rows:
        raise SingularMatrixError("G must be invertible")
    return (g.inverse() @ a @ g).scale(c)


def transport_basis(g: Matrix, c) -> Matrix:
    """The block matrix diag(G, c) realising iso_transport on the extension."""
    c = c if isinstance(c, Scalar) else Scalar(c, 0, g.eps)
    return g.direct_sum(Matrix(1, 1, [c], g.eps))


def verify_transport(a: Matrix, g: Matrix, c) -> bool:
    target = lie_from_matrix(iso_transport(a, g, c))
    return change_basis(lie_from_matrix(a), transport_basis(g, c)) == target
