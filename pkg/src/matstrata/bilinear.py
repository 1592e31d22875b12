"""Bilinear forms under the cogredient action M -> G^T M G.

Covers the indecomposable summands H_m(lambda), Gamma_m, J_m(0), the two
families of 2 x 2 forms A(p), B(p:q), the B- and C-lists of 3 x 3 forms,
congruence invariants, certificate search and the deformation picture of
the 3-dimensional moduli space.
"""
from __future__ import annotations

import functools
import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .deformation import JUMP_FAMILY, JUMP_POINT, SAMPLE_STEPS, DeformationGraph, GraphNode
from .jordan import (IrreducibleFactor, JordanStructure, NotAnEigenvalue, jordan_block,
                     jordan_structure)
from .linalg import (DEFAULT_EPS, Matrix, Scalar, exact, flt, gaussian_sqrt, kernel_basis, rank)
from .strata import _as_scalars

H = "H"
GAMMA = "Gamma"
JZERO = "Jzero"
DIAG1 = "Diag1"
DIAG0 = "Diag0"
KIND_ORDER = {H: 0, GAMMA: 1, JZERO: 2, DIAG1: 3, DIAG0: 4}

DEFAULT_TOL = 1e-10
DEFAULT_RESTARTS = 64

FLOAT_COSQUARE_EPS = 1e-7

GAMMA6 = flt(complex(0.5, 3 ** 0.5 / 2))


class InvalidLambda(ValueError):
    pass


class SearchExhausted(ArithmeticError):
    """Invariants agree but no certificate was found within the budget."""


# summands


@dataclass(frozen=True)
class CanonicalSummand:
    """One direct summand.  For H the size is m and the matrix is 2m x 2m."""

    kind: str
    size: int = 1
    lam: Scalar | None = None

    def __post_init__(self):
        if self.kind not in KIND_ORDER:
            raise ValueError(f"unknown summand kind {self.kind!r}")
        if self.size < 1 or (self.kind in (DIAG1, DIAG0) and self.size != 1):
            raise ValueError(f"bad size {self.size} for {self.kind}")
        if self.kind == H:
            if self.lam is None:
                raise InvalidLambda("H needs an eigenvalue")
            lam = self.lam if isinstance(self.lam, Scalar) else exact(self.lam)
            object.__setattr__(self, "lam", lam)
            if lam.is_zero() or lam == (-1) ** (self.size + 1):
                raise InvalidLambda(f"H_{self.size} excludes lambda = {lam}")
        elif self.lam is not None:
            raise ValueError(f"{self.kind} takes no eigenvalue")

    @property
    def dim(self) -> int:
        return 2 * self.size if self.kind == H else self.size

    def sort_key(self):
        lam = self.lam.sort_key() if self.lam is not None else ()
        return (-self.dim, KIND_ORDER[self.kind], lam)

    def __str__(self):
        if self.kind == H:
            return f"H_{self.size}({self.lam})"
        if self.kind == GAMMA:
            return f"Gamma_{self.size}"
        if self.kind == JZERO:
            return f"J_{self.size}(0)"
        return "[1]" if self.kind == DIAG1 else "[0]"


def gamma_matrix(n: int) -> Matrix:
    """Alternating +-1 pattern on the anti-diagonal and the diagonal just right of it."""
    rows = [[0] * n for _ in range(n)]
    for r in range(n):
        sign = (-1) ** (n - 1 - r)
        rows[r][n - 1 - r] = sign
        if r >= 1:
            rows[r][n - r] = sign
    return Matrix.from_rows(rows)


def build_summand(s: CanonicalSummand) -> Matrix:
    if s.kind == H:
        m = s.size
        rows = [[0] * (2 * m) for _ in range(2 * m)]
        for i in range(m):
            rows[i][m + i] = 1
        jb = jordan_block(s.lam, m)
        for i in range(m):
            for j in range(m):
                rows[m + i][j] = jb[i, j]
        return Matrix.from_rows(rows)
    if s.kind == GAMMA:
        return gamma_matrix(s.size)
    if s.kind == JZERO:
        return jordan_block(0, s.size)
    return Matrix.from_rows([[1 if s.kind == DIAG1 else 0]])


def build_sum(summands) -> Matrix:
    """Direct sum in the fixed order (size desc, H < Gamma < J < [1] < [0], lambda)."""
    out = None
    for s in sorted(summands, key=CanonicalSummand.sort_key):
        blk = build_summand(s)
        out = blk if out is None else out.direct_sum(blk)
    return out if out is not None else Matrix(0, 0, [])


# the displayed forms


def _point_scalars(point):
    vals, eps = _as_scalars(point)
    return vals, eps


def form_a(p) -> Matrix:
    (p,), eps = _point_scalars([p])
    return Matrix.from_rows([[0, p], [-p, 0]], eps)


def form_b(p, q) -> Matrix:
    (p, q), eps = _point_scalars([p, q])
    return Matrix.from_rows([[1, p], [q, 0]], eps)


def _family(name, k, point, with_point, table):
    if k not in table:
        raise ValueError(f"{name}_{k} does not exist")
    if (point is None) == (k in with_point):
        need = "a point" if k in with_point else "no point"
        raise ValueError(f"{name}_{k} takes {need}")
    if point is None:
        return Matrix.from_rows(table[k])
    if len(point) != 2:
        raise ValueError("family points have two coordinates")
    (p, q), eps = _point_scalars(point)
    return Matrix.from_rows(table[k](p, q), eps)


_B_TABLE = {
    1: lambda p, q: [[1, p, 0], [q, 0, 0], [0, 0, 1]],
    2: lambda p, q: [[1, p, 0], [q, 0, 0], [0, 0, 0]],
    3: [[0, -1, 0], [1, 0, 0], [0, 0, 1]],
    4: [[0, -1, 0], [1, 0, 0], [0, 0, 0]],
    5: [[0, 1, 0], [0, 0, 1], [0, 0, 0]],
    6: [[0, 0, 1], [0, -1, -1], [1, 1, 0]],
}

_C_TABLE = {
    1: lambda p, q: [[0, 0, q], [0, 1, 1], [p, 0, 1]],
    2: [[0, 1, 0], [-1, 0, 0], [0, 0, 1]],
    3: [[0, 1, 1], [-1, 0, 0], [0, 0, 0]],
    4: [[0, 1, 0], [1, 1, 0], [0, 0, 1]],
    5: lambda p, q: [[0, 0, q], [0, 0, 0], [p, 0, 1]],
    6: [[0, 1, 0], [-1, 0, 0], [0, 0, 0]],
}


def b_family(k: int, point=None) -> Matrix:
    return _family("B", k, point, (1, 2), _B_TABLE)


def c_family(k: int, point=None) -> Matrix:
    return _family("C", k, point, (1, 5), _C_TABLE)


@dataclass(frozen=True)
class FormClass:
    """A class of forms: family name plus a canonical point when the family has one.

    2 x 2 classes are A(0), A(1) and B(p:q); 3 x 3 classes are C1..C6 with
    points for C1 and C5, and "0" for the zero form.
    """

    family: str
    point: tuple | None = None

    def __eq__(self, other):
        if not isinstance(other, FormClass) or self.family != other.family:
            return False
        if self.point is None or other.point is None:
            return self.point is None and other.point is None
        if len(self.point) != len(other.point):
            return False
        a, b = self.point, other.point
        if (a[0].eps is None) != (b[0].eps is None):
            a = tuple(x.to_float() for x in a)
            b = tuple(x.to_float() for x in b)
        return all(x == y for x, y in zip(a, b))

    __hash__ = None

    def __str__(self):
        if self.point is None:
            return self.family
        return f"{self.family}(" + ":".join(str(c) for c in self.point) + ")"

    def matrix(self) -> Matrix:
        if self.family == "A":
            return form_a(self.point[0])
        if self.family == "B":
            return form_b(*self.point)
        if self.family == "0":
            return Matrix.zeros(3, 3)
        k = int(self.family[1:])
        return c_family(k, self.point if k in (1, 5) else None)

    def to_json(self) -> dict:
        return {"family": self.family,
                "point": None if self.point is None else [c.to_json() for c in self.point]}


def _canonical_pair(p, q) -> tuple:
    """(1:r) with r the smaller of q/p and p/q, so (1:0) rather than (0:1)."""
    (p, q), _ = _as_scalars([p, q])
    if p.is_zero() and q.is_zero():
        return (p, q)
    one = p * 0 + 1
    cands = []
    if not p.is_zero():
        cands.append((one, q / p))
    if not q.is_zero():
        cands.append((one, p / q))
    return min(cands, key=lambda c: c[1].sort_key())


def b_class(p, q) -> FormClass:
    return FormClass("B", _canonical_pair(p, q))


def c_class(k: int, point=None) -> FormClass:
    if k in (1, 5):
        return FormClass(f"C{k}", _canonical_pair(*point))
    return FormClass(f"C{k}")


# invariants


def _vstack(a: Matrix, b: Matrix) -> Matrix:
    return Matrix.from_rows(a.to_rows() + b.to_rows(), a.eps)


def radical_basis(m: Matrix) -> list:
    """Basis of ker M intersected with ker M^T, as coordinate lists."""
    return kernel_basis(_vstack(m, m.T))


def _complement(basis, n: int, eps) -> list:
    """Standard basis vectors completing ``basis`` to a basis of the whole space."""
    chosen = [list(v) for v in basis]
    extra = []
    for i in range(n):
        e = [Scalar(1 if k == i else 0, 0, eps) for k in range(n)]
        trial = chosen + [e]
        if rank(Matrix.from_rows(trial, eps)) == len(trial):
            chosen.append(e)
            extra.append(i)
    return extra


def _columns(n: int, idx, eps) -> Matrix:
    return Matrix.from_rows([[1 if i == j else 0 for j in idx] for i in range(n)], eps)


def nondegenerate_part(m: Matrix):
    """The form restricted to a complement of its radical, or None when that is still singular."""
    n = m.rows
    w = _columns(n, _complement(radical_basis(m), n, m.eps), m.eps)
    x = w.T @ m @ w
    return x if rank(x) == x.rows else None


def cosquare(m: Matrix) -> Matrix:
    return m.T.inverse() @ m


def _cosquare_structure(x: Matrix):
    if x.rows == 0:
        return JordanStructure(())
    c = cosquare(x)
    if c.eps is None:
        try:
            return jordan_structure(c)
        except IrreducibleFactor:
            c = c.to_float()
    # inversion costs accuracy, so float cosquares are read with a looser tolerance
    loose = Matrix(c.rows, c.cols, [Scalar(e.re, e.im, FLOAT_COSQUARE_EPS) for e in c.entries],
                   FLOAT_COSQUARE_EPS)
    try:
        return jordan_structure(loose)
    except (NotAnEigenvalue, ArithmeticError):
        return None


@dataclass(frozen=True)
class CogredientInvariants:
    rank: int
    rank_sym: int
    rank_skew: int
    radical: int
    cosquare: JordanStructure | None

    @property
    def ranks(self) -> tuple:
        return (self.rank, self.rank_sym, self.rank_skew)

    def to_json(self) -> dict:
        return {"rank": self.rank, "rank_sym": self.rank_sym, "rank_skew": self.rank_skew,
                "radical": self.radical,
                "cosquare": None if self.cosquare is None else self.cosquare.to_json()}


def _spectrum_close(a: JordanStructure, b: JordanStructure, tol: float = 1e-6) -> bool:
    va = sorted((complex(lam) for lam, blk in a.entries for _ in range(sum(blk))), key=lambda z: (z.real, z.imag))
    vb = sorted((complex(lam) for lam, blk in b.entries for _ in range(sum(blk))), key=lambda z: (z.real, z.imag))
    if len(va) != len(vb):
        return False
    used = [False] * len(vb)
    for z in va:
        hit = next((k for k, w in enumerate(vb) if not used[k] and abs(z - w) <= tol * max(1.0, abs(z))), None)
        if hit is None:
            return False
        used[hit] = True
    return True


def invariants_separate(a: CogredientInvariants, b: CogredientInvariants) -> bool:
    """True when the invariants prove the two forms inequivalent.

    Exact cosquares are compared block for block.  Float cosquares only
    contribute their eigenvalues, since block sizes are not stable under
    rounding.
    """
    if (a.rank, a.rank_sym, a.rank_skew, a.radical) != (b.rank, b.rank_sym, b.rank_skew, b.radical):
        return True
    if a.cosquare is None or b.cosquare is None:
        return False
    exact_a = all(lam.eps is None for lam in a.cosquare.values())
    exact_b = all(lam.eps is None for lam in b.cosquare.values())
    if exact_a and exact_b:
        return a.cosquare != b.cosquare
    return not _spectrum_close(a.cosquare, b.cosquare)


def cogredient_invariants(m: Matrix) -> CogredientInvariants:
    """Ranks of M, M + M^T, M - M^T, radical dimension, cosquare of the nondegenerate part.

    The cosquare entry is None unless M is congruent to X + 0 with X
    nonsingular, in which case it is the Jordan structure of X^-T X.
    """
    if not m.is_square:
        raise ValueError("cogredient invariants need a square matrix")
    x = nondegenerate_part(m)
    return CogredientInvariants(rank(m), rank(m + m.T), rank(m - m.T), len(radical_basis(m)),
                                None if x is None else _cosquare_structure(x))


def is_symmetric(m: Matrix) -> bool:
    return (m - m.T).is_zero()


def is_antisymmetric(m: Matrix) -> bool:
    return (m + m.T).is_zero()


# certificates


@dataclass
class Certificate:
    """G with G^T A G = B (or c B when c is set), with the residual at construction."""

    a: Matrix
    b: Matrix
    g: Matrix
    residual: float
    c: Scalar | None = None
    verified: bool = False

    def check(self, tol: float = DEFAULT_TOL) -> bool:
        a, b, g = self.a, self.b, self.g
        target = b if self.c is None else b.scale(self.c)
        if g.eps is None and a.eps is None and b.eps is None:
            return g.T @ a @ g == target and rank(g) == g.rows
        gn, an, tn = g.to_numpy(), a.to_numpy(), target.to_numpy()
        res = _residual_norm(gn, an, tn)
        return res <= tol * max(1.0, np.abs(tn).max()) and _well_conditioned(gn)

    def to_json(self) -> dict:
        out = {"G": self.g.to_json()}
        if self.c is not None:
            out["c"] = self.c.to_json()
        out["residual"] = self.residual
        out["verified"] = self.verified
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json())


def _residual_norm(g, a, b) -> float:
    return float(np.abs(g.T @ a @ g - b).max()) if g.size else 0.0


def _well_conditioned(g, floor: float = 1e-8) -> bool:
    s = np.linalg.svd(g, compute_uv=False)
    return bool(s[-1] > floor * max(1.0, s[0]))


def _finish(a, b, g, residual, tol) -> Certificate:
    cert = Certificate(a, b, g, residual)
    if not cert.check(tol):
        raise ArithmeticError("certificate failed re-verification")
    cert.verified = True
    return cert


def _exact_guesses(n: int):
    """Signed and i-scaled permutation matrices, then unitriangular 0/+-1 matrices (n <= 3)."""
    units = [1, -1, 1j, -1j] if n <= 3 else [1, -1]
    for perm in itertools.permutations(range(n)):
        for signs in itertools.product(units, repeat=n):
            g = np.zeros((n, n), dtype=complex)
            for i, j in enumerate(perm):
                g[i, j] = signs[i]
            yield g
    if n > 3:
        return
    upper = [(i, j) for i in range(n) for j in range(i + 1, n)]
    for vals in itertools.product([0, 1, -1], repeat=len(upper)):
        g = np.eye(n, dtype=complex)
        for (i, j), v in zip(upper, vals):
            g[i, j] = v
        yield g
        yield g.T.copy()


def _np_to_exact(g) -> Matrix:
    rows = [[exact(Fraction(round(z.real)), Fraction(round(z.imag))) for z in r] for r in g]
    return Matrix.from_rows(rows)


def _try_exact(a: Matrix, b: Matrix):
    n = a.rows
    if a == b:
        return Matrix.identity(n)
    u = _proportional(a, b)
    if u is not None:
        root = gaussian_sqrt(u)
        if root is not None:
            return Matrix.identity(n).scale(root)
    an, bn = a.to_numpy(), b.to_numpy()
    for g in _exact_guesses(n):
        if _residual_norm(g, an, bn) < 1e-12:
            ge = _np_to_exact(g)
            if ge.T @ a @ ge == b:
                return ge
    return None


def _proportional(a: Matrix, b: Matrix):
    """u with B = u A, or None."""
    for x, y in zip(a.entries, b.entries):
        if not x.is_zero():
            u = y / x
            return u if a.scale(u) == b and not u.is_zero() else None
    return None


def _to_float_pair(a: Matrix, b: Matrix):
    eps = a.eps or b.eps or DEFAULT_EPS
    return a.to_float(eps), b.to_float(eps)


def congruent(a: Matrix, b: Matrix, seed: int = 0, tol: float = DEFAULT_TOL,
              restarts: int = DEFAULT_RESTARTS):
    """Search for invertible G with G^T A G = B.

    Returns a verified :class:`Certificate`, or None when the invariants
    already separate A and B.  Raises :class:`SearchExhausted` when the
    invariants agree but neither the exact guesses nor the numerical search
    produced a certificate.
    """
    if not (a.is_square and b.is_square) or a.rows != b.rows:
        raise ValueError("congruent needs two square matrices of equal size")
    if (a.eps is None) != (b.eps is None):
        a, b = _to_float_pair(a, b)
    if invariants_separate(cogredient_invariants(a), cogredient_invariants(b)):
        return None
    n = a.rows
    if a.eps is None:
        g = _try_exact(a, b)
        if g is not None:
            return _finish(a, b, g, 0, tol)
    if n == 2:
        g = _congruence_2(a, b)
        if g is not None:
            res = 0 if g.eps is None else _residual_norm(g.to_numpy(), a.to_numpy(), b.to_numpy())
            if g.eps is not None:
                a, b = _to_float_pair(a, b)
            return _finish(a, b, g, res, tol)
    fa, fb = _to_float_pair(a, b)
    an, bn = fa.to_numpy(), fb.to_numpy()
    for r in range(restarts):
        g = _lm_solve(an, bn, _restart_rng(seed, r), tol)
        if g is not None:
            return _finish(fa, fb, Matrix.from_numpy(g, fa.eps), _residual_norm(g, an, bn), tol)
    raise SearchExhausted(f"no certificate after {restarts} restarts")


def are_congruent(a: Matrix, b: Matrix, seed: int = 0) -> bool:
    return congruent(a, b, seed=seed) is not None


# numerical search


def _restart_rng(seed: int, restart: int):
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, restart])))


def _jacobian(g, a, mask):
    """d vec(G^T A G) / d vec(G) on the masked entries; vec is row-major."""
    n = g.shape[0]
    ag = a @ g
    gta = g.T @ a
    cols = []
    for k in range(n):
        for l in range(n):
            d = np.zeros((n, n), dtype=complex)
            d[l, :] += ag[k, :]
            d[:, l] += gta[:, k]
            cols.append(d[mask])
    return np.stack(cols, axis=1)


def _lm_solve(a, b, rng, tol, mask=None, max_iter=300):
    """Damped Gauss-Newton on the masked entries of G^T A G - B from one random start."""
    n = a.shape[0]
    mask = np.ones((n, n), dtype=bool) if mask is None else mask
    scale = max(1.0, float(np.abs(b).max()))
    size = (max(float(np.abs(b).max()), 1e-3) / max(float(np.abs(a).max()), 1e-3)) ** 0.5
    g = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) * size / np.sqrt(2)
    res = lambda x: (x.T @ a @ x - b)[mask]  # noqa: E731
    r = res(g)
    cost = float(np.linalg.norm(r))
    mu = 1e-3 * max(1.0, cost)
    for _ in range(max_iter):
        if float(np.abs(r).max()) <= 1e-3 * tol * scale:
            break
        jac = _jacobian(g, a, mask)
        jh = jac.conj().T
        lhs = jh @ jac + mu * np.eye(n * n)
        step = np.linalg.solve(lhs, -jh @ r)
        trial = g + step.reshape(n, n)
        rt = res(trial)
        ct = float(np.linalg.norm(rt))
        if ct < cost:
            g, r, cost = trial, rt, ct
            mu = max(mu / 5, 1e-15)
        else:
            mu *= 4
            if mu > 1e12:
                break
    if float(np.abs(r).max()) > tol * scale or not _well_conditioned(g, 1e-6):
        return None
    return g


# 2 x 2 forms


def _beta(m: Matrix, x, y):
    return sum((x[i] * m[i, j] * y[j] for i in range(m.rows) for j in range(m.cols)),
               m[0, 0] * 0)


def _small_vectors(eps):
    vecs = [(x, y) for x in range(-3, 4) for y in range(-3, 4)
            if (x, y) != (0, 0) and np.gcd(x, y) == 1 and (x > 0 or (x == 0 and y > 0))]
    vecs.sort(key=lambda v: (abs(v[0]) + abs(v[1]), -v[0], -v[1]))
    return [[Scalar(x, 0, eps), Scalar(y, 0, eps)] for x, y in vecs]


def _reduce_2(m: Matrix, u=None, v=None, want_scale=None):
    """(G, s, class) with G^T M G = s * N(class), following the constructive proof.

    ``u`` is the first basis vector (beta(u, u) != 0), ``v`` completes it.
    With ``want_scale`` set, only choices making want_scale / s a square in
    the scalar field are accepted.  Returns None if the choice is unusable.
    """
    eps = m.eps
    one = Scalar(1, 0, eps)
    zero = one * 0
    if is_antisymmetric(m):
        a = m[0, 1]
        if a.is_zero():
            return Matrix.identity(2, eps), one, FormClass("A", (zero,))
        return Matrix.diag([one, a.inverse()], eps), one, FormClass("A", (one,))
    if u is None:
        for cand in _small_vectors(eps):
            if not _beta(m, cand, cand).is_zero():
                u = cand
                break
    s = _beta(m, u, u)
    if s.is_zero():
        return None
    if want_scale is not None and gaussian_sqrt(want_scale / s) is None:
        return None
    if v is None:
        v = [zero, one]
        if u[0].is_zero():
            v = [one, zero]
    mm = m.scale(s.inverse())
    d = _beta(mm, v, v)
    if d.is_zero():
        e2 = v
    else:
        b = _beta(mm, u, v) + _beta(mm, v, u)
        root = gaussian_sqrt(b * b - d * 4)
        if root is None:
            return None
        x = (-b + root) / (d * 2)
        e2 = [ui + x * vi for ui, vi in zip(u, v)]
    p, q = _beta(mm, u, e2), _beta(mm, e2, u)
    g = Matrix.from_rows([[u[0], e2[0]], [u[1], e2[1]]], eps)
    point = _canonical_pair(p, q)
    if p.is_zero() and q.is_zero():
        return g, s, FormClass("B", point)
    # scale to the canonical representative, swapping first when needed
    for swap in (False, True):
        a0, b0 = (q, p) if swap else (p, q)
        for w in (a0, b0):
            if w.is_zero():
                continue
            if a0 / w == point[0] and b0 / w == point[1]:
                gg = g @ Matrix.diag([one, w.inverse()], eps)
                if swap:
                    # B(x:y) -> B(y:x) via [[1, x + y], [0, -1]]
                    x_, y_ = p / w, q / w
                    gg = gg @ Matrix.from_rows([[one, x_ + y_], [zero, -one]], eps)
                return gg, s, FormClass("B", point)
    raise ArithmeticError("canonical point not reached")


def classify_bilinear_2(m: Matrix) -> FormClass:
    """A(0), A(1) or B(p:q) with (p:q) the canonical representative modulo swap."""
    if m.rows != 2 or not m.is_square:
        raise ValueError("classify_bilinear_2 needs a 2 x 2 matrix")
    red = _reduce_2(m)
    if red is None:
        red = _reduce_2(m.to_float())
    return red[2]


def reduction_2(m: Matrix):
    """(G, s, class) for a 2 x 2 form; falls back to floats when square roots leave Q(i)."""
    red = _reduce_2(m)
    return red if red is not None else _reduce_2(m.to_float())


def _congruence_2(a: Matrix, b: Matrix):
    """Compose the two constructive reductions; exact whenever the square roots exist."""
    rb = reduction_2(b)
    if rb[1].eps is not None and a.eps is None:
        a = a.to_float(rb[1].eps)
    gb, sb, cb = rb
    eps = a.eps
    candidates = [None] if is_antisymmetric(a) else _small_vectors(eps)
    for u in candidates:
        for v in ([None] if u is None else _small_vectors(eps)):
            if u is not None and rank(Matrix.from_rows([u, v], eps)) < 2:
                continue
            ra = _reduce_2(a, u, v, want_scale=sb) if u is not None else _reduce_2(a)
            if ra is None:
                continue
            ga, sa, ca = ra
            if ca != cb:
                return None
            k = gaussian_sqrt(sb / sa)
            if k is None:
                continue
            g = (ga @ gb.inverse()).scale(k)
            return g
    if a.eps is None:
        return _congruence_2(a.to_float(), b.to_float())
    return None


# 3 x 3 forms


def _pair_from_ratio(r: Scalar) -> tuple:
    return _canonical_pair(r, r * 0 + 1)


def _classify_3_by_invariants(m: Matrix) -> FormClass:
    inv = cogredient_invariants(m)
    if inv.rank == 0:
        return FormClass("0")
    if inv.rank == 1:
        return c_class(5, (0, 0)) if is_symmetric(m) else c_class(5, (1, 0))
    if inv.rank == 2:
        if inv.radical == 1:
            n = m.rows
            w = _columns(n, _complement(radical_basis(m), n, m.eps), m.eps)
            x = classify_bilinear_2(w.T @ m @ w)
            if x.family == "A":
                return c_class(6)
            return FormClass("C5", x.point)
        return c_class(1, (1, 0)) if inv.rank_sym == 3 else c_class(3)
    js = inv.cosquare
    if js is None:
        raise SearchExhausted("cosquare structure could not be resolved numerically")
    one = [lam for lam in js.values() if lam == 1]
    blocks_one = js.blocks(one[0]) if one else ()
    minus = [lam for lam in js.values() if lam == -1]
    blocks_minus = js.blocks(minus[0]) if minus else ()
    if blocks_one == (1, 1, 1):
        return c_class(4)
    if blocks_one == (3,):
        return c_class(1, (1, 1))
    if blocks_one == (1,) and blocks_minus == (1, 1):
        return c_class(2)
    if blocks_one == (1,) and blocks_minus == (2,):
        return c_class(1, (1, -1))
    others = [lam for lam in js.values() if not lam == 1]
    if blocks_one == (1,) and len(others) == 2:
        return FormClass("C1", _pair_from_ratio(others[0]))
    raise ArithmeticError(f"cosquare structure {js} does not occur for 3 x 3 forms")


def classify_bilinear_3(m: Matrix, seed: int = 0) -> FormClass:
    """C-family class of a 3 x 3 form, confirmed by a congruence certificate.

    The generic point C1(0:0) is reported through its coincidence with the
    C5 point (1:gamma), gamma a primitive sixth root of unity.
    """
    if m.rows != 3 or not m.is_square:
        raise ValueError("classify_bilinear_3 needs a 3 x 3 matrix")
    cls = _classify_3_by_invariants(m)
    if cls.family != "0":
        rep = cls.matrix()
        if congruent(m, rep, seed=seed) is None:
            raise ArithmeticError(f"invariants chose {cls} but the representative disagrees")
    return cls


# dictionary


@dataclass
class DictionaryItem:
    number: int
    left: str
    right: str
    ok: bool
    certificate: Certificate | None = None

    def to_json(self) -> dict:
        return {"item": self.number, "left": self.left, "right": self.right, "ok": self.ok,
                "certificate": None if self.certificate is None else self.certificate.to_json()}


@dataclass
class DictionaryReport:
    items: list = field(default_factory=list)

    @property
    def all_ok(self) -> bool:
        return all(i.ok for i in self.items)

    def to_json(self) -> dict:
        return {"verified": sum(i.ok for i in self.items), "total": len(self.items),
                "items": [i.to_json() for i in self.items]}


def _h1(lam) -> Matrix:
    return build_summand(CanonicalSummand(H, 1, exact(lam)))


def dictionary_pairs():
    """(item number, left label, left matrix, right label, right matrix)."""
    out = []
    for lam in (Fraction(2), Fraction(3), Fraction(1, 2)):
        p, q = lam.numerator, lam.denominator
        out.append((1, f"H_1({lam})", _h1(lam), f"B({p}:{q})", form_b(p, q)))
    out.append((2, "B(1:1)", form_b(1, 1), "diag(1,1)", Matrix.diag([1, 1])))
    out.append((3, "B(1:-1)", form_b(1, -1), "Gamma_2", gamma_matrix(2)))
    out.append((4, "B(1:0)", form_b(1, 0), "J_2(0)", jordan_block(0, 2)))
    out.append((5, "B(0:0)", form_b(0, 0), "diag(1,0)", Matrix.diag([1, 0])))
    out.append((6, "H_1(-1)", _h1(-1), "A(1)", form_a(1)))
    out.append((7, "A(0)", form_a(0), "diag(0,0)", Matrix.diag([0, 0])))
    return out


def dictionary_check(seed: int = 0) -> DictionaryReport:
    report = DictionaryReport()
    for num, ll, lm, rl, rm in dictionary_pairs():
        if num == 7:
            report.items.append(DictionaryItem(num, ll, rl, lm == rm))
            continue
        try:
            cert = congruent(lm, rm, seed=seed)
        except SearchExhausted:
            cert = None
        ok = cert is not None and cert.verified
        report.items.append(DictionaryItem(num, ll, rl, ok, cert))
    return report


# jumps


def verify_jump(d: Matrix, directions, target: Matrix, steps=SAMPLE_STEPS, seed: int = 0) -> bool:
    """True when D + t * sum(directions) is congruent to the target for sampled t != 0
    while D itself is not."""
    e = directions[0]
    for x in directions[1:]:
        e = e + x
    if (d.eps is None) != (e.eps is None):
        d, e = _to_float_pair(d, e)
    if congruent(d, target, seed=seed) is not None:
        return False
    for t in steps:
        tt = t if d.eps is None else float(t)
        dt = d + e.scale(tt)
        if congruent(dt, target, seed=seed) is None:
            return False
    return True


def closure_obstruction(src: Matrix, dst: Matrix):
    """A reason src cannot lie in the orbit closure of dst, or None.

    The checks are rank semicontinuity for M, M + M^T, M - M^T and the
    closed subspaces of symmetric and antisymmetric forms.
    """
    a, b = cogredient_invariants(src), cogredient_invariants(dst)
    for name, x, y in zip(("rank", "symmetric rank", "antisymmetric rank"), a.ranks, b.ranks):
        if x > y:
            return f"{name} would drop"
    if is_symmetric(dst) and not is_symmetric(src):
        return "target is symmetric"
    if is_antisymmetric(dst) and not is_antisymmetric(src):
        return "target is antisymmetric"
    return None


def _base_changes(n: int):
    """Identity, then products of permutations with unitriangular 0, +-1, +-1/2 matrices."""
    yield np.eye(n)
    if n > 3:
        return
    upper = [(i, j) for i in range(n) for j in range(i + 1, n)]
    for perm in itertools.permutations(range(n)):
        p = np.eye(n)[list(perm)]
        for vals in itertools.product([0, 1, -1, 0.5, -0.5], repeat=len(upper)):
            u = np.eye(n)
            for (i, j), v in zip(upper, vals):
                u[i, j] = v
            yield p @ u


def _weight_vectors(n: int):
    ws = [w for w in itertools.product(range(3), repeat=n) if min(w) == 0]
    return sorted(ws, key=lambda w: (sum(w), w))


def _homogeneous_np(d, w, tol=1e-12):
    n = d.shape[0]
    vals = {w[i] + w[j] for i in range(n) for j in range(n) if abs(d[i, j]) > tol}
    return vals.pop() if len(vals) == 1 else None


_SIMPLE_VALUES = (
    (0, 1, -1),
    (0, 1, -1, 2, -2, Fraction(1, 2), Fraction(-1, 2), exact(0, 1), exact(0, -1)),
)


@functools.lru_cache(maxsize=None)
def _candidate_table(level: int, k: int):
    """Nonzero value tuples of length k, fewest and smallest entries first."""
    nums = np.array([complex(v) for v in _SIMPLE_VALUES[level]])
    idx = np.array([c for c in itertools.product(range(len(nums)), repeat=k) if any(c)], dtype=int)
    cost = (idx != 0).sum(axis=1) * 10 + np.abs(nums[idx]).sum(axis=1)
    idx = idx[np.argsort(cost, kind="stable")]
    return idx, nums[idx]


def _exact_base_changes(n: int):
    for g in _base_changes(n):
        yield Matrix.from_rows([[Fraction(x).limit_denominator(4) for x in row] for row in g.real])


def _batch_invariants_match(batch, inv: CogredientInvariants, ref_spec, tol=1e-6) -> np.ndarray:
    """Cheap float screen of a stack of square forms against target invariants."""
    ranks = [np.linalg.matrix_rank(x, tol=1e-8) for x in (batch, batch + batch.transpose(0, 2, 1),
                                                           batch - batch.transpose(0, 2, 1))]
    ok = (ranks[0] == inv.rank) & (ranks[1] == inv.rank_sym) & (ranks[2] == inv.rank_skew)
    if inv.rank == batch.shape[1] and ref_spec is not None and ok.any():
        idx = np.nonzero(ok)[0]
        sub = batch[idx]
        cos = np.linalg.solve(sub.transpose(0, 2, 1), sub)
        ev = np.sort_complex(np.round(np.linalg.eigvals(cos), 6))
        ok[idx] = np.all(np.abs(ev - ref_spec) < tol * 10, axis=1)
    return ok


def _exact_jump_search(d: Matrix, target: Matrix, max_candidates: int = 60000, max_bases: int = 200):
    """Exact direction with small Gaussian-rational entries, or None (n <= 3)."""
    n = d.rows
    inv_t = cogredient_invariants(target)
    ref_spec = None
    if inv_t.rank == n:
        ref_spec = np.sort_complex(np.round(np.linalg.eigvals(cosquare(target.to_float()).to_numpy()), 6))
    # the wider value set is only tried on the given representative
    for level, bases in ((0, max_bases), (1, 1)):
        for count, p in enumerate(_exact_base_changes(n)):
            if count >= bases:
                break
            dp = p.T @ d @ p
            dn = dp.to_numpy()
            for w in _weight_vectors(n):
                a = _homogeneous_np(dn, w)
                if a is None:
                    continue
                wt = np.add.outer(np.array(w), np.array(w))
                for b in sorted({int(x) for x in wt.flat if x > a}):
                    pos = [(i, j) for i in range(n) for j in range(n) if wt[i, j] == b]
                    if len(_SIMPLE_VALUES[level]) ** len(pos) > max_candidates:
                        continue
                    idx, vals = _candidate_table(level, len(pos))
                    batch = np.repeat(dn[None, :, :], len(idx), axis=0)
                    for k, (i, j) in enumerate(pos):
                        batch[:, i, j] += vals[:, k]
                    for h in np.nonzero(_batch_invariants_match(batch, inv_t, ref_spec))[0][:20]:
                        rows = [[0] * n for _ in range(n)]
                        for k, (i, j) in enumerate(pos):
                            rows[i][j] = _SIMPLE_VALUES[level][idx[h][k]]
                        e = Matrix.from_rows(rows)
                        if cogredient_invariants(dp + e) == inv_t:
                            pinv = p.inverse()
                            return pinv.T @ e @ pinv, w
    return None


def find_jump_direction(d: Matrix, target: Matrix, seed: int = 0, restarts: int = 8,
                        tol: float = DEFAULT_TOL, max_bases: int = 400):
    """Direction E with D + tE congruent to the target for every t != 0, or None.

    The source is first moved to a representative P^T D P that is homogeneous
    of degree a for diagonal weights w.  E' is supported on the entries of a
    single weight b > a, and P^T D P + E' is found in the target's orbit by
    solving G^T T G = P^T D P on all other entries.  Conjugating by
    diag(t^w) then carries P^T D P + E' to a multiple of P^T D P + t^(b-a) E',
    and E = P^-T E' P^-1 transports the curve back to D.
    """
    n = d.rows
    if d.eps is None and target.eps is None and n <= 3:
        found = _exact_jump_search(d, target)
        if found is not None:
            return found
    fd, ft = _to_float_pair(d, target)
    dn0, tn = fd.to_numpy(), ft.to_numpy()
    for count, p in enumerate(_base_changes(n)):
        if count >= max_bases:
            break
        dn = p.T @ dn0 @ p
        for w in _weight_vectors(n):
            a = _homogeneous_np(dn, w)
            if a is None:
                continue
            wt = np.add.outer(np.array(w), np.array(w))
            for b in sorted({int(x) for x in wt.flat if x > a}):
                fixed = wt != b
                goal = np.where(fixed, dn, 0)
                for r in range(restarts):
                    g = _lm_solve(tn, goal, _restart_rng(seed, r), tol, mask=fixed)
                    if g is None:
                        continue
                    e = np.where(fixed, 0, g.T @ tn @ g)
                    if np.abs(e).max() < 1e-6:
                        continue
                    pinv = np.linalg.inv(p)
                    return Matrix.from_numpy(pinv.T @ e @ pinv, fd.eps), w
    return None


# the 3-dimensional moduli space

FIGURE4_NODES = (
    ("C1(p:q)", "C1", True), ("C1(0:0)", "C1", False), ("C1(1:1)", "C1", False),
    ("C1(1:-1)", "C1", False), ("C2", None, False), ("C3", None, False), ("C4", None, False),
    ("C5(p:q)", "C5", True), ("C5(0:0)", "C5", False), ("C5(1:1)", "C5", False),
    ("C5(1:-1)", "C5", False), ("C6", None, False),
)

FIGURE4_EDGES = (
    ("C1(0:0)", "C1(p:q)"),
    ("C2", "C1(1:-1)"),
    ("C3", "C1(p:q)"),
    ("C4", "C1(1:1)"),
    ("C5(0:0)", "C2"),
    ("C5(0:0)", "C4"),
    ("C5(0:0)", "C5(p:q)"),
    ("C5(1:-1)", "C2"),
    ("C5(1:1)", "C4"),
    ("C5(p:q)", "C1(p:q)"),
    ("C5(p:q)", "C3"),
    ("C6", "C1(p:q)"),
    ("C6", "C2"),
    ("C6", "C3"),
    ("C6", "C5(1:-1)"),
)

FIGURE4_NON_EDGES = tuple([("C6", "C4")] + [(n, "C6") for n, _, _ in FIGURE4_NODES if n != "C6"])

# generic members used when a family node is checked
FAMILY_SAMPLES = {
    "C1(p:q)": ((1, 2), (1, 3), (2, 3)),
    "C5(p:q)": ((1, 2), (2, 5)),
}


def node_matrices(node_id: str) -> list:
    """Representative matrices of a node: sampled points for a family node."""
    if node_id in FAMILY_SAMPLES:
        k = int(node_id[1])
        return [c_family(k, pt) for pt in FAMILY_SAMPLES[node_id]]
    if "(" in node_id:
        k = int(node_id[1])
        p, q = node_id[3:-1].split(":")
        return [c_family(k, (int(p), int(q)))]
    return [c_family(int(node_id[1:]))]


def bilinear_deformation_graph_3() -> DeformationGraph:
    nodes = [GraphNode(i, i, cluster, fam) for i, cluster, fam in FIGURE4_NODES]
    family_ids = {i for i, _, fam in FIGURE4_NODES if fam}
    edges = [(s, d, JUMP_FAMILY if d in family_ids else JUMP_POINT) for s, d in FIGURE4_EDGES]
    return DeformationGraph("bilinear3", nodes, edges)


@dataclass
class EdgeCheck:
    source: str
    target: str
    samples: list
    ok: bool


def check_edge(src_id: str, dst_id: str, seed: int = 0) -> EdgeCheck:
    """Find and verify a jump curve for every sampled (source, target) pair."""
    samples = []
    ok = True
    for d in node_matrices(src_id):
        for t in node_matrices(dst_id):
            found = find_jump_direction(d, t, seed=seed)
            good = found is not None and verify_jump(d, [found[0]], t, seed=seed)
            samples.append((d, None if found is None else found[0], t, good))
            ok = ok and good
    return EdgeCheck(src_id, dst_id, samples, ok)


def check_non_edge(src_id: str, dst_id: str):
    """Reasons why each sampled source misses the target's orbit closure (None if one fails)."""
    reasons = []
    for d in node_matrices(src_id):
        for t in node_matrices(dst_id):
            why = closure_obstruction(d, t)
            if why is None:
                return None
            reasons.append(why)
    return reasons
