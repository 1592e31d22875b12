"""Exact Gaussian-rational and tolerance-tagged float scalars, dense matrices.

Every other module funnels its linear algebra through :class:`Scalar` and
:class:`Matrix`.  Exact values have rational real and imaginary parts; float
values carry a comparison tolerance ``eps``.  Mixing the two raises.
"""
from __future__ import annotations

import json
import math
from fractions import Fraction
from numbers import Rational

import numpy as np

DEFAULT_EPS = 1e-9

EXACT = "exact"
FLOAT = "float"


class MixedBackendError(TypeError):
    pass


class NonSquareError(ValueError):
    pass


class SingularMatrixError(ZeroDivisionError):
    pass


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot make an exact rational from {x!r}")


class Scalar:
    """A complex number, either exact (Fraction parts) or float with a tolerance."""

    __slots__ = ("re", "im", "eps")

    def __init__(self, re, im=0, eps: float | None = None):
        if eps is None:
            re, im = _frac(re), _frac(im)
        else:
            re, im = float(re), float(im)
        object.__setattr__(self, "re", re)
        object.__setattr__(self, "im", im)
        object.__setattr__(self, "eps", eps)

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    @property
    def backend(self) -> str:
        return EXACT if self.eps is None else FLOAT

    @property
    def is_exact(self) -> bool:
        return self.eps is None

    def _coerce(self, other) -> "Scalar":
        if isinstance(other, Scalar):
            if (other.eps is None) != (self.eps is None):
                raise MixedBackendError("cannot combine exact and float scalars")
            return other
        if isinstance(other, (int, Fraction)):
            return Scalar(other, 0, self.eps)
        if isinstance(other, (float, complex)) and self.eps is not None:
            z = complex(other)
            return Scalar(z.real, z.imag, self.eps)
        raise MixedBackendError(f"cannot combine {self.backend} scalar with {type(other).__name__}")

    def _make(self, re, im) -> "Scalar":
        return Scalar(re, im, self.eps)

    def __add__(self, other):
        o = self._coerce(other)
        return self._make(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return self._make(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, Matrix):
            return other * self
        o = self._coerce(other)
        return self._make(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __neg__(self):
        return self._make(-self.re, -self.im)

    def __pos__(self):
        return self

    def inverse(self) -> "Scalar":
        d = self.re * self.re + self.im * self.im
        if d == 0:
            raise ZeroDivisionError("inverse of zero scalar")
        return self._make(self.re / d, -self.im / d)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = self._make(1, 0)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conj(self) -> "Scalar":
        return self._make(self.re, -self.im)

    def abs2(self):
        return self.re * self.re + self.im * self.im

    def __abs__(self) -> float:
        return math.hypot(float(self.re), float(self.im))

    def is_zero(self, scale: float = 1.0) -> bool:
        if self.eps is None:
            return self.re == 0 and self.im == 0
        return abs(self) <= self.eps * max(1.0, scale)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)) or isinstance(other, Scalar):
            try:
                o = self._coerce(other)
            except MixedBackendError:
                return NotImplemented
            if self.eps is None:
                return self.re == o.re and self.im == o.im
            d = self - o
            return d.is_zero(max(abs(self), abs(o)))
        if isinstance(other, (float, complex)) and self.eps is not None:
            return self == self._coerce(other)
        return NotImplemented

    def __hash__(self):
        if self.eps is not None:
            raise TypeError("float scalars compare with a tolerance and are unhashable")
        return hash((self.re, self.im))

    def sort_key(self):
        """Total order: real part first, imaginary part breaks ties."""
        return (self.re, self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def to_float(self, eps: float = DEFAULT_EPS) -> "Scalar":
        return Scalar(float(self.re), float(self.im), eps if self.eps is None else self.eps)

    def to_json(self):
        if self.eps is None:
            return [_frac_str(self.re), _frac_str(self.im)]
        return [self.re, self.im]

    def __repr__(self):
        return f"Scalar({self})"

    def __str__(self):
        if self.eps is None:
            re, im = str(self.re), str(self.im)
        else:
            re, im = repr(self.re), repr(self.im)
        if self.im == 0:
            return re
        if self.re == 0:
            return f"{im}i"
        return f"{re}{'+' if self.im > 0 else ''}{im}i"


def _frac_str(f: Fraction) -> str:
    return f"{f.numerator}/{f.denominator}"


def exact(re, im=0) -> Scalar:
    return Scalar(re, im)


def flt(z, eps: float = DEFAULT_EPS) -> Scalar:
    z = complex(z)
    return Scalar(z.real, z.imag, eps)


def parse_scalar(text: str, backend: str = EXACT, eps: float = DEFAULT_EPS) -> Scalar:
    """Parse ``"3"``, ``"-1/2"``, ``"1/2+3/4i"``, ``"i"`` or a float literal."""
    t = text.strip().replace(" ", "")
    if backend == FLOAT:
        return flt(complex(t.replace("i", "j")), eps)
    if not t.endswith("i"):
        return exact(Fraction(t))
    body = t[:-1]
    cut = max(body.rfind("+"), body.rfind("-"))
    while cut > 0 and body[cut - 1] in "eE":
        cut = max(body.rfind("+", 0, cut - 1), body.rfind("-", 0, cut - 1))
    if cut <= 0:
        re_part, im_part = "0", body
    else:
        re_part, im_part = body[:cut], body[cut:]
    if im_part in ("", "+"):
        im_part = "1"
    elif im_part == "-":
        im_part = "-1"
    return exact(Fraction(re_part), Fraction(im_part))


def scalar_from_json(pair, backend: str, eps: float = DEFAULT_EPS) -> Scalar:
    re, im = pair
    if backend == EXACT:
        return exact(Fraction(re), Fraction(im))
    return Scalar(re, im, eps)


def rational_sqrt(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def gaussian_sqrt(z: Scalar) -> Scalar | None:
    """Exact square root of a Gaussian rational, or None when it leaves the field."""
    if not z.is_exact:
        w = complex(z) ** 0.5
        return Scalar(w.real, w.imag, z.eps)
    a, b = z.re, z.im
    if b == 0:
        if a >= 0:
            r = rational_sqrt(a)
            return None if r is None else exact(r)
        r = rational_sqrt(-a)
        return None if r is None else exact(0, r)
    mod = rational_sqrt(a * a + b * b)
    if mod is None:
        return None
    x = rational_sqrt((a + mod) / 2)
    if x is None or x == 0:
        return None
    return exact(x, b / (2 * x))


class Matrix:
    """Dense row-major matrix of scalars sharing one backend."""

    __slots__ = ("rows", "cols", "entries", "eps")

    def __init__(self, rows: int, cols: int, entries, eps: float | None = None):
        entries = tuple(entries)
        if len(entries) != rows * cols:
            raise ValueError(f"expected {rows * cols} entries, got {len(entries)}")
        conv = []
        for e in entries:
            if isinstance(e, Scalar):
                if (e.eps is None) != (eps is None):
                    raise MixedBackendError("matrix entries must share the matrix backend")
                conv.append(e)
            elif eps is None:
                conv.append(exact(e))
            else:
                conv.append(flt(e, eps))
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", tuple(conv))
        object.__setattr__(self, "eps", eps)

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    # construction

    @classmethod
    def from_rows(cls, rows, eps: float | None = None) -> "Matrix":
        rows = [list(r) for r in rows]
        if not rows:
            return cls(0, 0, [], eps)
        ncols = len(rows[0])
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged rows")
        flat = [x for r in rows for x in r]
        if eps is None:
            for x in flat:
                if isinstance(x, Scalar) and x.eps is not None:
                    eps = x.eps
                    break
        return cls(len(rows), ncols, flat, eps)

    @classmethod
    def identity(cls, n: int, eps: float | None = None) -> "Matrix":
        return cls(n, n, [1 if i == j else 0 for i in range(n) for j in range(n)], eps)

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None, eps: float | None = None) -> "Matrix":
        cols = rows if cols is None else cols
        return cls(rows, cols, [0] * (rows * cols), eps)

    @classmethod
    def diag(cls, values, eps: float | None = None) -> "Matrix":
        values = list(values)
        n = len(values)
        rows = [[values[i] if i == j else 0 for j in range(n)] for i in range(n)]
        return cls.from_rows(rows, eps)

    @classmethod
    def unit(cls, n: int, i: int, j: int, eps: float | None = None) -> "Matrix":
        """Elementary matrix e_ij (0-based)."""
        return cls(n, n, [1 if (r, c) == (i, j) else 0 for r in range(n) for c in range(n)], eps)

    @classmethod
    def from_numpy(cls, arr, eps: float = DEFAULT_EPS) -> "Matrix":
        arr = np.asarray(arr, dtype=complex)
        r, c = arr.shape
        return cls(r, c, [Scalar(z.real, z.imag, eps) for z in arr.ravel()], eps)

    # access

    @property
    def backend(self) -> str:
        return EXACT if self.eps is None else FLOAT

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, ij) -> Scalar:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int):
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def to_rows(self):
        return [list(self.row(i)) for i in range(self.rows)]

    def _scalar(self, x) -> Scalar:
        if isinstance(x, Scalar):
            if (x.eps is None) != (self.eps is None):
                raise MixedBackendError("scalar backend differs from matrix backend")
            return x
        return exact(x) if self.eps is None else flt(x, self.eps)

    def _check(self, other: "Matrix"):
        if (other.eps is None) != (self.eps is None):
            raise MixedBackendError("cannot combine exact and float matrices")

    # arithmetic

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        return Matrix(self.rows, self.cols, [a + b for a, b in zip(self.entries, other.entries)], self.eps)

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        return Matrix(self.rows, self.cols, [a - b for a, b in zip(self.entries, other.entries)], self.eps)

    def __neg__(self) -> "Matrix":
        return Matrix(self.rows, self.cols, [-a for a in self.entries], self.eps)

    def scale(self, c) -> "Matrix":
        c = self._scalar(c)
        return Matrix(self.rows, self.cols, [c * a for a in self.entries], self.eps)

    def __mul__(self, other):
        if isinstance(other, Matrix):
            return self @ other
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        zero = self._scalar(0)
        out = []
        for i in range(self.rows):
            r = self.row(i)
            for j in range(other.cols):
                acc = zero
                for k in range(self.cols):
                    a = r[k]
                    if a.re == 0 and a.im == 0:
                        continue
                    b = other.entries[k * other.cols + j]
                    if b.re == 0 and b.im == 0:
                        continue
                    acc = acc + a * b
                out.append(acc)
        return Matrix(self.rows, other.cols, out, self.eps)

    def __pow__(self, k: int) -> "Matrix":
        if not self.is_square:
            raise NonSquareError("power of a non-square matrix")
        if k < 0:
            return self.inverse() ** (-k)
        out = Matrix.identity(self.rows, self.eps)
        base = self
        while k:
            if k & 1:
                out = out @ base
            base = base @ base
            k >>= 1
        return out

    @property
    def T(self) -> "Matrix":
        return Matrix(self.cols, self.rows,
                      [self[i, j] for j in range(self.cols) for i in range(self.rows)], self.eps)

    def conj_transpose(self) -> "Matrix":
        return Matrix(self.cols, self.rows,
                      [self[i, j].conj() for j in range(self.cols) for i in range(self.rows)], self.eps)

    def trace(self) -> Scalar:
        acc = self._scalar(0)
        for i in range(min(self.rows, self.cols)):
            acc = acc + self[i, i]
        return acc

    def direct_sum(self, other: "Matrix") -> "Matrix":
        self._check(other)
        r, c = self.rows + other.rows, self.cols + other.cols
        rows = [[0] * c for _ in range(r)]
        for i in range(self.rows):
            for j in range(self.cols):
                rows[i][j] = self[i, j]
        for i in range(other.rows):
            for j in range(other.cols):
                rows[self.rows + i][self.cols + j] = other[i, j]
        return Matrix.from_rows(rows, self.eps) if r else Matrix(0, 0, [], self.eps)

    def vec(self):
        """Column-stacking vectorisation."""
        return [self[i, j] for j in range(self.cols) for i in range(self.rows)]

    @classmethod
    def unvec(cls, v, rows: int, cols: int, eps: float | None = None) -> "Matrix":
        v = list(v)
        return cls(rows, cols, [v[j * rows + i] for i in range(rows) for j in range(cols)], eps)

    def to_float(self, eps: float = DEFAULT_EPS) -> "Matrix":
        if self.eps is not None:
            return self
        return Matrix(self.rows, self.cols, [e.to_float(eps) for e in self.entries], eps)

    def to_numpy(self) -> np.ndarray:
        return np.array([complex(e) for e in self.entries], dtype=complex).reshape(self.rows, self.cols)

    def max_abs(self) -> float:
        return max((abs(e) for e in self.entries), default=0.0)

    def is_zero(self) -> bool:
        if self.eps is None:
            return all(e.re == 0 and e.im == 0 for e in self.entries)
        return self.max_abs() <= self.eps

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if (self.rows, self.cols) != (other.rows, other.cols):
            return False
        if (self.eps is None) != (other.eps is None):
            return False
        if self.eps is None:
            return self.entries == other.entries
        scale = max(1.0, self.max_abs(), other.max_abs())
        return (self - other).max_abs() <= self.eps * scale

    def __hash__(self):
        if self.eps is not None:
            raise TypeError("float matrices are unhashable")
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self):
        body = "; ".join(", ".join(str(x) for x in self.row(i)) for i in range(self.rows))
        return f"Matrix[{self.backend}]({body})"

    def pretty(self) -> str:
        cells = [[str(x) for x in self.row(i)] for i in range(self.rows)]
        width = max((len(c) for r in cells for c in r), default=1)
        return "\n".join("[" + " ".join(c.rjust(width) for c in r) + "]" for r in cells)

    # linear algebra

    def rank(self) -> int:
        return rank(self)

    def kernel_basis(self):
        return kernel_basis(self)

    def det(self) -> Scalar:
        return det(self)

    def inverse(self) -> "Matrix":
        return inverse(self)

    # serialisation

    def to_json(self) -> dict:
        return {"backend": self.backend, "rows": self.rows, "cols": self.cols,
                "entries": [e.to_json() for e in self.entries]}

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def from_json(cls, data, eps: float = DEFAULT_EPS) -> "Matrix":
        if isinstance(data, str):
            data = json.loads(data)
        backend = data["backend"]
        if backend not in (EXACT, FLOAT):
            raise ValueError(f"unknown backend {backend!r}")
        e = None if backend == EXACT else eps
        return cls(data["rows"], data["cols"],
                   [scalar_from_json(p, backend, eps) for p in data["entries"]], e)


# Elimination kernels.  Exact rows are lists of (re, im) Fraction pairs with a
# real-only fast path; float rows go through numpy.

def _is_real(m: Matrix) -> bool:
    return all(e.im == 0 for e in m.entries)


def _exact_echelon(m: Matrix, augment: Matrix | None = None):
    """Reduced row echelon form over Q or Q(i). Returns (rows, pivot_cols)."""
    real = _is_real(m) and (augment is None or _is_real(augment))
    width = m.cols + (augment.cols if augment is not None else 0)
    rows = []
    for i in range(m.rows):
        r = list(m.row(i)) + (list(augment.row(i)) if augment is not None else [])
        rows.append([e.re for e in r] if real else [(e.re, e.im) for e in r])
    if real:
        zero = Fraction(0)

        def nz(x):
            return x != 0

        def mul(a, b):
            return a * b

        def sub(a, b):
            return a - b

        def inv(a):
            return 1 / a
    else:
        zero = (Fraction(0), Fraction(0))

        def nz(x):
            return x[0] != 0 or x[1] != 0

        def mul(a, b):
            return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])

        def sub(a, b):
            return (a[0] - b[0], a[1] - b[1])

        def inv(a):
            d = a[0] * a[0] + a[1] * a[1]
            return (a[0] / d, -a[1] / d)

    pivots = []
    r = 0
    for c in range(m.cols):
        piv = None
        for i in range(r, len(rows)):
            if nz(rows[i][c]):
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pr = rows[r]
        f = inv(pr[c])
        nzcols = [k for k in range(c, width) if nz(pr[k])]
        for k in nzcols:
            pr[k] = mul(pr[k], f)
        for i in range(len(rows)):
            if i == r:
                continue
            row = rows[i]
            a = row[c]
            if not nz(a):
                continue
            for k in nzcols:
                row[k] = sub(row[k], mul(a, pr[k]))
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    if real:
        rows = [[(x, zero) for x in row] for row in rows]
    return rows, pivots


def _float_echelon(m: Matrix, augment: Matrix | None = None):
    a = m.to_numpy()
    if augment is not None:
        a = np.hstack([a, augment.to_numpy()])
    a = a.copy()
    scale = np.abs(m.to_numpy()).max() if m.rows and m.cols else 0.0
    tol = m.eps * max(1.0, scale)
    pivots = []
    r = 0
    nrows = a.shape[0]
    for c in range(m.cols):
        if r == nrows:
            break
        i = r + int(np.argmax(np.abs(a[r:, c])))
        if abs(a[i, c]) <= tol or scale == 0.0:
            a[r:, c] = 0.0
            continue
        a[[r, i]] = a[[i, r]]
        a[r] = a[r] / a[r, c]
        others = [k for k in range(nrows) if k != r]
        a[others] -= np.outer(a[others, c], a[r])
        pivots.append(c)
        r += 1
    return a, pivots


def rank(m: Matrix) -> int:
    if m.rows == 0 or m.cols == 0:
        return 0
    if m.eps is None:
        return len(_exact_echelon(m)[1])
    return len(_float_echelon(m)[1])


def kernel_basis(m: Matrix) -> list:
    """Basis of the right null space as lists of scalars (one free variable set to 1)."""
    if m.eps is None:
        rows, pivots = _exact_echelon(m)
        get = lambda i, k: exact(*rows[i][k])  # noqa: E731
    else:
        a, pivots = _float_echelon(m)
        get = lambda i, k: flt(a[i, k], m.eps)  # noqa: E731
    free = [c for c in range(m.cols) if c not in set(pivots)]
    one = exact(1) if m.eps is None else flt(1, m.eps)
    zero = one * 0
    basis = []
    for f in free:
        v = [zero] * m.cols
        v[f] = one
        for i, p in enumerate(pivots):
            v[p] = -get(i, f)
        basis.append(v)
    return basis


def solve(a: Matrix, b: Matrix) -> Matrix | None:
    """A particular solution X of A X = B, or None if inconsistent."""
    a._check(b)
    if a.rows != b.rows:
        raise ValueError("row count mismatch")
    zero = exact(0) if a.eps is None else flt(0, a.eps)
    if a.eps is None:
        rows, pivots = _exact_echelon(a, b)
        cell = lambda i, k: exact(*rows[i][k])  # noqa: E731
        nrows = len(rows)
    else:
        arr, pivots = _float_echelon(a, b)
        cell = lambda i, k: flt(arr[i, k], a.eps)  # noqa: E731
        nrows = arr.shape[0]
    for i in range(len(pivots), nrows):
        for j in range(b.cols):
            v = cell(i, a.cols + j)
            if not v.is_zero(max(1.0, b.max_abs())):
                return None
    out = [[zero] * b.cols for _ in range(a.cols)]
    for i, p in enumerate(pivots):
        for j in range(b.cols):
            out[p][j] = cell(i, a.cols + j)
    return Matrix.from_rows(out, a.eps) if a.cols else Matrix(0, b.cols, [], a.eps)


def det(m: Matrix) -> Scalar:
    if not m.is_square:
        raise NonSquareError("determinant of a non-square matrix")
    if m.eps is not None:
        z = complex(np.linalg.det(m.to_numpy())) if m.rows else 1.0
        return flt(z, m.eps)
    n = m.rows
    a = [list(m.row(i)) for i in range(n)]
    d = exact(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if not a[i][c].is_zero()), None)
        if piv is None:
            return exact(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            d = -d
        d = d * a[c][c]
        inv = a[c][c].inverse()
        for i in range(c + 1, n):
            if a[i][c].is_zero():
                continue
            f = a[i][c] * inv
            for k in range(c, n):
                a[i][k] = a[i][k] - f * a[c][k]
    return d


def inverse(m: Matrix) -> Matrix:
    if not m.is_square:
        raise NonSquareError("inverse of a non-square matrix")
    n = m.rows
    if m.eps is not None:
        if rank(m) < n:
            raise SingularMatrixError("matrix is singular")
        return Matrix.from_numpy(np.linalg.inv(m.to_numpy()), m.eps)
    rows, pivots = _exact_echelon(m, Matrix.identity(n))
    if len(pivots) < n:
        raise SingularMatrixError("matrix is singular")
    return Matrix(n, n, [exact(*rows[i][n + j]) for i in range(n) for j in range(n)])


def char_poly(m: Matrix) -> list:
    """Monic characteristic polynomial det(tI - M), highest degree first."""
    if not m.is_square:
        raise NonSquareError("characteristic polynomial of a non-square matrix")
    n = m.rows
    if m.eps is not None:
        coeffs = np.poly(m.to_numpy()) if n else np.array([1.0])
        return [flt(c, m.eps) for c in coeffs]
    # Faddeev-LeVerrier
    coeffs = [exact(1)]
    ident = Matrix.identity(n)
    mk = Matrix.zeros(n)
    for k in range(1, n + 1):
        mk = m @ (mk + ident.scale(coeffs[-1]))
        coeffs.append(-(mk.trace()) / k)
    return coeffs


def poly_eval_matrix(coeffs, m: Matrix) -> Matrix:
    """Horner evaluation of a polynomial (highest degree first) at a square matrix."""
    n = m.rows
    out = Matrix.zeros(n, eps=m.eps)
    ident = Matrix.identity(n, m.eps)
    for c in coeffs:
        out = out @ m + ident.scale(c)
    return out


def kron(a: Matrix, b: Matrix) -> Matrix:
    a._check(b)
    rows, cols = a.rows * b.rows, a.cols * b.cols
    out = []
    for i in range(rows):
        ai, bi = divmod(i, b.rows)
        for j in range(cols):
            aj, bj = divmod(j, b.cols)
            out.append(a[ai, aj] * b[bi, bj])
    return Matrix(rows, cols, out, a.eps)


def linear_operator(fn, n: int, eps: float | None = None) -> Matrix:
    """Matrix of a linear map on n x n matrices, acting on column-stacked vec."""
    cols = []
    for j in range(n):
        for i in range(n):
            cols.append(fn(Matrix.unit(n, i, j, eps)).vec())
    size = n * n
    return Matrix(size, size, [cols[c][r] for r in range(size) for c in range(size)], eps)


def commutator_operator(a: Matrix) -> Matrix:
    """Matrix of B -> AB - BA acting on vec(B) (column stacking)."""
    n = a.rows
    ident = Matrix.identity(n, a.eps)
    return kron(ident, a) - kron(a.T, ident)


def matrices_to_columns(mats, eps: float | None = None) -> Matrix:
    """Stack vec(M) of each matrix as the columns of one matrix."""
    mats = list(mats)
    if not mats:
        return Matrix(0, 0, [], eps)
    vecs = [mm.vec() for mm in mats]
    size = len(vecs[0])
    return Matrix(size, len(vecs), [vecs[j][i] for i in range(size) for j in range(len(vecs))], mats[0].eps)


def column_space_basis(m: Matrix) -> list:
    """Columns of M (as scalar lists) at the pivot positions, a basis of its image."""
    if m.rows == 0 or m.cols == 0:
        return []
    pivots = _exact_echelon(m)[1] if m.eps is None else _float_echelon(m)[1]
    return [[m[i, c] for i in range(m.rows)] for c in pivots]
