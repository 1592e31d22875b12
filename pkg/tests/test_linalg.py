from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from matstrata.linalg import (DEFAULT_EPS, Matrix, MixedBackendError, Scalar, char_poly,
                              commutator_operator, det, exact, flt, gaussian_sqrt, kernel_basis,
                              parse_scalar, rank, scalar_from_json)

import oracles

small = st.integers(-4, 4)
rows_3x3 = st.lists(st.lists(small, min_size=3, max_size=3), min_size=3, max_size=3)
rows_rect = st.integers(1, 4).flatmap(
    lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=1, max_size=4))


def test_scalar_field_operations():
    a, b = exact(Fraction(1, 2), 1), exact(2, -3)
    assert (a * b) / b == a
    assert a - a == 0
    assert a.conj() == exact(Fraction(1, 2), -1)
    assert (a ** -2) * a * a == 1


def test_mixed_backends_raise():
    with pytest.raises(MixedBackendError):
        exact(1) + flt(1.0)


def test_float_equality_uses_eps():
    assert flt(1.0) == flt(1.0 + DEFAULT_EPS / 10)
    assert flt(1.0) != flt(1.0 + 1e-6)


@pytest.mark.parametrize("text, expect", [
    ("3", exact(3)), ("-2/7", exact(Fraction(-2, 7))), ("1+2i", exact(1, 2)),
    ("i", exact(0, 1)), ("1/2-3/4i", exact(Fraction(1, 2), Fraction(-3, 4))),
])
def test_parse_scalar(text, expect):
    assert parse_scalar(text) == expect


def test_scalar_json_round_trip():
    z = exact(Fraction(-5, 3), Fraction(1, 9))
    assert scalar_from_json(z.to_json(), "exact") == z


@pytest.mark.parametrize("z, root", [(exact(-1), exact(0, 1)), (exact(0, 2), exact(1, 1)),
                                     (exact(Fraction(9, 4)), exact(Fraction(3, 2))), (exact(2), None)])
def test_gaussian_sqrt(z, root):
    r = gaussian_sqrt(z)
    if root is None:
        assert r is None
    else:
        assert r * r == z


def test_determinant_example():
    assert det(Matrix.from_rows([[1, 1], [0, 1]])) == 2 - 1


def test_commutator_of_identity_has_full_kernel():
    assert len(kernel_basis(commutator_operator(Matrix.identity(2)))) == 4


def test_char_poly_example():
    assert char_poly(Matrix.from_rows([[1, 1], [0, 2]])) == [1, -3, 2]


@given(rows_rect)
def test_rank_matches_oracle(rows):
    assert rank(Matrix.from_rows(rows)) == oracles.frac_rank(rows)


@given(rows_rect)
def test_rank_nullity(rows):
    m = Matrix.from_rows(rows)
    basis = kernel_basis(m)
    assert rank(m) + len(basis) == m.cols
    for v in basis:
        assert (m @ Matrix.from_rows([[x] for x in v])).is_zero()


@given(rows_3x3)
def test_det_matches_leibniz(rows):
    assert det(Matrix.from_rows(rows)) == oracles.det_leibniz(rows)


@given(rows_3x3)
def test_inverse_when_invertible(rows):
    m = Matrix.from_rows(rows)
    if oracles.det_leibniz(rows) == 0:
        return
    assert m @ m.inverse() == Matrix.identity(3)


@given(rows_3x3)
def test_float_rank_agrees_on_integer_matrices(rows):
    assert rank(Matrix.from_rows(rows).to_float()) == oracles.frac_rank(rows)


def test_float_rank_ignores_roundoff():
    m = Matrix.from_numpy([[1e-17, 2e-16], [-3e-16, 0.0]])
    assert rank(m) == 0


@given(rows_3x3)
def test_matrix_json_round_trip(rows):
    m = Matrix.from_rows(rows)
    assert Matrix.from_json(m.to_json()) == m


def test_transpose_and_direct_sum():
    a = Matrix.from_rows([[1, 2], [3, 4]])
    s = a.direct_sum(Matrix.from_rows([[5]]))
    assert s.rows == 3 and s[2, 2] == 5 and s[0, 2] == 0
    assert a.T[0, 1] == 3
    assert isinstance(a[0, 0], Scalar)
