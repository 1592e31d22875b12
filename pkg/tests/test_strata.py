from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from matstrata.deformation import merge_witness
from matstrata.jordan import jordan_block
from matstrata.linalg import Matrix, exact
from matstrata.strata import (Stratum, canonical_matrix, canonical_projective_rep,
                              classify_scalar_similarity, enumerate_strata,
                              merges_to, normalize_index, orbifold_label, partitions,
                              scalar_similar, symmetry_group)

import oracles

P = [Fraction(x) for x in (2, 3, 5, 7, 11)]

# printed tables, written as functions of the parameters
TABLES = {
    (2, 0): lambda p: [[p[0], 0], [0, p[0]]],
    (1, 1): lambda p: [[p[0], 1], [0, p[1]]],
    (3, 0, 0): lambda p: [[p[0], 0, 0], [0, p[0], 0], [0, 0, p[0]]],
    (2, 1, 0): lambda p: [[p[0], 0, 0], [0, p[0], 1], [0, 0, p[1]]],
    (1, 1, 1): lambda p: [[p[0], 1, 0], [0, p[1], 1], [0, 0, p[2]]],
    (4, 0, 0, 0): lambda p: [[p[0], 0, 0, 0], [0, p[0], 0, 0], [0, 0, p[0], 0], [0, 0, 0, p[0]]],
    (3, 1, 0, 0): lambda p: [[p[0], 0, 0, 0], [0, p[0], 0, 0], [0, 0, p[0], 1], [0, 0, 0, p[1]]],
    (2, 2, 0, 0): lambda p: [[p[0], 1, 0, 0], [0, p[1], 0, 0], [0, 0, p[0], 1], [0, 0, 0, p[1]]],
    (2, 1, 1, 0): lambda p: [[p[0], 0, 0, 0], [0, p[0], 1, 0], [0, 0, p[1], 1], [0, 0, 0, p[2]]],
    (1, 1, 1, 1): lambda p: [[p[0], 1, 0, 0], [0, p[1], 1, 0], [0, 0, p[2], 1], [0, 0, 0, p[3]]],
}


def ten_by_ten(p):
    diag = [p[0], p[0], p[1], p[2], p[3], p[0], p[1], p[2], p[3], p[4]]
    ones = {(1, 2), (2, 3), (3, 4), (5, 6), (6, 7), (7, 8), (8, 9)}
    return [[diag[i] if i == j else (1 if (i, j) in ones else 0) for j in range(10)]
            for i in range(10)]


@pytest.mark.parametrize("index", sorted(TABLES))
def test_canonical_tables(index):
    k = sum(1 for x in index if x)
    assert canonical_matrix(index, P[:k]) == Matrix.from_rows(TABLES[index](P))


def test_ten_by_ten_example():
    assert canonical_matrix([3, 2, 2, 2, 1, 0, 0, 0, 0, 0], P) == Matrix.from_rows(ten_by_ten(P))


def test_parameter_arity_checked():
    with pytest.raises(ValueError):
        canonical_matrix([1, 1], [1])


@pytest.mark.parametrize("n", range(1, 11))
def test_stratum_count_is_partition_count(n):
    assert len(enumerate_strata(n)) == oracles.partition_count(n)


def test_small_enumerations():
    assert [list(s.index) for s in enumerate_strata(2)] == [[2, 0], [1, 1]]
    assert [list(s.index) for s in enumerate_strata(4)] == [
        [4, 0, 0, 0], [3, 1, 0, 0], [2, 2, 0, 0], [2, 1, 1, 0], [1, 1, 1, 1]]


def test_normalize_index_pads_and_rejects():
    assert normalize_index([2, 1]) == (2, 1, 0)
    with pytest.raises(ValueError):
        normalize_index([1, 2])


@pytest.mark.parametrize("index, label", [
    ((2, 0), "P^0"), ((1, 1), "P^1/Sigma_2"),
    ((3, 0, 0), "P^0"), ((2, 1, 0), "P^1"), ((1, 1, 1), "P^2/Sigma_3"),
    ((4, 0, 0, 0), "P^0"), ((3, 1, 0, 0), "P^1"), ((2, 2, 0, 0), "P^1/Sigma_2"),
    ((2, 1, 1, 0), "P^2/Sigma_2"), ((1, 1, 1, 1), "P^3/Sigma_4"),
    ((3, 2, 2, 2, 1, 0, 0, 0, 0, 0), "P^4/Sigma_3"),
])
def test_orbifold_labels(index, label):
    assert orbifold_label(index) == label


def test_symmetry_blocks():
    assert symmetry_group([3, 2, 2, 2, 1]) == [[1], [2, 3, 4], [5]]
    assert symmetry_group([1, 1, 1, 1]) == [[1, 2, 3, 4]]
    assert symmetry_group([3, 1, 0, 0]) == [[1], [2]]


def test_projective_rep_prefers_smaller():
    assert canonical_projective_rep([3, 1], [[1, 2]]) == (1, Fraction(1, 3))


def test_projective_rep_keeps_generic_point():
    assert canonical_projective_rep([0, 0], [[1, 2]]) == (0, 0)


@given(st.lists(st.integers(-3, 3), min_size=2, max_size=4), st.integers(1, 5))
def test_projective_rep_is_scale_and_swap_invariant(coords, c):
    blocks = [list(range(1, len(coords) + 1))]
    ref = canonical_projective_rep(coords, blocks)
    assert canonical_projective_rep([x * c for x in reversed(coords)], blocks) == ref


@pytest.mark.parametrize("k, m, expect", [
    ([1, 1], [2, 0], True), ([2, 1, 0], [3, 0, 0], True), ([2, 2, 0, 0], [3, 1, 0, 0], False),
])
def test_merges_examples(k, m, expect):
    assert merges_to(k, m) is expect


@pytest.mark.parametrize("n", range(2, 7))
def test_merges_match_oracle(n):
    idx = [s.index for s in enumerate_strata(n)]
    for k in idx:
        for m in idx:
            assert merges_to(k, m) == oracles.merges(k, m)


def test_partitions_are_distinct_and_sum():
    for n in range(1, 9):
        ps = partitions(n)
        assert len(set(ps)) == len(ps) and all(sum(p) == n for p in ps)


def test_classify_identity():
    st_, point = classify_scalar_similarity(Matrix.identity(2))
    assert st_.index == (2, 0) and point == (1,)


def test_classify_jordan_block():
    st_, point = classify_scalar_similarity(Matrix.from_rows([[1, 1], [0, 1]]))
    assert st_.index == (1, 1) and point == (1, 1)


def test_classify_mixed_4x4():
    m = Matrix.from_rows([[1]]).direct_sum(jordan_block(1, 2)).direct_sum(Matrix.from_rows([[2]]))
    st_, point = classify_scalar_similarity(m)
    assert st_.index == (2, 1, 1, 0)
    assert point == canonical_projective_rep([1, 1, 2], st_.symmetry_blocks)


def test_scalar_similar_witness():
    a = Matrix.from_rows([[1, 1], [0, 1]])
    b = Matrix.from_rows([[2, 2], [0, 2]])
    c, g = scalar_similar(a, b)
    assert c == 2
    assert (g.inverse() @ a @ g).scale(c) == b


def test_scalar_similar_distinct_strata():
    assert scalar_similar(Matrix.identity(2), Matrix.from_rows([[1, 1], [0, 1]])) is None


@st.composite
def stratum_points(draw):
    n = draw(st.integers(1, 5))
    index = draw(st.sampled_from([s.index for s in enumerate_strata(n)]))
    k = sum(1 for x in index if x)
    params = draw(st.lists(st.integers(-3, 3), min_size=k, max_size=k))
    return index, params


@given(stratum_points())
def test_classification_round_trip(point):
    index, params = point
    st_, rep = classify_scalar_similarity(canonical_matrix(index, params))
    assert st_.index == Stratum(index).index
    assert rep == canonical_projective_rep(params, st_.symmetry_blocks) or all(x == 0 for x in params)


@given(stratum_points(), st.integers(1, 4))
def test_classification_is_scale_invariant(point, c):
    index, params = point
    m = canonical_matrix(index, params)
    assert classify_scalar_similarity(m) == classify_scalar_similarity(m.scale(exact(-c)))


@pytest.mark.parametrize("n", range(2, 6))
def test_merge_order_matches_degeneration(n):
    strata = enumerate_strata(n)
    for k in strata:
        for m in strata:
            assert merges_to(k.index, m.index) == (merge_witness(k.index, m.index) is not None), (k, m)
