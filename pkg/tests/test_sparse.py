from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hochkind.errors import SchemaError
from hochkind.fields import QQ, PrimeField
from hochkind.sparse import (
    ColumnEliminator,
    SparseMatrix,
    column_prefix_ranks,
    image_prefix_dims,
    kernel_basis,
    rref,
    solve,
)
from oracle_dense import (
    dense_column_prefix_ranks,
    dense_image_prefix_dims,
    dense_mul,
    dense_rank,
)

F5 = PrimeField(5)


def dense_f5(draw_rows, draw_cols):
    return st.lists(
        st.lists(st.integers(min_value=0, max_value=4), min_size=draw_cols, max_size=draw_cols),
        min_size=draw_rows,
        max_size=draw_rows,
    )


matrix_f5 = st.integers(min_value=1, max_value=6).flatmap(
    lambda r: st.integers(min_value=1, max_value=6).flatmap(
        lambda c: dense_f5(r, c)
    )
)

matrix_q = st.integers(min_value=1, max_value=5).flatmap(
    lambda r: st.integers(min_value=1, max_value=5).flatmap(
        lambda c: st.lists(
            st.lists(
                st.fractions(min_value=-4, max_value=4, max_denominator=3),
                min_size=c,
                max_size=c,
            ),
            min_size=r,
            max_size=r,
        )
    )
)


def test_construction_normalizes():
    m = SparseMatrix(F5, 2, 2, {(0, 0): 5, (1, 1): 3, (0, 1): 0})
    assert m.triplets() == [(1, 1, 3)]
    with pytest.raises(SchemaError):
        SparseMatrix(F5, 2, 2, {(2, 0): 1})


def test_dense_roundtrip_and_products():
    a = SparseMatrix.from_dense(F5, [[1, 2], [0, 3]])
    b = SparseMatrix.from_dense(F5, [[4, 0], [1, 1]])
    assert a.mul(b).to_dense() == dense_mul(F5, a.to_dense(), b.to_dense())
    assert a.add(b).sub(b) == a
    assert a.transpose().transpose() == a
    assert SparseMatrix.identity(F5, 3).mul(SparseMatrix.identity(F5, 3)) == SparseMatrix.identity(F5, 3)


def test_apply_matches_product():
    a = SparseMatrix.from_dense(F5, [[1, 2, 0], [0, 3, 4]])
    vec = {0: 2, 2: 3}
    out = a.apply(vec)
    col = SparseMatrix(F5, 3, 1, {(i, 0): v for i, v in vec.items()})
    assert out == {i: v for (i, _, v) in a.mul(col).triplets()}


@given(matrix_f5)
def test_rank_matches_dense_oracle_f5(dense):
    m = SparseMatrix.from_dense(F5, dense)
    assert m.rank() == dense_rank(F5, dense)


@given(matrix_q)
def test_rank_matches_dense_oracle_q(dense):
    m = SparseMatrix.from_dense(QQ, dense)
    assert m.rank() == dense_rank(QQ, dense)


@given(matrix_f5)
def test_rank_plus_nullity_is_cols(dense):
    m = SparseMatrix.from_dense(F5, dense)
    kb = kernel_basis(m)
    assert m.rank() + len(kb) == m.cols
    for vec in kb:
        assert m.apply(vec) == {}


@given(matrix_q)
def test_kernel_vectors_are_killed_q(dense):
    m = SparseMatrix.from_dense(QQ, dense)
    for vec in kernel_basis(m):
        assert m.apply(vec) == {}


@given(matrix_f5, st.lists(st.integers(min_value=0, max_value=4), min_size=6, max_size=6))
def test_solve_recovers_consistent_rhs(dense, coeffs):
    m = SparseMatrix.from_dense(F5, dense)
    x = {j: coeffs[j] for j in range(m.cols) if coeffs[j]}
    rhs = m.apply(x)
    sol = solve(m, rhs)
    assert sol is not None
    assert m.apply(sol) == rhs


def test_solve_detects_inconsistent():
    m = SparseMatrix.from_dense(QQ, [[1, 1], [1, 1]])
    assert solve(m, {0: Fraction(1)}) is None
    assert solve(m, {0: Fraction(1), 1: Fraction(1)}) is not None


def test_rref_pivots_are_deterministic():
    m = SparseMatrix.from_dense(QQ, [[0, 1, 1], [1, 0, 1], [1, 1, 2]])
    rank, pivots, rows = rref(m)
    assert rank == 2
    assert [c for (_, c) in pivots] == [0, 1]
    again = rref(m)
    assert (rank, pivots) == (again[0], again[1])


@given(matrix_f5)
def test_column_prefix_ranks_match_dense(dense):
    m = SparseMatrix.from_dense(F5, dense)
    bounds = list(range(m.cols + 1))
    assert column_prefix_ranks(m, bounds) == dense_column_prefix_ranks(F5, dense, bounds)


@given(matrix_f5)
def test_image_prefix_dims_match_dense(dense):
    m = SparseMatrix.from_dense(F5, dense)
    bounds = list(range(m.rows + 1))
    assert image_prefix_dims(m, bounds) == dense_image_prefix_dims(F5, dense, bounds)


def test_column_eliminator_tracks_span():
    elim = ColumnEliminator(QQ)
    assert elim.add({0: Fraction(1), 1: Fraction(2)})
    assert elim.add({1: Fraction(1)})
    assert not elim.add({0: Fraction(2), 1: Fraction(1)})
    assert elim.contains({0: Fraction(3), 1: Fraction(5)})
    assert not elim.contains({2: Fraction(1)})


@given(matrix_q)
def test_modular_fast_path_agrees_with_exact(dense):
    # rank() may shortcut through a modular full-rank certificate; the
    # answer must match plain elimination either way.
    m = SparseMatrix.from_dense(QQ, dense)
    assert m.rank() == rref(m)[0]
