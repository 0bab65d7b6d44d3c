import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hochkind.complexes import FiniteComplex
from hochkind.errors import NotAComplex, SchemaError
from hochkind.fields import QQ, PrimeField
from hochkind.sparse import SparseMatrix, kernel_basis
from oracle_dense import dense_cohomology, dense_rank

F5 = PrimeField(5)


def random_three_term(seed):
    """C^0 -> C^1 -> C^2 over F5 with d1 built from the left kernel of d0."""
    rnd = random.Random(seed)
    n0, n1, n2 = rnd.randint(1, 5), rnd.randint(1, 5), rnd.randint(1, 5)
    d0 = [[rnd.randrange(5) for _ in range(n0)] for _ in range(n1)]
    m0 = SparseMatrix.from_dense(F5, d0)
    left = kernel_basis(m0.transpose())
    d1 = []
    for _ in range(n2):
        row = [0] * n1
        for vec in left:
            c = rnd.randrange(5)
            for i, v in vec.items():
                row[i] = (row[i] + c * v) % 5
        d1.append(row)
    m1 = SparseMatrix.from_dense(F5, d1)
    return (n0, n1, n2), (d0, d1), (m0, m1)


@given(st.integers(min_value=0, max_value=400))
def test_cohomology_matches_dense_oracle(seed):
    (n0, n1, n2), (d0, d1), (m0, m1) = random_three_term(seed)
    cx = FiniteComplex(F5, {0: n0, 1: n1, 2: n2}, {0: m0, 1: m1})
    cx.check()
    got = cx.cohomology()
    want = dense_cohomology(F5, [n0, n1, n2], [d0, d1])
    assert [got[0], got[1], got[2]] == want


@given(st.integers(min_value=0, max_value=400))
def test_euler_characteristic_is_alternating_dim_sum(seed):
    (n0, n1, n2), _, (m0, m1) = random_three_term(seed)
    cx = FiniteComplex(F5, {0: n0, 1: n1, 2: n2}, {0: m0, 1: m1})
    h = cx.cohomology()
    assert cx.euler_characteristic() == n0 - n1 + n2
    assert h[0] - h[1] + h[2] == n0 - n1 + n2


def test_not_a_complex_reports_first_witness():
    d0 = SparseMatrix.from_dense(QQ, [[1], [0]])
    d1 = SparseMatrix.from_dense(QQ, [[1, 0], [0, 1]])
    cx = FiniteComplex(QQ, {0: 1, 1: 2, 2: 2}, {0: d0, 1: d1})
    with pytest.raises(NotAComplex) as exc:
        cx.check()
    assert exc.value.degree == 0
    assert exc.value.entry == (0, 0)
    assert "d∘d != 0 out of degree 0" in str(exc.value)


def test_shape_mismatch_rejected():
    d0 = SparseMatrix.from_dense(QQ, [[1, 0]])
    with pytest.raises(SchemaError):
        FiniteComplex(QQ, {0: 1, 1: 1}, {0: d0})


def test_koszul_complex_of_truncated_polynomials():
    # R = k[x]/x^2, complex R --(x·)--> R: multiplication by x on the
    # basis {1, x} is the nilpotent matrix [[0,0],[1,0]].
    mul_x = SparseMatrix.from_dense(QQ, [[0, 0], [1, 0]])
    cx = FiniteComplex(QQ, {0: 2, 1: 2}, {0: mul_x})
    cx.check()
    assert cx.cohomology() == {0: 1, 1: 1}
    reps = cx.cohomology(with_representatives=True)[1]
    assert reps[0] and reps[1]


def test_cyclic_mode_wraps_differential():
    # Z/2 complex on k^2 with x-multiplication both ways is 2-periodic
    # and exact; wrapping the composite d1∘d0 must be what check() sees.
    m = SparseMatrix.from_dense(F5, [[0, 0], [1, 0]])
    cx = FiniteComplex(F5, {0: 2, 1: 2}, {0: m, 1: m}, cyclic=True)
    cx.check()
    assert cx.cohomology() == {0: 0, 1: 0}
    half = FiniteComplex(F5, {0: 2, 1: 2}, {0: m}, cyclic=True)
    half.check()
    assert half.cohomology() == {0: 1, 1: 1}
    bad = SparseMatrix.from_dense(F5, [[1, 0], [0, 0]])
    cx2 = FiniteComplex(F5, {0: 2, 1: 2}, {0: bad, 1: bad}, cyclic=True)
    with pytest.raises(NotAComplex):
        cx2.check()


def test_cyclic_mode_requires_degrees_zero_one():
    m = SparseMatrix.zero(F5, 1, 1)
    with pytest.raises(SchemaError):
        FiniteComplex(F5, {0: 1, 2: 1}, {}, cyclic=True)
    FiniteComplex(F5, {0: 1, 1: 1}, {0: m, 1: m}, cyclic=True)


def test_representatives_span_cohomology():
    (n0, n1, n2), _, (m0, m1) = random_three_term(77)
    cx = FiniteComplex(F5, {0: n0, 1: n1, 2: n2}, {0: m0, 1: m1})
    h = cx.cohomology()
    _, reps = cx.cohomology(with_representatives=True)
    for deg, vecs in reps.items():
        assert len(vecs) == h[deg]
        d = cx.differential(deg)
        if d is not None:
            for vec in vecs:
                assert d.apply(vec) == {}
