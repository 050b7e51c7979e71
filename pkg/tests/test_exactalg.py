import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from apps.algebra.exactalg import DimensionMismatch, FMatrix, extend_basis, mat_kernel, mat_solve
from apps.algebra.fields import prime_field

F2 = prime_field(2)
F3 = prime_field(3)


@pytest.mark.parametrize(
    "rows, expected",
    [
        ([[1, 1], [1, 1]], [[1], [1]]),
        ([[1, 0, 1], [0, 1, 1]], [[1], [1], [1]]),
    ],
)
def test_kernel_examples(rows, expected):
    K = mat_kernel(FMatrix.from_rows(F2, rows))
    assert K.to_lists() == expected


def test_kernel_of_identity_is_empty():
    K = mat_kernel(FMatrix.identity(F2, 3))
    assert K.shape == (3, 0)


def test_solve_examples():
    x = mat_solve(FMatrix.identity(F3, 3), [2, 0, 1])
    assert x.tolist() == [2, 0, 1]
    x = mat_solve(FMatrix.from_rows(F2, [[1, 1]]), [1])
    assert x.tolist() == [1, 0]
    assert mat_solve(FMatrix.zeros(F2, 2, 2), [1, 0]) is None


def test_solve_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        mat_solve(FMatrix.identity(F2, 2), [1, 0, 1])


def test_extend_basis_picks_independent_candidates():
    span = FMatrix.from_columns(F2, [[1, 0, 0]], 3)
    cands = FMatrix.from_columns(F2, [[1, 0, 0], [0, 1, 0], [1, 1, 0], [0, 0, 1]], 3)
    assert extend_basis(span, cands) == [1, 3]


matrices = st.integers(1, 5).flatmap(
    lambda r: st.integers(1, 5).flatmap(
        lambda c: st.tuples(st.sampled_from([F2, F3]), st.lists(st.lists(st.integers(0, 2), min_size=c, max_size=c),
                                                               min_size=r, max_size=r))
    )
)


@settings(max_examples=60, deadline=None)
@given(matrices)
def test_rank_nullity(data):
    F, rows = data
    A = FMatrix.from_rows(F, rows)
    K = mat_kernel(A)
    assert A.rank() + K.cols == A.cols
    assert (A @ K).is_zero()
    assert K.rank() == K.cols


@settings(max_examples=60, deadline=None)
@given(matrices, st.lists(st.integers(0, 2), min_size=5, max_size=5))
def test_solution_resubstitutes(data, coeffs):
    F, rows = data
    A = FMatrix.from_rows(F, rows)
    x0 = np.array(coeffs[:A.cols], dtype=np.int64) % F.p
    b = F.vmatmul(A.data, x0.reshape(-1, 1)).reshape(-1)
    x = mat_solve(A, b)
    assert x is not None
    assert F.vmatmul(A.data, x.reshape(-1, 1)).reshape(-1).tolist() == b.tolist()


def test_rref_is_deterministic():
    A = FMatrix.from_rows(F3, [[1, 2, 0], [2, 1, 1], [0, 0, 2]])
    assert A.rref()[0] == A.rref()[0]
