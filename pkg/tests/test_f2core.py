from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, strategies as st

from vmlab.f2core import (
    DimensionError,
    F2Matrix,
    F2Vector,
    SingularMatrixError,
    independent_rows,
    invert,
    off_diag,
    rank,
    solve_unit_upper_triangular,
    tensor,
    transpose,
)

from conftest import matrices


def np_rank_mod2(a: np.ndarray) -> int:
    """Reference rank: dense elimination on a uint8 array."""
    a = (np.array(a, dtype=np.uint8) & 1).copy()
    r = 0
    rows, cols = a.shape
    for c in range(cols):
        piv = next((i for i in range(r, rows) if a[i, c]), None)
        if piv is None:
            continue
        a[[r, piv]] = a[[piv, r]]
        for i in range(rows):
            if i != r and a[i, c]:
                a[i] ^= a[r]
        r += 1
    return r


def test_identity_and_zero_rank():
    assert rank(F2Matrix.identity(5)) == 5
    assert rank(F2Matrix.zeros(4, 7)) == 0


def test_rank_small_example():
    # rows 1 and 2 sum to row 3
    m = F2Matrix.from_array([[1, 1, 0], [0, 1, 1], [1, 0, 1]])
    assert rank(m) == 2


def test_entry_access_and_array_roundtrip():
    a = np.array([[0, 1, 1, 0], [1, 0, 0, 1]], dtype=np.uint8)
    m = F2Matrix.from_array(a)
    assert m[0, 1] == 1 and m[1, 1] == 0
    np.testing.assert_array_equal(m.to_array(), a)


def test_invert_known():
    m = F2Matrix.from_array([[1, 1], [0, 1]])
    assert invert(m) == m


def test_invert_singular_raises():
    with pytest.raises(SingularMatrixError):
        invert(F2Matrix.from_array([[1, 1], [1, 1]]))


def test_invert_non_square_raises():
    with pytest.raises(DimensionError):
        invert(F2Matrix.zeros(2, 3))


def test_multiply_dimension_mismatch():
    with pytest.raises(DimensionError):
        F2Matrix.zeros(2, 3) @ F2Matrix.zeros(2, 3)


def test_vector_ops():
    u = F2Vector.from_bits([1, 0, 1, 1])
    v = F2Vector.from_bits([1, 1, 0, 1])
    assert (u + v).support() == [1, 2]
    assert u.dot(v) == 0
    assert u.weight == 3
    assert list(u) == [1, 0, 1, 1]


@given(matrices(max_rows=12, max_cols=12))
def test_rank_matches_reference(m):
    want = np_rank_mod2(m.to_array()) if m.nrows and m.ncols else 0
    assert rank(m) == want


@given(matrices(max_rows=10, max_cols=10))
def test_rank_transpose_invariant(m):
    assert rank(m) == rank(transpose(m))


@given(matrices(max_rows=8, max_cols=8), st.data())
def test_multiply_matches_numpy(a, data):
    k = data.draw(st.integers(0, 8))
    b = F2Matrix(a.ncols, k, [data.draw(st.integers(0, (1 << k) - 1)) for _ in range(a.ncols)])
    got = (a @ b).to_array()
    want = (a.to_array().astype(int) @ b.to_array().astype(int)) % 2 if a.nrows and k else got
    np.testing.assert_array_equal(got, want)


@given(matrices(square=True, max_rows=10))
def test_invert_roundtrip_when_full_rank(m):
    if rank(m) < m.nrows:
        with pytest.raises(SingularMatrixError):
            invert(m)
        return
    inv = invert(m)
    assert m @ inv == F2Matrix.identity(m.nrows)
    assert inv @ m == F2Matrix.identity(m.nrows)


@given(matrices(max_rows=4, max_cols=4), matrices(max_rows=4, max_cols=4))
def test_tensor_matches_kron(a, b):
    got = tensor(a, b)
    assert got.shape == (a.nrows * b.nrows, a.ncols * b.ncols)
    if got.nrows and got.ncols:
        np.testing.assert_array_equal(got.to_array(), np.kron(a.to_array(), b.to_array()))


@given(matrices(max_rows=6, max_cols=6), matrices(max_rows=6, max_cols=6))
def test_tensor_rank_multiplicative(a, b):
    assert rank(tensor(a, b)) == rank(a) * rank(b)


@given(matrices(square=True, max_rows=8))
def test_off_diag_clears_only_diagonal(m):
    o = off_diag(m)
    for i in range(m.nrows):
        for j in range(m.ncols):
            assert o[i, j] == (0 if i == j else m[i, j])


@given(matrices(max_rows=10, max_cols=10))
def test_independent_rows_form_a_basis(m):
    idx = independent_rows(m)
    assert len(idx) == rank(m)
    assert rank(m.submatrix(idx, range(m.ncols))) == len(idx)


def _random_unit_upper(rng, r):
    rows = []
    for i in range(r):
        above = int(rng.integers(0, 1 << r)) >> (i + 1) << (i + 1)
        rows.append(above | (1 << i))
    return F2Matrix(r, r, rows)


def test_solve_unit_upper_recovers_some_solution(rng):
    for _ in range(200):
        s, r = int(rng.integers(1, 8)), int(rng.integers(1, 8))
        x = F2Matrix.from_array(rng.random((s, r)) < 0.5)
        q = _random_unit_upper(rng, r)
        z = x @ q
        got = solve_unit_upper_triangular(x, z)
        assert got is not None
        assert got.is_unit_upper_triangular()
        assert x @ got == z


def test_solve_unit_upper_reports_impossible():
    x = F2Matrix.from_array([[1, 0], [0, 0]])
    z = F2Matrix.from_array([[1, 0], [0, 1]])  # column 2 leaves the span of column 1
    assert solve_unit_upper_triangular(x, z) is None


def test_unit_upper_predicate():
    assert F2Matrix.from_array([[1, 1], [0, 1]]).is_unit_upper_triangular()
    assert not F2Matrix.from_array([[1, 0], [1, 1]]).is_unit_upper_triangular()
    assert not F2Matrix.from_array([[0, 1], [0, 1]]).is_unit_upper_triangular()


def test_matrices_are_immutable():
    m = F2Matrix.identity(2)
    with pytest.raises(AttributeError):
        m.nrows = 3
