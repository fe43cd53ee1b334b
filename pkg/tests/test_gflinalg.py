import numpy as np
import pytest

from chowdefect.gfpoly import DimensionMismatch, IndexOutOfRange
from chowdefect.gflinalg import (
    DenseMatrix,
    dump_text,
    from_columns,
    load_text,
    rank_from_column_blocks,
    rank_mod_p,
    row_select,
)

P = 8191


def reference_rank(M, p=P):
    """Plain row-reduction over Z_p in exact Python integers."""
    M = [[int(v) % p for v in row] for row in M]
    rows = len(M)
    cols = len(M[0]) if rows else 0
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = pow(M[r][c], p - 2, p)
        M[r] = [(v * inv) % p for v in M[r]]
        for i in range(rows):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [(a - f * b) % p for a, b in zip(M[i], M[r])]
        r += 1
    return r


def matrix_of(array):
    array = np.asarray(array)
    return from_columns(list(array.T), P, rows=array.shape[0])


def test_identity_and_proportional_rows():
    assert rank_mod_p(matrix_of(np.eye(5, dtype=np.int64))) == 5
    assert rank_mod_p(matrix_of([[1, 2], [2, 4]])) == 1


def test_empty_matrices():
    m = from_columns([], P, rows=56)
    assert m.shape == (56, 0)
    assert rank_mod_p(m) == 0
    assert rank_mod_p(matrix_of(np.zeros((7, 9)))) == 0


def test_from_columns_validation():
    with pytest.raises(DimensionMismatch):
        from_columns([], P)
    with pytest.raises(DimensionMismatch):
        from_columns([np.zeros(3), np.zeros(4)], P)
    assert rank_mod_p(from_columns([np.array([1, 2, 3])] * 3, P)) == 1


def test_row_select():
    rng = np.random.default_rng(2)
    A = rng.integers(0, P, (20, 14))
    m = matrix_of(A)
    assert rank_mod_p(row_select(m, range(20))) == rank_mod_p(m)
    assert rank_mod_p(row_select(m, [])) == 0
    sub = row_select(m, [3, 5, 7])
    assert np.array_equal(sub.data, A[[3, 5, 7], :].astype(np.int16))
    with pytest.raises(IndexOutOfRange):
        row_select(m, [20])
    with pytest.raises(IndexOutOfRange):
        row_select(m, [1, 1])


def test_rank_invariances():
    rng = np.random.default_rng(3)
    A = (rng.integers(0, P, (15, 4)) @ rng.integers(0, P, (4, 18))) % P
    base = rank_mod_p(matrix_of(A))
    assert base == 4
    for _ in range(5):
        rp = rng.permutation(15)
        cp = rng.permutation(18)
        scaled = A[rp][:, cp].copy()
        row = rng.integers(0, 15)
        scaled[row] = scaled[row] * int(rng.integers(1, P)) % P
        assert rank_mod_p(matrix_of(scaled)) == base


def test_rank_matches_reference_on_random():
    rng = np.random.default_rng(4)
    for trial in range(60):
        r = int(rng.integers(1, 70))
        c = int(rng.integers(1, 70))
        kind = trial % 3
        if kind == 0:
            A = rng.integers(0, P, (r, c))
        elif kind == 1:
            k = int(rng.integers(0, min(r, c) + 1))
            A = np.zeros((r, c), dtype=np.int64) if k == 0 else (
                rng.integers(0, P, (r, k)) @ rng.integers(0, P, (k, c))
            ) % P
        else:
            A = rng.integers(0, 2, (r, c))  # lots of zeros, stresses pivoting
        assert rank_mod_p(matrix_of(A)) == reference_rank(A)


def test_rank_block_size_independent():
    rng = np.random.default_rng(6)
    A = (rng.integers(0, P, (90, 33)) @ rng.integers(0, P, (33, 120))) % P
    want = reference_rank(A)
    for block in (7, 16, 64, 256):
        assert rank_mod_p(matrix_of(A), block=block) == want


def test_rank_deterministic():
    rng = np.random.default_rng(7)
    A = rng.integers(0, P, (120, 150))
    m = matrix_of(A)
    assert rank_mod_p(m) == rank_mod_p(m)


def test_streaming_equals_materialized():
    rng = np.random.default_rng(8)
    A = (rng.integers(0, P, (80, 20)) @ rng.integers(0, P, (20, 95))) % P
    blocks = [A[:, i : i + 13].astype(np.float64) for i in range(0, 95, 13)]
    assert rank_from_column_blocks(iter(blocks), 80, P) == rank_mod_p(matrix_of(A))


def test_small_prime_field():
    rng = np.random.default_rng(9)
    A = rng.integers(0, 2, (40, 40))
    assert rank_mod_p(from_columns(list(A.T), 2, rows=40)) == reference_rank(A, p=2)


def test_dump_load_roundtrip():
    rng = np.random.default_rng(10)
    A = rng.integers(0, P, (6, 4))
    m = matrix_of(A)
    text = dump_text(m)
    assert text.splitlines()[0] == f"6 4 {P}"
    again = load_text(text)
    assert np.array_equal(again.data, m.data)
    assert (again.rows, again.cols, again.modulus) == (6, 4, P)


def test_dense_matrix_validation():
    with pytest.raises(ValueError):
        DenseMatrix(2, 2, np.zeros((2, 2), dtype=np.int16), 8192)
    with pytest.raises(DimensionMismatch):
        DenseMatrix(2, 3, np.zeros((2, 2), dtype=np.int16), P)
