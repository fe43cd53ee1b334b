"""Dense matrices and rank computation over Z_P.

Storage is a single contiguous column-major int16 buffer (entries of any
accepted prime fit 16 bits), since both matrix builders append columns
in blocks.  Rank is computed by a blocked elimination that accumulates a
column basis in generations: each incoming block of columns is cleared
against every earlier generation with one matrix product per generation,
and the genuinely new pivots are Jordan-normalized among themselves and
frozen as the next generation.  A generation is exactly zero on all
earlier pivot rows and an identity on its own, so clearing never needs
to touch the stored basis again.

All bulk arithmetic runs in float64 BLAS calls on integers.  Entries are
kept in 0..P-1 with P < 2^15 and reduction is delayed: a cleared block
accumulates at most rank products of two reduced values, so every
partial result stays below 2^53 where float64 is exact.  The computed
rank is therefore the exact rank over Z_P, independent of BLAS
threading or scheduling.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Iterator

import numpy as np

from .gfpoly import IndexOutOfRange, DimensionMismatch, MAX_PRIME, _is_prime

DEFAULT_BLOCK = 256

ProgressHook = Callable[[int, int, int], None]  # (cols_done, cols_total, rank_so_far)


@dataclass
class DenseMatrix:
    """Column-major dense matrix over Z_P; immutable once built."""

    rows: int
    cols: int
    data: np.ndarray  # shape (rows, cols), int16, F-order
    modulus: int

    def __post_init__(self):
        if not _is_prime(self.modulus) or self.modulus > MAX_PRIME:
            raise ValueError(f"bad modulus {self.modulus}")
        if self.data.shape != (self.rows, self.cols):
            raise DimensionMismatch(f"data shape {self.data.shape} != {(self.rows, self.cols)}")

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)


def _as_int16(block: np.ndarray, modulus: int) -> np.ndarray:
    b = np.asarray(block, dtype=np.int64) % modulus
    return b.astype(np.int16)


def from_columns(columns: Iterable[np.ndarray], modulus: int, rows: int | None = None) -> DenseMatrix:
    """Matrix with the given coefficient vectors as columns.

    An empty column list needs an explicit row count.
    """
    cols = [np.asarray(c) for c in columns]
    if not cols:
        if rows is None:
            raise DimensionMismatch("empty column list needs an explicit row count")
        return DenseMatrix(rows, 0, np.zeros((rows, 0), dtype=np.int16, order="F"), modulus)
    nrows = cols[0].shape[0]
    if rows is not None and rows != nrows:
        raise DimensionMismatch(f"declared {rows} rows but columns have {nrows}")
    data = np.empty((nrows, len(cols)), dtype=np.int16, order="F")
    for j, c in enumerate(cols):
        if c.shape != (nrows,):
            raise DimensionMismatch(f"column {j} has shape {c.shape}, want ({nrows},)")
        data[:, j] = _as_int16(c, modulus)
    return DenseMatrix(nrows, len(cols), data, modulus)


def row_select(m: DenseMatrix, keep) -> DenseMatrix:
    """Submatrix on the given sorted 0-based row indices, column order kept."""
    idx = np.asarray(sorted(keep), dtype=np.int64)
    if idx.size and (idx[0] < 0 or idx[-1] >= m.rows):
        raise IndexOutOfRange(f"row indices outside 0..{m.rows - 1}")
    if idx.size != np.unique(idx).size:
        raise IndexOutOfRange("duplicate row indices")
    data = np.asfortranarray(m.data[idx, :])
    return DenseMatrix(int(idx.size), m.cols, data, m.modulus)


_LEAF_WIDTH = 48  # below this, unblocked rank-1 elimination beats matmuls


def _reduce_mod(arr: np.ndarray, p: int) -> np.ndarray:
    """In-place exact mod p for integral float64 values below 2^52.

    np.mod on float64 is an order of magnitude slower than the matrix
    products it would follow, so reduce via floor(x/p): the quotient may
    be off by one from rounding, leaving a residue in (-p, 2p), which
    the two conditional fixups repair.  Everything stays below 2^52, so
    every intermediate is exact.
    """
    q = np.floor(arr * (1.0 / p))
    q *= p
    arr -= q
    np.add(arr, p, out=arr, where=arr < 0)
    np.subtract(arr, p, out=arr, where=arr >= p)
    return arr


def _unit_lower_inverse(M: np.ndarray, p: int) -> np.ndarray:
    """Inverse of a unit lower triangular matrix mod p (exact float64)."""
    g = M.shape[0]
    X = np.zeros((g, g), dtype=np.float64)
    for k in range(g):
        X[k, :] = _reduce_mod(-(M[k, :k] @ X[:k, :]), p)
        X[k, k] = (X[k, k] + 1) % p
    return X


def _extract_leaf(B: np.ndarray, p: int, cap: int) -> tuple[np.ndarray | None, list[int]]:
    """Unblocked right-looking elimination on a narrow cleared block."""
    bcols = B.shape[1]
    new_cols: list[int] = []
    new_rows: list[int] = []
    for c in range(bcols):
        col = B[:, c]
        _reduce_mod(col, p)  # clear multiples of p left by delayed reduction
        nz = np.nonzero(col)[0]
        if nz.size == 0:
            continue
        row = int(nz[0])
        inv = pow(int(col[row]), p - 2, p)
        col *= inv
        _reduce_mod(col, p)
        if c + 1 < bcols:
            tail = _reduce_mod(B[row, c + 1 :].copy(), p)
            B[:, c + 1 :] -= col[:, None] * tail[None, :]
        new_cols.append(c)
        new_rows.append(row)
        if len(new_rows) == cap:
            break
    if not new_rows:
        return None, []
    Cn = np.ascontiguousarray(B[:, new_cols])
    return Cn, new_rows


def _extract_jordan(B: np.ndarray, p: int, cap: int) -> tuple[np.ndarray | None, list[int]]:
    """Jordan-normalized independent columns of a cleared, reduced block.

    Wide blocks recurse through a temporary generation basis so almost
    all work lands in matrix products; the returned columns are an exact
    identity on their own pivot rows.
    """
    if B.shape[1] == 0 or cap <= 0:
        return None, []
    if B.shape[1] <= _LEAF_WIDTH:
        Cn, rows = _extract_leaf(B, p, cap)
        if not rows:
            return None, []
    else:
        temp = _GenerationBasis(B.shape[0], p, limit=cap)
        step = max(_LEAF_WIDTH, (B.shape[1] + 3) // 4)
        for a in range(0, B.shape[1], step):
            chunk = np.ascontiguousarray(B[:, a : a + step])
            temp.clear_block(chunk)
            temp.absorb(chunk)
            if temp.rank == cap:
                break
        if temp.rank == 0:
            return None, []
        rows = [r for _, _, gen_rows in temp.generations for r in gen_rows]
        Cn = np.ascontiguousarray(temp.S[:, : temp.rank])
    # Cn on its own pivot rows is unit lower triangular (later columns are
    # cleared on earlier pivots); normalize it to an exact identity there.
    X = _unit_lower_inverse(Cn[rows, :], p)
    return _reduce_mod(Cn @ X, p), rows


class _GenerationBasis:
    """Column basis accumulated in Jordan-normalized generations.

    Each generation's columns are 1 on their own pivot rows (one each,
    identity pattern), 0 on every pivot row of earlier generations, and
    otherwise arbitrary; incoming blocks are cleared generation by
    generation in order, which never requires touching a stored
    generation again.
    """

    def __init__(self, length: int, p: int, limit: int | None = None):
        if length * (p - 1) ** 2 >= 2**52:
            raise OverflowError("matrix too large for exact float64 accumulation")
        self.length = length
        self.p = p
        self.limit = length if limit is None else limit
        self.cap = 64
        self.S = np.zeros((length, self.cap), dtype=np.float64)
        self.generations: list[tuple[int, int, list[int]]] = []  # (start, end, pivot rows)
        self.rank = 0

    def clear_block(self, B: np.ndarray) -> None:
        """Zero every pivot row out of block B, in place, then reduce."""
        p = self.p
        for start, end, rows in self.generations:
            U = _reduce_mod(B[rows, :].copy(), p)
            B -= self.S[:, start:end] @ U
        _reduce_mod(B, p)

    def absorb(self, B: np.ndarray) -> int:
        """Extract new pivots from a cleared block; returns how many.

        B must be cleared against all generations and reduced mod p.
        """
        Cj, rows = _extract_jordan(B, self.p, self.limit - self.rank)
        if not rows:
            return 0
        g = len(rows)
        start = self.rank
        if start + g > self.cap:
            while self.cap < start + g:
                self.cap *= 2
            S = np.zeros((self.length, self.cap), dtype=np.float64)
            S[:, :start] = self.S[:, :start]
            self.S = S
        self.S[:, start : start + g] = Cj
        self.generations.append((start, start + g, rows))
        self.rank += g
        return g


def rank_from_column_blocks(
    blocks: Iterator[np.ndarray],
    n_rows: int,
    modulus: int,
    total_cols: int | None = None,
    progress: ProgressHook | None = None,
) -> int:
    """Rank over Z_P of the matrix whose columns arrive in blocks.

    Blocks are (n_rows x b) arrays with entries already in 0..P-1.  The
    matrix is never materialized, so this doubles as the streaming
    elimination mode; peak memory is the n_rows x rank basis.  Stops
    consuming blocks once the rank hits n_rows.
    """
    if n_rows == 0:
        return 0
    basis = _GenerationBasis(n_rows, modulus)
    done = 0
    for raw in blocks:
        B = np.array(raw, dtype=np.float64, order="C", copy=True)
        if B.ndim != 2 or B.shape[0] != n_rows:
            raise DimensionMismatch(f"block shape {B.shape} incompatible with {n_rows} rows")
        done += B.shape[1]
        basis.clear_block(B)
        basis.absorb(B)
        if progress is not None:
            progress(done, total_cols if total_cols is not None else -1, basis.rank)
        if basis.rank == n_rows:
            break
    return basis.rank


def _column_blocks(data: np.ndarray, block: int) -> Iterator[np.ndarray]:
    for start in range(0, data.shape[1], block):
        yield data[:, start : start + block]


def rank_mod_p(m: DenseMatrix, block: int = DEFAULT_BLOCK, progress: ProgressHook | None = None) -> int:
    """Exact rank of m over Z_P.

    Eliminates along the shorter dimension: a wide matrix is consumed
    column by column, a tall one row by row (rank is transpose
    invariant), keeping the basis vectors short.
    """
    if m.rows == 0 or m.cols == 0:
        return 0
    data = m.data if m.rows <= m.cols else m.data.T
    return rank_from_column_blocks(
        _column_blocks(data, block), data.shape[0], m.modulus,
        total_cols=data.shape[1], progress=progress,
    )


def dump_text(m: DenseMatrix) -> str:
    """Debug dump: 'rows cols modulus' header, then one line per row."""
    lines = [f"{m.rows} {m.cols} {m.modulus}"]
    for i in range(m.rows):
        lines.append(" ".join(str(int(v)) for v in m.data[i, :]))
    return "\n".join(lines) + "\n"


def load_text(text: str) -> DenseMatrix:
    """Inverse of dump_text."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    rows, cols, modulus = (int(v) for v in lines[0].split())
    if len(lines) - 1 != rows:
        raise ValueError(f"expected {rows} data lines, got {len(lines) - 1}")
    data = np.zeros((rows, cols), dtype=np.int16, order="F")
    for i, ln in enumerate(lines[1:]):
        vals = [int(v) for v in ln.split()]
        if len(vals) != cols:
            raise ValueError(f"row {i} has {len(vals)} entries, want {cols}")
        data[i, :] = vals
    return DenseMatrix(rows, cols, data, modulus)
