"""Dense GF(2) linear algebra on bit-packed rows.

Rows are Python integers used as bitmasks (bit j is column j), so a row
operation is a single XOR regardless of the width of the matrix. This is the
slow-but-exact path: rank, kernel basis and exhaustive minimum weight, used as
oracles on small codes.
"""

from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np


def bitrows_from_column_supports(col_supports: Iterable[Iterable[int]], nrows: int) -> List[int]:
    """Build bit-rows of a matrix given, for each column, the rows holding a 1."""
    rows = [0] * nrows
    for col, support in enumerate(col_supports):
        bit = 1 << col
        for row in support:
            rows[row] ^= bit
    return rows


def bitrows_from_dense(matrix: np.ndarray) -> List[int]:
    """Convert a dense 0/1 matrix to bit-rows."""
    mat = np.asarray(matrix, dtype=np.uint8) % 2
    rows = []
    for row in mat:
        value = 0
        for col in np.flatnonzero(row):
            value |= 1 << int(col)
        rows.append(value)
    return rows


def bitmask_to_array(value: int, ncols: int) -> np.ndarray:
    """Unpack a bitmask into a length-ncols uint8 array."""
    out = np.zeros(ncols, dtype=np.uint8)
    col = 0
    while value:
        if value & 1:
            out[col] = 1
        value >>= 1
        col += 1
    return out


def rref_bitrows(rows: Sequence[int], ncols: int) -> Tuple[List[int], List[int]]:
    """Reduced row echelon form over GF(2).

    Returns:
        (rref_rows, pivots): the non-zero reduced rows in pivot order and the
        pivot column of each of them.
    """
    mat = [int(r) for r in rows]
    m = len(mat)
    pivots: List[int] = []
    r = 0
    for c in range(ncols):
        if r >= m:
            break
        bit = 1 << c
        pivot_row = None
        for i in range(r, m):
            if mat[i] & bit:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        if pivot_row != r:
            mat[r], mat[pivot_row] = mat[pivot_row], mat[r]
        pivot_val = mat[r]
        for i in range(m):
            if i != r and mat[i] & bit:
                mat[i] ^= pivot_val
        pivots.append(c)
        r += 1
    return mat[:r], pivots


def rank(rows: Sequence[int], ncols: int) -> int:
    """GF(2) rank of a matrix given as bit-rows."""
    _, pivots = rref_bitrows(rows, ncols)
    return len(pivots)


def nullspace_basis(rows: Sequence[int], ncols: int) -> List[int]:
    """Basis of the kernel {x : H x = 0} as bitmasks of length ncols.

    One basis vector per free column f: x_f = 1 and each pivot variable is
    set from its reduced row's coefficient in column f.
    """
    rref_rows, pivots = rref_bitrows(rows, ncols)
    pivot_set = set(pivots)
    basis: List[int] = []
    for f in range(ncols):
        if f in pivot_set:
            continue
        bit_f = 1 << f
        v = bit_f
        for row, pcol in zip(rref_rows, pivots):
            if row & bit_f:
                v |= 1 << pcol
        basis.append(v)
    return basis


def min_weight_gray(basis: Sequence[int], stop_at: Optional[int] = None) -> Tuple[Optional[int], int]:
    """Minimum weight of a non-zero span element, enumerating the span in Gray-code order.

    Returns:
        (weight, checked): the minimum weight (None for an empty basis) and the
        number of codewords visited.
    """
    dim = len(basis)
    if dim == 0:
        return None, 0
    best: Optional[int] = None
    word = 0
    prev_gray = 0
    checked = 0
    for step in range(1, 1 << dim):
        gray = step ^ (step >> 1)
        diff = gray ^ prev_gray
        word ^= basis[diff.bit_length() - 1]
        prev_gray = gray
        checked += 1
        weight = bin(word).count("1")
        if weight and (best is None or weight < best):
            best = weight
            if stop_at is not None and best <= stop_at:
                break
    return best, checked
