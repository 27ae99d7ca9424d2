"""Reading and writing parity-check matrices in the alist format.

Layout (ASCII, space separated, LF line endings):
    line 1: n m                      (columns, rows)
    line 2: max_col_weight max_row_weight
    line 3: the n column weights
    line 4: the m row weights
    n lines: 1-based row indices of each column, padded with 0 to max_col_weight
    m lines: 1-based column indices of each row

Structured codes are written with C materialized, so any alist consumer sees
the whole H = [C | M].
"""

import logging
from pathlib import Path
from typing import List, Tuple, Union

from ldpcForge.codes.code_model import SparseBinaryMatrix, StructuredCode
from ldpcForge.codes.errors import InvalidParams, MalformedAlist
from ldpcForge.codes.models import CodeParams, check_existence


def write_alist_matrix(matrix: SparseBinaryMatrix, path: Union[str, Path]) -> None:
    """Write any sparse binary matrix in alist format."""
    col_weights = matrix.column_weights()
    row_weights = matrix.row_weights()
    max_col = max(col_weights, default=0)
    max_row = max(row_weights, default=0)
    lines = [
        f"{matrix.cols} {matrix.rows}",
        f"{max_col} {max_row}",
        " ".join(map(str, col_weights)),
        " ".join(map(str, row_weights)),
    ]
    for col in matrix.col_supports:
        padded = [i + 1 for i in col] + [0] * (max_col - len(col))
        lines.append(" ".join(map(str, padded)))
    for row in matrix.row_supports:
        lines.append(" ".join(str(j + 1) for j in row))
    with open(path, 'w', newline='\n') as f:
        f.write("\n".join(lines) + "\n")
    logging.info(f"[alist] wrote {matrix.rows} x {matrix.cols} matrix to {path}")


def write_alist(code: StructuredCode, path: Union[str, Path]) -> None:
    """Write the full H = [C | M] of a structured code."""
    matrix = SparseBinaryMatrix(code.m, code.n, tuple(code.h_column_supports()))
    write_alist_matrix(matrix, path)


def _ints(line: str, line_number: int) -> List[int]:
    try:
        return [int(tok) for tok in line.split()]
    except ValueError:
        raise MalformedAlist(f"expected integers, got {line.strip()!r}", line_number)


def read_alist_matrix(path: Union[str, Path]) -> SparseBinaryMatrix:
    """Parse an alist file into a SparseBinaryMatrix.

    Raises:
        MalformedAlist: with the number of the offending line
    """
    matrix, _ = _parse_alist(path)
    return matrix


def _parse_alist(path: Union[str, Path]) -> Tuple[SparseBinaryMatrix, List[int]]:
    """Parse an alist file; also return the file line number of every column line then every row line."""
    with open(path, 'r') as f:
        raw = f.read().split("\n")
    numbered: List[Tuple[int, str]] = [(no + 1, line) for no, line in enumerate(raw) if line.strip()]
    if not numbered:
        raise MalformedAlist("empty file", 1)
    if len(numbered) < 4:
        raise MalformedAlist(f"header needs 4 lines, found {len(numbered)}", numbered[-1][0])

    def header(idx: int, count: int) -> List[int]:
        no, line = numbered[idx]
        values = _ints(line, no)
        if len(values) != count:
            raise MalformedAlist(f"expected {count} values, got {len(values)}", no)
        if any(v < 0 for v in values):
            raise MalformedAlist("negative value in header", no)
        return values

    n, m = header(0, 2)
    max_col, max_row = header(1, 2)
    col_weights = header(2, n)
    row_weights = header(3, m)
    if len(numbered) < 4 + n + m:
        raise MalformedAlist(f"expected {n} column lines and {m} row lines", numbered[-1][0])
    if len(numbered) > 4 + n + m:
        raise MalformedAlist("unexpected content after the row lines", numbered[4 + n + m][0])

    col_supports = []
    for j in range(n):
        no, line = numbered[4 + j]
        entries = [v for v in _ints(line, no) if v != 0]
        if len(entries) != col_weights[j]:
            raise MalformedAlist(
                f"column {j + 1} lists {len(entries)} rows but its declared weight is {col_weights[j]}", no
            )
        if len(entries) > max_col:
            raise MalformedAlist(f"column {j + 1} exceeds max column weight {max_col}", no)
        if any(not 1 <= v <= m for v in entries):
            raise MalformedAlist(f"column {j + 1} has a row index outside [1, {m}]", no)
        if len(set(entries)) != len(entries):
            raise MalformedAlist(f"column {j + 1} repeats a row index", no)
        col_supports.append(tuple(sorted(v - 1 for v in entries)))
    matrix = SparseBinaryMatrix(m, n, tuple(col_supports))

    for i in range(m):
        no, line = numbered[4 + n + i]
        entries = [v for v in _ints(line, no) if v != 0]
        if len(entries) != row_weights[i]:
            raise MalformedAlist(
                f"row {i + 1} lists {len(entries)} columns but its declared weight is {row_weights[i]}", no
            )
        if len(entries) > max_row:
            raise MalformedAlist(f"row {i + 1} exceeds max row weight {max_row}", no)
        if tuple(sorted(v - 1 for v in entries)) != matrix.row_supports[i]:
            raise MalformedAlist(f"row {i + 1} disagrees with the column lists", no)
    return matrix, [no for no, _ in numbered[4:]]


def read_alist(path: Union[str, Path]) -> StructuredCode:
    """Parse an alist file and recover the structured code H = [C | M].

    Raises:
        MalformedAlist: if the file is malformed or H is not of the form [C | M]
    """
    matrix, line_of = _parse_alist(path)
    n, m = matrix.cols, matrix.rows
    if n <= m or m < 3:
        raise MalformedAlist(f"H is {m} x {n}; a structured code needs 3 <= m < n", 1)
    for j in range(m):
        expected = tuple(sorted((j, (j + 1) % m)))
        if matrix.col_supports[j] != expected:
            raise MalformedAlist(
                f"column {j + 1} should be the circulant column with rows {[e + 1 for e in expected]}",
                line_of[j],
            )
    m_supports = matrix.col_supports[m:]
    r = len(m_supports[0])
    for j, col in enumerate(m_supports):
        if len(col) != r:
            raise MalformedAlist(
                f"column {m + j + 1} has weight {len(col)}, M columns must all have weight {r}",
                line_of[m + j],
            )
    try:
        check_existence(n, m, r)
    except InvalidParams as e:
        raise MalformedAlist(f"parameters do not define a structured code: {str(e)}", 1)
    m_matrix = SparseBinaryMatrix(m, n - m, tuple(m_supports))
    for i, weight in enumerate(m_matrix.row_weights()):
        if weight == 0:
            raise MalformedAlist(f"row {i + 1} of M is zero", line_of[n + i])
    return StructuredCode(params=CodeParams(n=n, m=m, r=r), m_matrix=m_matrix)
