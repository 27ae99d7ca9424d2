"""Structured LDPC codes with parity-check matrices H = [C | M].

C is the m x m circulant whose column j has its two entries at rows j and
(j+1) mod m, so a run of consecutive columns of C telescopes to a weight-2
vector. M is an m x (n-m) binary matrix with constant column weight r and no
zero row. Only M is stored; C is implied by m.

Coordinates of a length-n word follow the same split: [0, m) multiply C,
[m, n) multiply M.
"""

import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from scipy.sparse import csr_matrix

from ldpcForge.codes.errors import (
    DegenerateRun,
    InvalidParams,
    LengthMismatch,
    SamplingFailed,
)
from ldpcForge.codes.models import CodeParams, RowPolicy, check_existence

MAX_RESAMPLES = 100
SWAP_ATTEMPTS = 1000


def validate_params(n: int, m: int, r: int) -> CodeParams:
    """Validate an (n, m, r) triple.

    Raises:
        InvalidParams: carrying the inequality that failed
    """
    check_existence(n, m, r)
    return CodeParams(n=n, m=m, r=r)


@dataclass(frozen=True, eq=False)
class BitVector:
    """A binary vector packed eight bits per byte, little-endian within each byte."""
    length: int
    words: np.ndarray

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> "BitVector":
        arr = np.asarray(list(bits) if not isinstance(bits, np.ndarray) else bits, dtype=np.uint8) & 1
        return cls(length=int(arr.size), words=np.packbits(arr, bitorder='little'))

    @classmethod
    def zeros(cls, length: int) -> "BitVector":
        return cls(length=length, words=np.zeros((length + 7) // 8, dtype=np.uint8))

    @classmethod
    def from_support(cls, length: int, support: Iterable[int]) -> "BitVector":
        arr = np.zeros(length, dtype=np.uint8)
        for pos in support:
            if not 0 <= pos < length:
                raise LengthMismatch(f"position {pos} outside a vector of length {length}")
            arr[pos] ^= 1
        return cls.from_bits(arr)

    def to_bits(self) -> np.ndarray:
        return np.unpackbits(self.words, count=self.length, bitorder='little')

    def weight(self) -> int:
        return int(self.to_bits().sum())

    def support(self) -> List[int]:
        return [int(i) for i in np.flatnonzero(self.to_bits())]

    def is_zero(self) -> bool:
        return not self.words.any()

    def __len__(self) -> int:
        return self.length

    def __xor__(self, other: "BitVector") -> "BitVector":
        if other.length != self.length:
            raise LengthMismatch(f"cannot add vectors of lengths {self.length} and {other.length}")
        return BitVector(length=self.length, words=self.words ^ other.words)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitVector):
            return NotImplemented
        return self.length == other.length and np.array_equal(self.words, other.words)

    def __hash__(self):
        return hash((self.length, self.words.tobytes()))

    def __repr__(self) -> str:
        return f"BitVector(length={self.length}, support={self.support()})"


@dataclass(frozen=True)
class SparseBinaryMatrix:
    """Column-major sparse GF(2) matrix.

    Each column lists its row indices in strictly ascending order.
    """
    rows: int
    cols: int
    col_supports: Tuple[Tuple[int, ...], ...]
    row_supports: Tuple[Tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        supports = tuple(tuple(int(i) for i in col) for col in self.col_supports)
        object.__setattr__(self, "col_supports", supports)
        if len(supports) != self.cols:
            raise ValueError(f"expected {self.cols} columns, got {len(supports)}")
        by_row: List[List[int]] = [[] for _ in range(self.rows)]
        for j, col in enumerate(supports):
            for a, b in zip(col, col[1:]):
                if a >= b:
                    raise ValueError(f"column {j} is not strictly ascending: {col}")
            for i in col:
                if not 0 <= i < self.rows:
                    raise ValueError(f"column {j} has row index {i} outside [0, {self.rows})")
                by_row[i].append(j)
        object.__setattr__(self, "row_supports", tuple(tuple(r) for r in by_row))

    def column_weights(self) -> List[int]:
        return [len(col) for col in self.col_supports]

    def row_weights(self) -> List[int]:
        return [len(row) for row in self.row_supports]

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.rows, self.cols), dtype=np.uint8)
        for j, col in enumerate(self.col_supports):
            out[list(col), j] = 1
        return out

    def to_csr(self) -> csr_matrix:
        indices = [i for col in self.col_supports for i in col]
        colidx = [j for j, col in enumerate(self.col_supports) for _ in col]
        data = np.ones(len(indices), dtype=np.int64)
        return csr_matrix((data, (indices, colidx)), shape=(self.rows, self.cols))


@dataclass(frozen=True)
class StructuredCode:
    """An (n, m, r)-structured code; H = [C | M] with C implied by params.m."""
    params: CodeParams
    m_matrix: SparseBinaryMatrix
    m_sparse: csr_matrix = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        validate_structure(self)
        object.__setattr__(self, "m_sparse", self.m_matrix.to_csr())

    @property
    def n(self) -> int:
        return self.params.n

    @property
    def m(self) -> int:
        return self.params.m

    @property
    def r(self) -> int:
        return self.params.r

    def m_column(self, j: int) -> Tuple[int, ...]:
        return self.m_matrix.col_supports[j]

    def columns_with_row(self, i: int) -> Tuple[int, ...]:
        return self.m_matrix.row_supports[i]

    def h_column_supports(self) -> List[Tuple[int, ...]]:
        """Column supports of the full H, C materialized."""
        m = self.m
        c_part = [tuple(sorted((j, (j + 1) % m))) for j in range(m)]
        return c_part + list(self.m_matrix.col_supports)

    def h_dense(self) -> np.ndarray:
        return SparseBinaryMatrix(self.m, self.n, tuple(self.h_column_supports())).to_dense()


def validate_structure(code: StructuredCode) -> None:
    """Check the StructuredCode invariants, raising ValueError on the first violation."""
    params, mat = code.params, code.m_matrix
    if mat.rows != params.m or mat.cols != params.n - params.m:
        raise ValueError(
            f"M must be {params.m} x {params.n - params.m}, got {mat.rows} x {mat.cols}"
        )
    for j, weight in enumerate(mat.column_weights()):
        if weight != params.r:
            raise ValueError(f"column {j} of M has weight {weight}, expected {params.r}")
    for i, weight in enumerate(mat.row_weights()):
        if weight == 0:
            raise ValueError(f"row {i} of M is zero")


def from_m_columns(m: int, columns: Sequence[Iterable[int]]) -> StructuredCode:
    """Build a code from explicit row sets of the columns of M."""
    supports = tuple(tuple(sorted(set(int(i) for i in col))) for col in columns)
    if not supports:
        raise InvalidParams("M needs at least one column", "n > m")
    r = len(supports[0])
    params = validate_params(m + len(supports), m, r)
    return StructuredCode(params=params, m_matrix=SparseBinaryMatrix(m, len(supports), supports))


def ell(x: int, m: int) -> int:
    """Circular distance: the smallest |y| with y = x mod m."""
    y = x % m
    return min(y, m - y)


class CRun(NamedTuple):
    """A run of consecutive columns of C whose sum has support {i, j}."""
    i: int
    j: int
    start: int
    length: int

    def columns(self, m: int) -> List[int]:
        return [(self.start + s) % m for s in range(self.length)]


def run_support(start: int, length: int, m: int) -> frozenset:
    """Rows with odd coverage under the GF(2) sum of columns start .. start+length-1 of C."""
    counts: Counter = Counter()
    for s in range(length):
        col = (start + s) % m
        counts[col] += 1
        counts[(col + 1) % m] += 1
    return frozenset(row for row, c in counts.items() if c % 2)


def run_descriptor(i: int, j: int, m: int) -> CRun:
    """The shortest run of C-columns joining rows i and j.

    On a tie (m even and the rows antipodal) the run starts at min(i, j).

    Raises:
        DegenerateRun: if i == j
    """
    if i == j:
        raise DegenerateRun(f"no run joins row {i} to itself")
    up = (j - i) % m
    down = m - up
    if up < down or (up == down and i < j):
        run = CRun(i, j, i, up)
    else:
        run = CRun(i, j, j, down)
    if run_support(run.start, run.length, m) != frozenset((i, j)):
        raise AssertionError(f"run {run} does not telescope to rows {{{i}, {j}}} mod {m}")
    return run


def consecutive_run(i: int, j: int, m: int) -> List[int]:
    """Indices of ell(i-j, m) consecutive C-columns summing to the weight-2 vector on {i, j}."""
    return run_descriptor(i, j, m).columns(m)


def _sample_any_non_zero(params: CodeParams, rng: np.random.Generator) -> Optional[np.ndarray]:
    n_cols, m, r = params.n - params.m, params.m, params.r
    cols = rng.integers(0, m, size=(n_cols, r))
    bad = _columns_with_duplicates(cols)
    while bad.size:
        cols[bad] = rng.integers(0, m, size=(bad.size, r))
        bad = bad[_columns_with_duplicates(cols[bad])]

    counts = np.bincount(cols.ravel(), minlength=m)
    members: List[List[Tuple[int, int]]] = [[] for _ in range(m)]
    for col in range(n_cols):
        for slot in range(r):
            members[int(cols[col, slot])].append((col, slot))
    empty_rows = [int(i) for i in np.flatnonzero(counts == 0)]
    if empty_rows:
        logging.debug(f"[sampler] repairing {len(empty_rows)} zero rows")
    for empty in empty_rows:
        heaviest = int(np.argmax(counts))
        if counts[heaviest] < 2:
            return None
        col, slot = members[heaviest].pop(int(rng.integers(len(members[heaviest]))))
        cols[col, slot] = empty
        members[empty].append((col, slot))
        counts[heaviest] -= 1
        counts[empty] += 1
    return cols


def _sample_near_regular(params: CodeParams, rng: np.random.Generator) -> Optional[np.ndarray]:
    n_cols, m, r = params.n - params.m, params.m, params.r
    base, extra = divmod(n_cols * r, m)
    targets = np.full(m, base, dtype=np.int64)
    if extra:
        targets[rng.choice(m, size=extra, replace=False)] += 1
    stubs = np.repeat(np.arange(m), targets)
    rng.shuffle(stubs)
    cols = stubs.reshape(n_cols, r)

    # swaps between columns keep every row weight unchanged
    for col in (int(c) for c in np.flatnonzero(_columns_with_duplicates(cols, as_mask=True))):
        for slot in range(r):
            value = cols[col, slot]
            if np.count_nonzero(cols[col] == value) < 2:
                continue
            for _ in range(SWAP_ATTEMPTS):
                other = int(rng.integers(n_cols))
                other_slot = int(rng.integers(r))
                candidate = cols[other, other_slot]
                if other == col or candidate in cols[col] or value in cols[other]:
                    continue
                cols[col, slot], cols[other, other_slot] = candidate, value
                break
            else:
                return None
    if _columns_with_duplicates(cols).size:
        return None
    return cols


def _columns_with_duplicates(cols: np.ndarray, as_mask: bool = False) -> np.ndarray:
    ordered = np.sort(cols, axis=1)
    mask = (np.diff(ordered, axis=1) == 0).any(axis=1)
    return mask if as_mask else np.flatnonzero(mask)


def sample_code(params: CodeParams,
                row_policy: RowPolicy = RowPolicy.ANY_NON_ZERO,
                seed: int = 0) -> StructuredCode:
    """Sample M with exact column weight r and no zero row, deterministically from seed.

    Raises:
        SamplingFailed: after MAX_RESAMPLES unsuccessful full resamples
    """
    rng = np.random.default_rng(seed)
    sampler = _sample_near_regular if RowPolicy(row_policy) == RowPolicy.NEAR_REGULAR else _sample_any_non_zero
    for attempt in range(MAX_RESAMPLES):
        cols = sampler(params, rng)
        if cols is not None:
            supports = tuple(tuple(sorted(int(i) for i in col)) for col in cols)
            matrix = SparseBinaryMatrix(params.m, params.n - params.m, supports)
            return StructuredCode(params=params, m_matrix=matrix)
        logging.info(f"[sampler] attempt {attempt + 1} of {MAX_RESAMPLES} failed, resampling")
    raise SamplingFailed(
        f"could not sample ({params.n}, {params.m}, {params.r}) with policy {RowPolicy(row_policy).value} "
        f"in {MAX_RESAMPLES} attempts"
    )


def syndrome(code: StructuredCode, word: BitVector) -> BitVector:
    """H·wordᵀ over GF(2).

    Raises:
        LengthMismatch: if the word does not have length n
    """
    if word.length != code.n:
        raise LengthMismatch(f"word has length {word.length}, expected n={code.n}")
    bits = word.to_bits()
    x = bits[:code.m]
    y = bits[code.m:].astype(np.int64)
    c_part = x ^ np.roll(x, 1)
    m_part = (code.m_sparse @ y) % 2
    return BitVector.from_bits(c_part ^ m_part.astype(np.uint8))
