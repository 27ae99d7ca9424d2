"""Linear-time accumulator encoder for structured codes.

With s = M·message, the C-part x of a codeword solves C·x = s, i.e.
x_{i-1} + x_i = s_i for every row i (indices mod m). Fixing x_0 = 0 the
solution is the prefix XOR of s; the wrap-around equation of row 0 holds iff
s has even weight, because the rows of C sum to zero.
"""

import numpy as np

from ldpcForge.codes.code_model import BitVector, StructuredCode
from ldpcForge.codes.errors import LengthMismatch, ParityObstruction
from ldpcForge.utils import gf2


def _m_times(code: StructuredCode, message: BitVector) -> np.ndarray:
    if message.length != code.n - code.m:
        raise LengthMismatch(f"message has length {message.length}, expected n-m={code.n - code.m}")
    y = message.to_bits().astype(np.int64)
    return ((code.m_sparse @ y) % 2).astype(np.uint8)


def accumulate(s: np.ndarray) -> np.ndarray:
    """Solve x_{i-1} + x_i = s_i for i = 1 .. m-1 with x_0 = 0."""
    s = np.asarray(s, dtype=np.uint8).copy()
    if s.size == 0:
        return s
    s[0] = 0
    return np.bitwise_xor.accumulate(s)


def parity_obstruction(code: StructuredCode, message: BitVector) -> bool:
    """True iff M·message has odd weight, so no C-part exists."""
    return bool(int(_m_times(code, message).sum()) % 2)


def encode(code: StructuredCode, message: BitVector) -> BitVector:
    """Codeword whose M-part is the message and whose C-part is the accumulator solution.

    Raises:
        LengthMismatch: if the message does not have length n-m
        ParityObstruction: if M·message has odd weight
    """
    s = _m_times(code, message)
    if int(s.sum()) % 2:
        raise ParityObstruction(
            f"M·message has odd weight {int(s.sum())}; the C-part equations are inconsistent"
        )
    x = accumulate(s)
    return BitVector.from_bits(np.concatenate([x, message.to_bits()]))


def code_dimension(code: StructuredCode) -> int:
    """n - rank(H) by dense elimination; meant for test-sized codes."""
    rows = gf2.bitrows_from_column_supports(code.h_column_supports(), code.m)
    return code.n - gf2.rank(rows, code.n)
