"""Tests for the code model: parameter validation, bit vectors, sparse matrices,
consecutive runs of C, the sampler and the syndrome.
"""

import numpy as np
import pytest

from ldpcForge.codes.code_model import (
    BitVector,
    CRun,
    SparseBinaryMatrix,
    consecutive_run,
    ell,
    from_m_columns,
    run_descriptor,
    run_support,
    sample_code,
    syndrome,
    validate_params,
)
from ldpcForge.codes.errors import DegenerateRun, InvalidParams, LengthMismatch
from ldpcForge.codes.models import CodeParams, RowPolicy


class TestValidateParams:
    def test_accepts_half_rate(self):
        """A half-rate code passes and reports its message length."""
        params = validate_params(2048, 1024, 3)
        assert params.k_message == 1024

    @pytest.mark.parametrize("n, m, r, inequality", [
        (10, 9, 2, "r >= 3"),
        (10, 2, 3, "m >= r"),
        (9, 9, 3, "n > m"),
        (10, 9, 3, "(n-m)*r >= m"),
    ])
    def test_names_failed_inequality(self, n, m, r, inequality):
        """Each rejection names the inequality that failed."""
        with pytest.raises(InvalidParams) as exc:
            validate_params(n, m, r)
        assert exc.value.inequality == inequality

    def test_first_failure_wins(self):
        """The first failing inequality is the one reported."""
        with pytest.raises(InvalidParams) as exc:
            validate_params(3, 5, 2)
        assert exc.value.inequality == "r >= 3"

    def test_pydantic_model_validates(self):
        """The pydantic model runs the same existence check."""
        with pytest.raises(ValueError):
            CodeParams(n=10, m=9, r=3)


class TestBitVector:
    def test_from_bits_and_back(self):
        """Bits survive a round through the packed form."""
        bits = [1, 0, 1, 1, 0, 0, 0, 0, 1, 1]
        v = BitVector.from_bits(bits)
        assert len(v) == 10
        assert v.to_bits().tolist() == bits
        assert v.weight() == 5
        assert v.support() == [0, 2, 3, 8, 9]

    def test_xor_and_zero(self):
        """XOR, weight and zero test on packed vectors."""
        a = BitVector.from_support(12, [1, 5, 11])
        b = BitVector.from_support(12, [5, 7])
        assert (a ^ b).support() == [1, 7, 11]
        assert (a ^ a).is_zero()
        assert BitVector.zeros(12).is_zero()

    def test_equality_and_hash(self):
        """Equal vectors compare and hash equal however they were built."""
        a = BitVector.from_support(9, [0, 8])
        b = BitVector.from_bits([1, 0, 0, 0, 0, 0, 0, 0, 1])
        assert a == b
        assert hash(a) == hash(b)
        assert a != BitVector.from_support(10, [0, 8])

    def test_length_mismatch(self):
        """XOR of vectors of different lengths is rejected."""
        with pytest.raises(LengthMismatch):
            BitVector.zeros(4) ^ BitVector.zeros(5)
        with pytest.raises(LengthMismatch):
            BitVector.from_support(4, [4])


class TestSparseBinaryMatrix:
    def test_row_supports_and_weights(self):
        """Row supports and weights derived from column supports."""
        mat = SparseBinaryMatrix(3, 4, ((0, 1), (1, 2), (0, 2), (0, 1, 2)))
        assert mat.row_supports == ((0, 2, 3), (0, 1, 3), (1, 2, 3))
        assert mat.column_weights() == [2, 2, 2, 3]
        assert mat.row_weights() == [3, 3, 3]
        dense = mat.to_dense()
        assert dense.shape == (3, 4)
        assert np.array_equal(dense, mat.to_csr().toarray())

    def test_rejects_unsorted_column(self):
        """Column supports must be sorted."""
        with pytest.raises(ValueError):
            SparseBinaryMatrix(3, 1, ((2, 1),))

    def test_rejects_out_of_range(self):
        """Row indices must lie below the row count."""
        with pytest.raises(ValueError):
            SparseBinaryMatrix(3, 1, ((0, 3),))


class TestStructuredCode:
    def test_small_code_shape(self, small_code):
        """Shape and dense parity-check matrix of the (7, 4, 3) code."""
        assert (small_code.n, small_code.m, small_code.r) == (7, 4, 3)
        h = small_code.h_dense()
        assert h.shape == (4, 7)
        # C column j has rows j and j+1 mod m
        assert h[:, 3].tolist() == [1, 0, 0, 1]
        assert h[:, 4].tolist() == [1, 1, 1, 0]

    def test_zero_row_rejected(self):
        """A row of M left empty is rejected."""
        with pytest.raises(ValueError, match="zero"):
            from_m_columns(4, [{0, 1, 2}, {0, 1, 2}])

    def test_mixed_column_weight_rejected(self):
        """Columns of M must share one weight."""
        with pytest.raises(ValueError, match="weight"):
            from_m_columns(4, [{0, 1, 2}, {1, 2, 3}, {0, 3}])

    def test_columns_with_row(self, small_code):
        """Columns of M holding a given row."""
        assert small_code.columns_with_row(3) == (1, 2)


class TestRuns:
    def test_ell(self):
        """Circular distance on a few values."""
        assert ell(-3, 10) == 3
        assert ell(7, 10) == 3
        assert ell(5, 10) == 5
        assert ell(0, 10) == 0

    def test_run_support_wraps(self):
        """A run of C columns wraps past the last row."""
        assert run_support(8, 3, 10) == frozenset({8, 1})

    @pytest.mark.parametrize("m", [3, 7, 8, 11])
    def test_every_pair_telescopes(self, m):
        """Every pair of distinct rows is joined by its shortest run."""
        for i in range(m):
            for j in range(m):
                if i == j:
                    continue
                run = run_descriptor(i, j, m)
                assert run.length == ell(i - j, m)
                assert run_support(run.start, run.length, m) == frozenset((i, j))
                assert len(consecutive_run(i, j, m)) == ell(i - j, m)

    def test_tie_starts_at_smaller_row(self):
        """Ties between the two runs start at the smaller row."""
        assert run_descriptor(1, 5, 8) == CRun(1, 5, 1, 4)
        assert run_descriptor(5, 1, 8) == CRun(5, 1, 1, 4)

    def test_degenerate(self):
        """A run needs two distinct rows."""
        with pytest.raises(DegenerateRun):
            run_descriptor(3, 3, 10)


class TestSampler:
    def test_deterministic(self):
        """The same seed samples the same code."""
        params = CodeParams(n=300, m=150, r=3)
        assert sample_code(params, seed=5) == sample_code(params, seed=5)

    def test_seeds_differ(self):
        """Different seeds sample different codes."""
        params = CodeParams(n=300, m=150, r=3)
        assert sample_code(params, seed=5).m_matrix != sample_code(params, seed=6).m_matrix

    @pytest.mark.parametrize("policy", list(RowPolicy))
    @pytest.mark.parametrize("n, m, r", [(512, 256, 3), (200, 150, 4), (64, 48, 5), (16, 12, 3)])
    def test_invariants(self, policy, n, m, r):
        """Sampled codes have exact column weight and no zero row."""
        code = sample_code(CodeParams(n=n, m=m, r=r), policy, seed=11)
        assert all(w == r for w in code.m_matrix.column_weights())
        assert min(code.m_matrix.row_weights()) >= 1

    def test_near_regular_rows(self, regular_code):
        """Near-regular sampling keeps row weights within one."""
        weights = regular_code.m_matrix.row_weights()
        assert max(weights) - min(weights) <= 1


class TestSyndrome:
    def test_known_codeword(self, small_code):
        """A known codeword of the (7, 4, 3) code has zero syndrome."""
        word = BitVector.from_bits([0, 0, 0, 1, 1, 1, 0])
        assert syndrome(small_code, word).is_zero()

    def test_single_bit(self, small_code):
        """A single M column gives that column as syndrome."""
        word = BitVector.from_support(7, [4])
        assert syndrome(small_code, word).support() == [0, 1, 2]

    def test_run_of_c_columns(self, sampled_code):
        """A run of C columns has syndrome on its two endpoints."""
        run = run_descriptor(10, 40, sampled_code.m)
        word = BitVector.from_support(sampled_code.n, run.columns(sampled_code.m))
        assert syndrome(sampled_code, word).support() == [10, 40]

    def test_length_mismatch(self, small_code):
        """Word length must be n."""
        with pytest.raises(LengthMismatch):
            syndrome(small_code, BitVector.zeros(6))


def test_ell_is_a_circular_metric():
    """Circular distance is symmetric, bounded by m/2 and obeys the triangle inequality."""
    m = 13
    for a in range(-m, 2 * m):
        assert ell(a, m) == ell(-a, m) == ell(a % m, m)
        assert ell(a, m) <= m // 2
        for b in range(m):
            for c in range(0, m, 3):
                assert ell(a - c, m) <= ell(a - b, m) + ell(b - c, m)


def test_c_run_syndrome_at_m_10():
    """C columns 2, 3 and 4 at m=10 leave syndrome {2, 5}."""
    code = sample_code(CodeParams(n=20, m=10, r=3), seed=1)
    word = BitVector.from_support(20, [2, 3, 4])
    assert syndrome(code, word).support() == [2, 5]


def test_syndrome_is_linear(sampled_code):
    """The syndrome is linear and vanishes on the zero word."""
    rng = np.random.default_rng(8)
    u = BitVector.from_bits(rng.integers(0, 2, size=sampled_code.n, dtype=np.uint8))
    v = BitVector.from_bits(rng.integers(0, 2, size=sampled_code.n, dtype=np.uint8))
    assert syndrome(sampled_code, u ^ v) == syndrome(sampled_code, u) ^ syndrome(sampled_code, v)
    assert syndrome(sampled_code, BitVector.zeros(sampled_code.n)).is_zero()
