"""Shared fixtures: a hand-built (7, 4, 3) code and a few sampled codes."""

import pytest

from ldpcForge.codes.code_model import from_m_columns, sample_code
from ldpcForge.codes.models import CodeParams, RowPolicy


@pytest.fixture
def small_code():
    """The (7, 4, 3) code with M columns {0,1,2}, {1,2,3}, {0,2,3}; minimum distance 3, dimension 3."""
    return from_m_columns(4, [{0, 1, 2}, {1, 2, 3}, {0, 2, 3}])


@pytest.fixture
def sampled_code():
    return sample_code(CodeParams(n=512, m=256, r=3), RowPolicy.ANY_NON_ZERO, seed=1)


@pytest.fixture
def regular_code():
    return sample_code(CodeParams(n=512, m=256, r=3), RowPolicy.NEAR_REGULAR, seed=2)


@pytest.fixture
def tiny_codes():
    """Codes small enough for exhaustive minimum distance."""
    return [sample_code(CodeParams(n=40, m=24, r=3), seed=seed) for seed in range(20)]
