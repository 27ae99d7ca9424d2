"""Models for the ldpcForge code modules.

This module defines the Pydantic models used for parameter validation and
serialization: the (n, m, r) triple of a structured code, the configuration
of a distance search, the configuration of a sweep and the closed-form
bound report.
"""

from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ldpcForge.codes.errors import InvalidParams

BOUND_CSV_HEADER = [
    "r", "k", "m", "n", "c", "t_star", "weight_bound",
    "epsilon", "new_exp", "old_exp", "lower_exp",
]


def check_existence(n: int, m: int, r: int) -> None:
    """Check that an (n, m, r)-structured code exists.

    Raises:
        InvalidParams: naming the first inequality that fails
    """
    if r < 3:
        raise InvalidParams(f"column weight r must be at least 3, got r={r}", "r >= 3")
    if m < r:
        raise InvalidParams(f"need m >= r, got m={m} < r={r}", "m >= r")
    if n <= m:
        raise InvalidParams(f"need n > m, got n={n} <= m={m}", "n > m")
    if (n - m) * r < m:
        raise InvalidParams(
            f"need (n-m)*r >= m, got ({n}-{m})*{r} = {(n - m) * r} < {m}",
            "(n-m)*r >= m",
        )


class RowPolicy(str, Enum):
    """How the sampler distributes the entries of M over its rows."""
    ANY_NON_ZERO = "any"  # independent columns, zero rows repaired afterwards
    NEAR_REGULAR = "near-regular"  # row weights differ by at most one


class CodeParams(BaseModel):
    """The (n, m, r) triple of a structured code."""
    model_config = ConfigDict(frozen=True)

    n: int = Field(..., description="Blocklength, the number of code bits")
    m: int = Field(..., description="Number of parity checks, also the number of columns of C")
    r: int = Field(..., description="Column weight of M")

    @model_validator(mode='after')
    def validate_model(self):
        check_existence(self.n, self.m, self.r)
        return self

    @property
    def k_message(self) -> int:
        """Number of columns of M, the length of a message."""
        return self.n - self.m


class SearchConfig(BaseModel):
    """Configuration of a quasi-collision distance search."""
    model_config = ConfigDict(frozen=True)

    k: int = Field(..., ge=0, description="Chain length parameter: a chain sums k+1 columns of M")
    t: int = Field(0, ge=0, description="Tolerance, 0 selects the bound-driven value")
    max_chains: int = Field(100_000, ge=1, description="Number of chains sampled")
    seed: int = Field(0, description="Seed of the chain generator")
    bucket_offsets: int = Field(2, ge=1, description="Number of shifted quantization grids")
    threads: int = Field(1, ge=1, description="Chain worker threads, 1 is deterministic")

    @model_validator(mode='after')
    def validate_model(self):
        if self.t != 0 and self.t <= 2 * self.k:
            raise ValueError(f"explicit tolerance must satisfy t > 2k, got t={self.t}, k={self.k}")
        return self


class SweepConfig(BaseModel):
    """Configuration of an empirical distance sweep over a geometric grid of blocklengths."""
    r: int = Field(3, ge=3)
    k_list: List[int] = Field(default_factory=lambda: [0])
    n_grid: List[int] = Field(default_factory=list)
    seeds_per_point: int = Field(1, ge=1)
    budget: int = Field(10_000, ge=1)
    rate: float = Field(0.5, description="m = ceil(rate * n)")
    base_seed: int = Field(0)
    threads: int = Field(1, ge=1)

    @field_validator('k_list')
    @classmethod
    def validate_k_list(cls, v):
        for k in v:
            if k < 0:
                raise ValueError(f"k must be non-negative, got {k}")
        return v

    @field_validator('rate')
    @classmethod
    def validate_rate(cls, v):
        if not 0.0 < v < 1.0:
            raise ValueError(f"rate must lie in (0, 1), got {v}")
        return v


class BoundReport(BaseModel):
    """Every closed-form quantity of the upper bound for one (r, k, m, n)."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    r: int
    k: int
    m: int
    n: int
    c: int = Field(..., description="Size of a reduced multisupport, k(r-2)+r")
    t_star: int = Field(..., description="Smallest tolerance meeting the packing condition")
    weight_bound: int = Field(..., description="2(k+1) + t(k+1)r")
    epsilon: Fraction
    new_exponent: Fraction = Field(..., description="(r-2)/(r-1) + epsilon")
    old_exponent: Fraction = Field(..., description="(r-1)/r")
    lower_exponent: Fraction = Field(..., description="(r-2)/r")

    def to_csv_row(self) -> Dict[str, Any]:
        return {
            "r": self.r,
            "k": self.k,
            "m": self.m,
            "n": self.n,
            "c": self.c,
            "t_star": self.t_star,
            "weight_bound": self.weight_bound,
            "epsilon": str(self.epsilon),
            "new_exp": float(self.new_exponent),
            "old_exp": float(self.old_exponent),
            "lower_exp": float(self.lower_exponent),
        }
