from enum import Enum
from fractions import Fraction
import math
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app.models.rational import Rational
from app.services.exact_service import (
    equation_count,
    generalized_vandermonde,
    is_zero,
    residual,
    unit_vector,
)

REAL_SUM_TOLERANCE = 1e-12


class MpfFormula(BaseModel):
    """Integer-exponent multiproduct formula Σ a_j U_α^{k_j}(Δ/k_j) of order 2m.

    Serialized with the formula schema ``{"alpha", "order", "exponents", "coefficients"}``.
    """

    model_config = ConfigDict(frozen=True, populate_by_name=True, arbitrary_types_allowed=True)

    base_order: int = Field(alias="alpha", ge=2)
    order: int = Field(ge=2)
    exponents: tuple[int, ...]
    coefficients: tuple[Rational, ...]

    @field_validator("base_order", "order")
    @classmethod
    def must_be_even(cls, v: int) -> int:
        if v % 2:
            raise ValueError(f"must be even, got {v}")
        return v

    @model_validator(mode="after")
    def check_invariants(self) -> "MpfFormula":
        if self.order < self.base_order:
            raise ValueError(f"order {self.order} is below the base order {self.base_order}")
        expected = equation_count(self.base_order, self.m)
        if len(self.exponents) != expected or len(self.coefficients) != expected:
            raise ValueError(
                f"order {self.order} on base order {self.base_order} needs {expected} exponents and "
                f"coefficients, got {len(self.exponents)} and {len(self.coefficients)}"
            )
        if any(k < 1 for k in self.exponents):
            raise ValueError("exponents must be positive integers")
        if any(b <= a for a, b in zip(self.exponents, self.exponents[1:])):
            raise ValueError("exponents must be distinct and ascending")
        if sum(self.coefficients, Fraction(0)) != 1:
            raise ValueError("coefficients must sum to exactly 1")
        system = generalized_vandermonde(self.exponents, self.base_order, self.m)
        if not is_zero(residual(system, self.coefficients, unit_vector(system.rows))):
            raise ValueError("coefficients do not solve the order conditions exactly")
        return self

    @property
    def m(self) -> int:
        return self.order // 2

    @property
    def a_norm1(self) -> Fraction:
        return sum((abs(a) for a in self.coefficients), Fraction(0))

    @property
    def k_norm1(self) -> int:
        return sum(self.exponents)

    @property
    def max_exponent(self) -> int:
        return self.exponents[-1]

    def to_json_dict(self) -> dict:
        return self.model_dump(mode="json", by_alias=True)


class RealMpf(BaseModel):
    """Real-exponent multiproduct formula built on interpolation points x_j = 1/k_j²."""

    model_config = ConfigDict(frozen=True)

    order: int = Field(ge=2)
    interpolation_points: tuple[float, ...]
    real_exponents: tuple[float, ...]
    coefficients: tuple[float, ...]

    @model_validator(mode="after")
    def check_invariants(self) -> "RealMpf":
        n = len(self.interpolation_points)
        if n == 0 or len(self.real_exponents) != n or len(self.coefficients) != n:
            raise ValueError("points, exponents and coefficients must have the same nonzero length")
        if any(not 0 < x < 1 for x in self.interpolation_points):
            raise ValueError("interpolation points must lie in (0, 1)")
        if any(b <= a for a, b in zip(self.interpolation_points, self.interpolation_points[1:])):
            raise ValueError("interpolation points must be strictly increasing")
        if any(b >= a for a, b in zip(self.real_exponents, self.real_exponents[1:])):
            raise ValueError("real exponents must be strictly decreasing")
        total = math.fsum(self.coefficients)
        if abs(total - 1) > REAL_SUM_TOLERANCE:
            raise ValueError(f"coefficients sum to {total!r}, expected 1")
        return self

    @property
    def m(self) -> int:
        return self.order // 2

    @property
    def a_norm1(self) -> float:
        return math.fsum(abs(a) for a in self.coefficients)

    @property
    def k_norm1(self) -> float:
        return math.fsum(self.real_exponents)


class ConditionReport(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    order: int
    a_norm1: float
    k_norm1: int | float
    product: float
    a_norm1_exact: Optional[Rational] = None


class ScalePolicy(BaseModel):
    """Scale K for rounded exponents: ``scale`` if given, else factor·√8·m/π."""

    model_config = ConfigDict(frozen=True)

    factor: float = Field(default=0.999, gt=0)
    scale: Optional[float] = Field(default=None, gt=0)

    def scale_for(self, m: int) -> float:
        if self.scale is not None:
            return self.scale
        return self.factor * math.sqrt(8) * m / math.pi


class ConstructMethod(str, Enum):
    chebyshev = "chebyshev"
    halved = "halved"
    rounded = "rounded"
    chin = "chin"


class ConstructRequest(BaseModel):
    order: int = Field(ge=2)
    method: ConstructMethod
    base: int = Field(default=2, ge=2)
    scale_factor: Optional[float] = Field(default=None, gt=0)

    @field_validator("order", "base")
    @classmethod
    def must_be_even(cls, v: int) -> int:
        if v % 2:
            raise ValueError(f"must be even, got {v}")
        return v


class ConstructResponse(BaseModel):
    method: ConstructMethod
    formula: Optional[MpfFormula] = None
    real_formula: Optional[RealMpf] = None
    condition: ConditionReport
