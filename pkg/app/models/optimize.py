from enum import Enum
from fractions import Fraction
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app.models.formula import MpfFormula
from app.models.rational import Rational


class Objective(str, Enum):
    min_a_norm1 = "min_a_norm1"
    min_k_norm1_capped = "min_k_norm1_capped"
    # search_min_product's target, reported on its solutions
    min_product = "min_product"


class LpProblem(BaseModel):
    """min ‖a‖₁ subject to the order conditions over candidate exponents 1..M."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True, populate_by_name=True)

    m: int = Field(ge=1)
    alpha: int = Field(default=2, ge=2)
    max_exponent: int = Field(ge=1, alias="M")
    objective: Objective = Objective.min_a_norm1
    bound: Optional[Rational] = None

    @field_validator("alpha")
    @classmethod
    def alpha_even(cls, v: int) -> int:
        if v % 2:
            raise ValueError(f"base order must be even, got {v}")
        return v

    @model_validator(mode="after")
    def check_bound(self) -> "LpProblem":
        if self.objective == Objective.min_k_norm1_capped and (self.bound is None or self.bound < 1):
            raise ValueError("min_k_norm1_capped needs a bound >= 1")
        return self


class LpSolution(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True, populate_by_name=True)

    alpha: int
    order: int
    support: tuple[int, ...] = Field(alias="exponents")
    coefficients: tuple[Rational, ...]
    a_norm1: Rational
    k_norm1: int
    objective: Objective
    # True when every exponent subset of 1..M was compared, not just the LP sweep
    exhaustive: bool = True

    @property
    def m(self) -> int:
        return self.order // 2

    @property
    def product(self) -> Fraction:
        return self.a_norm1 * self.k_norm1

    def to_formula(self) -> MpfFormula:
        return MpfFormula(
            base_order=self.alpha,
            order=self.order,
            exponents=self.support,
            coefficients=self.coefficients,
        )

    def to_json_dict(self) -> dict:
        return self.model_dump(mode="json", by_alias=True)


class OptimizeRequest(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    m: int = Field(ge=1)
    alpha: int = Field(default=2, ge=2)
    objective: str = Field(default="product", pattern="^(product|k1cap|lp)$")
    cap: Rational = Fraction(2)
    max_exponent: Optional[int] = Field(default=None, ge=1)
    enumerate_supports: bool = False
