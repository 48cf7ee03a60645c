from typing import Optional

from pydantic import BaseModel, ConfigDict, Field

from app.models.formula import MpfFormula


class SimulationTask(BaseModel):
    """Evolution for time t under H with λ = Σ‖h_j‖, to spectral-norm error ε."""

    model_config = ConfigDict(frozen=True)

    t_lambda: float = Field(ge=0)
    epsilon: float = Field(gt=0, le=1)


class CostReport(BaseModel):
    order: int
    order_m: int
    steps_r: int = Field(ge=0)
    a_norm1: float
    k_norm1: int
    oaa_multiplier: int
    amplified: bool
    # U₂ invocations per base-sequence query (5^{α/2−1})
    base_query_factor: int = 1
    u2_queries: int
    progmpf_queries: int
    extra_gates: int
    success_probability_floor: float
    error_inflation_constant: int = 1


class ProgMpfCost(BaseModel):
    queries_per_step: int
    precision_p: int
    k_norm1: int


class CostSweepRow(BaseModel):
    t_lambda: float
    epsilon: float
    order: int
    r: int
    u2_queries: int
    progmpf_queries: int


class CostRequest(BaseModel):
    t_lambda: float = Field(ge=0)
    epsilon: float = Field(gt=0, le=1)
    formula: Optional[MpfFormula] = None
    amplified: bool = True
    steps: Optional[int] = Field(default=None, ge=0)


class ProgMpfRequest(BaseModel):
    formula: MpfFormula
    n_terms: int = Field(gt=0)
    # Defaults to the number of formula terms
    n_products: Optional[int] = Field(default=None, gt=0)
    delta: float = Field(gt=0)
    epsilon: float = Field(gt=0)
