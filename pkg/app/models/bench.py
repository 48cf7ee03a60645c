from typing import Literal, Optional

from pydantic import BaseModel, Field, PositiveFloat


class StepCertificate(BaseModel):
    """Smallest step count meeting epsilon, with the errors that bracket it."""

    steps: int = Field(ge=1)
    error: float
    previous_error: Optional[float] = None
    epsilon: float
    monotone: bool = True


class BenchPoint(BaseModel):
    sites: int
    time: float
    epsilon: float
    formula_id: str
    order: int
    base_order: int
    k_norm1: int
    oaa_multiplier: int
    status: Literal["ok", "unreachable"] = "ok"
    steps_r: Optional[int] = None
    total_cost: Optional[int] = None
    measured_error: Optional[float] = None
    # 1 for the cheapest formula at this epsilon, 2 for the runner-up
    rank: Optional[int] = None


class BenchSweep(BaseModel):
    sites: int
    time: float
    base_order: int
    points: list[BenchPoint]
    comparison: list[BenchPoint] = []

    def winners(self) -> list[BenchPoint]:
        return [p for p in self.points if p.rank == 1]


class Figure1Row(BaseModel):
    order: int
    suzuki_queries: int
    chin_a_norm1: float
    chin_k_norm1: int
    rounded_a_norm1: float
    rounded_k_norm1: int
    chebyshev_a_norm1: float


class BenchRequest(BaseModel):
    sites: int = Field(ge=2)
    time: Optional[float] = None
    eps_list: list[PositiveFloat] = Field(min_length=1)
    base: int = Field(default=2, ge=2)
    max_m: Optional[int] = Field(default=None, ge=1)
    allow_large: bool = False
    comparison_order: Optional[int] = 4
