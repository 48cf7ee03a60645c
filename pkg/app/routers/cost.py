from fastapi import APIRouter, Depends
from fastapi.concurrency import run_in_threadpool

from app.auth import verify_token
from app.models.cost import CostReport, CostRequest, ProgMpfCost, ProgMpfRequest, SimulationTask
from app.services import construct_service, cost_service

router = APIRouter()


def _cost(data: CostRequest) -> CostReport:
    task = SimulationTask(t_lambda=data.t_lambda, epsilon=data.epsilon)
    formula = data.formula
    if formula is None:
        formula = construct_service.rounded_mpf(cost_service.choose_order(task) // 2)
    return cost_service.total_cost(task, formula, amplified=data.amplified, steps=data.steps)


@router.post("", response_model=CostReport)
async def cost(
    data: CostRequest,
    _: str = Depends(verify_token),
) -> CostReport:
    """Step count and query cost; without a formula the order is chosen for the task."""
    return await run_in_threadpool(_cost, data)


@router.post("/progmpf", response_model=ProgMpfCost)
async def progmpf(
    data: ProgMpfRequest,
    _: str = Depends(verify_token),
) -> ProgMpfCost:
    """Programmable-query cost per step and the rotation precision P."""
    return cost_service.progmpf_cost(data.formula, data.n_terms, data.n_products, data.delta, data.epsilon)
