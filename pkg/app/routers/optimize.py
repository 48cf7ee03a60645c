from fastapi import APIRouter, Depends
from fastapi.concurrency import run_in_threadpool

from app.auth import verify_token
from app.models.optimize import LpProblem, LpSolution, OptimizeRequest
from app.services import optimize_service

router = APIRouter()


@router.post("", response_model=LpSolution)
async def optimize(
    data: OptimizeRequest,
    _: str = Depends(verify_token),
) -> LpSolution:
    """Search for a well-conditioned formula.

    ``product`` minimizes ‖a‖₁·‖k‖₁, ``k1cap`` minimizes ‖k‖₁ under ‖a‖₁ ≤ cap
    and ``lp`` solves the single LP over exponents 1..max_exponent. Both searches
    pick from the per-M LP solutions unless ``enumerate_supports`` is set.
    """
    if data.objective == "product":
        return await run_in_threadpool(
            optimize_service.search_min_product,
            data.m,
            data.alpha,
            data.max_exponent,
            data.enumerate_supports,
        )
    if data.objective == "k1cap":
        return await run_in_threadpool(
            optimize_service.search_min_k1_capped,
            data.m,
            data.alpha,
            data.cap,
            data.max_exponent,
            data.enumerate_supports,
        )
    problem = LpProblem(
        m=data.m,
        alpha=data.alpha,
        M=data.max_exponent or optimize_service.default_max_exponent(data.m),
    )
    return await run_in_threadpool(optimize_service.l1_min_lp, problem)
