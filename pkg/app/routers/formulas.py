from fastapi import APIRouter, Depends
from fastapi.concurrency import run_in_threadpool

from app.auth import verify_token
from app.models.formula import ConditionReport, ConstructRequest, ConstructResponse, MpfFormula
from app.services import construct_service

router = APIRouter()


@router.post("/construct", response_model=ConstructResponse)
async def construct_formula(
    data: ConstructRequest,
    _: str = Depends(verify_token),
) -> ConstructResponse:
    """Build a Chin, Chebyshev, halved-Chebyshev or rounded formula of the requested order."""
    return await run_in_threadpool(
        construct_service.construct, data.order, data.method, data.base, data.scale_factor
    )


@router.post("/condition", response_model=ConditionReport)
async def condition(
    formula: MpfFormula,
    _: str = Depends(verify_token),
) -> ConditionReport:
    """Condition number and query count of a formula (validated exactly on input)."""
    return construct_service.condition_report(formula)
