from typing import Literal

from fastapi import APIRouter, Depends
from fastapi.concurrency import run_in_threadpool

from app.auth import verify_token
from app.models.table import TableVerificationReport
from app.services import table_service

router = APIRouter()


@router.get("/{name}/verify", response_model=TableVerificationReport)
async def verify_table(
    name: Literal["base2", "base4"],
    _: str = Depends(verify_token),
) -> TableVerificationReport:
    """Exactly verify every row of a bundled coefficient table."""
    return await run_in_threadpool(table_service.verify_named_table, name)
