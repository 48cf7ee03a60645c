from fastapi import APIRouter, Depends, Query
from fastapi.concurrency import run_in_threadpool

from app.auth import verify_token
from app.models.bench import BenchRequest, BenchSweep, Figure1Row
from app.services import bench_service

router = APIRouter()


@router.get("/figure1", response_model=list[Figure1Row])
async def figure1(
    max_m: int = Query(16, ge=1, le=64, description="Largest m (order 2m) to tabulate"),
    _: str = Depends(verify_token),
) -> list[Figure1Row]:
    """Query counts and condition numbers per order for Suzuki, Chin and Chebyshev formulas."""
    return await run_in_threadpool(bench_service.figure1_data, max_m)


@router.post("/bench", response_model=BenchSweep)
async def bench(
    data: BenchRequest,
    _: str = Depends(verify_token),
) -> BenchSweep:
    """Run the Heisenberg-chain benchmark over a list of error targets."""
    return await run_in_threadpool(
        bench_service.benchmark_sweep,
        data.sites,
        data.time,
        data.eps_list,
        None,
        data.base,
        data.max_m,
        data.allow_large,
        data.comparison_order,
    )
