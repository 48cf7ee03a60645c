import logging
import os

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from app.errors import MpfError
from app.logging_config import configure_logging
from app.routers import bench, cost, formulas, optimize, tables

logger = logging.getLogger(__name__)

app = FastAPI(
    title="Multiproduct Formula API",
    description="Exact construction, optimization, costing and benchmarking of well-conditioned multiproduct formulas.",
    version="1.0.0",
)

# Configure logging (JSON to stdout for Railway compatibility)
configure_logging()

# CORS configuration - use environment variable for allowed origins
cors_origins_env = os.getenv("CORS_ORIGINS", "")
if cors_origins_env == "*":
    cors_origins = ["*"]
elif cors_origins_env:
    cors_origins = [origin.strip() for origin in cors_origins_env.split(",")]
else:
    cors_origins = []

app.add_middleware(
    CORSMiddleware,
    allow_origins=cors_origins,
    allow_credentials=True,
    allow_methods=["GET", "POST"],
    allow_headers=["Authorization", "Content-Type"],
)


@app.exception_handler(MpfError)
async def mpf_error_handler(request: Request, exc: MpfError) -> JSONResponse:
    logger.warning(f"{request.method} {request.url.path} failed: {type(exc).__name__}: {exc}")
    return JSONResponse(status_code=exc.status_code, content={"detail": str(exc)})


app.include_router(formulas.router, prefix="/formulas", tags=["Formulas"])
app.include_router(optimize.router, prefix="/optimize", tags=["Optimization"])
app.include_router(tables.router, prefix="/tables", tags=["Tables"])
app.include_router(cost.router, prefix="/cost", tags=["Cost"])
app.include_router(bench.router, tags=["Benchmark"])


@app.get("/health")
async def health_check():
    """Health check endpoint (no auth required)."""
    return {"status": "healthy"}
