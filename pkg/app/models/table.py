from typing import Literal

from pydantic import BaseModel, ConfigDict, Field

from app.models.rational import Rational

Section = Literal["min_a1k1", "min_k1_capped"]


class TableRow(BaseModel):
    """One printed row: ‖a‖₁ as printed (rounded), ‖k‖₁, exponents and exact coefficients."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    section: Section
    m: int = Field(ge=1)
    a_norm1: str = Field(pattern=r"^\d+\.\d+$")
    k_norm1: int = Field(ge=1)
    exponents: tuple[int, ...]
    coefficients: tuple[Rational, ...]


class TableFixture(BaseModel):
    alpha: int = Field(ge=2)
    rows: list[TableRow]


class RowVerification(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    locator: str
    section: Section
    m: int
    passed: bool
    residual_zero: bool
    a_norm1_printed: str
    a_norm1_exact: Rational | None = None
    a_norm1_match: bool
    k_norm1_match: bool
    failures: list[str] = []


class TableVerificationReport(BaseModel):
    fixture: str
    alpha: int
    row_count: int
    failed_count: int
    passed: bool
    rows: list[RowVerification]
