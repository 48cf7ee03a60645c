"""Exact rational linear algebra for multiproduct coefficient systems.

All values are ``fractions.Fraction``, which keeps every result in lowest
terms with a positive denominator.
"""
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction
import logging

from app.errors import DimensionMismatch, DuplicateExponent, SingularMatrix

logger = logging.getLogger(__name__)

RationalVector = tuple[Fraction, ...]


@dataclass(frozen=True)
class RationalMatrix:
    """Dense row-major matrix of Fractions."""

    rows: int
    cols: int
    entries: tuple[Fraction, ...]

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise DimensionMismatch(f"matrix shape must be positive, got {self.rows}x{self.cols}")
        if len(self.entries) != self.rows * self.cols:
            raise DimensionMismatch(
                f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} entries, got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Fraction | int]]) -> "RationalMatrix":
        if not rows:
            raise DimensionMismatch("matrix needs at least one row")
        width = len(rows[0])
        if any(len(row) != width for row in rows):
            raise DimensionMismatch("ragged rows")
        return cls(len(rows), width, tuple(Fraction(v) for row in rows for v in row))

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls.from_rows([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    def __getitem__(self, index: tuple[int, int]) -> Fraction:
        i, j = index
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> RationalVector:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def to_rows(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def column_subset(self, columns: Sequence[int]) -> "RationalMatrix":
        return RationalMatrix.from_rows([[self[i, j] for j in columns] for i in range(self.rows)])

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols


def as_vector(values: Iterable[Fraction | int]) -> RationalVector:
    return tuple(Fraction(v) for v in values)


def unit_vector(n: int, index: int = 0) -> RationalVector:
    """ê_{index+1} of length n."""
    return tuple(Fraction(1) if i == index else Fraction(0) for i in range(n))


def solve_exact(a: RationalMatrix, b: Sequence[Fraction | int]) -> RationalVector:
    """Solve A·x = b exactly by Gauss-Jordan elimination with partial pivoting.

    The pivot is the largest-magnitude entry of the column, which keeps the
    intermediate fractions small on Vandermonde-like systems.
    """
    if not a.is_square:
        raise DimensionMismatch(f"solve_exact needs a square matrix, got {a.rows}x{a.cols}")
    if len(b) != a.rows:
        raise DimensionMismatch(f"right-hand side has length {len(b)}, expected {a.rows}")

    n = a.rows
    work = [row + [Fraction(rhs)] for row, rhs in zip(a.to_rows(), b)]

    for col in range(n):
        pivot_row = max(range(col, n), key=lambda r: abs(work[r][col]))
        if work[pivot_row][col] == 0:
            raise SingularMatrix(f"no nonzero pivot in column {col}")
        work[col], work[pivot_row] = work[pivot_row], work[col]

        pivot = work[col][col]
        work[col] = [v / pivot for v in work[col]]
        for r in range(n):
            factor = work[r][col]
            if r == col or factor == 0:
                continue
            pivot_values = work[col]
            work[r] = [v - factor * p for v, p in zip(work[r], pivot_values)]

    return tuple(row[n] for row in work)


def vandermonde_closed_form(k: Sequence[Fraction | int]) -> RationalVector:
    """Coefficients a_j = Π_{q≠j} 1/(1 − (k_q/k_j)²) of the square base-2 system."""
    values = as_vector(k)
    if any(v == 0 for v in values):
        raise DuplicateExponent("exponents must be nonzero")
    if len(set(values)) != len(values):
        raise DuplicateExponent(f"exponents must be distinct, got {[str(v) for v in values]}")

    coefficients = []
    for j, k_j in enumerate(values):
        a_j = Fraction(1)
        for q, k_q in enumerate(values):
            if q != j:
                ratio = k_q / k_j
                a_j /= 1 - ratio * ratio
        coefficients.append(a_j)
    return tuple(coefficients)


def matvec(a: RationalMatrix, x: Sequence[Fraction | int]) -> RationalVector:
    if len(x) != a.cols:
        raise DimensionMismatch(f"vector has length {len(x)}, expected {a.cols}")
    xs = as_vector(x)
    return tuple(sum((a[i, j] * xs[j] for j in range(a.cols)), Fraction(0)) for i in range(a.rows))


def residual(
    a: RationalMatrix,
    x: Sequence[Fraction | int],
    b: Sequence[Fraction | int],
) -> RationalVector:
    """A·x − b, exactly."""
    if len(b) != a.rows:
        raise DimensionMismatch(f"right-hand side has length {len(b)}, expected {a.rows}")
    return tuple(ax - Fraction(rhs) for ax, rhs in zip(matvec(a, x), b))


def is_zero(vector: Iterable[Fraction]) -> bool:
    return all(v == 0 for v in vector)


def row_powers(alpha: int, m: int) -> tuple[int, ...]:
    """Row exponents {0, α, α+2, …, 2m−2} of the generalized system."""
    if alpha < 2 or alpha % 2:
        raise DimensionMismatch(f"base order must be even and >= 2, got {alpha}")
    if 2 * m < alpha:
        raise DimensionMismatch(f"order 2m={2 * m} is below the base order {alpha}")
    return (0,) + tuple(range(alpha, 2 * m - 1, 2))


def equation_count(alpha: int, m: int) -> int:
    """m − α/2 + 1 constraints (and nonzero coefficients)."""
    return len(row_powers(alpha, m))


def generalized_vandermonde_rect(
    candidates: Sequence[Fraction | int], alpha: int, m: int
) -> RationalMatrix:
    """Rows k^{−p} for p in row_powers(alpha, m), one column per candidate exponent."""
    ks = as_vector(candidates)
    if any(k <= 0 for k in ks):
        raise DimensionMismatch("exponents must be positive")
    return RationalMatrix.from_rows([[k ** -p for k in ks] for p in row_powers(alpha, m)])


def generalized_vandermonde(exponents: Sequence[Fraction | int], alpha: int, m: int) -> RationalMatrix:
    """Square generalized system; len(exponents) must equal m − α/2 + 1."""
    expected = equation_count(alpha, m)
    if len(exponents) != expected:
        raise DimensionMismatch(
            f"order {2 * m} with base order {alpha} needs {expected} exponents, got {len(exponents)}"
        )
    return generalized_vandermonde_rect(exponents, alpha, m)
