"""Multiproduct formula constructions.

Chin's arithmetic exponents are the ill-conditioned baseline. The Chebyshev
families place the interpolation points x_j = 1/k_j² at Chebyshev nodes,
which keeps ‖a‖₁ logarithmic in the order, and ``rounded_mpf`` turns the
halved Chebyshev exponents into integers.
"""
from collections.abc import Sequence
from fractions import Fraction
import logging
import math

from pydantic import ValidationError

from app.config import settings
from app.errors import DimensionMismatch, DuplicateExponent, InvalidFormula, RoundingCollision
from app.models.formula import (
    ConditionReport,
    ConstructMethod,
    ConstructResponse,
    MpfFormula,
    RealMpf,
    ScalePolicy,
)
from app.services.exact_service import (
    equation_count,
    generalized_vandermonde,
    solve_exact,
    unit_vector,
    vandermonde_closed_form,
)

logger = logging.getLogger(__name__)


def _require_order(m: int):
    if m < 1:
        raise DimensionMismatch(f"m must be >= 1, got {m}")


def chebyshev_nodes(m: int) -> tuple[float, ...]:
    """x_j = sin²(π(2j−1)/(4m)) for j = 1..m, increasing in (0, 1)."""
    _require_order(m)
    return tuple(math.sin(math.pi * (2 * j - 1) / (4 * m)) ** 2 for j in range(1, m + 1))


def chebyshev_mpf(m: int) -> RealMpf:
    """Real-exponent formula on all m Chebyshev nodes with closed-form coefficients."""
    points = chebyshev_nodes(m)
    coefficients = tuple(
        (-1) ** (j + 1) / m / math.tan(math.pi * (2 * j - 1) / (4 * m)) for j in range(1, m + 1)
    )
    return RealMpf(
        order=2 * m,
        interpolation_points=points,
        real_exponents=tuple(1 / math.sqrt(x) for x in points),
        coefficients=coefficients,
    )


def real_closed_form(exponents: Sequence[float]) -> tuple[float, ...]:
    """Floating evaluation of a_j = Π_{q≠j} 1/(1 − (k_q/k_j)²)."""
    coefficients = []
    for j, k_j in enumerate(exponents):
        a_j = 1.0
        for q, k_q in enumerate(exponents):
            if q != j:
                a_j /= 1 - (k_q / k_j) ** 2
        coefficients.append(a_j)
    return tuple(coefficients)


def halved_chebyshev_mpf(m: int) -> RealMpf:
    """Real-exponent formula on the first m nodes of the 2m-node Chebyshev set.

    Dropping the upper half of the nodes removes the exponents closest to 1,
    so every remaining k′_j = 1/√x′_j exceeds √2.
    """
    points = chebyshev_nodes(2 * m)[:m]
    exponents = tuple(1 / math.sqrt(x) for x in points)
    return RealMpf(
        order=2 * m,
        interpolation_points=points,
        real_exponents=exponents,
        coefficients=real_closed_form(exponents),
    )


def rounded_exponents(m: int, scale_policy: ScalePolicy | None = None) -> tuple[int, ...]:
    """Ascending integer exponents ⌈K/√x_j^{(2m)}⌉, j ∈ [m]."""
    _require_order(m)
    policy = scale_policy or ScalePolicy(factor=settings.mpf_default_scale_factor)
    scale = policy.scale_for(m)
    points = chebyshev_nodes(2 * m)[:m]
    exponents = sorted(math.ceil(scale / math.sqrt(x)) for x in points)
    if len(set(exponents)) != len(exponents):
        duplicates = sorted({k for k in exponents if exponents.count(k) > 1})
        raise RoundingCollision(f"scale K={scale!r} rounds m={m} exponents onto duplicates {duplicates}")
    return tuple(exponents)


def rounded_mpf(m: int, scale_policy: ScalePolicy | None = None) -> MpfFormula:
    """Order-2m integer formula from the rounded halved-Chebyshev exponents."""
    exponents = rounded_exponents(m, scale_policy)
    logger.debug(f"Rounded exponents for m={m}: {exponents}")
    return formula_from_exponents(exponents, alpha=2, m=m)


def formula_from_exponents(exponents: Sequence[int], alpha: int, m: int) -> MpfFormula:
    """Exact coefficients for distinct positive exponents on base order alpha."""
    ks = sorted(int(k) for k in exponents)
    if len(set(ks)) != len(ks):
        raise DuplicateExponent(f"exponents must be distinct, got {ks}")
    if any(k < 1 for k in ks):
        raise DimensionMismatch(f"exponents must be positive, got {ks}")
    expected = equation_count(alpha, m)
    if len(ks) != expected:
        raise DimensionMismatch(
            f"order {2 * m} with base order {alpha} needs {expected} exponents, got {len(ks)}"
        )

    if alpha == 2:
        coefficients = vandermonde_closed_form(ks)
    else:
        system = generalized_vandermonde(ks, alpha, m)
        coefficients = solve_exact(system, unit_vector(system.rows))
    return MpfFormula(base_order=alpha, order=2 * m, exponents=tuple(ks), coefficients=coefficients)


def chin_mpf(m: int, alpha: int = 2) -> MpfFormula:
    """Arithmetic exponents 1, 2, …, m − α/2 + 1."""
    _require_order(m)
    return formula_from_exponents(range(1, equation_count(alpha, m) + 1), alpha=alpha, m=m)


def load_formula(data: dict) -> MpfFormula:
    """Validate a formula JSON object, reporting invariant failures as InvalidFormula."""
    try:
        return MpfFormula.model_validate(data)
    except ValidationError as exc:
        messages = "; ".join(err["msg"] for err in exc.errors())
        raise InvalidFormula(f"invalid formula: {messages}") from exc


def condition_report(formula: MpfFormula | RealMpf) -> ConditionReport:
    if isinstance(formula, MpfFormula):
        a_norm1 = formula.a_norm1
        return ConditionReport(
            order=formula.order,
            a_norm1=float(a_norm1),
            k_norm1=formula.k_norm1,
            product=float(a_norm1 * formula.k_norm1),
            a_norm1_exact=a_norm1,
        )
    a_norm1 = formula.a_norm1
    k_norm1 = formula.k_norm1
    return ConditionReport(order=formula.order, a_norm1=a_norm1, k_norm1=k_norm1, product=a_norm1 * k_norm1)


def exact_a_norm1(exponents: Sequence[int]) -> Fraction:
    """‖a‖₁ of the base-2 formula on these exponents, skipping MpfFormula's residual check."""
    return sum((abs(a) for a in vandermonde_closed_form(exponents)), Fraction(0))


def construct(
    order: int,
    method: ConstructMethod,
    base: int = 2,
    scale_factor: float | None = None,
) -> ConstructResponse:
    """Dispatch for the construct command and endpoint."""
    if order % 2 or order < 2:
        raise DimensionMismatch(f"order must be even and >= 2, got {order}")
    m = order // 2
    method = ConstructMethod(method)
    if base != 2 and method != ConstructMethod.chin:
        raise DimensionMismatch(f"the {method.value} construction is defined for base order 2 only")

    if method == ConstructMethod.chin:
        formula = chin_mpf(m, alpha=base)
    elif method == ConstructMethod.rounded:
        policy = ScalePolicy(factor=scale_factor or settings.mpf_default_scale_factor)
        formula = rounded_mpf(m, policy)
    else:
        real = chebyshev_mpf(m) if method == ConstructMethod.chebyshev else halved_chebyshev_mpf(m)
        return ConstructResponse(method=method, real_formula=real, condition=condition_report(real))

    logger.info(f"Constructed {method.value} formula of order {order}: exponents={formula.exponents}")
    return ConstructResponse(method=method, formula=formula, condition=condition_report(formula))
