"""Query-cost accounting for simulating e^{−iHt} with a multiproduct formula.

Asymptotic statements are realized with unit constants and ceilings. Every
bound this module returns is checked by direct evaluation, not assumed.
"""
from collections.abc import Iterable
from fractions import Fraction
import logging
import math

from app.models.cost import CostReport, CostSweepRow, ProgMpfCost, SimulationTask
from app.models.formula import MpfFormula
from app.services.construct_service import rounded_mpf
from app.services.optimize_service import oaa_multiplier

logger = logging.getLogger(__name__)

LAMBERT_TOLERANCE = 1e-12
LAMBERT_MAX_ITERATIONS = 100


def single_step_error_bound(delta_lambda: float, m: int, a_norm1: float | Fraction) -> float:
    """ε_Δ = 2‖a‖₁|Δλ|^{2m+1} e^{|Δλ|} / (2m+1)!, evaluated in log space."""
    x = abs(delta_lambda)
    if x == 0:
        return 0.0
    log_bound = (2 * m + 1) * math.log(x) + x + math.log(2 * float(a_norm1)) - math.lgamma(2 * m + 2)
    try:
        return math.exp(log_bound)
    except OverflowError:
        return math.inf


def accumulated_error_bound(task: SimulationTask, m: int, a_norm1: float | Fraction, r: int) -> float:
    """ε_{t/r}·r·(1 + ε_{t/r})^{r−1}, the error of r repeated steps."""
    if r == 0:
        return 0.0 if task.t_lambda == 0 else math.inf
    step = single_step_error_bound(task.t_lambda / r, m, a_norm1)
    try:
        return step * r * math.exp((r - 1) * math.log1p(step))
    except OverflowError:
        return math.inf


def step_count(task: SimulationTask, m: int, a_norm1: float | Fraction) -> int:
    """r = ⌈tλ·max{(8tλ‖a‖₁/(ε(2m+1)!))^{1/(2m)}, 1/log 2}⌉; 0 when tλ = 0."""
    if task.t_lambda == 0:
        return 0
    log_branch = (
        math.log(8 * task.t_lambda * float(a_norm1)) - math.log(task.epsilon) - math.lgamma(2 * m + 2)
    ) / (2 * m)
    scale = max(math.exp(log_branch), 1 / math.log(2))
    r = max(1, math.ceil(task.t_lambda * scale))

    bumped = r
    while accumulated_error_bound(task, m, a_norm1, bumped) > task.epsilon:
        bumped += 1
    if bumped != r:
        logger.warning(f"Step count raised from {r} to {bumped} to meet epsilon={task.epsilon}")
    return bumped


def lambert_w(x: float) -> float:
    """Principal branch of W, the inverse of z·e^z, for x ≥ 0."""
    if x < 0:
        raise ValueError(f"lambert_w needs x >= 0, got {x!r}")
    if x == 0:
        return 0.0

    z = math.log1p(x)
    for _ in range(LAMBERT_MAX_ITERATIONS):
        if x <= math.e:
            residual = z * math.exp(z) - x
            if abs(residual) <= LAMBERT_TOLERANCE * max(1.0, x):
                return z
            z -= residual / (math.exp(z) * (z + 1))
        else:
            # z + log z = log x avoids overflowing e^z for large x
            residual = z + math.log(z) - math.log(x)
            if abs(residual) <= LAMBERT_TOLERANCE:
                return z
            z -= residual / (1 + 1 / z)
    logger.warning(f"lambert_w({x!r}) stopped after {LAMBERT_MAX_ITERATIONS} iterations")
    return z


def choose_order(task: SimulationTask) -> int:
    """2m = smallest even integer ≥ e^{W(log(tλ/ε))}, at least 2."""
    if task.t_lambda <= task.epsilon:
        return 2
    z = lambert_w(math.log(task.t_lambda / task.epsilon))
    return max(2, 2 * math.ceil(math.exp(z) / 2))


def total_cost(
    task: SimulationTask,
    formula: MpfFormula,
    amplified: bool = True,
    steps: int | None = None,
) -> CostReport:
    """Query and gate accounting for r steps of ``formula``.

    Amplified steps succeed with probability at least 1 − ε; unamplified ones
    with ‖a‖₁^{−2} each, compounded over the r steps.
    """
    a_norm1 = formula.a_norm1
    r = steps if steps is not None else step_count(task, formula.m, a_norm1)
    n = oaa_multiplier(a_norm1) if amplified else 1
    base_factor = 5 ** (formula.base_order // 2 - 1)

    if r == 0:
        success = 1.0
    elif amplified:
        success = 1 - task.epsilon
    else:
        success = float(a_norm1) ** (-2 * r)

    report = CostReport(
        order=formula.order,
        order_m=formula.m,
        steps_r=r,
        a_norm1=float(a_norm1),
        k_norm1=formula.k_norm1,
        oaa_multiplier=n,
        amplified=amplified,
        base_query_factor=base_factor,
        u2_queries=r * formula.k_norm1 * n * base_factor,
        progmpf_queries=r * formula.max_exponent * n * base_factor,
        extra_gates=r * n * len(formula.exponents),
        success_probability_floor=success,
    )
    logger.debug(f"Cost for order {formula.order}: r={r} u2_queries={report.u2_queries}")
    return report


def progmpf_cost(
    formula: MpfFormula,
    n_terms: int,
    n_products: int | None,
    delta: float,
    epsilon: float,
) -> ProgMpfCost:
    """Programmable-query accounting: max_j k_j queries per step, P = ⌈N·M·Δ/ε⌉.

    ``n_products`` is M, the number of product formulas combined (defaults to
    the formula's term count). Decimal inputs are taken at face value, so
    ε = 1e-3 divides exactly.
    """
    products = n_products if n_products is not None else len(formula.exponents)
    precision = Fraction(n_terms * products) * Fraction(str(float(delta))) / Fraction(str(float(epsilon)))
    return ProgMpfCost(
        queries_per_step=formula.max_exponent,
        precision_p=math.ceil(precision),
        k_norm1=formula.k_norm1,
    )


def cost_sweep(
    t_lambdas: Iterable[float],
    epsilons: Iterable[float],
    amplified: bool = True,
) -> list[CostSweepRow]:
    """Order from choose_order and a rounded-Chebyshev formula per (tλ, ε)."""
    epsilon_list = list(epsilons)
    formulas: dict[int, MpfFormula] = {}
    rows = []
    for t_lambda in t_lambdas:
        for epsilon in epsilon_list:
            task = SimulationTask(t_lambda=t_lambda, epsilon=epsilon)
            order = choose_order(task)
            if order not in formulas:
                formulas[order] = rounded_mpf(order // 2)
            report = total_cost(task, formulas[order], amplified=amplified)
            rows.append(
                CostSweepRow(
                    t_lambda=t_lambda,
                    epsilon=epsilon,
                    order=order,
                    r=report.steps_r,
                    u2_queries=report.u2_queries,
                    progmpf_queries=report.progmpf_queries,
                )
            )
    logger.info(f"Cost sweep produced {len(rows)} rows")
    return rows
