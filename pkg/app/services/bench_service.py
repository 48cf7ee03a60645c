"""Heisenberg-chain benchmark, step-count search and conditioning curves."""
import logging

from app.config import settings
from app.errors import DimensionCap, Unreachable
from app.models.bench import BenchPoint, BenchSweep, Figure1Row, StepCertificate
from app.models.formula import MpfFormula
from app.services import construct_service, sim_service, table_service
from app.services.optimize_service import oaa_multiplier
from app.services.sim_service import HamiltonianModel
from app.utils.jobs import run_jobs

logger = logging.getLogger(__name__)

LINEAR_SCAN_LIMIT = 64
FIGURE1_MAX_M = 64


def suzuki_formula(alpha: int) -> MpfFormula:
    """Plain order-α Suzuki integrator as a single-term formula."""
    return MpfFormula(base_order=alpha, order=alpha, exponents=(1,), coefficients=(1,))


def min_steps(
    hamiltonian: HamiltonianModel,
    formula: MpfFormula,
    t: float,
    epsilon: float,
    max_steps: int | None = None,
) -> StepCertificate:
    """Smallest r with evolution_error(r) ≤ ε: doubling, then binary search.

    The search assumes the error decays monotonically in r. If the doubling
    sequence is not monotone and the bracket lies below 64 steps, every r up
    to the bracket is scanned instead.
    """
    if epsilon <= 0:
        raise Unreachable(f"epsilon must be positive, got {epsilon!r}")
    ceiling = max_steps or settings.mpf_max_steps
    errors: dict[int, float] = {}

    def error(r: int) -> float:
        if r not in errors:
            errors[r] = sim_service.evolution_error(hamiltonian, formula, t, r)
        return errors[r]

    if error(1) <= epsilon:
        return StepCertificate(steps=1, error=error(1), epsilon=epsilon)

    lo, hi = 1, 1
    doubling = [error(1)]
    while error(hi) > epsilon:
        if hi >= ceiling:
            raise Unreachable(f"error {error(hi):.3e} at r={hi} is still above epsilon={epsilon:.3e}")
        lo, hi = hi, min(2 * hi, ceiling)
        doubling.append(error(hi))
    monotone = all(b <= a for a, b in zip(doubling, doubling[1:]))

    if not monotone and hi <= LINEAR_SCAN_LIMIT:
        logger.warning(f"Non-monotone error sequence {doubling}; scanning r <= {hi}")
        steps = next(r for r in range(2, hi + 1) if error(r) <= epsilon)
    else:
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if error(mid) <= epsilon:
                hi = mid
            else:
                lo = mid
        steps = hi

    logger.debug(f"min_steps: r={steps} after {len(errors)} error evaluations")
    return StepCertificate(
        steps=steps,
        error=error(steps),
        previous_error=error(steps - 1),
        epsilon=epsilon,
        monotone=monotone,
    )


def _point(
    hamiltonian: HamiltonianModel,
    n_sites: int,
    time: float,
    epsilon: float,
    formula_id: str,
    formula: MpfFormula,
) -> BenchPoint:
    n = oaa_multiplier(formula.a_norm1)
    point = BenchPoint(
        sites=n_sites,
        time=time,
        epsilon=epsilon,
        formula_id=formula_id,
        order=formula.order,
        base_order=formula.base_order,
        k_norm1=formula.k_norm1,
        oaa_multiplier=n,
    )
    try:
        certificate = min_steps(hamiltonian, formula, time, epsilon)
    except Unreachable as exc:
        logger.warning(f"{formula_id} at epsilon={epsilon:.1e}: {exc}")
        return point.model_copy(update={"status": "unreachable"})
    # Cost in U₂ queries, including amplification
    cost = n * certificate.steps * formula.k_norm1 * sim_service.suzuki_query_count(formula.base_order)
    return point.model_copy(
        update={"steps_r": certificate.steps, "total_cost": cost, "measured_error": certificate.error}
    )


def _rank(points: list[BenchPoint]) -> list[BenchPoint]:
    """Mark the cheapest and runner-up reachable formula per epsilon."""
    ranked = []
    for epsilon in sorted({p.epsilon for p in points}):
        group = [p for p in points if p.epsilon == epsilon]
        order = sorted(
            (p for p in group if p.status == "ok"),
            key=lambda p: (p.total_cost, p.formula_id),
        )
        ranks = {p.formula_id: i + 1 for i, p in enumerate(order[:2])}
        ranked.extend(p.model_copy(update={"rank": ranks.get(p.formula_id)}) for p in group)
    return ranked


def check_sites(n_sites: int, allow_large: bool = False):
    limit = settings.mpf_max_sites if allow_large else settings.mpf_desk_max_sites
    if n_sites > limit:
        hint = "" if allow_large else " (pass allow_large to go further)"
        raise DimensionCap(f"{n_sites} sites exceeds the limit of {limit}{hint}")


def benchmark_sweep(
    n_sites: int,
    time: float | None,
    epsilons: list[float],
    formulas: dict[str, MpfFormula] | None = None,
    base_order: int = 2,
    max_m: int | None = None,
    allow_large: bool = False,
    comparison_order: int | None = 4,
) -> BenchSweep:
    """Minimal-cost step counts for each (ε, formula) on the periodic Heisenberg chain.

    Points come back sorted by (ε, formula id) whatever order the jobs ran in.
    The fixed-order Suzuki comparison line is reported separately.
    """
    check_sites(n_sites, allow_large)
    time = float(n_sites) if time is None else time
    if formulas is None:
        formulas = table_service.table_formulas(base_order, section="min_a1k1", max_m=max_m)
    hamiltonian = sim_service.heisenberg_chain(n_sites)

    jobs = sorted((epsilon, formula_id) for epsilon in epsilons for formula_id in formulas)
    points = run_jobs(
        lambda job: _point(hamiltonian, n_sites, time, job[0], job[1], formulas[job[1]]),
        jobs,
    )

    comparison = []
    if comparison_order is not None:
        reference = suzuki_formula(comparison_order)
        label = f"suzuki{comparison_order}"
        comparison = run_jobs(
            lambda epsilon: _point(hamiltonian, n_sites, time, epsilon, label, reference),
            sorted(epsilons),
        )

    sweep = BenchSweep(
        sites=n_sites,
        time=time,
        base_order=base_order,
        points=_rank(points),
        comparison=comparison,
    )
    for winner in sweep.winners():
        logger.info(
            f"epsilon={winner.epsilon:.1e}: {winner.formula_id} wins with r={winner.steps_r} "
            f"cost={winner.total_cost}"
        )
    return sweep


def figure1_data(max_m: int) -> list[Figure1Row]:
    """Query count and conditioning per order 2m for Suzuki, Chin and Chebyshev formulas."""
    if not 1 <= max_m <= FIGURE1_MAX_M:
        raise DimensionCap(f"max_m must lie in [1, {FIGURE1_MAX_M}], got {max_m}")
    rows = []
    for m in range(1, max_m + 1):
        chin = tuple(range(1, m + 1))
        rounded = construct_service.rounded_exponents(m)
        rows.append(
            Figure1Row(
                order=2 * m,
                suzuki_queries=sim_service.suzuki_query_count(2 * m),
                chin_a_norm1=float(construct_service.exact_a_norm1(chin)),
                chin_k_norm1=sum(chin),
                rounded_a_norm1=float(construct_service.exact_a_norm1(rounded)),
                rounded_k_norm1=sum(rounded),
                chebyshev_a_norm1=construct_service.chebyshev_mpf(m).a_norm1,
            )
        )
    return rows
