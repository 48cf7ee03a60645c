"""Exact linear programming over multiproduct coefficient systems.

The order conditions V·a = ê₁ are posed over all candidate exponents 1..M and
``min ‖a‖₁`` is solved with the split a = a⁺ − a⁻ by a two-phase simplex on
Fractions. Bland's rule keeps the pivoting finite on these degenerate systems.
"""
from collections.abc import Iterator, Sequence
from fractions import Fraction
import logging
import math

from app.config import settings
from app.errors import DimensionCap, DimensionMismatch, Infeasible, InvalidFormula
from app.models.optimize import LpProblem, LpSolution, Objective
from app.services.exact_service import (
    equation_count,
    generalized_vandermonde,
    generalized_vandermonde_rect,
    is_zero,
    residual,
    solve_exact,
    unit_vector,
    vandermonde_closed_form,
)
from app.utils.jobs import run_jobs

logger = logging.getLogger(__name__)

OAA_TOLERANCE = 1e-12


class SimplexTableau:
    """Dense tableau for ``min c·x`` s.t. ``A·x = b``, ``x ≥ 0`` over Fractions."""

    def __init__(self, a_rows: Sequence[Sequence[Fraction]], b: Sequence[Fraction], c: Sequence[Fraction]):
        if len(a_rows) != len(b):
            raise DimensionMismatch(f"{len(a_rows)} constraint rows but {len(b)} right-hand sides")
        self.n = len(c)
        self.cost = [Fraction(v) for v in c]
        self.rows: list[list[Fraction]] = []
        for row, rhs in zip(a_rows, b):
            if len(row) != self.n:
                raise DimensionMismatch(f"constraint row has {len(row)} entries, expected {self.n}")
            values = [Fraction(v) for v in row] + [Fraction(rhs)]
            if values[-1] < 0:
                values = [-v for v in values]
            self.rows.append(values)
        self.basis: list[int] = []
        self.pivots = 0

    def pivot(self, i: int, j: int):
        piv = self.rows[i][j]
        pivot_row = [v / piv for v in self.rows[i]]
        self.rows[i] = pivot_row
        for r, row in enumerate(self.rows):
            f = row[j]
            if r != i and f != 0:
                self.rows[r] = [v - f * p for v, p in zip(row, pivot_row)]
        self.basis[i] = j
        self.pivots += 1

    def _reduced_cost(self, cost: Sequence[Fraction], j: int) -> Fraction:
        return cost[j] - sum((cost[b] * row[j] for b, row in zip(self.basis, self.rows)), Fraction(0))

    def _run(self, cost: Sequence[Fraction], allowed: int):
        """Primal simplex with Bland's rule; only columns below ``allowed`` may enter."""
        while True:
            basic = set(self.basis)
            entering = next(
                (j for j in range(allowed) if j not in basic and self._reduced_cost(cost, j) < 0),
                None,
            )
            if entering is None:
                return
            ratios = [
                (row[-1] / row[entering], self.basis[i], i)
                for i, row in enumerate(self.rows)
                if row[entering] > 0
            ]
            if not ratios:
                raise Infeasible("objective is unbounded below")
            _, _, leaving = min(ratios)
            self.pivot(leaving, entering)

    def objective(self, cost: Sequence[Fraction]) -> Fraction:
        return sum((cost[b] * row[-1] for b, row in zip(self.basis, self.rows)), Fraction(0))

    def solve(self) -> tuple[list[Fraction], Fraction]:
        """Two-phase solve; returns (x, c·x)."""
        n_rows = len(self.rows)
        for i, row in enumerate(self.rows):
            rhs = row.pop()
            row.extend(Fraction(1) if k == i else Fraction(0) for k in range(n_rows))
            row.append(rhs)
        self.basis = [self.n + i for i in range(n_rows)]

        phase_one = [Fraction(0)] * self.n + [Fraction(1)] * n_rows
        self._run(phase_one, self.n + n_rows)
        if self.objective(phase_one) > 0:
            raise Infeasible("constraints have no nonnegative solution")

        # Artificials left in the basis sit at zero; swap them out or drop redundant rows
        for i in reversed(range(len(self.rows))):
            if self.basis[i] < self.n:
                continue
            column = next((j for j in range(self.n) if self.rows[i][j] != 0), None)
            if column is None:
                del self.rows[i]
                del self.basis[i]
            else:
                self.pivot(i, column)

        phase_two = self.cost + [Fraction(0)] * n_rows
        self._run(phase_two, self.n)

        x = [Fraction(0)] * self.n
        for b, row in zip(self.basis, self.rows):
            x[b] = row[-1]
        logger.debug(f"Simplex finished after {self.pivots} pivots")
        return x, self.objective(phase_two)


def default_max_exponent(m: int) -> int:
    return max(2 * m, m * m)


def exact_coefficients(support: Sequence[int], alpha: int, m: int) -> tuple[Fraction, ...]:
    if alpha == 2:
        return vandermonde_closed_form(support)
    system = generalized_vandermonde(support, alpha, m)
    return solve_exact(system, unit_vector(system.rows))


def _a_norm1(coefficients: Sequence[Fraction]) -> Fraction:
    return sum((abs(a) for a in coefficients), Fraction(0))


def _solution(
    support: Sequence[int],
    coefficients: Sequence[Fraction],
    alpha: int,
    m: int,
    objective: Objective,
    exhaustive: bool = True,
) -> LpSolution:
    system = generalized_vandermonde(support, alpha, m)
    if not is_zero(residual(system, coefficients, unit_vector(system.rows))):
        raise InvalidFormula(f"support {tuple(support)} does not satisfy the order conditions")
    return LpSolution(
        alpha=alpha,
        order=2 * m,
        support=tuple(support),
        coefficients=tuple(coefficients),
        a_norm1=_a_norm1(coefficients),
        k_norm1=sum(support),
        objective=objective,
        exhaustive=exhaustive,
    )


def l1_min_lp(problem: LpProblem) -> LpSolution:
    """Globally minimal ‖a‖₁ over candidate exponents 1..M."""
    if problem.objective == Objective.min_k_norm1_capped:
        return search_min_k1_capped(problem.m, problem.alpha, problem.bound, problem.max_exponent)

    m, alpha, big_m = problem.m, problem.alpha, problem.max_exponent
    rows = equation_count(alpha, m)
    if big_m < rows:
        raise Infeasible(f"M={big_m} offers fewer candidates than the {rows} order conditions")

    system = generalized_vandermonde_rect(range(1, big_m + 1), alpha, m)
    # Columns a⁺_1..a⁺_M then a⁻_1..a⁻_M
    a_rows = [list(system.row(i)) + [-v for v in system.row(i)] for i in range(system.rows)]
    tableau = SimplexTableau(a_rows, unit_vector(system.rows), [Fraction(1)] * (2 * big_m))
    x, optimum = tableau.solve()

    support, coefficients = [], []
    for j in range(big_m):
        a_j = x[j] - x[big_m + j]
        if a_j != 0:
            support.append(j + 1)
            coefficients.append(a_j)
    logger.debug(f"LP m={m} alpha={alpha} M={big_m}: support={support} |a|_1={optimum}")
    return _solution(support, coefficients, alpha, m, Objective.min_a_norm1)


def _subsets_with_sum(size: int, total: int, low: int, high: int) -> Iterator[tuple[int, ...]]:
    """Ascending tuples of ``size`` distinct integers in [low, high] summing to ``total``."""
    if size == 0:
        if total == 0:
            yield ()
        return
    for first in range(low, high + 1):
        rest = size - 1
        smallest_rest = rest * (first + 1) + rest * (rest - 1) // 2
        if first + smallest_rest > total:
            break
        largest_rest = rest * high - rest * (rest - 1) // 2
        if first + largest_rest < total:
            continue
        for tail in _subsets_with_sum(rest, total - first, first + 1, high):
            yield (first,) + tail


def supports_by_k_norm1(size: int, high: int) -> Iterator[tuple[int, list[tuple[int, ...]]]]:
    """(‖k‖₁, supports) pairs in increasing ‖k‖₁ over size-subsets of [high]."""
    lowest = size * (size + 1) // 2
    highest = size * high - size * (size - 1) // 2
    for total in range(lowest, highest + 1):
        yield total, list(_subsets_with_sum(size, total, 1, high))


def _product_key(solution: LpSolution) -> tuple:
    return solution.product, solution.k_norm1, solution.support


def _capped_key(solution: LpSolution) -> tuple:
    return solution.k_norm1, solution.a_norm1, solution.support


def _search_bounds(m: int, alpha: int, max_exponent: int | None) -> tuple[int, int]:
    rows = equation_count(alpha, m)
    big_m = max_exponent or default_max_exponent(m)
    if big_m < max(rows, m):
        raise Infeasible(f"M_max={big_m} is below m={m}")
    return rows, big_m


def _check_enumeration_bound(m: int):
    limit = settings.mpf_exhaustive_max_m
    if m > limit:
        raise DimensionCap(f"subset enumeration is limited to m <= {limit}, got m={m}")


def lp_sweep(m: int, alpha: int = 2, max_exponent: int | None = None) -> list[LpSolution]:
    """The ‖a‖₁-optimal LP solution for every M from the support size up to M_max."""
    rows, big_m = _search_bounds(m, alpha, max_exponent)
    return run_jobs(
        lambda size: l1_min_lp(LpProblem(m=m, alpha=alpha, M=size)),
        range(rows, big_m + 1),
    )


def search_min_product(
    m: int,
    alpha: int = 2,
    max_exponent: int | None = None,
    enumerate_supports: bool = False,
) -> LpSolution:
    """Minimize ‖a‖₁·‖k‖₁ over the LP sweep.

    With ``enumerate_supports`` every subset of 1..M_max competes as well, which
    can beat the sweep (m=5 drops to (1,2,3,4,17)); the tables come from the
    sweep alone.
    """
    rows, big_m = _search_bounds(m, alpha, max_exponent)
    best = min(lp_sweep(m, alpha, big_m), key=_product_key)

    if enumerate_supports:
        _check_enumeration_bound(m)
        visited = 0
        for total, supports in supports_by_k_norm1(rows, big_m):
            # ‖a‖₁ ≥ 1, so no support with ‖k‖₁ above the best product can win
            if total > best.product:
                break
            for support in supports:
                visited += 1
                coefficients = exact_coefficients(support, alpha, m)
                key = (_a_norm1(coefficients) * total, total, support)
                if key < _product_key(best):
                    best = _solution(support, coefficients, alpha, m, Objective.min_product)
        logger.info(f"Product search m={m} alpha={alpha}: {visited} supports enumerated")

    best = best.model_copy(update={"objective": Objective.min_product, "exhaustive": enumerate_supports})
    logger.info(
        f"Min product m={m} alpha={alpha} M_max={big_m}: support={best.support} "
        f"|a|_1={best.a_norm1} |k|_1={best.k_norm1}"
    )
    return best


def _enumerate_capped(m: int, alpha: int, cap: Fraction, rows: int, big_m: int) -> LpSolution:
    for total, supports in supports_by_k_norm1(rows, big_m):
        feasible = []
        for support in supports:
            coefficients = exact_coefficients(support, alpha, m)
            a_norm1 = _a_norm1(coefficients)
            if a_norm1 <= cap:
                feasible.append((a_norm1, support, coefficients))
        if feasible:
            _, support, coefficients = min(feasible, key=lambda item: (item[0], item[1]))
            return _solution(support, coefficients, alpha, m, Objective.min_k_norm1_capped)
    raise Infeasible(f"no formula with |a|_1 <= {cap} among exponents 1..{big_m}")


def search_min_k1_capped(
    m: int,
    alpha: int = 2,
    cap: Fraction | int = 2,
    max_exponent: int | None = None,
    enumerate_supports: bool = False,
) -> LpSolution:
    """Minimal ‖k‖₁ among LP-sweep solutions with ‖a‖₁ ≤ cap.

    Ties go to smaller ‖a‖₁, then lexicographic support. ``enumerate_supports``
    searches every subset of 1..M_max in increasing ‖k‖₁ instead.
    """
    cap = Fraction(cap)
    if cap < 1:
        raise Infeasible(f"cap must be >= 1, got {cap}")
    rows, big_m = _search_bounds(m, alpha, max_exponent)

    if enumerate_supports:
        _check_enumeration_bound(m)
        best = _enumerate_capped(m, alpha, cap, rows, big_m)
    else:
        feasible = [s for s in lp_sweep(m, alpha, big_m) if s.a_norm1 <= cap]
        if not feasible:
            raise Infeasible(f"no LP solution with |a|_1 <= {cap} for M up to {big_m}")
        best = min(feasible, key=_capped_key)

    best = best.model_copy(
        update={"objective": Objective.min_k_norm1_capped, "exhaustive": enumerate_supports}
    )
    logger.info(f"Capped search m={m} alpha={alpha} cap={cap}: support={best.support} |k|_1={best.k_norm1}")
    return best


def oaa_multiplier(a_norm1: float | Fraction) -> int:
    """Odd query multiplier n = 2ℓ + 1 of oblivious amplitude amplification.

    ℓ = ⌈π/(4·arcsin(1/‖a‖₁)) − 1/2⌉ rounds, at least one whenever ‖a‖₁ > 1.
    The tolerance keeps ‖a‖₁ = 2 at one round despite floating arcsin.
    """
    if a_norm1 < 1 - OAA_TOLERANCE:
        raise InvalidFormula(f"condition number must be >= 1, got {float(a_norm1)!r}")
    if a_norm1 <= 1:
        return 1
    y = float(a_norm1)
    rounds = math.ceil(math.pi / (4 * math.asin(min(1 / y, 1.0))) - 0.5 - OAA_TOLERANCE)
    return 2 * max(rounds, 1) + 1
