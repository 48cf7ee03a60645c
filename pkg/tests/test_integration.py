"""
End-to-end checks across the exact, optimization, simulation and cost layers.

Covers:
- Table exactness
- LP reproduction of the table rows
- Order verification on random Hamiltonians
- Conditioning separation between arithmetic and Chebyshev exponents
- Error-bound soundness and step-count self-consistency
- Benchmark trends on the Heisenberg chain (slow)
- LP against brute-force subset enumeration
"""
from fractions import Fraction as F
from itertools import combinations
import math

import numpy as np
import pytest

from app.models.cost import SimulationTask
from app.models.optimize import LpProblem
from app.services import (
    bench_service,
    construct_service,
    cost_service,
    optimize_service,
    sim_service,
    table_service,
)
from app.services.exact_service import vandermonde_closed_form


class TestTableExactness:
    def test_all_rows_pass(self):
        for name, rows in (("base2", 27), ("base4", 25)):
            report = table_service.verify_named_table(name)
            assert report.row_count == rows
            assert report.passed, [r.failures for r in report.rows if not r.passed]


class TestLpReproduction:
    """Searches recover the bundled table supports and coefficients exactly."""

    @pytest.mark.parametrize("alpha,m", [(2, 2), (2, 3), (2, 4), (2, 5), (4, 3), (4, 4), (4, 5)])
    def test_min_product_matches_top_rows(self, alpha, m):
        expected = table_service.table_formula(alpha, "min_a1k1", m)
        solution = optimize_service.search_min_product(m, alpha=alpha)
        assert solution.to_formula() == expected

    @pytest.mark.parametrize("alpha,m", [(2, 3), (2, 4), (2, 5), (4, 4), (4, 5)])
    def test_capped_matches_bottom_rows(self, alpha, m):
        expected = table_service.table_formula(alpha, "min_k1_capped", m)
        solution = optimize_service.search_min_k1_capped(m, alpha=alpha, cap=2)
        assert solution.to_formula() == expected


class TestOrderVerification:
    """log₂ of the local error ratio sits in [2m + 0.75, 2m + 1.6] for orders 4, 6 and 8."""

    CASES = [
        (2, 2, 2, 0.5),
        (2, 3, 2, 1.0),
        (2, 4, 2, 2.0),
        (2, 2, 3, 0.25),
        (2, 3, 3, 0.5),
        (2, 4, 3, 1.0),
        (4, 2, 2, 0.1),
        (4, 3, 2, 1.0),
        (4, 4, 2, 1.5),
        (4, 2, 3, 0.05),
        (4, 3, 3, 0.5),
        (4, 4, 3, 1.0),
    ]

    @staticmethod
    def _formula(table1, table2, alpha, m):
        if alpha == 2:
            return table1[f"base2-min_a1k1-m{m}"]
        if m == 2:
            return bench_service.suzuki_formula(4)
        return table2[f"base4-min_a1k1-m{m}"]

    @pytest.mark.parametrize("alpha,m,n_qubits,delta", CASES)
    def test_measured_order(self, table1, table2, alpha, m, n_qubits, delta):
        h = sim_service.random_hamiltonian(n_qubits, 3, seed=1)
        formula = self._formula(table1, table2, alpha, m)
        assert formula.order == 2 * m
        order = sim_service.measured_order(h, formula, delta)
        assert 2 * m + 0.75 <= order <= 2 * m + 1.6


class TestConditioningSeparation:
    def test_chin_grows_geometrically(self):
        norms = [construct_service.exact_a_norm1(range(1, m + 1)) for m in range(6, 21)]
        assert all(b >= F(3, 2) * a for a, b in zip(norms, norms[1:]))

    def test_rounded_grows_additively(self):
        """‖a(2m)‖₁ − ‖a(m)‖₁ stays below a fixed D up to order 128."""
        norms = {m: construct_service.exact_a_norm1(construct_service.rounded_exponents(m)) for m in range(1, 65)}
        assert norms[8] - norms[4] <= F(1, 2)
        for m in range(1, 33):
            assert norms[2 * m] - norms[m] <= F(1, 2)


class TestErrorBoundSoundness:
    def test_bound_dominates_measured_error(self, table1):
        rng = np.random.default_rng(99)
        formulas = [table1["base2-min_a1k1-m2"], table1["base2-min_a1k1-m3"]]
        for seed in range(50):
            h = sim_service.random_hamiltonian(2, 3, seed=seed)
            delta = float(rng.uniform(0.25, 0.5)) / h.lambda_
            formula = formulas[seed % 2]
            measured = sim_service.step_error(h, formula, delta)
            bound = cost_service.single_step_error_bound(delta * h.lambda_, formula.m, formula.a_norm1)
            assert measured <= bound


class TestStepCountConsistency:
    def test_sampled_tasks(self):
        rng = np.random.default_rng(12)
        formulas = {}
        for _ in range(100):
            task = SimulationTask(
                t_lambda=float(10 ** rng.uniform(0, 3)),
                epsilon=float(10 ** rng.uniform(-12, -1)),
            )
            order = cost_service.choose_order(task)
            if order not in formulas:
                formulas[order] = construct_service.rounded_mpf(order // 2)
            formula = formulas[order]
            r = cost_service.step_count(task, formula.m, formula.a_norm1)
            assert cost_service.accumulated_error_bound(task, formula.m, formula.a_norm1, r) <= task.epsilon
            assert 1 / math.log(2) <= r / task.t_lambda <= 4


@pytest.mark.slow
class TestBenchmarkTrends:
    """Four-site chain at t = 4 over ε from 1e-2 to 1e-10.

    The winning MPF cost has a fitted slope of about 0.1 in log(1/ε) here,
    so growth is checked against (log ratio)³ and against the Suzuki slope.
    """

    EPSILONS = [1e-2, 1e-4, 1e-6, 1e-8, 1e-10]

    @pytest.fixture(scope="class")
    def sweep(self):
        return bench_service.benchmark_sweep(4, 4.0, self.EPSILONS, comparison_order=4)

    @staticmethod
    def _slope(points):
        x = [math.log(1 / p.epsilon) for p in points]
        y = [math.log(p.total_cost) for p in points]
        return np.polyfit(x, y, 1)[0]

    def test_every_epsilon_has_a_winner(self, sweep):
        assert sorted(w.epsilon for w in sweep.winners()) == self.EPSILONS

    def test_mpf_cost_grows_polylogarithmically(self, sweep):
        cost = {w.epsilon: w.total_cost for w in sweep.winners()}
        assert cost[1e-10] / cost[1e-2] <= (math.log(1e10) / math.log(1e2)) ** 3

    def test_mpf_winner_slope_is_small(self, sweep):
        winners = sorted(sweep.winners(), key=lambda p: p.epsilon)
        assert self._slope(winners) <= 0.15

    def test_suzuki_cost_grows_like_quarter_power(self, sweep):
        points = [p for p in sweep.comparison if p.epsilon <= 1e-4]
        assert all(p.status == "ok" for p in points)
        assert abs(self._slope(points) - 0.25) <= 0.1

    def test_mpf_beats_suzuki_trend(self, sweep):
        mpf_slope = self._slope(sorted(sweep.winners(), key=lambda p: p.epsilon))
        assert mpf_slope < self._slope(sweep.comparison)


class TestLpOracle:
    @pytest.mark.parametrize("m", [1, 2, 3, 4])
    def test_matches_brute_force(self, m):
        for big_m in range(m, 9):
            solution = optimize_service.l1_min_lp(LpProblem(m=m, M=big_m))
            brute = min(
                sum(abs(a) for a in vandermonde_closed_form(support))
                for support in combinations(range(1, big_m + 1), m)
            )
            assert solution.a_norm1 == brute
