import math

import numpy as np
import pytest

from app.errors import DimensionCap, DimensionMismatch
from app.services import construct_service, sim_service
from app.services.bench_service import suzuki_formula
from app.services.sim_service import PAULI_X, PAULI_Y, PAULI_Z, HamiltonianModel


@pytest.fixture
def x_plus_z():
    return HamiltonianModel.from_terms([PAULI_X, PAULI_Z])


def local_error_ratio(product, hamiltonian, delta):
    coarse = sim_service.spectral_norm(product(hamiltonian, delta) - sim_service.exact_evolution(hamiltonian, delta))
    fine = sim_service.spectral_norm(
        product(hamiltonian, delta / 2) - sim_service.exact_evolution(hamiltonian, delta / 2)
    )
    return coarse / fine


class TestSpectralNorm:
    def test_identity(self):
        assert sim_service.spectral_norm(np.eye(5)) == pytest.approx(1)

    def test_diagonal(self):
        assert sim_service.spectral_norm(np.diag([3, -4j])) == pytest.approx(4)

    def test_random_against_full_svd(self):
        rng = np.random.default_rng(11)
        a = rng.normal(size=(64, 64)) + 1j * rng.normal(size=(64, 64))
        oracle = np.linalg.svd(a, compute_uv=False)[0]
        assert sim_service.spectral_norm(a) == pytest.approx(oracle, rel=1e-9)


class TestHamiltonianModel:
    def test_rejects_non_hermitian(self):
        with pytest.raises(DimensionMismatch, match="Hermitian"):
            HamiltonianModel.from_terms([np.array([[0, 1], [0, 0]])])

    def test_rejects_mixed_shapes(self):
        with pytest.raises(DimensionMismatch):
            HamiltonianModel.from_terms([PAULI_X, np.eye(4)])

    def test_rejects_non_qubit_dimension(self):
        with pytest.raises(DimensionMismatch):
            HamiltonianModel.from_terms([np.eye(3)])

    def test_rejects_empty(self):
        with pytest.raises(DimensionMismatch):
            HamiltonianModel.from_terms([])

    def test_terms_are_read_only(self, x_plus_z):
        with pytest.raises(ValueError):
            x_plus_z.terms[0][0, 0] = 5

    def test_lambda(self, x_plus_z):
        assert x_plus_z.lambda_ == pytest.approx(2)
        assert x_plus_z.n_qubits == 1


class TestHeisenbergChain:
    def test_three_sites(self):
        h = sim_service.heisenberg_chain(3)
        assert h.dimension == 8
        assert len(h.terms) == 9
        assert h.lambda_ == pytest.approx(9)

    def test_two_sites_double_bond(self):
        h = sim_service.heisenberg_chain(2)
        expected = 2 * sum(np.kron(p, p) for p in (PAULI_X, PAULI_Y, PAULI_Z))
        assert h.lambda_ == pytest.approx(6)
        assert np.allclose(h.matrix, expected)

    def test_four_site_ground_energy(self):
        h = sim_service.heisenberg_chain(4)
        eigenvalues, _ = h.spectrum
        assert eigenvalues[0] == pytest.approx(-8, abs=1e-10)
        assert eigenvalues[0] == pytest.approx(np.linalg.eigvalsh(h.matrix)[0], abs=1e-10)

    def test_term_order(self):
        h = sim_service.heisenberg_chain(3)
        assert np.allclose(h.terms[0], sim_service.embed({0: PAULI_X, 1: PAULI_X}, 3))
        assert np.allclose(h.terms[8], sim_service.embed({2: PAULI_Z, 0: PAULI_Z}, 3))

    def test_too_small(self):
        with pytest.raises(DimensionMismatch):
            sim_service.heisenberg_chain(1)

    def test_dimension_cap(self):
        with pytest.raises(DimensionCap):
            sim_service.heisenberg_chain(13)


class TestRandomHamiltonian:
    def test_lambda_normalized(self):
        h = sim_service.random_hamiltonian(2, 3, seed=5, lambda_total=1.5)
        assert h.lambda_ == pytest.approx(1.5)
        assert h.dimension == 4

    def test_seeded(self):
        a = sim_service.random_hamiltonian(2, 3, seed=5)
        b = sim_service.random_hamiltonian(2, 3, seed=5)
        assert all(np.array_equal(x, y) for x, y in zip(a.terms, b.terms))


class TestExactEvolution:
    def test_z_at_pi(self):
        h = HamiltonianModel.from_terms([PAULI_Z])
        assert np.allclose(sim_service.exact_evolution(h, math.pi), -np.eye(2), atol=1e-12)

    def test_zero_time(self, x_plus_z):
        assert np.allclose(sim_service.exact_evolution(x_plus_z, 0), np.eye(2))

    def test_group_law(self):
        h = sim_service.random_hamiltonian(2, 3, seed=3)
        product = sim_service.exact_evolution(h, 0.3) @ sim_service.exact_evolution(h, 0.9)
        assert sim_service.spectral_norm(product - sim_service.exact_evolution(h, 1.2)) < 1e-9


class TestProductFormulas:
    def test_u1_commuting_is_exact(self):
        h = sim_service.commuting_hamiltonian(2)
        assert np.allclose(sim_service.trotter_u1(h, 0.7), sim_service.exact_evolution(h, 0.7), atol=1e-12)

    def test_u1_single_term_is_exact(self):
        h = HamiltonianModel.from_terms([PAULI_Y])
        assert np.allclose(sim_service.trotter_u1(h, 0.4), sim_service.exact_evolution(h, 0.4), atol=1e-12)

    def test_u1_second_order_local_error(self, x_plus_z):
        assert 3.6 <= local_error_ratio(sim_service.trotter_u1, x_plus_z, 0.05) <= 4.4

    def test_u2_commuting_is_exact(self):
        h = sim_service.commuting_hamiltonian(3)
        assert np.allclose(sim_service.trotter_u2(h, 1.3), sim_service.exact_evolution(h, 1.3), atol=1e-12)

    def test_u2_third_order_local_error(self, x_plus_z):
        assert 7.2 <= local_error_ratio(sim_service.trotter_u2, x_plus_z, 0.1) <= 8.8

    def test_u2_time_reversal(self):
        h = sim_service.random_hamiltonian(2, 3, seed=9)
        forward = sim_service.trotter_u2(h, 0.3)
        backward = sim_service.trotter_u2(h, -0.3)
        assert sim_service.spectral_norm(backward - forward.conj().T) < 1e-12

    def test_outputs_are_unitary(self):
        h = sim_service.heisenberg_chain(3)
        assert sim_service.is_unitary(sim_service.trotter_u1(h, 0.2))
        assert sim_service.is_unitary(sim_service.suzuki_u_alpha(h, 0.2, 6))


class TestSuzuki:
    def test_order_two_is_u2(self, x_plus_z):
        assert np.allclose(sim_service.suzuki_u_alpha(x_plus_z, 0.3, 2), sim_service.trotter_u2(x_plus_z, 0.3))

    def test_step_sizes(self):
        steps = sim_service.suzuki_step_sizes(0.5, 4)
        assert len(steps) == 5 == sim_service.suzuki_query_count(4)
        assert math.fsum(steps) == pytest.approx(0.5)
        assert steps[2] < 0

    def test_sixth_order_query_count(self):
        assert len(sim_service.suzuki_step_sizes(1.0, 6)) == 25 == sim_service.suzuki_query_count(6)

    def test_fourth_order_local_error(self, x_plus_z):
        ratio = local_error_ratio(lambda h, d: sim_service.suzuki_u_alpha(h, d, 4), x_plus_z, 0.1)
        assert 4.7 <= math.log2(ratio) <= 5.4

    def test_odd_order_rejected(self):
        with pytest.raises(DimensionMismatch):
            sim_service.suzuki_step_sizes(0.1, 3)


class TestApplyMpf:
    def test_commuting_is_exact(self, table1):
        h = sim_service.commuting_hamiltonian(2)
        for formula in (table1["base2-min_a1k1-m3"], construct_service.chin_mpf(4)):
            assert sim_service.spectral_norm(
                sim_service.apply_mpf(h, formula, 0.8) - sim_service.exact_evolution(h, 0.8)
            ) < 1e-12

    def test_beats_u2(self, table1, x_plus_z):
        mpf_error = sim_service.step_error(x_plus_z, table1["base2-min_a1k1-m2"], 0.2)
        u2_error = sim_service.step_error(x_plus_z, suzuki_formula(2), 0.2)
        assert mpf_error * 10 <= u2_error

    def test_norm_bounded_by_condition_number(self, table1):
        h = sim_service.random_hamiltonian(2, 3, seed=4)
        formula = table1["base2-min_a1k1-m4"]
        norm = sim_service.spectral_norm(sim_service.apply_mpf(h, formula, 0.5))
        assert norm <= float(formula.a_norm1) + 1e-10

    def test_measured_order_m2(self, table1):
        h = sim_service.random_hamiltonian(2, 3, seed=1)
        order = sim_service.measured_order(h, table1["base2-min_a1k1-m2"], 0.5)
        assert 4.75 <= order <= 5.6

    def test_measured_order_exact_half_step(self, table1, x_plus_z, monkeypatch):
        monkeypatch.setattr(sim_service, "step_error", lambda h, formula, delta: 1e-3 if delta > 0.3 else 0.0)
        assert sim_service.measured_order(x_plus_z, table1["base2-min_a1k1-m2"], 0.5) == math.inf


class TestEvolutionError:
    def test_zero_time(self, table1, x_plus_z):
        assert sim_service.evolution_error(x_plus_z, table1["base2-min_a1k1-m2"], 0, 3) < 1e-12

    def test_commuting(self, table1):
        h = sim_service.commuting_hamiltonian(2)
        for r in (1, 5):
            assert sim_service.evolution_error(h, table1["base2-min_a1k1-m3"], 2.0, r) < 1e-12

    def test_needs_a_step(self, table1, x_plus_z):
        with pytest.raises(DimensionMismatch):
            sim_service.evolution_error(x_plus_z, table1["base2-min_a1k1-m2"], 1.0, 0)

    def test_time_reversal(self, table1, x_plus_z):
        formula = table1["base2-min_a1k1-m2"]
        forward = sim_service.evolution_error(x_plus_z, formula, 1.5, 3)
        backward = sim_service.evolution_error(x_plus_z, formula, -1.5, 3)
        assert backward == pytest.approx(forward, rel=1e-6)

    def test_heisenberg_decreases_with_steps(self, table1):
        h = sim_service.heisenberg_chain(4)
        errors = [sim_service.evolution_error(h, table1["base2-min_a1k1-m3"], 4.0, r) for r in (8, 16, 32, 64)]
        assert all(b < a for a, b in zip(errors, errors[1:]))
