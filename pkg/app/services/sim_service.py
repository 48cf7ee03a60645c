"""Dense-matrix evolution for validating multiproduct formulas.

Every matrix exponential is taken through a Hermitian eigendecomposition,
so product-formula outputs are unitary up to roundoff.
"""
from dataclasses import dataclass
from functools import cached_property, reduce
import logging
import math
from typing import Sequence

import numpy as np
from scipy import linalg

from app.config import settings
from app.errors import DimensionCap, DimensionMismatch
from app.models.formula import MpfFormula

logger = logging.getLogger(__name__)

HERMITIAN_TOLERANCE = 1e-12
UNITARY_TOLERANCE = 1e-10

IDENTITY = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)

# Dense complex square matrix; product-formula outputs are unitary
UnitaryMatrix = np.ndarray


def spectral_norm(a: np.ndarray) -> float:
    """Largest singular value."""
    return float(linalg.svdvals(np.asarray(a))[0])


def hermitian_expm(eigenvalues: np.ndarray, eigenvectors: np.ndarray, t: float) -> UnitaryMatrix:
    """e^{−iAt} for A = V·diag(w)·V†."""
    return (eigenvectors * np.exp(-1j * eigenvalues * t)) @ eigenvectors.conj().T


@dataclass(frozen=True, eq=False)
class HamiltonianModel:
    """H = Σ_j h_j as an ordered tuple of dense Hermitian terms."""

    terms: tuple[np.ndarray, ...]

    def __post_init__(self):
        if not self.terms:
            raise DimensionMismatch("a Hamiltonian needs at least one term")
        frozen = []
        dimension = self.terms[0].shape[0]
        for index, term in enumerate(self.terms):
            matrix = np.array(term, dtype=complex)
            if matrix.shape != (dimension, dimension):
                raise DimensionMismatch(f"term {index} has shape {matrix.shape}, expected {(dimension, dimension)}")
            if np.max(np.abs(matrix - matrix.conj().T)) > HERMITIAN_TOLERANCE * max(1.0, np.max(np.abs(matrix))):
                raise DimensionMismatch(f"term {index} is not Hermitian")
            matrix.setflags(write=False)
            frozen.append(matrix)
        if dimension < 2 or dimension & (dimension - 1):
            raise DimensionMismatch(f"dimension must be a power of two, got {dimension}")
        object.__setattr__(self, "terms", tuple(frozen))

    @classmethod
    def from_terms(cls, terms: Sequence[np.ndarray]) -> "HamiltonianModel":
        return cls(tuple(terms))

    @property
    def dimension(self) -> int:
        return self.terms[0].shape[0]

    @property
    def n_qubits(self) -> int:
        return self.dimension.bit_length() - 1

    @cached_property
    def lambda_(self) -> float:
        """λ = Σ_j ‖h_j‖."""
        return math.fsum(spectral_norm(term) for term in self.terms)

    @cached_property
    def matrix(self) -> np.ndarray:
        return reduce(np.add, self.terms)

    @cached_property
    def spectrum(self) -> tuple[np.ndarray, np.ndarray]:
        return linalg.eigh(self.matrix)

    @cached_property
    def term_spectra(self) -> tuple[tuple[np.ndarray, np.ndarray], ...]:
        return tuple(linalg.eigh(term) for term in self.terms)


def embed(operators: dict[int, np.ndarray], n_sites: int) -> np.ndarray:
    """Tensor product placing single-site operators on their sites, identity elsewhere."""
    return reduce(np.kron, [operators.get(site, IDENTITY) for site in range(n_sites)])


def heisenberg_chain(n_sites: int) -> HamiltonianModel:
    """Periodic Σ_j (X_jX_{j+1} + Y_jY_{j+1} + Z_jZ_{j+1}); bonds ascending, X,Y,Z per bond.

    The two-site chain keeps both bonds (1,2) and (2,1), so H = 2(XX + YY + ZZ).
    """
    if n_sites < 2:
        raise DimensionMismatch(f"a chain needs at least 2 sites, got {n_sites}")
    if n_sites > settings.mpf_max_sites:
        raise DimensionCap(f"{n_sites} sites exceeds the dense limit of {settings.mpf_max_sites}")

    terms = []
    for j in range(n_sites):
        k = (j + 1) % n_sites
        for pauli in (PAULI_X, PAULI_Y, PAULI_Z):
            terms.append(embed({j: pauli, k: pauli}, n_sites))
    return HamiltonianModel(tuple(terms))


def commuting_hamiltonian(n_qubits: int) -> HamiltonianModel:
    """Σ_j Z_j."""
    return HamiltonianModel(tuple(embed({j: PAULI_Z}, n_qubits) for j in range(n_qubits)))


def random_hamiltonian(n_qubits: int, n_terms: int, seed: int, lambda_total: float = 1.0) -> HamiltonianModel:
    """Fixed-seed random Hermitian terms rescaled so that Σ‖h_j‖ = lambda_total."""
    rng = np.random.default_rng(seed)
    dimension = 2**n_qubits
    terms = []
    for _ in range(n_terms):
        g = rng.normal(size=(dimension, dimension)) + 1j * rng.normal(size=(dimension, dimension))
        h = (g + g.conj().T) / 2
        terms.append(h * (lambda_total / n_terms / spectral_norm(h)))
    return HamiltonianModel(tuple(terms))


def exact_evolution(hamiltonian: HamiltonianModel, t: float) -> UnitaryMatrix:
    eigenvalues, eigenvectors = hamiltonian.spectrum
    return hermitian_expm(eigenvalues, eigenvectors, t)


def trotter_u1(hamiltonian: HamiltonianModel, delta: float, reverse: bool = False) -> UnitaryMatrix:
    """e^{−ih₁Δ}·e^{−ih₂Δ}⋯e^{−ih_NΔ}, or the reversed product."""
    factors = [hermitian_expm(w, v, delta) for w, v in hamiltonian.term_spectra]
    if reverse:
        factors.reverse()
    return reduce(np.matmul, factors)


def trotter_u2(hamiltonian: HamiltonianModel, delta: float) -> UnitaryMatrix:
    """U₁(Δ/2) followed by the reversed U₁(Δ/2); palindromic."""
    return trotter_u1(hamiltonian, delta / 2) @ trotter_u1(hamiltonian, delta / 2, reverse=True)


def suzuki_step_sizes(delta: float, alpha: int) -> list[float]:
    """U₂ step sizes of the order-α Suzuki fractal, summing to Δ."""
    if alpha < 2 or alpha % 2:
        raise DimensionMismatch(f"Suzuki order must be even and >= 2, got {alpha}")
    if alpha == 2:
        return [delta]
    p = 1 / (4 - 4 ** (1 / (alpha - 1)))
    outer = suzuki_step_sizes(p * delta, alpha - 2)
    middle = suzuki_step_sizes((1 - 4 * p) * delta, alpha - 2)
    return outer + outer + middle + outer + outer


def suzuki_query_count(alpha: int) -> int:
    """5^{α/2−1} U₂ invocations per order-α step."""
    return 5 ** (alpha // 2 - 1)


def suzuki_u_alpha(hamiltonian: HamiltonianModel, delta: float, alpha: int) -> UnitaryMatrix:
    steps = suzuki_step_sizes(delta, alpha)
    cache: dict[float, np.ndarray] = {}
    result = np.eye(hamiltonian.dimension, dtype=complex)
    for step in steps:
        if step not in cache:
            cache[step] = trotter_u2(hamiltonian, step)
        result = result @ cache[step]
    return result


def apply_mpf(hamiltonian: HamiltonianModel, formula: MpfFormula, delta: float) -> np.ndarray:
    """Σ_j a_j·U_α(Δ/k_j)^{k_j}; a linear combination, not unitary in general."""
    result = np.zeros((hamiltonian.dimension, hamiltonian.dimension), dtype=complex)
    for k, a in zip(formula.exponents, formula.coefficients):
        base = suzuki_u_alpha(hamiltonian, delta / k, formula.base_order)
        result += float(a) * np.linalg.matrix_power(base, k)
    return result


def step_error(hamiltonian: HamiltonianModel, formula: MpfFormula, delta: float) -> float:
    """Single-step error ‖U_k(Δ) − e^{−iHΔ}‖."""
    return spectral_norm(apply_mpf(hamiltonian, formula, delta) - exact_evolution(hamiltonian, delta))


def evolution_error(hamiltonian: HamiltonianModel, formula: MpfFormula, t: float, r: int) -> float:
    """‖U_k(t/r)^r − e^{−iHt}‖."""
    if r < 1:
        raise DimensionMismatch(f"step count must be >= 1, got {r}")
    step = apply_mpf(hamiltonian, formula, t / r)
    return spectral_norm(np.linalg.matrix_power(step, r) - exact_evolution(hamiltonian, t))


def measured_order(hamiltonian: HamiltonianModel, formula: MpfFormula, delta: float) -> float:
    """log₂ of the single-step error ratio under Δ → Δ/2 (about 2m + 1).

    Infinite when the halved step is already exact to the last bit.
    """
    coarse = step_error(hamiltonian, formula, delta)
    fine = step_error(hamiltonian, formula, delta / 2)
    logger.debug(f"Measured order for order {formula.order}: errors {coarse:.3e} -> {fine:.3e}")
    if fine == 0:
        return math.inf
    return math.log2(coarse / fine)


def is_unitary(u: np.ndarray, tolerance: float = UNITARY_TOLERANCE) -> bool:
    return spectral_norm(u.conj().T @ u - np.eye(u.shape[0])) <= tolerance
