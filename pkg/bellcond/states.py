import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .config import PROBABILITY_TOL, VALIDATION_TOL, ZERO_WEIGHT_TOL
from .errors import (
    DensityValidationError,
    DimensionError,
    ProjectorError,
    UnknownStateError,
    WeightsError,
    ZeroProbabilityBranchError,
)
from .tensor import ComplexMatrix, as_matrix, density_failures, kron

logger = logging.getLogger(__name__)

BELL_STATE_NAMES = ("phi_plus", "phi_minus", "psi_plus", "psi_minus")

# Amplitudes over |00⟩, |01⟩, |10⟩, |11⟩
_BELL_KETS = {
    "phi_plus": (1, 0, 0, 1),
    "phi_minus": (1, 0, 0, -1),
    "psi_plus": (0, 1, 1, 0),
    "psi_minus": (0, 1, -1, 0),
}


@dataclass(frozen=True)
class DensityOperator:
    """
    Validated quantum state: Hermitian, positive semidefinite, unit trace.

    Attributes:
        matrix (ComplexMatrix): The state's matrix.
        label (str): Free-form tag (e.g. "phi_plus", "sigma").
    """

    matrix: ComplexMatrix
    label: str = ""

    def __post_init__(self):
        failed, detail = density_failures(self.matrix)
        if failed:
            name = f" '{self.label}'" if self.label else ""
            raise DensityValidationError(failed, f"not a density operator{name}: {detail}")

    @property
    def dim(self) -> int:
        return self.matrix.dim


@dataclass(frozen=True)
class Projector:
    """Orthogonal projector: Hermitian and idempotent within 1e-10."""

    matrix: ComplexMatrix

    def __post_init__(self):
        if not self.matrix.is_finite():
            raise ProjectorError("projector has non-finite entries")
        residual = self.matrix.hermiticity_residual()
        if not residual < VALIDATION_TOL:
            raise ProjectorError(f"projector is not Hermitian (residual {residual:.3e})")
        idempotency = (self.matrix @ self.matrix).max_abs_diff(self.matrix)
        if not idempotency < VALIDATION_TOL:
            raise ProjectorError(f"projector is not idempotent (residual {idempotency:.3e})")

    @property
    def dim(self) -> int:
        return self.matrix.dim

    @classmethod
    def basis(cls, index: int, dim: int = 2) -> "Projector":
        """Rank-one projector |index⟩⟨index| onto a computational basis vector."""
        ket = np.zeros(dim)
        ket[index] = 1.0
        return cls(ComplexMatrix.outer(ket))


def check_weights(w0: float, w1: float) -> tuple[float, float]:
    if w0 < 0 or w1 < 0 or not math.isfinite(w0) or not math.isfinite(w1):
        raise WeightsError(f"weights must be finite and nonnegative, got ({w0}, {w1})")
    if abs(w0 + w1 - 1.0) > PROBABILITY_TOL:
        raise WeightsError(f"weights must sum to 1, got {w0} + {w1} = {w0 + w1}")
    return float(w0), float(w1)


@dataclass(frozen=True)
class SettingModel:
    """
    The two random setting generators, read as measured quantum systems.

    Generator G1 lives on K1 with the classical mixture σ1 = p0|0⟩⟨0| + p1|1⟩⟨1|,
    G2 on K2 with σ2 = q0|0⟩⟨0| + q1|1⟩⟨1|. Their readings are the rank-one
    projectors P_k, Q_m, and the joint generator state is σ = σ1 ⊗ σ2.

    Attributes:
        p (tuple[float, float]): Probabilities of G1 selecting setting 0 / 1.
        q (tuple[float, float]): Probabilities of G2 selecting setting 0 / 1.
        p_projectors (tuple[Projector, Projector]): P0, P1 on K1.
        q_projectors (tuple[Projector, Projector]): Q0, Q1 on K2.
        sigma1 (DensityOperator): State of G1.
        sigma2 (DensityOperator): State of G2.
        sigma (DensityOperator): σ1 ⊗ σ2 on K = K1 ⊗ K2.
    """

    p: tuple[float, float]
    q: tuple[float, float]
    p_projectors: tuple = field(init=False, repr=False)
    q_projectors: tuple = field(init=False, repr=False)
    sigma1: DensityOperator = field(init=False, repr=False)
    sigma2: DensityOperator = field(init=False, repr=False)
    sigma: DensityOperator = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "p", check_weights(*self.p))
        object.__setattr__(self, "q", check_weights(*self.q))

        p_projectors = (Projector.basis(0), Projector.basis(1))
        q_projectors = (Projector.basis(0), Projector.basis(1))
        identity = ComplexMatrix.identity(2)
        for family in (p_projectors, q_projectors):
            if not (family[0].matrix + family[1].matrix).allclose(identity, PROBABILITY_TOL):
                raise ProjectorError("setting projectors do not resolve the identity")

        sigma1 = classical_mixture(*self.p)
        sigma2 = classical_mixture(*self.q)
        object.__setattr__(self, "p_projectors", p_projectors)
        object.__setattr__(self, "q_projectors", q_projectors)
        object.__setattr__(self, "sigma1", sigma1)
        object.__setattr__(self, "sigma2", sigma2)
        object.__setattr__(self, "sigma", product_state(sigma1, sigma2, label="sigma"))

    @classmethod
    def uniform(cls) -> "SettingModel":
        return cls((0.5, 0.5), (0.5, 0.5))

    @classmethod
    def from_p0_q0(cls, p0: float, q0: float) -> "SettingModel":
        return cls((p0, 1.0 - p0), (q0, 1.0 - q0))

    def setting_projector(self, k: int, m: int) -> Projector:
        """Return P_k ⊗ Q_m, the projector onto the generator reading (k, m)."""
        return Projector(kron(self.p_projectors[k], self.q_projectors[m]))

    def probability(self, k: int, m: int) -> float:
        return self.p[k] * self.q[m]

    def generator_observables(self) -> tuple[ComplexMatrix, ComplexMatrix]:
        """The reading observables G1 = Σ_j j·P_j and G2 = Σ_j j·Q_j."""
        return spectral_observable(self.p_projectors), spectral_observable(self.q_projectors)


# --- State construction ---

def bell_state(name: str) -> DensityOperator:
    """
    Build one of the four maximally entangled two-qubit states.

    Args:
        name (str): One of 'phi_plus', 'phi_minus', 'psi_plus', 'psi_minus'.

    Returns:
        DensityOperator: The pure state, in the basis |00⟩, |01⟩, |10⟩, |11⟩.

    Raises:
        UnknownStateError: For any other label.
    """
    try:
        amplitudes = _BELL_KETS[name]
    except KeyError:
        raise UnknownStateError(f"unknown Bell state '{name}', expected one of {BELL_STATE_NAMES}") from None
    ket = np.asarray(amplitudes, dtype=np.complex128) / math.sqrt(2)
    return DensityOperator(ComplexMatrix.outer(ket), name)


def classical_mixture(w0: float, w1: float) -> DensityOperator:
    """
    Diagonal generator state w0|0⟩⟨0| + w1|1⟩⟨1|.

    Raises:
        WeightsError: If the weights are negative or do not sum to one.
    """
    w0, w1 = check_weights(w0, w1)
    return DensityOperator(ComplexMatrix.diagonal((w0, w1)), f"mixture({w0:g},{w1:g})")


def product_state(a: DensityOperator, b: DensityOperator, label: str = "") -> DensityOperator:
    """
    Uncorrelated joint state a ⊗ b, revalidated.

    Raises:
        DimensionError: If the joint side would exceed 16.
    """
    return DensityOperator(kron(a.matrix, b.matrix), label or f"{a.label}*{b.label}")


def spectral_observable(projectors) -> ComplexMatrix:
    """Return Σ_j j·P_j for a spectral family (P_0, P_1, ...)."""
    matrices = [as_matrix(p) for p in projectors]
    total = matrices[0] * 0
    for j, matrix in enumerate(matrices):
        total = total + matrix * j
    return total


def luders_update(R: DensityOperator, M: Projector) -> tuple[DensityOperator, float]:
    """
    Condition a state on the projector outcome M (projection postulate).

    Args:
        R (DensityOperator): State before the measurement.
        M (Projector): Observed outcome.

    Returns:
        tuple: (M·R·M / weight, weight) with weight = Tr(M·R·M).

    Raises:
        DimensionError: If the sides differ.
        ZeroProbabilityBranchError: If weight ≤ 1e-12.
    """
    if R.dim != M.dim:
        raise DimensionError(f"state side {R.dim} does not match projector side {M.dim}")
    projected = M.matrix @ R.matrix @ M.matrix
    weight = projected.trace().real
    if weight <= ZERO_WEIGHT_TOL:
        raise ZeroProbabilityBranchError(f"conditioning on an outcome of probability {weight:.3e}")
    logger.debug("lüders update on %s: weight %.15g", R.label or "state", weight)
    return DensityOperator(projected / weight, f"{R.label}|cond" if R.label else "cond"), weight


# --- Random states (property tests, verify suite) ---

def random_density(dim: int, rng: np.random.Generator, label: str = "random") -> DensityOperator:
    """Mixed state G·G†/Tr from a complex Ginibre matrix G."""
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = g @ g.conj().T
    return DensityOperator(ComplexMatrix(rho / np.trace(rho).real), label)


def random_product_state(rng: np.random.Generator) -> DensityOperator:
    """Two-qubit product state ρ1 ⊗ ρ2 with random single-qubit factors."""
    return product_state(random_density(2, rng), random_density(2, rng), label="random_product")


def random_hermitian(dim: int, rng: np.random.Generator) -> ComplexMatrix:
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return ComplexMatrix((g + g.conj().T) / 2)


def random_weights(rng: np.random.Generator, low: float = 0.0) -> tuple[float, float]:
    w0 = float(rng.uniform(low, 1.0 - low))
    return w0, 1.0 - w0
