import logging
from dataclasses import dataclass, field

import numpy as np

from .config import CLASSICAL_BOUND, IDENTITY_TOL, VALIDATION_TOL, ZERO_WEIGHT_TOL
from .errors import (
    ConsistencyError,
    DimensionError,
    FactorizationMismatchError,
    NumericIntegrityError,
    ZeroProbabilityBranchError,
)
from .observables import ChshAngles, DichotomicObservable
from .states import DensityOperator, Projector, SettingModel, luders_update, product_state
from .tensor import ComplexMatrix, expectation, kron, kron_all

logger = logging.getLogger(__name__)

# Setting pairs (i, j) and their sign in C = C00 + C01 + C10 − C11
SETTINGS = ((0, 0), (0, 1), (1, 0), (1, 1))
CHSH_SIGNS = {(0, 0): 1, (0, 1): 1, (1, 0): 1, (1, 1): -1}


def _require_agreement(first: float, second: float, what: str, error=ConsistencyError) -> None:
    if not abs(first - second) <= IDENTITY_TOL:
        raise error(f"{what}: {first!r} != {second!r} (diff {abs(first - second):.3e})")


def _require_two_qubits(rho: DensityOperator) -> None:
    if rho.dim != 4:
        raise DimensionError(f"expected a two-qubit state (side 4), got side {rho.dim}")


# --- Averages on the compound system ---

def composite_average(rho: DensityOperator, sigma: DensityOperator, A, P) -> float:
    """
    Average of A ⊗ P in the uncorrelated state ρ ⊗ σ.

    The full trace is checked against Tr(ρA)·Tr(σP) ("m_j = M_j g_j"), so that
    dividing by the weight Tr(σP) recovers the average of A alone.

    Args:
        rho (DensityOperator): State on H.
        sigma (DensityOperator): State on K.
        A (ComplexMatrix | DichotomicObservable): Observable on H.
        P (ComplexMatrix | Projector): Projector on K.

    Returns:
        float: Tr((ρ ⊗ σ)(A ⊗ P)).

    Raises:
        DimensionError: If a side does not match its state.
        FactorizationMismatchError: If the two computations disagree.
    """
    full = expectation(product_state(rho, sigma), kron(A, P))
    factorized = expectation(rho, A) * expectation(sigma, P)
    _require_agreement(full, factorized, "composite average vs product of averages", FactorizationMismatchError)
    return full


def pair_correlation(rho: DensityOperator, A: DichotomicObservable, B: DichotomicObservable) -> float:
    """
    Conditional pair correlation C_ij = Tr(ρ · A_i ⊗ B_j).

    Raises:
        NumericIntegrityError: If the trace is not real or leaves [-1, 1].
    """
    _require_two_qubits(rho)
    value = expectation(rho, kron(A, B))
    if not abs(value) <= 1.0 + VALIDATION_TOL:
        raise NumericIntegrityError(f"pair correlation {value!r} outside [-1, 1]")
    return value


def setting_weight(model: SettingModel, k: int, m: int) -> float:
    """
    Probability g_km = Tr(P_k ⊗ Q_m σ) that the generators select (k, m).

    The trace is checked against the product p_k·q_m.
    """
    weight = expectation(model.sigma, model.setting_projector(k, m))
    _require_agreement(weight, model.probability(k, m), f"setting weight g_{k}{m}")
    return weight


def complete_correlation(
    rho: DensityOperator,
    model: SettingModel,
    i: int,
    j: int,
    A_i: DichotomicObservable,
    B_j: DichotomicObservable,
    k: int | None = None,
    m: int | None = None,
    sigma: DensityOperator | None = None,
) -> float:
    """
    Complete correlation c_ij,km = Tr((ρ ⊗ σ)(A_i ⊗ B_j ⊗ P_k ⊗ Q_m)).

    Computed on the full 16-dimensional space and checked against the factorized
    form C_ij·g_km. The generator pair (k, m) defaults to (i, j), which gives the
    c_ij entering the CHSH combination.

    Args:
        rho (DensityOperator): Two-qubit source state.
        model (SettingModel): Generators (projectors and, unless overridden, σ).
        i (int): Left setting of the observable.
        j (int): Right setting of the observable.
        A_i (DichotomicObservable): Left observable.
        B_j (DichotomicObservable): Right observable.
        k (int | None): Left generator reading; defaults to i.
        m (int | None): Right generator reading; defaults to j.
        sigma (DensityOperator | None): Generator state replacing model.sigma.

    Returns:
        float: The complete correlation.

    Raises:
        FactorizationMismatchError: If the full trace and C_ij·g_km disagree.
    """
    k = i if k is None else k
    m = j if m is None else m
    setting = model.setting_projector(k, m)
    if sigma is None:
        sigma, weight = model.sigma, setting_weight(model, k, m)
    else:
        weight = expectation(sigma, setting)

    full = expectation(kron(rho.matrix, sigma.matrix), kron_all(A_i, B_j, setting))
    factorized = pair_correlation(rho, A_i, B_j) * weight
    _require_agreement(full, factorized, f"complete correlation c_{i}{j},{k}{m}", FactorizationMismatchError)
    return full


def complete_correlation_table(rho: DensityOperator, model: SettingModel, angles: ChshAngles) -> np.ndarray:
    """
    Every c_ij,km, indexed [i, j, k, m].

    The diagonal entries (k, m) = (i, j) are the ones the experiment records; the
    others are the correlations of A_i ⊗ B_j with a generator reading that did
    not select them.
    """
    left, right = angles.left(), angles.right()
    table = np.zeros((2, 2, 2, 2))
    for i, j in SETTINGS:
        for k, m in SETTINGS:
            table[i, j, k, m] = complete_correlation(rho, model, i, j, left[i], right[j], k, m)
    return table


# --- CHSH combinations ---

def chsh_operator(angles: ChshAngles) -> ComplexMatrix:
    """Γ = A0⊗B0 + A1⊗B0 + A0⊗B1 − A1⊗B1."""
    left, right = angles.left(), angles.right()
    gamma = ComplexMatrix(np.zeros((4, 4)))
    for i, j in SETTINGS:
        gamma = gamma + kron(left[i], right[j]) * CHSH_SIGNS[i, j]
    return gamma


def complete_chsh_operator(model: SettingModel, angles: ChshAngles) -> ComplexMatrix:
    """γ = Σ ± (A_i ⊗ B_j) ⊗ (P_i ⊗ Q_j) on H ⊗ K."""
    left, right = angles.left(), angles.right()
    gamma = ComplexMatrix(np.zeros((16, 16)))
    for i, j in SETTINGS:
        gamma = gamma + kron_all(left[i], right[j], model.setting_projector(i, j)) * CHSH_SIGNS[i, j]
    return gamma


def chsh_conditional(rho: DensityOperator, angles: ChshAngles) -> float:
    """
    C = Tr(ρΓ), checked against the sum of the four pair correlations.

    Raises:
        ConsistencyError: If the single-operator and term-wise values disagree.
    """
    _require_two_qubits(rho)
    value = expectation(rho, chsh_operator(angles))
    left, right = angles.left(), angles.right()
    terms = sum(CHSH_SIGNS[i, j] * pair_correlation(rho, left[i], right[j]) for i, j in SETTINGS)
    _require_agreement(value, terms, "Tr(ρΓ) vs Σ±C_ij")
    return value


def chsh_complete(rho: DensityOperator, model: SettingModel, angles: ChshAngles) -> float:
    """
    c = Tr((ρ ⊗ σ) γ), checked against Σ±c_ij.

    Raises:
        ConsistencyError: If the single-operator and term-wise values disagree.
    """
    _require_two_qubits(rho)
    value = expectation(kron(rho.matrix, model.sigma.matrix), complete_chsh_operator(model, angles))
    left, right = angles.left(), angles.right()
    terms = sum(
        CHSH_SIGNS[i, j] * complete_correlation(rho, model, i, j, left[i], right[j])
        for i, j in SETTINGS
    )
    _require_agreement(value, terms, "Tr((ρ⊗σ)γ) vs Σ±c_ij")
    return value


# --- Conditioning on the generator readings ---

def _condition_on_setting(rho, model, i, j, sigma) -> tuple[DensityOperator, float]:
    R = product_state(rho, model.sigma if sigma is None else sigma, label="R")
    reading = model.setting_projector(i, j)
    M = Projector(kron(ComplexMatrix.identity(rho.dim), reading))
    return luders_update(R, M)


def conditional_correlation(
    rho: DensityOperator,
    model: SettingModel,
    i: int,
    j: int,
    A_i: DichotomicObservable,
    B_j: DichotomicObservable,
    sigma: DensityOperator | None = None,
) -> float:
    """
    Correlation of A_i ⊗ B_j after conditioning on the generator reading (i, j).

    R = ρ ⊗ σ is projected by I ⊗ (P_i ⊗ Q_j) and renormalised; the average of
    (A_i ⊗ B_j) ⊗ I in the post-measurement state must come back as Tr(ρ A_i ⊗ B_j):
    the generator weight cancels between numerator and denominator.

    Raises:
        ZeroProbabilityBranchError: If the reading (i, j) has vanishing weight.
        ConsistencyError: If the conditioned value differs from the pair correlation.
    """
    _require_two_qubits(rho)
    post, weight = _condition_on_setting(rho, model, i, j, sigma)
    value = expectation(post, kron(kron(A_i, B_j), ComplexMatrix.identity(4)))
    _require_agreement(value, pair_correlation(rho, A_i, B_j), f"conditional C_{i}{j}|cond vs C_{i}{j}")
    logger.debug("C_%d%d|cond = %.15g (weight %.6g)", i, j, value, weight)
    return value


def sequential_correlation(
    rho: DensityOperator,
    model: SettingModel,
    i: int,
    j: int,
    A_i: DichotomicObservable,
    B_j: DichotomicObservable,
) -> float:
    """
    Read the generators first, then measure A_i ⊗ B_j.

    The weight of the reading times the conditional average equals the joint
    complete correlation c_ij, so measuring the two parts in sequence changes nothing.
    """
    post, weight = _condition_on_setting(rho, model, i, j, None)
    value = weight * expectation(post, kron(kron(A_i, B_j), ComplexMatrix.identity(4)))
    _require_agreement(value, complete_correlation(rho, model, i, j, A_i, B_j), f"sequential vs joint c_{i}{j}")
    return value


# --- Report ---

@dataclass
class CorrelationReport:
    """
    Analytic tables for one (state, generators, angles) setup.

    Attributes:
        pair (list[list[float]]): C_ij, the conditional pair correlations.
        weights (list[list[float]]): g_ij = p_i·q_j.
        complete (list[list[float]]): c_ij = C_ij·g_ij.
        chsh_conditional (float): C = C00 + C01 + C10 − C11.
        chsh_complete (float): c = c00 + c01 + c10 − c11.
        conditional (list[list[float | None]]): C_ij|cond from the Lüders update;
            None where the setting weight vanishes.
        inflation (list[list[float | None]]): 1/g_ij; None where the weight vanishes.
        complete_within_classical_bound (bool): |c| ≤ 2.
    """

    pair: list
    weights: list
    complete: list
    chsh_conditional: float
    chsh_complete: float
    conditional: list
    inflation: list
    complete_within_classical_bound: bool = field(init=False)

    def __post_init__(self):
        for i, j in SETTINGS:
            _require_agreement(
                self.complete[i][j], self.pair[i][j] * self.weights[i][j], f"c_{i}{j} vs C_{i}{j}·g_{i}{j}"
            )
        self.complete_within_classical_bound = abs(self.chsh_complete) <= CLASSICAL_BOUND

    def to_dict(self) -> dict:
        return {
            "C_ij": self.pair,
            "g_ij": self.weights,
            "c_ij": self.complete,
            "C": self.chsh_conditional,
            "c": self.chsh_complete,
            "conditional_ij": self.conditional,
            "inflation_ij": self.inflation,
            "complete_within_classical_bound": self.complete_within_classical_bound,
        }


def correlation_report(rho: DensityOperator, model: SettingModel, angles: ChshAngles) -> CorrelationReport:
    """
    Evaluate every analytic quantity of the setup.

    Args:
        rho (DensityOperator): Two-qubit source state.
        model (SettingModel): Setting generators.
        angles (ChshAngles): PBS orientations.

    Returns:
        CorrelationReport: All tables; conditional cells are None for impossible settings.
    """
    left, right = angles.left(), angles.right()
    pair = [[0.0, 0.0], [0.0, 0.0]]
    weights = [[0.0, 0.0], [0.0, 0.0]]
    complete = [[0.0, 0.0], [0.0, 0.0]]
    conditional = [[None, None], [None, None]]
    inflation = [[None, None], [None, None]]

    for i, j in SETTINGS:
        pair[i][j] = pair_correlation(rho, left[i], right[j])
        weights[i][j] = setting_weight(model, i, j)
        complete[i][j] = complete_correlation(rho, model, i, j, left[i], right[j])
        if weights[i][j] > ZERO_WEIGHT_TOL:
            inflation[i][j] = 1.0 / weights[i][j]
        try:
            conditional[i][j] = conditional_correlation(rho, model, i, j, left[i], right[j])
        except ZeroProbabilityBranchError:
            logger.info("setting (%d, %d) never selected; conditional correlation absent", i, j)

    return CorrelationReport(
        pair=pair,
        weights=weights,
        complete=complete,
        chsh_conditional=chsh_conditional(rho, angles),
        chsh_complete=chsh_complete(rho, model, angles),
        conditional=conditional,
        inflation=inflation,
    )
