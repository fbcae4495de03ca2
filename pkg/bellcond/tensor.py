import logging
import math
from dataclasses import dataclass

import numpy as np

from .config import ALLOWED_DIMS, JACOBI_MAX_SWEEPS, JACOBI_OFF_TOL, MAX_DIM, VALIDATION_TOL
from .errors import DensityValidationError, DimensionError, NumericIntegrityError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class ComplexMatrix:
    """
    Dense square complex matrix, the substrate for every operator and state.

    The entries are copied into a read-only complex128 array at construction, so a
    ComplexMatrix never changes once built and can be shared freely between workers.

    Attributes:
        entries (np.ndarray): dim×dim complex values, row-major.
    """

    entries: np.ndarray

    def __post_init__(self):
        arr = np.array(self.entries, dtype=np.complex128)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise DimensionError(f"expected a square matrix, got shape {arr.shape}")
        if arr.shape[0] not in ALLOWED_DIMS:
            raise DimensionError(f"matrix side {arr.shape[0]} not in {ALLOWED_DIMS}")
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    # --- Constructors ---

    @classmethod
    def identity(cls, dim: int) -> "ComplexMatrix":
        return cls(np.eye(dim))

    @classmethod
    def diagonal(cls, values) -> "ComplexMatrix":
        return cls(np.diag(np.asarray(values, dtype=np.complex128)))

    @classmethod
    def outer(cls, ket) -> "ComplexMatrix":
        """Return |ket⟩⟨ket| for a column vector given as a flat sequence."""
        vec = np.asarray(ket, dtype=np.complex128)
        return cls(np.outer(vec, vec.conj()))

    # --- Algebra ---

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def __matmul__(self, other: "ComplexMatrix") -> "ComplexMatrix":
        _require_same_dim(self, other)
        return ComplexMatrix(self.entries @ other.entries)

    def __add__(self, other: "ComplexMatrix") -> "ComplexMatrix":
        _require_same_dim(self, other)
        return ComplexMatrix(self.entries + other.entries)

    def __sub__(self, other: "ComplexMatrix") -> "ComplexMatrix":
        _require_same_dim(self, other)
        return ComplexMatrix(self.entries - other.entries)

    def __neg__(self) -> "ComplexMatrix":
        return ComplexMatrix(-self.entries)

    def __mul__(self, scalar) -> "ComplexMatrix":
        return ComplexMatrix(self.entries * scalar)

    __rmul__ = __mul__

    def __truediv__(self, scalar) -> "ComplexMatrix":
        return ComplexMatrix(self.entries / scalar)

    def trace(self) -> complex:
        return complex(np.trace(self.entries))

    # --- Residuals ---

    def max_abs_diff(self, other: "ComplexMatrix") -> float:
        _require_same_dim(self, other)
        return float(np.max(np.abs(self.entries - other.entries)))

    def allclose(self, other: "ComplexMatrix", tol: float) -> bool:
        return self.max_abs_diff(other) <= tol

    def is_finite(self) -> bool:
        return bool(np.isfinite(self.entries).all())

    def hermiticity_residual(self) -> float:
        return float(np.max(np.abs(self.entries - self.entries.conj().T)))

    def __repr__(self):
        return f"ComplexMatrix(dim={self.dim})"


def _require_same_dim(a: ComplexMatrix, b: ComplexMatrix) -> None:
    if a.dim != b.dim:
        raise DimensionError(f"dimension mismatch: {a.dim} vs {b.dim}")


def as_matrix(value) -> ComplexMatrix:
    """
    Unwrap states, projectors and observables to their ComplexMatrix.

    Args:
        value (ComplexMatrix | object): A matrix, or any wrapper exposing `.matrix`.

    Returns:
        ComplexMatrix: The underlying matrix.
    """
    if isinstance(value, ComplexMatrix):
        return value
    matrix = getattr(value, "matrix", None)
    if isinstance(matrix, ComplexMatrix):
        return matrix
    raise TypeError(f"cannot interpret {type(value).__name__} as a ComplexMatrix")


# --- Core operations ---

def kron(a, b) -> ComplexMatrix:
    """
    Kronecker product a ⊗ b.

    Entry ((i·b.dim + k), (j·b.dim + l)) of the result is a(i, j)·b(k, l).

    Args:
        a (ComplexMatrix): Left factor.
        b (ComplexMatrix): Right factor.

    Returns:
        ComplexMatrix: The product, of side a.dim · b.dim.

    Raises:
        DimensionError: If the result side would exceed 16.
    """
    a, b = as_matrix(a), as_matrix(b)
    if a.dim * b.dim > MAX_DIM:
        raise DimensionError(f"kron of sides {a.dim} and {b.dim} exceeds {MAX_DIM}")
    return ComplexMatrix(np.kron(a.entries, b.entries))


def kron_all(*factors) -> ComplexMatrix:
    result = as_matrix(factors[0])
    for factor in factors[1:]:
        result = kron(result, factor)
    return result


def expectation(state, observable) -> float:
    """
    Return Tr(state · observable) as a real number.

    Args:
        state (ComplexMatrix | DensityOperator): A valid density operator.
        observable (ComplexMatrix | Projector | DichotomicObservable): A Hermitian matrix.

    Returns:
        float: The real part of the trace; the imaginary residue is discarded.

    Raises:
        DimensionError: If the sides differ.
        NumericIntegrityError: If an entry is not finite, the observable is not Hermitian
            or the trace is not real.
    """
    state, observable = as_matrix(state), as_matrix(observable)
    _require_same_dim(state, observable)
    if not (state.is_finite() and observable.is_finite()):
        raise NumericIntegrityError("expectation of a matrix with non-finite entries")
    residual = observable.hermiticity_residual()
    if not residual <= VALIDATION_TOL:
        raise NumericIntegrityError(f"observable is not Hermitian (residual {residual:.3e})")
    value = complex(np.einsum("ij,ji->", state.entries, observable.entries))
    if not abs(value.imag) < VALIDATION_TOL:
        raise NumericIntegrityError(f"trace has imaginary residue {value.imag:.3e}")
    return value.real


def partial_trace(m, dims: tuple[int, int], keep: int) -> ComplexMatrix:
    """
    Trace out one side of a bipartite operator.

    Args:
        m (ComplexMatrix): Operator on a space of sides dims[0] ⊗ dims[1].
        dims (tuple[int, int]): The two factor sides.
        keep (int): 0 to keep the left factor, 1 to keep the right one.

    Returns:
        ComplexMatrix: The reduced operator.
    """
    m = as_matrix(m)
    d_a, d_b = dims
    if d_a * d_b != m.dim:
        raise DimensionError(f"factor sides {dims} do not multiply to {m.dim}")
    t = m.entries.reshape(d_a, d_b, d_a, d_b)
    if keep == 0:
        return ComplexMatrix(np.einsum("ijkj->ik", t))
    if keep == 1:
        return ComplexMatrix(np.einsum("ijil->jl", t))
    raise ValueError(f"keep must be 0 or 1, got {keep}")


# --- Spectrum and validation ---

def hermitian_eigenvalues(m) -> np.ndarray:
    """
    Eigenvalues of a Hermitian matrix by cyclic complex Jacobi rotations.

    Each rotation first removes the phase of the pivot a[p, q] with a diagonal
    unitary, then zeroes the now-real pivot with the classical real rotation.
    Sweeps run until the off-diagonal Frobenius norm is negligible.

    Args:
        m (ComplexMatrix): A Hermitian matrix (its anti-Hermitian part is dropped).

    Returns:
        np.ndarray: Real eigenvalues sorted ascending.

    Raises:
        NumericIntegrityError: If an entry is NaN or infinite.
    """
    m = as_matrix(m)
    if not m.is_finite():
        raise NumericIntegrityError("eigenvalues of a matrix with non-finite entries")
    a = (m.entries + m.entries.conj().T) / 2
    n = a.shape[0]
    scale = max(1.0, float(np.linalg.norm(a)))
    threshold = JACOBI_OFF_TOL * scale

    for sweep in range(JACOBI_MAX_SWEEPS):
        off = math.sqrt(max(0.0, float(np.sum(np.abs(a) ** 2) - np.sum(np.abs(np.diag(a)) ** 2))))
        if off <= threshold:
            logger.debug("jacobi converged after %d sweeps (dim %d)", sweep, n)
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                pivot = a[p, q]
                modulus = abs(pivot)
                if modulus <= threshold / n:
                    continue
                phase = pivot / modulus
                theta = (a[q, q].real - a[p, p].real) / (2.0 * modulus)
                t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                g = np.eye(n, dtype=np.complex128)
                g[p, p] = c
                g[p, q] = s
                g[q, p] = -s * phase.conjugate()
                g[q, q] = c * phase.conjugate()
                a = g.conj().T @ a @ g
    else:
        logger.warning("jacobi did not converge in %d sweeps (dim %d)", JACOBI_MAX_SWEEPS, n)

    return np.sort(np.diag(a).real)


def density_failures(m) -> tuple[list[str], str]:
    """
    Run the three density-operator checks and collect what fails.

    Returns:
        tuple: (failed codes, human-readable detail)
    """
    m = as_matrix(m)
    failed, details = [], []
    if not m.is_finite():
        codes = [DensityValidationError.NON_HERMITIAN, DensityValidationError.NON_UNIT_TRACE, DensityValidationError.NON_PSD]
        return codes, "non-finite entries"

    residual = m.hermiticity_residual()
    if not residual < VALIDATION_TOL:
        failed.append(DensityValidationError.NON_HERMITIAN)
        details.append(f"Hermiticity residual {residual:.3e}")

    trace = m.trace()
    if not abs(trace - 1.0) <= VALIDATION_TOL:
        failed.append(DensityValidationError.NON_UNIT_TRACE)
        details.append(f"trace {trace.real:.12g}{trace.imag:+.3e}j")

    smallest = float(hermitian_eigenvalues(m)[0])
    if not smallest > -VALIDATION_TOL:
        failed.append(DensityValidationError.NON_PSD)
        details.append(f"smallest eigenvalue {smallest:.3e}")

    return failed, "; ".join(details)


def validate_density(m, label: str = ""):
    """
    Accept a matrix as a density operator or raise.

    Args:
        m (ComplexMatrix): Candidate state.
        label (str): Free-form tag carried by the result.

    Returns:
        DensityOperator: The validated state.

    Raises:
        DensityValidationError: With code non_hermitian, non_unit_trace or non_psd.
    """
    from .states import DensityOperator

    return DensityOperator(as_matrix(m), label)
