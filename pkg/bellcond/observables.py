import math
from dataclasses import dataclass, replace

import numpy as np

from .config import TSIRELSON_ANGLES, VALIDATION_TOL
from .errors import ObservableError
from .tensor import ComplexMatrix

PAULI_Z = ComplexMatrix(np.array([[1, 0], [0, -1]]))
PAULI_X = ComplexMatrix(np.array([[0, 1], [1, 0]]))


@dataclass(frozen=True)
class DichotomicObservable:
    """
    A ±1-valued single-qubit observable (a PBS at a fixed orientation).

    Attributes:
        matrix (ComplexMatrix): Hermitian 2×2 matrix squaring to the identity.
        angle (float | None): Orientation in radians, when built from an angle.
    """

    matrix: ComplexMatrix
    angle: float | None = None

    def __post_init__(self):
        if self.matrix.dim != 2:
            raise ObservableError(f"dichotomic observables act on a qubit, got side {self.matrix.dim}")
        if not self.matrix.is_finite():
            raise ObservableError("observable has non-finite entries")
        residual = self.matrix.hermiticity_residual()
        if not residual < VALIDATION_TOL:
            raise ObservableError(f"observable is not Hermitian (residual {residual:.3e})")
        square = (self.matrix @ self.matrix).max_abs_diff(ComplexMatrix.identity(2))
        if not square < VALIDATION_TOL:
            raise ObservableError(f"observable does not square to the identity (residual {square:.3e})")

    def outcome_projector(self, outcome: int) -> ComplexMatrix:
        """Spectral projector Π_± = (I ± A)/2 for outcome ±1."""
        if outcome not in (1, -1):
            raise ObservableError(f"outcome must be +1 or -1, got {outcome}")
        return (ComplexMatrix.identity(2) + self.matrix * outcome) / 2


@dataclass(frozen=True)
class ChshAngles:
    """PBS orientations in radians: a0, a1 on the left wing, b0, b1 on the right."""

    a0: float
    a1: float
    b0: float
    b1: float

    def __post_init__(self):
        for name in ("a0", "a1", "b0", "b1"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ObservableError(f"angle {name} must be finite, got {value}")
            object.__setattr__(self, name, value)

    @classmethod
    def tsirelson(cls) -> "ChshAngles":
        return cls(*TSIRELSON_ANGLES)

    @classmethod
    def from_degrees(cls, a0, a1, b0, b1) -> "ChshAngles":
        return cls(*(math.radians(x) for x in (a0, a1, b0, b1)))

    def with_b0_offset(self, offset: float) -> "ChshAngles":
        return replace(self, b0=self.b0 + offset)

    def left(self) -> tuple[DichotomicObservable, DichotomicObservable]:
        return polarization_observable(self.a0), polarization_observable(self.a1)

    def right(self) -> tuple[DichotomicObservable, DichotomicObservable]:
        return polarization_observable(self.b0), polarization_observable(self.b1)

    def to_dict(self) -> dict:
        return {"a0": self.a0, "a1": self.a1, "b0": self.b0, "b1": self.b1}


def polarization_observable(theta: float) -> DichotomicObservable:
    """
    PBS observable at orientation theta: cos(theta)·Z + sin(theta)·X.

    With this convention on both wings, phi_plus gives E(a, b) = cos(a − b).

    Args:
        theta (float): Orientation in radians.

    Returns:
        DichotomicObservable: The observable, tagged with its angle.
    """
    theta = float(theta)
    if not math.isfinite(theta):
        raise ObservableError(f"angle must be finite, got {theta}")
    return DichotomicObservable(PAULI_Z * math.cos(theta) + PAULI_X * math.sin(theta), theta)
