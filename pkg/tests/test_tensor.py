import math

import numpy as np
import pytest

from bellcond.errors import DimensionError, NumericIntegrityError
from bellcond.observables import PAULI_X, PAULI_Z
from bellcond.states import random_density, random_hermitian
from bellcond.tensor import (
    ComplexMatrix,
    expectation,
    hermitian_eigenvalues,
    kron,
    kron_all,
    partial_trace,
)


def test_rejects_non_square_and_unsupported_sides():
    with pytest.raises(DimensionError):
        ComplexMatrix(np.zeros((2, 4)))
    with pytest.raises(DimensionError):
        ComplexMatrix(np.eye(3))


def test_entries_are_read_only():
    m = ComplexMatrix.identity(2)
    with pytest.raises(ValueError):
        m.entries[0, 0] = 5


def test_mismatched_sides_raise():
    with pytest.raises(DimensionError):
        ComplexMatrix.identity(2) @ ComplexMatrix.identity(4)


def test_kron_entry_layout():
    a = ComplexMatrix(np.array([[1, 2], [3, 4]]))
    b = ComplexMatrix(np.array([[0, 5], [6, 7]]))
    product = kron(a, b).entries
    for i in range(2):
        for j in range(2):
            for k in range(2):
                for l in range(2):
                    assert product[i * 2 + k, j * 2 + l] == a.entries[i, j] * b.entries[k, l]


def test_kron_of_identities():
    assert kron(ComplexMatrix.identity(2), ComplexMatrix.identity(2)).allclose(ComplexMatrix.identity(4), 0.0)


def test_kron_beyond_sixteen_raises():
    with pytest.raises(DimensionError):
        kron(ComplexMatrix.identity(8), ComplexMatrix.identity(4))


def test_kron_all_reaches_sixteen():
    assert kron_all(*(ComplexMatrix.identity(2) for _ in range(4))).dim == 16


def test_kron_trace_is_multiplicative(rng):
    for _ in range(10):
        a, b = random_hermitian(2, rng), random_hermitian(2, rng)
        assert abs(kron(a, b).trace() - a.trace() * b.trace()) <= 1e-12


def test_kron_mixed_product(rng):
    for _ in range(10):
        a, b, c, d = (random_hermitian(2, rng) for _ in range(4))
        assert (kron(a, b) @ kron(c, d)).allclose(kron(a @ c, b @ d), 1e-12)


def test_expectation_of_zz_on_phi_plus(phi_plus):
    assert expectation(phi_plus, kron(PAULI_Z, PAULI_Z)) == pytest.approx(1.0, abs=1e-15)


def test_expectation_of_identity_is_one(rng):
    rho = random_density(4, rng)
    assert expectation(rho, ComplexMatrix.identity(4)) == pytest.approx(1.0, abs=1e-12)


def test_expectation_rejects_non_hermitian(phi_plus):
    skew = ComplexMatrix(np.array([[0, 1, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]]))
    with pytest.raises(NumericIntegrityError):
        expectation(phi_plus, skew)


def test_expectation_dimension_mismatch(phi_plus):
    with pytest.raises(DimensionError):
        expectation(phi_plus, PAULI_Z)


def test_partial_trace_of_bell_state_is_maximally_mixed(phi_plus):
    half = ComplexMatrix.identity(2) / 2
    assert partial_trace(phi_plus.matrix, (2, 2), keep=0).allclose(half, 1e-15)
    assert partial_trace(phi_plus.matrix, (2, 2), keep=1).allclose(half, 1e-15)


def test_partial_trace_of_product():
    a = ComplexMatrix.diagonal((0.3, 0.7))
    b = ComplexMatrix.diagonal((0.6, 0.4))
    assert partial_trace(kron(a, b), (2, 2), keep=0).allclose(a, 1e-15)
    assert partial_trace(kron(a, b), (2, 2), keep=1).allclose(b, 1e-15)


@pytest.mark.parametrize("dim", [2, 4, 8, 16])
def test_jacobi_matches_lapack(dim, rng):
    for _ in range(3):
        m = random_hermitian(dim, rng)
        np.testing.assert_allclose(hermitian_eigenvalues(m), np.linalg.eigvalsh(m.entries), atol=1e-10)


def test_jacobi_on_pauli_combination():
    m = PAULI_Z * math.cos(0.3) + PAULI_X * math.sin(0.3)
    np.testing.assert_allclose(hermitian_eigenvalues(m), [-1.0, 1.0], atol=1e-14)
