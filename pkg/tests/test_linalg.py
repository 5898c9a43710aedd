import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from photon_trk.linalg import (
    ConvergenceError,
    DimensionError,
    EigenSystem,
    NotHermitianError,
    adjoint,
    apply_function,
    check_hermitian,
    commutator,
    degenerate_clusters,
    fix_phases,
    hermitian_eig,
    hermitian_function,
    is_hermitian,
    kron,
    matmul,
    resolve_degeneracies,
)


def random_hermitian(dim, seed):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return 0.5 * (a + a.conj().T)


def test_pauli_x_eigensystem():
    eig = hermitian_eig([[0, 1], [1, 0]])
    assert np.allclose(eig.values, [-1, 1])
    # Largest component of each vector is real and non-negative; ties go to the first index.
    assert np.allclose(eig.vectors[:, 0], [1 / np.sqrt(2), -1 / np.sqrt(2)])
    assert np.allclose(eig.vectors[:, 1], [1 / np.sqrt(2), 1 / np.sqrt(2)])


def test_identity_eigensystem():
    eig = hermitian_eig(np.eye(4))
    assert np.allclose(eig.values, 1.0)
    assert np.allclose(eig.vectors.conj().T @ eig.vectors, np.eye(4))


def test_complex_two_level():
    h = np.array([[1.0, 2j], [-2j, 1.0]])
    eig = hermitian_eig(h)
    assert np.allclose(eig.values, [-1.0, 3.0])
    assert np.allclose(h @ eig.vectors, eig.vectors * eig.values)


def test_rejects_non_hermitian():
    with pytest.raises(NotHermitianError):
        hermitian_eig([[0, 1], [0, 0]])


def test_rejects_non_square_and_empty():
    with pytest.raises(DimensionError):
        hermitian_eig(np.zeros((2, 3)))
    with pytest.raises(DimensionError):
        hermitian_eig(np.zeros((0, 0)))


def test_rejects_non_finite():
    with pytest.raises((NotHermitianError, ConvergenceError, ValueError)):
        hermitian_eig([[np.nan, 0], [0, 1]])


def test_hermiticity_helpers():
    assert is_hermitian(np.diag([1.0, 2.0]))
    assert not is_hermitian([[0, 1j], [1j, 0]])
    out = check_hermitian([[1, 1j], [-1j, 2]])
    assert out.dtype == np.complex128


@pytest.mark.parametrize("dim,seed", [(3, 0), (50, 1), (120, 2)])
def test_invariants_random(dim, seed):
    h = random_hermitian(dim, seed)
    eig = hermitian_eig(h)
    v = eig.vectors
    assert np.all(np.diff(eig.values) >= 0)
    assert np.max(np.abs(v.conj().T @ v - np.eye(dim))) < 1e-10
    assert np.max(np.abs(v @ np.diag(eig.values) @ v.conj().T - h)) < 1e-9 * (1 + np.abs(eig.values).max())


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 12), st.integers(0, 2**32 - 1))
def test_phase_convention_property(dim, seed):
    eig = hermitian_eig(random_hermitian(dim, seed))
    for col in eig.vectors.T:
        top = np.argmax(np.abs(col))
        assert abs(col[top].imag) < 1e-12 and col[top].real > 0


def test_fix_phases_is_idempotent():
    v = hermitian_eig(random_hermitian(6, 3)).vectors
    assert np.allclose(fix_phases(v), v)
    assert np.allclose(fix_phases(-1j * v), v)


def test_degenerate_clusters():
    assert degenerate_clusters(np.array([0.0, 1.0, 1.0, 2.0, 3.0, 3.0, 3.0])) == [range(1, 3), range(4, 7)]
    assert degenerate_clusters(np.array([0.0, 1.0])) == []
    assert degenerate_clusters(np.array([])) == []


def test_resolve_degeneracies_orders_by_perturbation():
    h = np.diag([0.0, 1.0, 1.0])
    w = np.zeros((3, 3))
    w[1, 2] = w[2, 1] = 1.0
    eig = resolve_degeneracies(hermitian_eig(h), w)
    # Inside the degenerate pair the rotated basis diagonalizes w with eigenvalues -1, +1.
    sub = eig.vectors[:, 1:].conj().T @ w @ eig.vectors[:, 1:]
    assert np.allclose(sub, np.diag([-1.0, 1.0]))


def test_resolve_without_degeneracy_is_identity():
    eig = hermitian_eig(np.diag([0.0, 1.0, 2.0]))
    assert resolve_degeneracies(eig, np.ones((3, 3))) is eig


def test_hermitian_function_cos_sin():
    h = random_hermitian(8, 5)
    c = hermitian_function(h, "cosine")
    s = hermitian_function(h, "sine")
    assert np.allclose(c @ c + s @ s, np.eye(8), atol=1e-12)
    assert np.allclose(apply_function(h, lambda x: x), h)
    with pytest.raises(ValueError):
        hermitian_function(h, "tangent")


def test_kron_adjoint_matmul_commutator():
    a = np.array([[0, 1], [0, 0]], dtype=complex)
    assert np.allclose(adjoint(a), a.T)
    assert np.allclose(matmul(a, adjoint(a)), np.diag([1, 0]))
    assert np.allclose(commutator(a, adjoint(a)), np.diag([1, -1]))
    k = kron(a, np.eye(3))
    assert k.shape == (6, 6)
    with pytest.raises(DimensionError):
        matmul(np.eye(2), np.eye(3))


def test_eigensystem_dim():
    assert EigenSystem(np.zeros(3), np.eye(3)).dim == 3
