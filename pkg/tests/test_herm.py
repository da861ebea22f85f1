import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_hermitian
from qgeom.errors import ConvergenceError, DimensionError, NotHermitianError, TraceError
from qgeom.herm import (
    SIGMA_1,
    SIGMA_2,
    SIGMA_3,
    BlochCoords,
    as_hermitian,
    bloch_coords,
    bloch_matrix,
    eig_hermitian,
    gell_mann_basis,
    haar_unitary,
    hs_distance,
    hs_inner,
    is_psd,
    traceless_coords,
)


def test_pauli_orthonormal():
    assert hs_inner(SIGMA_1, SIGMA_1) == pytest.approx(1.0)
    assert hs_inner(SIGMA_1, SIGMA_2) == 0.0
    assert hs_inner(np.eye(2), np.eye(2)) == pytest.approx(1.0)


def test_antipodal_qubit_states_at_unit_distance():
    assert hs_distance(np.diag([1.0, 0]), np.diag([0, 1.0])) == pytest.approx(1.0)
    a = np.array([[1, 1], [1, 1]]) / 2
    assert hs_distance(a, np.eye(2) - a) == pytest.approx(1.0)
    assert hs_distance(a, a) == 0.0


def test_order_mismatch_rejected():
    with pytest.raises(DimensionError):
        hs_inner(np.eye(2), np.eye(3))
    with pytest.raises(DimensionError):
        hs_distance(np.eye(2), np.eye(3))


def test_as_hermitian_validates_and_freezes():
    with pytest.raises(NotHermitianError) as e:
        as_hermitian([[0, 1], [0, 0]])
    assert e.value.value == pytest.approx(1.0)
    with pytest.raises(DimensionError):
        as_hermitian(np.ones((2, 3)))
    m = as_hermitian(SIGMA_2 + 1e-14)
    assert not m.flags.writeable
    assert np.array_equal(m, m.conj().T)


def test_eig_diagonal_sorted_descending():
    e = eig_hermitian(np.diag([3.0, 1.0, 2.0]))
    assert np.allclose(e.eigenvalues, [3, 2, 1])
    assert np.allclose(np.abs(e.eigenvectors), np.eye(3)[:, [0, 2, 1]])


def test_eig_sigma1():
    e = eig_hermitian(SIGMA_1)
    assert np.allclose(e.eigenvalues, [1, -1])
    assert np.allclose(e.eigenvectors[:, 0], np.array([1, 1]) / np.sqrt(2))
    assert np.allclose(e.eigenvectors[:, 1], np.array([1, -1]) / np.sqrt(2))


@pytest.mark.parametrize("n", [1, 2, 5, 9, 16])
def test_eig_reconstruction_against_lapack(n, rng):
    a = random_hermitian(rng, n)
    e = eig_hermitian(a)
    scale = np.linalg.norm(a, 2)
    assert np.linalg.norm(a - e.reconstruct()) < 1e-10 * max(scale, 1)
    x = e.eigenvectors
    assert np.max(np.abs(x.conj().T @ x - np.eye(n))) < 1e-10
    assert np.max(np.abs(a @ x - x * e.eigenvalues)) < 1e-10 * max(scale, 1)
    # independent oracle: LAPACK spectrum
    assert np.allclose(e.eigenvalues, np.linalg.eigvalsh(a)[::-1], atol=1e-10)


def test_eig_degenerate_cluster_is_canonical(rng):
    # same spectrum and eigenspaces, different rotation histories
    u = haar_unitary(4, rng)
    a = u @ np.diag([2.0, 2.0, 2.0, -1.0]) @ u.conj().T
    w = haar_unitary(3, rng)
    basis = u[:, :3] @ w
    b = basis @ np.diag([2.0, 2.0, 2.0]) @ basis.conj().T + np.outer(u[:, 3], u[:, 3].conj()) * -1
    ea, eb = eig_hermitian(a), eig_hermitian(b)
    assert np.allclose(ea.eigenvectors, eb.eigenvectors, atol=1e-9)
    assert np.allclose(ea.eigenvectors, eig_hermitian(a).eigenvectors, atol=0)


def test_eig_phase_fixed(rng):
    x = eig_hermitian(random_hermitian(rng, 5)).eigenvectors
    for col in x.T:
        k = np.argmax(np.abs(col) > 1e-12)
        assert abs(col[k].imag) < 1e-14 and col[k].real > 0


def test_eig_cap_signals_convergence(monkeypatch, rng):
    import qgeom.herm as herm

    monkeypatch.setattr(herm, "JACOBI_MAX_SWEEPS", 0)
    with pytest.raises(ConvergenceError):
        herm.eig_hermitian(random_hermitian(rng, 4))


def test_is_psd():
    assert is_psd(np.diag([1.0, 0, 0]), 1e-10)
    assert not is_psd(np.diag([1.0, -0.1]), 1e-10)
    assert is_psd(np.ones((3, 3)) / 3, 1e-10)
    with pytest.raises(ValueError):
        is_psd(np.eye(2), -1)


def test_gell_mann_qubit_is_pauli():
    b = gell_mann_basis(2)
    for g, s in zip(b, (SIGMA_1, SIGMA_2, SIGMA_3)):
        assert np.array_equal(g, s)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_gell_mann_orthonormal_traceless(n):
    b = gell_mann_basis(n)
    assert len(b) == n * n - 1
    assert max(abs(np.trace(g)) for g in b) < 1e-15
    gram = np.array([[hs_inner(a, c) for c in b] for a in b])
    assert np.max(np.abs(gram - np.eye(n * n - 1))) < 1e-12


def test_gell_mann_needs_n2():
    with pytest.raises(DimensionError):
        gell_mann_basis(1)


def test_bloch_coords_examples():
    assert np.allclose(bloch_coords(np.eye(3) / 3).coords, 0)
    assert np.allclose(bloch_coords((np.eye(2) + SIGMA_3) / 2).coords, [0, 0, 0.5])
    with pytest.raises(TraceError):
        bloch_coords(np.eye(2))


def test_bloch_round_trip(rng):
    worst = 0.0
    for _ in range(100):
        n = int(rng.integers(2, 6))
        h = random_hermitian(rng, n)
        h = h - (np.trace(h).real - 1) / n * np.eye(n)
        worst = max(worst, np.max(np.abs(bloch_matrix(bloch_coords(h)) - h)))
    assert worst < 1e-12


def test_bloch_matrix_checks_length():
    with pytest.raises(DimensionError):
        bloch_matrix(BlochCoords(3, np.zeros(3)))


def test_traceless_reconstruction(rng):
    h = random_hermitian(rng, 4)
    h -= np.trace(h) / 4 * np.eye(4)
    c = traceless_coords(h)
    assert np.allclose(np.tensordot(c, np.array(gell_mann_basis(4)), axes=1), h, atol=1e-10)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 6), st.integers(0, 2**32 - 1))
def test_metric_identities(n, seed):
    rng = np.random.default_rng(seed)
    a, b = random_hermitian(rng, n), random_hermitian(rng, n)
    d = hs_distance(a, b)
    assert abs(d**2 - hs_inner(a - b, a - b)) < 1e-12 * max(1, d**2)
    u = haar_unitary(n, rng)
    assert abs(hs_distance(u @ a @ u.conj().T, u @ b @ u.conj().T) - d) < 1e-10
    e = eig_hermitian(a)
    assert abs(e.eigenvalues.sum() - np.trace(a).real) < 1e-10
    assert abs((e.eigenvalues**2).sum() - np.trace(a @ a).real) < 1e-10 * max(1, np.linalg.norm(a) ** 2)
