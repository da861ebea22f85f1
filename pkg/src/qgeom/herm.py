"""Dense Hermitian linear algebra and the Hilbert-Schmidt geometry.

Matrices are plain complex ``numpy`` arrays.  ``as_hermitian`` validates
and symmetrizes its input and returns a read-only copy, so values handed
between modules cannot be mutated behind a caller's back.

The scalar product is ``<a, b> = Tr(a^H b) / 2`` throughout; with it the
Pauli matrices are orthonormal and antipodal qubit states sit at distance 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConvergenceError, DimensionError, NotHermitianError, TraceError

SIGMA_1 = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_3 = np.array([[1, 0], [0, -1]], dtype=complex)

HERMITIAN_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100
JACOBI_OFF_TOL = 1e-13


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def as_hermitian(a, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Validate ``a`` as Hermitian to ``tol`` (scaled by its largest entry) and symmetrize."""
    a = np.array(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise DimensionError(f"expected a non-empty square matrix, got shape {a.shape}")
    dev = float(np.max(np.abs(a - a.conj().T)))
    scale = max(1.0, float(np.max(np.abs(a))))
    if dev > tol * scale:
        raise NotHermitianError(dev)
    return _frozen((a + a.conj().T) / 2)


def _same_order(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise DimensionError(f"order mismatch: {a.shape} vs {b.shape}")


def hs_inner(a, b) -> float:
    """Hilbert-Schmidt scalar product ``Tr(a^H b) / 2`` (real for Hermitian inputs)."""
    a = np.asarray(a)
    b = np.asarray(b)
    _same_order(a, b)
    return float(np.real(np.vdot(a, b))) / 2


def hs_distance(a, b) -> float:
    a = np.asarray(a)
    b = np.asarray(b)
    _same_order(a, b)
    d = a - b
    return float(np.sqrt(max(np.real(np.vdot(d, d)) / 2, 0.0)))


@dataclass(frozen=True)
class EigenDecomposition:
    """Eigenvalues in descending order; column ``k`` of ``eigenvectors`` pairs with eigenvalue ``k``."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        x = self.eigenvectors
        return (x * self.eigenvalues) @ x.conj().T


def _jacobi(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic complex Jacobi; returns unsorted (eigenvalues, eigenvectors)."""
    n = a.shape[0]
    a = a.copy()
    v = np.eye(n, dtype=complex)
    norm = float(np.linalg.norm(a))
    if n == 1 or norm == 0.0:
        return np.real(np.diag(a)).copy(), v
    target = JACOBI_OFF_TOL * norm
    for _ in range(JACOBI_MAX_SWEEPS):
        off = float(np.linalg.norm(a - np.diag(np.diag(a))))
        if off <= target:
            return np.real(np.diag(a)).copy(), v
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                b = abs(apq)
                if b <= 1e-300:
                    continue
                phase = apq / b
                app = a[p, p].real
                aqq = a[q, q].real
                tau = (aqq - app) / (2 * b)
                t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + np.sqrt(1 + tau * tau))
                c = 1 / np.sqrt(1 + t * t)
                s = t * c
                rot = np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]])
                idx = [p, q]
                a[:, idx] = a[:, idx] @ rot
                a[idx, :] = rot.conj().T @ a[idx, :]
                a[p, q] = a[q, p] = 0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                v[:, idx] = v[:, idx] @ rot
    raise ConvergenceError(f"Jacobi did not converge in {JACOBI_MAX_SWEEPS} sweeps")


def _phase_fix(x: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    k = int(np.argmax(np.abs(x) > tol))
    return x * (abs(x[k]) / x[k])


def _canonical_cluster(vecs: np.ndarray) -> np.ndarray:
    """Orthonormal basis of span(vecs) that depends only on the subspace."""
    n, m = vecs.shape
    proj = vecs @ vecs.conj().T
    cols = [proj[:, k].copy() for k in range(n)]
    basis: list[np.ndarray] = []
    for _ in range(m):
        resid = []
        for c in cols:
            r = c.copy()
            for b in basis:
                r -= np.vdot(b, r) * b
            resid.append(r)
        norms = np.array([np.linalg.norm(r) for r in resid])
        k = int(np.argmax(norms >= norms.max() - 1e-9))
        basis.append(_phase_fix(resid[k] / norms[k]))
    out = np.array(basis).T
    key = [tuple(np.round(np.concatenate([c.real, c.imag]), 9)) for c in out.T]
    order = sorted(range(m), key=lambda i: key[i], reverse=True)
    return out[:, order]


def eig_hermitian(a, cluster_tol: float = 1e-12) -> EigenDecomposition:
    """Deterministic eigendecomposition by cyclic Jacobi rotations.

    Eigenvectors are phase-fixed (first non-negligible component real and
    positive); inside a degenerate cluster the basis is rebuilt from the
    eigenprojector alone, so it does not depend on rotation history.
    """
    a = as_hermitian(a)
    w, v = _jacobi(np.array(a))
    order = np.argsort(-w, kind="stable")
    w = w[order]
    v = v[:, order]
    scale = max(1.0, float(np.max(np.abs(w))))
    out = np.empty_like(v)
    i = 0
    n = len(w)
    while i < n:
        j = i + 1
        while j < n and w[i] - w[j] <= cluster_tol * scale:
            j += 1
        if j - i == 1:
            out[:, i] = _phase_fix(v[:, i])
        else:
            out[:, i:j] = _canonical_cluster(v[:, i:j])
            w[i:j] = w[i:j].mean()
        i = j
    return EigenDecomposition(_frozen(w), _frozen(out))


def eigh_batch(stack: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """LAPACK eigensolver over a stack of Hermitian matrices, ascending order.

    Used in the boundary-tracing and optimization loops, where thousands of
    small problems are solved per call and Jacobi would dominate runtime.
    """
    return np.linalg.eigh(stack)


def is_psd(a, tol: float = 1e-10) -> bool:
    if tol < 0:
        raise ValueError("tol must be non-negative")
    a = as_hermitian(a)
    return bool(np.linalg.eigvalsh(a)[0] >= -tol)


@lru_cache(maxsize=None)
def _gell_mann(n: int) -> tuple[np.ndarray, ...]:
    sym, anti, diag = [], [], []
    for j in range(n):
        for k in range(j + 1, n):
            s = np.zeros((n, n), dtype=complex)
            s[j, k] = s[k, j] = 1
            sym.append(s)
            t = np.zeros((n, n), dtype=complex)
            t[j, k] = -1j
            t[k, j] = 1j
            anti.append(t)
    for l in range(1, n):
        d = np.zeros((n, n), dtype=complex)
        d[np.arange(l), np.arange(l)] = 1
        d[l, l] = -l
        diag.append(d * np.sqrt(2 / (l * (l + 1))))
    return tuple(_frozen(g) for g in sym + anti + diag)


def gell_mann_basis(n: int) -> list[np.ndarray]:
    """Traceless Hermitian basis of order ``n``, orthonormal under ``hs_inner``.

    Symmetric off-diagonal pairs first, then antisymmetric pairs, then the
    diagonal ladder ``diag(1, ..., 1, -l, 0, ...)``; for ``n = 2`` this is
    exactly (sigma_1, sigma_2, sigma_3).
    """
    if n < 2:
        raise DimensionError("Gell-Mann basis needs n >= 2")
    return list(_gell_mann(int(n)))


@dataclass(frozen=True)
class BlochCoords:
    n: int
    coords: np.ndarray


def bloch_coords(rho, tol: float = 1e-12) -> BlochCoords:
    rho = as_hermitian(rho)
    tr = float(np.trace(rho).real)
    if abs(tr - 1) > tol:
        raise TraceError(tr)
    n = rho.shape[0]
    basis = np.array(_gell_mann(n))
    # hs_inner(rho, g) for every basis element at once
    c = np.real(np.einsum("kij,ij->k", basis.conj(), rho)) / 2
    return BlochCoords(n, _frozen(c))


def bloch_matrix(b: BlochCoords) -> np.ndarray:
    c = np.asarray(b.coords, dtype=float)
    if c.shape != (b.n * b.n - 1,):
        raise DimensionError(f"need {b.n * b.n - 1} coordinates for n={b.n}, got {c.shape}")
    basis = np.array(_gell_mann(b.n))
    return _frozen(np.eye(b.n) / b.n + np.tensordot(c, basis, axes=1))


def traceless_coords(x, n: int | None = None) -> np.ndarray:
    """Coordinates of a traceless Hermitian ``x`` in the Gell-Mann basis."""
    x = np.asarray(x)
    basis = np.array(_gell_mann(x.shape[0] if n is None else n))
    return np.real(np.einsum("kij,ij->k", basis.conj(), x)) / 2


def haar_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    g = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(g)
    d = np.diag(r)
    return q * (d / np.abs(d))
