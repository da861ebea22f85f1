"""The convex body of density matrices: validation, rank, mixtures, radii, faces."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, NotIdempotentError, PositivityError, QGeomError, TraceError
from .herm import as_hermitian, eig_hermitian, gell_mann_basis, hs_distance

STATE_TOL = 1e-10
TRACE_TOL = 1e-12
RANK_TOL = 1e-9


def validate_state(a, tol: float = STATE_TOL) -> np.ndarray:
    """Return ``a`` as a read-only density matrix or raise naming the violated condition.

    Hermiticity is checked first, then the trace (to 1e-12), then positivity
    (minimum eigenvalue >= -tol).  Each failure has its own exception type
    carrying the offending value.
    """
    rho = as_hermitian(a)
    tr = float(np.trace(rho).real)
    if abs(tr - 1) > TRACE_TOL:
        raise TraceError(tr)
    lmin = float(np.linalg.eigvalsh(rho)[0])
    if lmin < -tol:
        raise PositivityError(lmin)
    return rho


def rank_of(rho, tol: float = RANK_TOL) -> int:
    return int(np.sum(np.linalg.eigvalsh(as_hermitian(rho)) > tol))


@dataclass(frozen=True)
class MixtureDecomposition:
    weights: np.ndarray
    states: tuple[np.ndarray, ...]

    def reconstruct(self) -> np.ndarray:
        return sum(w * s for w, s in zip(self.weights, self.states))


def eigen_mixture(rho, tol: float = 1e-14) -> MixtureDecomposition:
    """Spectral decomposition of a state into at most ``n`` orthogonal pure states."""
    eig = eig_hermitian(validate_state(rho))
    keep = eig.eigenvalues > tol
    weights = eig.eigenvalues[keep]
    vecs = eig.eigenvectors[:, keep]
    states = tuple(np.outer(x, x.conj()) for x in vecs.T)
    return MixtureDecomposition(weights, states)


def radii(n: int) -> tuple[float, float]:
    """Outsphere and insphere radii of the state space of order ``n`` (HS metric)."""
    if n < 2:
        raise DimensionError("radii need n >= 2")
    return float(np.sqrt((n - 1) / (2 * n))), float(1 / np.sqrt(2 * n * (n - 1)))


def random_state(n: int, seed: int) -> np.ndarray:
    """Hilbert-Schmidt distributed state ``G G^H / Tr(G G^H)`` with Ginibre ``G``."""
    if n < 2:
        raise DimensionError("random_state needs n >= 2")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    rho = g @ g.conj().T
    return as_hermitian(rho / np.trace(rho).real)


def random_pure_state(n: int, rng: np.random.Generator) -> np.ndarray:
    psi = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    psi /= np.linalg.norm(psi)
    return np.outer(psi, psi.conj())


def classical_distance(p, q) -> float:
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    return float(np.sqrt(0.5 * np.sum((p - q) ** 2)))


def embed_classical(p) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.ndim != 1 or np.any(p < 0) or abs(p.sum() - 1) > TRACE_TOL:
        raise QGeomError("not a probability vector")
    return as_hermitian(np.diag(p).astype(complex))


def _check_projector(p, tol: float = 1e-10) -> np.ndarray:
    p = as_hermitian(p)
    dev = float(np.max(np.abs(p @ p - p)))
    if dev > tol:
        raise NotIdempotentError(f"not a projector (max |P^2 - P| = {dev:.3e})")
    return p


def dual_face(p, n: int | None = None) -> np.ndarray:
    """Complementary projector ``I - P``.

    The face of states with ``Tr(sigma P) = 0`` is the state space of the
    range of ``I - P``, so a rank-k face is paired with a rank-(n-k) face.
    """
    p = _check_projector(p)
    if n is not None and p.shape[0] != n:
        raise DimensionError(f"projector has order {p.shape[0]}, expected {n}")
    return as_hermitian(np.eye(p.shape[0]) - p)


def face_states(p, count: int, seed: int) -> list[np.ndarray]:
    """Random states supported on the range of ``I - P`` (members of the exposed face)."""
    q = dual_face(p)
    w, v = np.linalg.eigh(q)
    basis = v[:, w > 0.5]
    k = basis.shape[1]
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        g = rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k))
        s = basis @ (g @ g.conj().T) @ basis.conj().T
        out.append(as_hermitian(s / np.trace(s).real))
    return out


def boundary_state(n: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Rank ``n-1`` state (smallest eigenvalue of a random state zeroed) and its kernel projector."""
    rho = random_state(n, seed)
    w, v = np.linalg.eigh(rho)
    w = w.copy()
    w[0] = 0.0
    w /= w.sum()
    sigma = (v * w) @ v.conj().T
    kernel = np.outer(v[:, 0], v[:, 0].conj())
    return as_hermitian(sigma), as_hermitian(kernel)


def hyperplane_distance(kernel) -> float:
    """HS distance from ``I/n`` to the supporting hyperplane ``{Tr(sigma P) = 0}``.

    Computed from the foot point ``I/n - t (P - I/n)`` on the hyperplane.
    """
    kernel = np.asarray(kernel)
    n = kernel.shape[0]
    center = np.eye(n) / n
    normal = kernel - center
    t = (1 / n) / float(np.trace(normal @ kernel).real)
    foot = center - t * normal
    return hs_distance(foot, center)


def random_outsphere_point(n: int, rng: np.random.Generator) -> np.ndarray:
    """Point at HS distance ``R(n)`` from ``I/n`` in a uniformly random traceless direction."""
    c = rng.standard_normal(n * n - 1)
    c *= radii(n)[0] / np.linalg.norm(c)
    return np.eye(n) / n + np.tensordot(c, np.array(gell_mann_basis(n)), axes=1)
