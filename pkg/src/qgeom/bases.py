"""Fourier and complex Hadamard matrices, complementary bases, and SIC simplices."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, QGeomError
from .herm import bloch_coords

UNITARY_TOL = 1e-10


@dataclass(frozen=True)
class UnitaryBasis:
    """Orthonormal basis stored as the columns of ``columns``."""

    columns: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.columns, dtype=complex)
        if c.ndim != 2 or c.shape[0] != c.shape[1]:
            raise DimensionError(f"basis must be square, got {c.shape}")
        dev = float(np.max(np.abs(c.conj().T @ c - np.eye(c.shape[0]))))
        if dev > UNITARY_TOL:
            raise QGeomError(f"columns are not orthonormal (Gram deviation {dev:.3e})")
        object.__setattr__(self, "columns", c)

    @property
    def n(self) -> int:
        return self.columns.shape[0]

    def projectors(self) -> np.ndarray:
        c = self.columns
        return np.einsum("ik,jk->kij", c, c.conj())


@dataclass(frozen=True)
class HadamardCandidate:
    entries: np.ndarray

    @property
    def n(self) -> int:
        return np.asarray(self.entries).shape[0]


def fourier_matrix(n: int) -> HadamardCandidate:
    if n < 2:
        raise DimensionError("n must be at least 2")
    j = np.arange(n)
    return HadamardCandidate(np.exp(2j * np.pi * np.outer(j, j) / n) / np.sqrt(n))


def unitarity_defect(m) -> float:
    m = np.asarray(m, dtype=complex)
    return float(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0]))))


def is_complex_hadamard(h, tol: float = 1e-10) -> bool:
    """Unitary with all entries of modulus ``1/sqrt(n)``."""
    m = np.asarray(h.entries if isinstance(h, HadamardCandidate) else h, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    n = m.shape[0]
    if unitarity_defect(m) > tol:
        return False
    return bool(np.max(np.abs(np.abs(m) - 1 / np.sqrt(n))) <= tol)


def complementary_check(e: UnitaryBasis, f: UnitaryBasis) -> float:
    """Largest deviation of ``|<e_i|f_j>|^2`` from ``1/n``."""
    if e.n != f.n:
        raise DimensionError(f"bases of different size: {e.n} vs {f.n}")
    overlaps = np.abs(e.columns.conj().T @ f.columns) ** 2
    return float(np.max(np.abs(overlaps - 1 / e.n)))


def _permutation_matrix(p) -> np.ndarray:
    p = np.asarray(p, dtype=int)
    n = len(p)
    if sorted(p.tolist()) != list(range(n)):
        raise QGeomError(f"not a permutation: {p.tolist()}")
    m = np.zeros((n, n))
    m[np.arange(n), p] = 1
    return m


def _phases(d, n: int) -> np.ndarray:
    d = np.asarray(d, dtype=complex)
    if d.shape != (n,):
        raise DimensionError(f"need {n} phases, got {d.shape}")
    if np.max(np.abs(np.abs(d) - 1)) > 1e-12:
        raise QGeomError("phases must have unit modulus")
    return np.diag(d)


def equivalence_transform(h, d1, p1, p2, d2) -> HadamardCandidate:
    """``D1 P1 H P2 D2`` with diagonal unitaries ``D`` and permutation matrices ``P``."""
    m = np.asarray(h.entries if isinstance(h, HadamardCandidate) else h, dtype=complex)
    n = m.shape[0]
    out = _phases(d1, n) @ _permutation_matrix(p1) @ m @ _permutation_matrix(p2) @ _phases(d2, n)
    return HadamardCandidate(out)


def dephase(h) -> HadamardCandidate:
    """Rescale rows and columns so the first row and column are real and positive."""
    m = np.asarray(h.entries if isinstance(h, HadamardCandidate) else h, dtype=complex)
    if np.any(np.abs(m[0]) == 0) or np.any(np.abs(m[:, 0]) == 0):
        raise QGeomError("cannot dephase a matrix with zeros in its first row or column")
    r = np.conj(m[:, 0]) / np.abs(m[:, 0])
    m1 = r[:, None] * m
    c = np.conj(m1[0]) / np.abs(m1[0])
    return HadamardCandidate(m1 * c[None, :])


def fourier_defect_bound(n: int) -> int:
    """``sum_{k<n} gcd(k, n) - (2n - 1)``, with ``gcd(0, n) = n``."""
    if n < 2:
        raise DimensionError("n must be at least 2")
    return sum(math.gcd(k, n) for k in range(n)) - (2 * n - 1)


# -- SIC simplices ------------------------------------------------------------


@dataclass(frozen=True)
class SicCandidate:
    n: int
    vectors: np.ndarray  # shape (n*n, n)

    def __post_init__(self):
        v = np.asarray(self.vectors, dtype=complex)
        if v.ndim != 2 or v.shape[1] != self.n:
            raise DimensionError(f"vectors must have shape (k, {self.n}), got {v.shape}")
        norms = np.linalg.norm(v, axis=1)
        if np.max(np.abs(norms - 1)) > 1e-10:
            raise QGeomError("SIC candidate vectors must be unit vectors")
        object.__setattr__(self, "vectors", v)

    def projectors(self) -> np.ndarray:
        v = self.vectors
        return np.einsum("ki,kj->kij", v, v.conj())


def shift_clock(n: int) -> tuple[np.ndarray, np.ndarray]:
    x = np.roll(np.eye(n), 1, axis=0)  # X|k> = |k+1>
    z = np.diag(np.exp(2j * np.pi * np.arange(n) / n))
    return x.astype(complex), z


def wh_orbit(fiducial) -> SicCandidate:
    """The ``n^2`` vectors ``X^a Z^b |fiducial>``."""
    psi = np.asarray(fiducial, dtype=complex)
    if abs(np.linalg.norm(psi) - 1) > 1e-10:
        raise QGeomError("fiducial must be a unit vector")
    n = len(psi)
    x, z = shift_clock(n)
    out = []
    for a in range(n):
        xa = np.linalg.matrix_power(x, a)
        for b in range(n):
            out.append(xa @ np.linalg.matrix_power(z, b) @ psi)
    return SicCandidate(n, np.array(out))


def fiducial(n: int) -> np.ndarray:
    """Shipped fiducial vectors (orders 2 and 3)."""
    if n == 2:
        # Bloch vector (1, 1, 1)/sqrt(3): a vertex of the regular tetrahedron
        theta = np.arccos(1 / np.sqrt(3))
        return np.array([np.cos(theta / 2), np.exp(1j * np.pi / 4) * np.sin(theta / 2)])
    if n == 3:
        return np.array([0, 1, -1]) / np.sqrt(2)
    raise QGeomError(f"no fiducial shipped for n = {n}; supply the vectors explicitly")


@dataclass(frozen=True)
class SicReport:
    n: int
    centering: float
    distance_spread: float
    overlap: float
    overlap_error: float
    failed: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failed


def verify_sic(c: SicCandidate, tol: float = 1e-10) -> SicReport:
    """Check that ``n^2`` pure states form a regular simplex centred at ``I/n``."""
    n = c.n
    failed = []
    if len(c.vectors) != n * n:
        failed.append("count")
    proj = c.projectors()
    centering = float(np.max(np.abs(proj.mean(axis=0) - np.eye(n) / n)))
    if centering > tol:
        failed.append("centering")
    gram = np.abs(c.vectors.conj() @ c.vectors.T) ** 2
    off = gram[~np.eye(len(gram), dtype=bool)]
    # HS distance^2 between pure states is 1 - |<a|b>|^2
    dist = np.sqrt(np.maximum(1 - off, 0))
    spread = float(np.ptp(dist)) if len(dist) else 0.0
    if spread > tol:
        failed.append("equidistance")
    overlap = float(off.mean()) if len(off) else 0.0
    err = abs(overlap - 1 / (n + 1))
    if err > tol or spread > tol:
        failed.append("overlap")
    return SicReport(n, centering, spread, overlap, float(err), failed)


def simplex_vertices(c: SicCandidate) -> np.ndarray:
    """Gell-Mann coordinates of the centred projectors (vertices of the simplex)."""
    return np.array([bloch_coords(p).coords for p in c.projectors()])
