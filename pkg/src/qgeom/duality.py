"""Plane cross-sections and projections of the state space and their polar duality.

A plane through ``I/n`` is spanned by a Hilbert-Schmidt orthonormal pair
``(u, v)`` of traceless Hermitian matrices.  Planar coordinates are taken
in the frame ``e1 = u/sqrt(2)``, ``e2 = v/sqrt(2)``, which is orthonormal
for the trace form ``Tr(ab)``: the section point with planar coordinates
``x`` is ``I/n + x1 e1 + x2 e2`` and a state projects to
``(Tr(rho e1), Tr(rho e2))``.  In these coordinates the plain dot product
is the trace pairing, so the projection is the polar dual of the section
with offset ``c = 1/n``.  Planar lengths are ``sqrt(2)`` times
Hilbert-Schmidt lengths.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from ._parallel import map_chunks
from .errors import BracketError, DimensionError, OriginNotInteriorError, QGeomError, SubspaceError
from .herm import as_hermitian, eigh_batch, gell_mann_basis, hs_inner
from .numrange import (
    DEFAULT_K,
    TWO_PI,
    Boundary2D,
    _normal_jump,
    _refine,
    trace_support,
    wrap,
)
from .states import radii

SUBSPACE_TOL = 1e-10
BISECTION_STEPS = 60


@dataclass(frozen=True)
class Subspace2D:
    u: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        u = as_hermitian(self.u)
        v = as_hermitian(self.v)
        if u.shape != v.shape:
            raise DimensionError(f"order mismatch: {u.shape} vs {v.shape}")
        for name, m in (("u", u), ("v", v)):
            if abs(np.trace(m)) > SUBSPACE_TOL:
                raise SubspaceError(f"{name} is not traceless")
        gram = np.array([[hs_inner(u, u), hs_inner(u, v)], [hs_inner(v, u), hs_inner(v, v)]])
        if np.max(np.abs(gram - np.eye(2))) > SUBSPACE_TOL:
            raise SubspaceError(f"(u, v) is not HS-orthonormal; Gram matrix {gram.tolist()}")
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)

    @property
    def n(self) -> int:
        return self.u.shape[0]

    def frame(self) -> tuple[np.ndarray, np.ndarray]:
        return self.u / np.sqrt(2), self.v / np.sqrt(2)

    def point(self, x: float, y: float) -> np.ndarray:
        """Matrix ``I/n + x e1 + y e2`` of a planar point."""
        e1, e2 = self.frame()
        return np.eye(self.n) / self.n + x * e1 + y * e2

    def coords(self, rho) -> tuple[float, float]:
        e1, e2 = self.frame()
        rho = np.asarray(rho)
        return float(np.trace(rho @ e1).real), float(np.trace(rho @ e2).real)

    @classmethod
    def from_pair(cls, a, b) -> "Subspace2D":
        """Orthonormalize two Hermitian matrices after removing their traces."""
        a = np.asarray(a, dtype=complex)
        b = np.asarray(b, dtype=complex)
        n = a.shape[0]
        a = a - np.trace(a) / n * np.eye(n)
        b = b - np.trace(b) / n * np.eye(n)
        na = np.sqrt(hs_inner(a, a))
        if na < 1e-12:
            raise SubspaceError("first matrix is a multiple of the identity")
        a = a / na
        b = b - hs_inner(a, b) * a
        nb = np.sqrt(hs_inner(b, b))
        if nb < 1e-12:
            raise SubspaceError("matrices span less than a plane")
        return cls((a + a.conj().T) / 2, (b + b.conj().T) / (2 * nb))


def random_subspace(n: int, seed: int) -> Subspace2D:
    rng = np.random.default_rng(seed)
    basis = np.array(gell_mann_basis(n))
    c = rng.standard_normal((2, n * n - 1))
    a, b = np.tensordot(c, basis, axes=1)
    return Subspace2D.from_pair(a, b)


# -- cross-sections -----------------------------------------------------------


def _section_eval(us: Subspace2D, phis: np.ndarray):
    """Closed-form section boundary along rays: radius ``-1/(n lambda_min)``."""
    e1, e2 = us.frame()
    n = us.n
    d = np.cos(phis)[:, None, None] * e1 + np.sin(phis)[:, None, None] * e2
    w, x = eigh_batch(d)
    lmin = w[:, 0]
    psi = x[:, :, 0]
    s = -1.0 / (n * lmin)
    pts = s[:, None] * np.stack([np.cos(phis), np.sin(phis)], axis=1)
    q1 = np.real(np.einsum("ki,ij,kj->k", psi.conj(), e1, psi))
    q2 = np.real(np.einsum("ki,ij,kj->k", psi.conj(), e2, psi))
    theta = wrap(np.arctan2(-q2, -q1))
    h = pts[:, 0] * np.cos(theta) + pts[:, 1] * np.sin(theta)
    return theta, h, pts


def _positive_definite(m: np.ndarray) -> np.ndarray:
    """Batched test by the pivots of unpivoted Cholesky elimination."""
    a = np.array(m, dtype=complex)
    ok = np.ones(len(a), dtype=bool)
    for k in range(a.shape[1]):
        p = a[:, k, k].real
        ok &= p > 0
        safe = np.where(p > 0, p, 1.0)[:, None, None]
        a[:, k + 1:, k + 1:] -= a[:, k + 1:, k, None] * a[:, k, None, k + 1:] / safe
    return ok


def _section_eval_bisect(us: Subspace2D, phis: np.ndarray, steps: int = BISECTION_STEPS):
    """Section boundary along rays from positive definiteness alone.

    The bracket ``[0, sqrt(2) R(n)]`` (planar units) contains every exit
    radius; the normal is read off the kernel vector at the bisected point.
    """
    e1, e2 = us.frame()
    n = us.n
    d = np.cos(phis)[:, None, None] * e1 + np.sin(phis)[:, None, None] * e2
    eye = np.eye(n) / n
    lo = np.zeros(len(phis))
    hi = np.full(len(phis), np.sqrt(2) * radii(n)[0] * 1.01 + 1e-9)
    if np.any(np.linalg.eigvalsh(eye + hi[:, None, None] * d)[:, 0] >= 0):
        raise BracketError("a ray does not leave the state space within the outsphere")
    for _ in range(steps):
        mid = (lo + hi) / 2
        inside = _positive_definite(eye + mid[:, None, None] * d)
        lo = np.where(inside, mid, lo)
        hi = np.where(inside, hi, mid)
    psi = eigh_batch(eye + lo[:, None, None] * d)[1][:, :, 0]
    pts = lo[:, None] * np.stack([np.cos(phis), np.sin(phis)], axis=1)
    q1 = np.real(np.einsum("ki,ij,kj->k", psi.conj(), e1, psi))
    q2 = np.real(np.einsum("ki,ij,kj->k", psi.conj(), e2, psi))
    theta = wrap(np.arctan2(-q2, -q1))
    h = pts[:, 0] * np.cos(theta) + pts[:, 1] * np.sin(theta)
    return theta, h, pts


def cross_section(us: Subspace2D, K: int = DEFAULT_K, refine: bool = True,
                  method: str = "closed") -> Boundary2D:
    """Boundary of the section ``{x : I/n + x1 e1 + x2 e2 >= 0}`` sampled on ``K`` rays.

    ``method="closed"`` uses the exit radius ``-1/(n lambda_min)`` of each
    ray; ``method="bisect"`` brackets and bisects on positive
    definiteness.  Rays whose normals jump (corners) are refined.
    ``K = 2`` returns the two end points of the section of the line spanned by ``u``.
    """
    if K < 2 or 2 < K < 16:
        raise QGeomError("K must be 2 or at least 16")
    if method == "closed":
        kernel = _section_eval
    elif method == "bisect":
        kernel = _section_eval_bisect
    else:
        raise QGeomError(f"unknown method {method!r}")
    phis = TWO_PI * np.arange(K) / K

    def evaluate(p):
        return map_chunks(lambda c: kernel(us, c), p)

    samples = evaluate(phis)
    if refine and K >= 16:
        phis, theta, h, pts = _refine(evaluate, phis, samples, _normal_jump)
    else:
        theta, h, pts = samples
    return Boundary2D(theta, h, pts, us.n, K, "radial", phis)


def ray_bisect(us: Subspace2D, phi: float, steps: int = BISECTION_STEPS) -> float:
    """Section radius along one ray by bisection."""
    pts = _section_eval_bisect(us, np.array([float(phi)]), steps)[2]
    return float(np.linalg.norm(pts[0]))


def projection(us: Subspace2D, K: int = DEFAULT_K) -> Boundary2D:
    """Shadow ``{(Tr rho e1, Tr rho e2)}`` of the state space, by support tracing."""
    e1, e2 = us.frame()
    return trace_support(e1, e2, K)


# -- polar duality ------------------------------------------------------------


def polar_dual(b: Boundary2D, c: float, K: int | None = None) -> Boundary2D:
    """Boundary of ``{x : c + x.y >= 0 for all y in b}``.

    Along the ray ``phi`` the dual radius is ``c / h_b(phi + pi)`` and the
    outward normal points away from the point of ``b`` attaining
    ``h_b(phi + pi)``.  By default the rays are the reversed sample normals
    of ``b``, where ``h_b`` is known exactly, so the dual of the dual
    returns the samples of ``b``.  Passing ``K`` resamples on ``K``
    uniform rays (no refinement) using the support function of the sampled
    polygon; its error then falls like ``1/K^2`` on smooth bodies.
    """
    if c <= 0:
        raise QGeomError("offset c must be positive")
    if K is None:
        h = np.asarray(b.h)
        if np.any(h <= 0):
            raise OriginNotInteriorError("origin is not an interior point of the body")
        e = np.stack([np.cos(b.theta), np.sin(b.theta)], axis=1)
        pts = -c * e / h[:, None]
        y = np.asarray(b.points)
        theta = wrap(np.arctan2(-y[:, 1], -y[:, 0]))
        hd = c / np.linalg.norm(y, axis=1)
        phis = wrap(b.theta + np.pi)
        order = np.argsort(phis, kind="stable")
        return Boundary2D(theta[order], hd[order], pts[order], b.n, b.K, "radial", phis[order])

    pts_b = np.asarray(b.points)

    def evaluate(phi):
        back = np.stack([np.cos(phi + np.pi), np.sin(phi + np.pi)], axis=1)
        vals = back @ pts_b.T
        i = np.argmax(vals, axis=1)
        hb = vals[np.arange(len(phi)), i]
        if np.any(hb <= 0):
            raise OriginNotInteriorError("origin is not an interior point of the body")
        r = c / hb
        pts = r[:, None] * np.stack([np.cos(phi), np.sin(phi)], axis=1)
        y = pts_b[i]
        theta = wrap(np.arctan2(-y[:, 1], -y[:, 0]))
        h = pts[:, 0] * np.cos(theta) + pts[:, 1] * np.sin(theta)
        return theta, h, pts

    # plain uniform grid: the K-dependence of this mode is the point
    phis = TWO_PI * np.arange(K) / K
    theta, h, pts = evaluate(phis)
    return Boundary2D(theta, h, pts, b.n, K, "radial", phis)


def _segment_dist(q: np.ndarray, a: np.ndarray, ab: np.ndarray) -> np.ndarray:
    """Distances from ``q[m]`` to segments ``a[m, k] + s ab[m, k]``, ``s`` in [0, 1]."""
    ap = q[:, None, :] - a
    l2 = np.einsum("mkj,mkj->mk", ab, ab)
    t = np.einsum("mkj,mkj->mk", ap, ab) / np.where(l2 > 0, l2, 1.0)
    t = np.clip(np.where(l2 > 0, t, 0.0), 0, 1)
    diff = ap - t[..., None] * ab
    return np.sqrt(np.einsum("mkj,mkj->mk", diff, diff))


def _brute_dist(p: np.ndarray, poly: np.ndarray) -> np.ndarray:
    ab = np.roll(poly, -1, axis=0) - poly
    out = np.empty(len(p))
    for start in range(0, len(p), 256):
        q = p[start:start + 256]
        out[start:start + 256] = _segment_dist(q, poly[None], ab[None]).min(axis=1)
    return out


def _dist_to_polygon(p: np.ndarray, poly: np.ndarray, window: int = 8) -> np.ndarray:
    """Distance from each point to the closed polyline ``poly``.

    When ``poly`` winds once around the origin with increasing angle, only
    segments within the angular cone ``asin(d/|p|)`` around ``p`` can beat
    a candidate distance ``d``; points whose cone fits inside a small index
    window are settled there, the rest by a full scan.
    """
    m = len(poly)
    ang = np.arctan2(poly[:, 1], poly[:, 0])
    steps = wrap(np.diff(ang, append=ang[0]) + np.pi) - np.pi
    if m < 4 * window or np.any(steps < 0) or abs(steps.sum() - TWO_PI) > 1e-9:
        return _brute_dist(p, poly)
    start = int(np.argmin(ang))
    poly, ang = np.roll(poly, -start, axis=0), np.roll(ang, -start)
    ab = np.roll(poly, -1, axis=0) - poly

    def seg(alpha):
        return (np.searchsorted(ang, alpha, side="right") - 1) % m

    alpha = np.arctan2(p[:, 1], p[:, 0])
    idx = seg(alpha)
    near = (idx[:, None] + np.arange(-window, window + 1)[None]) % m
    d = _segment_dist(p, poly[near], ab[near]).min(axis=1)
    r = np.linalg.norm(p, axis=1)
    ok = d < 0.5 * r
    beta = np.arcsin(np.where(ok, d / np.where(r > 0, r, 1.0), 0.0))
    ok &= (idx - seg(wrap(alpha - beta + np.pi) - np.pi)) % m <= window - 1
    ok &= (seg(wrap(alpha + beta + np.pi) - np.pi) - idx) % m <= window - 1
    if not ok.all():
        d[~ok] = _brute_dist(p[~ok], poly)
    return d


def hausdorff(a: Boundary2D, b: Boundary2D) -> float:
    """Symmetric Hausdorff distance between the closed polygons through the samples."""
    pa, pb = np.asarray(a.points), np.asarray(b.points)
    return float(max(_dist_to_polygon(pa, pb).max(), _dist_to_polygon(pb, pa).max()))


@dataclass(frozen=True)
class DualityReport:
    hausdorff_cross: float
    hausdorff_proj: float
    K: int

    @property
    def worst(self) -> float:
        return max(self.hausdorff_cross, self.hausdorff_proj)


def verify_duality(us: Subspace2D, K: int = DEFAULT_K, resample: bool = False) -> DualityReport:
    """Compare the section with the dual of the projection and vice versa (offset ``1/n``).

    The section is found by bisection on positive definiteness and the
    projection by support tracing, so the two sides are computed
    independently.  With ``resample`` the duals are taken on a uniform
    ``K``-ray grid, which exposes the discretization error.
    """
    c = 1.0 / us.n
    sec = cross_section(us, K, method="bisect")
    proj = projection(us, K)
    k = K if resample else None
    return DualityReport(hausdorff(sec, polar_dual(proj, c, K=k)), hausdorff(proj, polar_dual(sec, c, K=k)), K)


# -- self-duality of the state space ------------------------------------------


def negativity_witness(sigma) -> np.ndarray:
    """Projector onto the eigenvector of the most negative eigenvalue of ``sigma``."""
    w, x = np.linalg.eigh(as_hermitian(sigma))
    if w[0] >= 0:
        raise QGeomError("sigma has no negative eigenvalue")
    return np.outer(x[:, 0], x[:, 0].conj())


def self_duality_check(n: int, samples: int = 200, seed: int = 0) -> float:
    """Largest violation of the state-space self-duality over random pairs.

    For states ``rho, sigma`` the pairing ``1/n + Tr((rho - I/n)(sigma - I/n))``
    equals ``Tr(rho sigma)`` and must be non-negative.  Conversely every
    unit-trace Hermitian matrix with a negative eigenvalue is detected by
    the projector onto that eigenvector.  Returns the largest amount by
    which either statement fails (0 when both hold everywhere).
    """
    if n < 2:
        raise DimensionError("n must be at least 2")
    from .states import random_pure_state, random_state

    rng = np.random.default_rng(seed)
    eye = np.eye(n) / n
    worst = 0.0
    for k in range(samples):
        if k % 2:
            rho, sigma = random_pure_state(n, rng), random_pure_state(n, rng)
        else:
            rho = random_state(n, int(rng.integers(2**32)))
            sigma = random_state(n, int(rng.integers(2**32)))
        pairing = 1 / n + np.trace((rho - eye) @ (sigma - eye)).real
        worst = max(worst, -pairing - 1e-10 if pairing < -1e-10 else 0.0)
        # a unit-trace Hermitian matrix outside the state space
        h = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        h = (h + h.conj().T) / 2
        h -= np.trace(h).real / n * np.eye(n)
        w = np.linalg.eigvalsh(h)
        s = (1 / n) / abs(w[0]) * (1 + rng.uniform(0.05, 1.0))
        outside = eye + s * h
        value = np.trace(outside @ negativity_witness(outside)).real
        worst = max(worst, value if value >= 0 else 0.0)
    return float(worst)


# -- named sections -----------------------------------------------------------


class Named3D(enum.Enum):
    ELLIPTOPE = "elliptope"
    CONE = "cone"


def _e(j, k):
    m = np.zeros((3, 3), dtype=complex)
    m[j, k] = m[k, j] = 1
    return m


def named_basis(name: Named3D) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """HS-orthonormal traceless triple whose coordinates are the ``(x, y, z)`` of the named family."""
    name = Named3D(name)
    if name is Named3D.ELLIPTOPE:
        return _e(0, 1), _e(0, 2), _e(1, 2)
    s1 = _e(0, 1)
    s2 = np.zeros((3, 3), dtype=complex)
    s2[0, 1], s2[1, 0] = -1j, 1j
    return s1, s2, np.diag([1.0, 1.0, -2.0]).astype(complex) / np.sqrt(3)


def named_matrix(name: Named3D, point) -> np.ndarray:
    x = np.asarray(point, dtype=float)
    g = named_basis(name)
    return np.eye(3) / 3 + x[0] * g[0] + x[1] * g[1] + x[2] * g[2]


def named_member(name: Named3D, point, tol: float = 1e-10) -> bool:
    return bool(np.linalg.eigvalsh(named_matrix(name, point))[0] >= -tol)


def named_rank(name: Named3D, point, tol: float = 1e-9) -> int:
    return int(np.sum(np.linalg.eigvalsh(named_matrix(name, point)) > tol))


def named_mesh(name: Named3D, n_polar: int = 48, n_azimuth: int = 96) -> np.ndarray:
    """Boundary points on a latitude-longitude grid of directions, shape ``(n_polar, n_azimuth, 3)``."""
    g = np.array(named_basis(name))
    pol = np.linspace(0, np.pi, n_polar)
    azi = np.linspace(0, TWO_PI, n_azimuth, endpoint=False)
    p, a = np.meshgrid(pol, azi, indexing="ij")
    dirs = np.stack([np.sin(p) * np.cos(a), np.sin(p) * np.sin(a), np.cos(p)], axis=-1)
    mats = np.tensordot(dirs.reshape(-1, 3), g, axes=1)
    lmin = eigh_batch(mats)[0][:, 0]
    s = -1.0 / (3 * lmin)
    return (s[:, None] * dirs.reshape(-1, 3)).reshape(n_polar, n_azimuth, 3)


def _tilted(alpha_deg: float) -> Subspace2D:
    g1, g2, g3 = named_basis(Named3D.CONE)
    a = np.radians(alpha_deg)
    return Subspace2D(g1, np.cos(a) * g2 + np.sin(a) * g3)


def named_plane(name: str) -> Subspace2D:
    """Library planes of ``n = 3``.

    ``diagonal``: the diagonal subalgebra (a triangle).  ``cone-axis``: the
    plane of the cone axis, also a triangle.  ``cone-elliptic``,
    ``cone-parabolic``, ``cone-hyperbolic``: planes through the cone tilted
    by 45, 60 and 75 degrees, whose sections combine a conic arc with a
    chord.  ``elliptope-z0`` and ``elliptope-diagonal``: planes in the
    elliptope family.  ``cone`` and ``elliptope`` are short for
    ``cone-axis`` and ``elliptope-z0``.
    """
    name = PLANE_ALIASES.get(name, name)
    if name == "diagonal":
        b = gell_mann_basis(3)
        return Subspace2D(b[6], b[7])
    if name == "cone-axis":
        g1, _, g3 = named_basis(Named3D.CONE)
        return Subspace2D(g1, g3)
    tilts = {"cone-elliptic": 45.0, "cone-parabolic": 60.0, "cone-hyperbolic": 75.0}
    if name in tilts:
        return _tilted(tilts[name])
    g1, g2, g3 = named_basis(Named3D.ELLIPTOPE)
    if name == "elliptope-z0":
        return Subspace2D(g1, g2)
    if name == "elliptope-diagonal":
        return Subspace2D(g1, (g2 + g3) / np.sqrt(2))
    raise QGeomError(f"unknown plane {name!r}; choose from {', '.join(NAMED_PLANES)}")


PLANE_ALIASES = {"cone": "cone-axis", "elliptope": "elliptope-z0"}

NAMED_PLANES = (
    "cone",
    "elliptope",
    "diagonal",
    "cone-axis",
    "cone-elliptic",
    "cone-parabolic",
    "cone-hyperbolic",
    "elliptope-z0",
    "elliptope-diagonal",
)
