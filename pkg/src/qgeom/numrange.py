"""Numerical ranges as planar shadows of the state space.

A boundary is traced through its support function: for a unit normal
``n = (cos t, sin t)`` the top eigenvector ``psi`` of ``F = cos t u + sin t v``
gives the support point ``(<psi|u|psi>, <psi|v|psi>)``.  Flat boundary
pieces show up as jumps of the support point; they are located by
bisection on ``t`` and measured exactly by compressing ``(u, v)`` to the
degenerate top eigenspace.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DimensionError, QGeomError
from .herm import as_hermitian, eigh_batch

TWO_PI = 2 * np.pi

DEFAULT_K = 512
DEGENERACY_GAP = 1e-7  # relative to ||F||
FLAT_TOL = 1e-6
POINT_TOL = 1e-7
NORMAL_TOL = 1e-9
ENDPOINT_TOL = 1e-6
JUMP_RATIO = 0.75
MIN_WIDTH = 1e-13
MAX_DEPTH = 48


def wrap(a):
    return np.mod(a, TWO_PI)


def _angle_diff(a, b):
    """Signed difference ``b - a`` wrapped to (-pi, pi]."""
    d = np.mod(np.asarray(b) - np.asarray(a) + np.pi, TWO_PI) - np.pi
    return d


@dataclass(frozen=True)
class Boundary2D:
    """Sampled convex boundary in support form.

    ``theta[k]`` is the outward normal angle at ``points[k]`` and
    ``h[k] = points[k] . (cos theta, sin theta)``.  Samples are stored in
    traversal order.  ``kind`` is ``"support"`` when the samples were taken
    on a grid of normals and ``"radial"`` when they were taken on a grid of
    rays from the origin (``phi`` holds the ray angles).  ``offset`` is a
    translation already applied to the points (numerical ranges).
    """

    theta: np.ndarray
    h: np.ndarray
    points: np.ndarray
    n: int
    K: int
    kind: str = "support"
    phi: np.ndarray | None = None
    offset: tuple[float, float] = (0.0, 0.0)

    def __len__(self) -> int:
        return len(self.theta)

    def support(self, theta) -> np.ndarray:
        """Support function of the sampled points (their convex hull)."""
        t = np.atleast_1d(np.asarray(theta, dtype=float))
        dirs = np.stack([np.cos(t), np.sin(t)], axis=1)
        return (dirs @ self.points.T).max(axis=1)

    def support_error(self) -> float:
        return float(np.max(np.abs(self.support(self.theta) - self.h)))

    def convexity_defect(self) -> float:
        """Largest cross product of the minority sign along the closed polygon."""
        p = self.points
        e = np.roll(p, -1, axis=0) - p
        keep = np.linalg.norm(e, axis=1) > 1e-12
        e = e[keep]
        if len(e) < 2:
            return 0.0
        f = np.roll(e, -1, axis=0)
        cross = e[:, 0] * f[:, 1] - e[:, 1] * f[:, 0]
        return float(min(np.max(np.maximum(-cross, 0)), np.max(np.maximum(cross, 0))))

    def translated(self, dx: float, dy: float) -> "Boundary2D":
        shift = np.array([dx, dy])
        return Boundary2D(
            self.theta,
            self.h + np.cos(self.theta) * dx + np.sin(self.theta) * dy,
            self.points + shift,
            self.n,
            self.K,
            self.kind,
            self.phi,
            (self.offset[0] + dx, self.offset[1] + dy),
        )

    def scaled(self, factor: float) -> "Boundary2D":
        return Boundary2D(self.theta, self.h * factor, self.points * factor, self.n, self.K,
                          self.kind, self.phi, (self.offset[0] * factor, self.offset[1] * factor))

    def radii(self) -> np.ndarray:
        return np.linalg.norm(self.points, axis=1)


# -- refinement ---------------------------------------------------------------

Evaluator = Callable[[np.ndarray], tuple[np.ndarray, np.ndarray, np.ndarray]]


def _refine(evaluate: Evaluator, params: np.ndarray, samples, metric) -> tuple[np.ndarray, ...]:
    """Bisect grid intervals across which ``metric`` jumps discontinuously.

    A grid interval is followed while one half keeps more than
    ``JUMP_RATIO`` of the parent's jump; smooth intervals halve their jump
    at every split and are dropped after the first test.  Returns the grid
    samples merged with every sample evaluated on a followed interval.
    """
    theta, h, pts = samples
    k = len(params)
    lo = np.arange(k)
    hi = (lo + 1) % k
    a_lo = params.copy()
    a_hi = np.where(hi == 0, params[0] + TWO_PI, params[hi])
    s_lo = (theta[lo], h[lo], pts[lo])
    s_hi = (theta[hi], h[hi], pts[hi])
    gap = metric(s_lo, s_hi)
    active = gap > 1e-14
    new_a, new_s = [], []
    first = True
    for _ in range(MAX_DEPTH):
        if not np.any(active):
            break
        idx = np.flatnonzero(active)
        a0, a1 = a_lo[idx], a_hi[idx]
        mid = (a0 + a1) / 2
        sm = evaluate(wrap(mid))
        s0 = tuple(x[idx] for x in s_lo)
        s1 = tuple(x[idx] for x in s_hi)
        m_lo = metric(s0, sm)
        m_hi = metric(sm, s1)
        g = gap[idx]
        left = m_lo >= m_hi
        ratio = np.maximum(m_lo, m_hi) / g
        jump = ratio > JUMP_RATIO
        keep_mask = jump if first else np.ones_like(jump)
        new_a.append(wrap(mid[keep_mask]))
        new_s.append(tuple(x[keep_mask] for x in sm))
        first = False
        # descend into the half carrying the jump
        for arr_lo, arr_hi, vals in ((s_lo[0], s_hi[0], sm[0]), (s_lo[1], s_hi[1], sm[1]), (s_lo[2], s_hi[2], sm[2])):
            sel_l = idx[left]
            sel_r = idx[~left]
            arr_hi[sel_l] = vals[left]
            arr_lo[sel_r] = vals[~left]
        a_hi[idx[left]] = mid[left]
        a_lo[idx[~left]] = mid[~left]
        gap[idx] = np.maximum(m_lo, m_hi)
        width = a_hi[idx] - a_lo[idx]
        active[idx] = jump & (width > MIN_WIDTH) & (gap[idx] > 1e-14)
    if new_a:
        params = np.concatenate([params] + new_a)
        theta = np.concatenate([theta] + [s[0] for s in new_s])
        h = np.concatenate([h] + [s[1] for s in new_s])
        pts = np.concatenate([pts] + [s[2] for s in new_s])
    order = np.argsort(params, kind="stable")
    return params[order], theta[order], h[order], pts[order]


def _point_jump(s0, s1):
    return np.linalg.norm(s1[2] - s0[2], axis=1)


def _normal_jump(s0, s1):
    return np.abs(_angle_diff(s0[0], s1[0]))


# -- support tracing ----------------------------------------------------------


def _screen(u, v, tol: float = 1e-10) -> tuple[np.ndarray, np.ndarray]:
    u = as_hermitian(u)
    v = as_hermitian(v)
    if u.shape != v.shape:
        raise DimensionError(f"order mismatch: {u.shape} vs {v.shape}")
    for name, m in (("u", u), ("v", v)):
        tr = abs(np.trace(m))
        if tr > tol * max(1.0, float(np.max(np.abs(m)))):
            raise QGeomError(f"{name} must be traceless (|Tr| = {tr:.3e})")
    if not (np.any(np.abs(u) > 0) or np.any(np.abs(v) > 0)):
        raise QGeomError("u and v are both zero; the support function is undefined")
    return u, v


def _support_eval(u: np.ndarray, v: np.ndarray, thetas: np.ndarray):
    c = np.cos(thetas)[:, None, None]
    s = np.sin(thetas)[:, None, None]
    f = c * u + s * v
    w, x = eigh_batch(f)
    psi = x[:, :, -1]
    pu = np.real(np.einsum("ki,ij,kj->k", psi.conj(), u, psi))
    pv = np.real(np.einsum("ki,ij,kj->k", psi.conj(), v, psi))
    pts = np.stack([pu, pv], axis=1)
    scale = np.linalg.norm(f.reshape(len(thetas), -1), axis=1)
    zero = scale <= 1e-14 * max(np.linalg.norm(u), np.linalg.norm(v))
    pts[zero] = 0.0
    h = np.where(zero, 0.0, w[:, -1])
    return wrap(thetas), h, pts


def support_point(u, v, theta: float) -> tuple[float, tuple[float, float]]:
    """Support value and support point of the projection onto ``(u, v)`` at normal angle ``theta``.

    When ``cos(theta) u + sin(theta) v`` vanishes every state is a
    maximizer; the image of the maximally mixed state, ``(0, 0)``, is returned.
    """
    u, v = _screen(u, v)
    _, h, pts = _support_eval(u, v, np.array([float(theta)]))
    return float(h[0]), (float(pts[0, 0]), float(pts[0, 1]))


def trace_support(u, v, K: int = DEFAULT_K, refine: bool = True) -> Boundary2D:
    """Boundary of ``{(Tr rho u, Tr rho v)}`` sampled on ``K`` uniform normals."""
    u, v = _screen(u, v)
    thetas = TWO_PI * np.arange(K) / K

    def evaluate(t):
        return _support_eval(u, v, t)

    samples = _support_eval(u, v, thetas)
    if refine:
        _, theta, h, pts = _refine(evaluate, thetas, samples, _point_jump)
    else:
        theta, h, pts = samples
    return Boundary2D(theta, h, pts, u.shape[0], K, "support")


def points_boundary(points, K: int = DEFAULT_K) -> Boundary2D:
    """Support-traced boundary of the convex hull of a finite planar point set."""
    pts0 = np.asarray(points, dtype=float)

    def evaluate(t):
        d = np.stack([np.cos(t), np.sin(t)], axis=1)
        vals = d @ pts0.T
        i = np.argmax(vals, axis=1)
        return wrap(t), vals[np.arange(len(t)), i], pts0[i]

    thetas = TWO_PI * np.arange(K) / K
    _, theta, h, pts = _refine(evaluate, thetas, evaluate(thetas), _point_jump)
    return Boundary2D(theta, h, pts, 0, K, "support")


def disk_boundary(radius: float, K: int = DEFAULT_K, center=(0.0, 0.0)) -> Boundary2D:
    t = TWO_PI * np.arange(K) / K
    pts = radius * np.stack([np.cos(t), np.sin(t)], axis=1)
    b = Boundary2D(t, np.full(K, float(radius)), pts, 0, K, "support")
    return b.translated(*center) if any(center) else b


def split_matrix(a) -> tuple[complex, np.ndarray, np.ndarray]:
    """Write ``a = lam I + u + i v`` with ``u``, ``v`` traceless Hermitian."""
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {a.shape}")
    n = a.shape[0]
    lam = np.trace(a) / n
    b = a - lam * np.eye(n)
    u = (b + b.conj().T) / 2
    v = (b - b.conj().T) / 2j
    return complex(lam), u, v


def numerical_range(a, K: int = DEFAULT_K) -> Boundary2D:
    """Boundary of ``W(a) = {Tr(rho a)}`` in the (Re, Im) plane."""
    if K < 16:
        raise QGeomError("K must be at least 16")
    lam, u, v = split_matrix(a)
    n = u.shape[0]
    if not (np.any(np.abs(u) > 1e-15) or np.any(np.abs(v) > 1e-15)):
        t = TWO_PI * np.arange(K) / K
        pts = np.tile([lam.real, lam.imag], (K, 1))
        h = np.cos(t) * lam.real + np.sin(t) * lam.imag
        return Boundary2D(t, h, pts, n, K, "support", None, (lam.real, lam.imag))
    return trace_support(u, v, K).translated(lam.real, lam.imag)


# -- features -----------------------------------------------------------------


@dataclass(frozen=True)
class Flat:
    theta: float
    endpoints: tuple[tuple[float, float], tuple[float, float]]

    @property
    def length(self) -> float:
        a, b = np.asarray(self.endpoints)
        return float(np.linalg.norm(b - a))


@dataclass(frozen=True)
class Corner:
    point: tuple[float, float]
    polyhedral: bool
    normal_span: float


@dataclass(frozen=True)
class BoundaryFeatures:
    flats: list[Flat] = field(default_factory=list)
    corners: list[Corner] = field(default_factory=list)
    nonexposed: list[tuple[float, float]] = field(default_factory=list)


def _cyclic_runs(linked: np.ndarray) -> list[list[int]]:
    """Maximal cyclic runs of indices where ``linked[i]`` joins ``i`` to ``i+1``."""
    k = len(linked)
    if k == 0:
        return []
    if linked.all():
        return [list(range(k))]
    start = int(np.flatnonzero(~linked)[0]) + 1
    runs, cur = [], [start % k]
    for step in range(1, k + 1):
        i = (start + step - 1) % k
        j = (start + step) % k
        if linked[i] and step < k:
            cur.append(j)
        else:
            runs.append(cur)
            cur = [j]
    return [r for r in runs if len(r) > 1]


def _compressed_flat(u, v, theta: float, offset) -> Flat | None:
    c, s = np.cos(theta), np.sin(theta)
    f = c * u + s * v
    w, x = np.linalg.eigh(f)
    gap = DEGENERACY_GAP * max(np.linalg.norm(f, 2), 1e-300)
    top = x[:, w >= w[-1] - gap]
    if top.shape[1] < 2:
        return None
    tang = -s * u + c * v
    tw = np.linalg.eigvalsh(top.conj().T @ tang @ top)
    if tw[-1] - tw[0] <= FLAT_TOL:
        return None
    n = np.array([c, s])
    t = np.array([-s, c])
    off = np.asarray(offset)
    ends = [tuple(w[-1] * n + tv * t + off) for tv in (tw[0], tw[-1])]
    return Flat(float(wrap(theta)), (ends[0], ends[1]))


def boundary_features(b: Boundary2D, u=None, v=None, *, flat_tol: float = FLAT_TOL,
                      point_tol: float = POINT_TOL, corner_tol: float | None = None) -> BoundaryFeatures:
    """Flats, corners and non-exposed points of a sampled boundary.

    Flats are runs of samples sharing one normal while spreading along the
    tangent; corners are runs of samples sharing one point while their
    normals sweep more than ``corner_tol`` (two grid steps by default).  A
    corner is polyhedral when it is an endpoint of two flats; a flat
    endpoint that is not a corner is not exposed.  For support-traced
    boundaries of a pair ``(u, v)`` the flat endpoints are recomputed from
    the compression of ``(u, v)`` to the degenerate top eigenspace.
    """
    if corner_tol is None:
        corner_tol = 2 * TWO_PI / b.K
    theta, pts = b.theta, b.points
    k = len(theta)
    nxt = (np.arange(k) + 1) % k
    same_normal = np.abs(_angle_diff(theta, theta[nxt])) < NORMAL_TOL
    flats: list[Flat] = []
    for run in _cyclic_runs(same_normal):
        t0 = float(theta[run[0]])
        tang = np.array([-np.sin(t0), np.cos(t0)])
        proj = pts[run] @ tang
        if proj.max() - proj.min() <= flat_tol:
            continue
        flat = None
        if u is not None and v is not None and b.kind == "support":
            flat = _compressed_flat(np.asarray(u), np.asarray(v), t0, b.offset)
        if flat is None:
            ends = (tuple(pts[run][np.argmin(proj)]), tuple(pts[run][np.argmax(proj)]))
            flat = Flat(t0, ends)
        if not any(abs(_angle_diff(f.theta, flat.theta)) < 1e-8 for f in flats):
            flats.append(flat)

    same_point = np.linalg.norm(pts[nxt] - pts, axis=1) < point_tol
    corners: list[Corner] = []
    for run in _cyclic_runs(same_point):
        steps = np.abs(_angle_diff(theta[run[:-1]], theta[run[1:]]))
        span = float(np.sum(steps))
        if span <= corner_tol:
            continue
        j = int(np.argmax(steps))
        pt = (pts[run[j]] + pts[run[j + 1]]) / 2
        touching = sum(
            1 for f in flats if min(np.linalg.norm(np.asarray(e) - pt) for e in f.endpoints) < ENDPOINT_TOL
        )
        corners.append(Corner((float(pt[0]), float(pt[1])), touching >= 2, span))

    nonexposed: list[tuple[float, float]] = []
    for f in flats:
        for e in f.endpoints:
            e_arr = np.asarray(e)
            if any(np.linalg.norm(e_arr - np.asarray(c.point)) < ENDPOINT_TOL for c in corners):
                continue
            if any(np.linalg.norm(e_arr - np.asarray(q)) < ENDPOINT_TOL for q in nonexposed):
                continue
            nonexposed.append((float(e[0]), float(e[1])))
    return BoundaryFeatures(flats, corners, nonexposed)


class Shape(enum.Enum):
    NO_FLAT = 0
    ONE_FLAT = 1
    TWO_FLATS = 2
    TRIANGLE = 3


@dataclass(frozen=True)
class ShapeClass:
    kind: Shape
    flats: list[Flat]
    normal: bool


def is_normal(a, tol: float = 1e-10) -> bool:
    a = np.asarray(a, dtype=complex)
    return bool(np.linalg.norm(a @ a.conj().T - a.conj().T @ a) < tol)


def classify_shape_n3(a, K: int = DEFAULT_K) -> ShapeClass:
    """Count the flat boundary pieces of ``W(a)`` for a 3x3 matrix."""
    a = np.asarray(a, dtype=complex)
    if a.shape != (3, 3):
        raise DimensionError(f"classify_shape_n3 needs a 3x3 matrix, got {a.shape}")
    _, u, v = split_matrix(a)
    feats = boundary_features(numerical_range(a, K), u, v)
    count = min(len(feats.flats), 3)
    return ShapeClass(Shape(count), feats.flats, is_normal(a))
