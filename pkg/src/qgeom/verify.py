"""Invariant suite behind ``qgeom verify``: one row per structural property of the state space."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .duality import cross_section, named_plane, projection, random_subspace, self_duality_check
from .herm import gell_mann_basis, hs_distance, hs_inner
from .numrange import boundary_features
from .states import boundary_state, hyperplane_distance, radii, random_pure_state, random_state


@dataclass(frozen=True)
class Check:
    key: str
    label: str
    ok: bool
    detail: str


def _convex_ball(seed: int) -> Check:
    worst = 0.0
    for n in (3, 4):
        basis = np.array(gell_mann_basis(n))
        gram = np.array([[hs_inner(a, b) for b in basis] for a in basis])
        worst = max(worst, float(np.max(np.abs(gram - np.eye(n * n - 1)))))
        rng = np.random.default_rng(seed)
        for _ in range(50):
            a, b = random_state(n, int(rng.integers(2**31))), random_state(n, int(rng.integers(2**31)))
            w = rng.uniform()
            worst = max(worst, max(0.0, -float(np.linalg.eigvalsh(w * a + (1 - w) * b)[0])))
    return Check("a", "convex body of dimension n^2-1", worst < 1e-10, f"max defect {worst:.2e}")


def _radii(seed: int) -> Check:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for n in range(2, 9):
        big, small = radii(n)
        for _ in range(50):
            worst = max(worst, abs(hs_distance(random_pure_state(n, rng), np.eye(n) / n) - big))
        worst = max(worst, abs(big / small - (n - 1)))
    for n in (3, 4):
        for s in range(20):
            _, ker = boundary_state(n, seed + s)
            worst = max(worst, abs(hyperplane_distance(ker) - radii(n)[1]))
    return Check("b", "outsphere R(n) and insphere r(n)", worst < 1e-10, f"max deviation {worst:.2e}")


def _not_polytope_not_smooth(seed: int) -> Check:
    tri = boundary_features(cross_section(named_plane("diagonal"), 256))
    round_ = boundary_features(cross_section(named_plane("elliptope-z0"), 256))
    ok = len(tri.corners) == 3 and not round_.flats and not round_.corners
    return Check("c", "neither polytope nor smooth", ok,
                 f"{len(tri.corners)} corners on the diagonal section, {len(round_.flats)} flats on a curved one")


def _self_dual(seed: int) -> Check:
    worst = max(self_duality_check(n, 300, seed) for n in (2, 3, 4))
    return Check("d", "self-dual with offset 1/n", worst == 0.0, f"max violation {worst:.2e}")


def _sections_exposed(seed: int, count: int = 10) -> Check:
    bad = 0
    for s in range(count):
        bad += len(boundary_features(cross_section(random_subspace(3, seed + s), 512)).nonexposed)
    return Check("e", "sections have no non-exposed points", bad == 0, f"{bad} found over {count} planes")


def _projection_corners(seed: int, count: int = 10) -> Check:
    corners = bad = 0
    names = ["diagonal", "cone-axis", "cone-elliptic", "cone-hyperbolic", "elliptope-diagonal"]
    planes = [named_plane(x) for x in names] + [random_subspace(3, seed + s) for s in range(count)]
    for us in planes:
        f = boundary_features(projection(us, 512), *us.frame())
        corners += len(f.corners)
        bad += sum(not c.polyhedral for c in f.corners)
    return Check("f", "projection corners are polyhedral", bad == 0, f"{corners} corners, {bad} non-polyhedral")


def _rank_deficient_on_boundary(seed: int) -> Check:
    ok = True
    for n in (3, 4):
        for s in range(20):
            sigma, _ = boundary_state(n, seed + s)
            out = sigma + 1e-6 * (sigma - np.eye(n) / n)
            ok &= np.linalg.eigvalsh(out)[0] < 0
    return Check("g", "rank-deficient states lie on the boundary", bool(ok), "outward pushes leave the body")


def _pure_dimension(seed: int) -> Check:
    rng = np.random.default_rng(seed)
    ok = True
    for n in (2, 3, 4, 5):
        psi = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        psi /= np.linalg.norm(psi)
        cols = []
        for k in range(2 * n):
            d = np.zeros(n, dtype=complex)
            d[k % n] = 1 if k < n else 1j
            # derivative of |psi><psi| along a tangent direction of the sphere
            cols.append((np.outer(d, psi.conj()) + np.outer(psi, d.conj())).ravel())
        m = np.array(cols).T
        m = np.concatenate([m.real, m.imag])
        ok &= np.linalg.matrix_rank(m, tol=1e-9) == 2 * n - 1
    # one of the 2n - 1 directions changes the norm; pure states lose it
    return Check("h", "pure states form a (2n-2)-dimensional set", bool(ok), "tangent ranks 2n-1 minus the norm")


def _constant_height(seed: int) -> Check:
    r = radii(2)[1]
    area, vol = 4 * np.pi * r**2, 4 / 3 * np.pi * r**3
    worst = abs(r * area / vol - 3)
    for n in (3, 4):
        for s in range(20):
            _, ker = boundary_state(n, 100 + seed + s)
            worst = max(worst, abs(hyperplane_distance(ker) - radii(n)[1]))
    return Check("i", "constant height: every tangent hyperplane touches the insphere", worst < 1e-10,
                 f"max deviation {worst:.2e}")


CHECKS = (
    _convex_ball,
    _radii,
    _not_polytope_not_smooth,
    _self_dual,
    _sections_exposed,
    _projection_corners,
    _rank_deficient_on_boundary,
    _pure_dimension,
    _constant_height,
)


def run_all(seed: int = 0) -> list[Check]:
    return [c(seed) for c in CHECKS]
