import numpy as np
import pytest

from qgeom.duality import (
    _brute_dist,
    _dist_to_polygon,
    _positive_definite,
    NAMED_PLANES,
    Named3D,
    Subspace2D,
    cross_section,
    hausdorff,
    named_basis,
    named_matrix,
    named_member,
    named_mesh,
    named_plane,
    negativity_witness,
    polar_dual,
    projection,
    random_subspace,
    ray_bisect,
    self_duality_check,
    verify_duality,
)
from qgeom.errors import OriginNotInteriorError, QGeomError, SubspaceError
from qgeom.herm import SIGMA_1, SIGMA_2, SIGMA_3, hs_distance, hs_inner
from qgeom.numrange import Boundary2D, boundary_features, disk_boundary, points_boundary
from qgeom.states import radii

SQRT2 = np.sqrt(2)
TWO_PI = 2 * np.pi


def test_subspace_validation():
    Subspace2D(SIGMA_1, SIGMA_2)
    with pytest.raises(SubspaceError):
        Subspace2D(SIGMA_1, SIGMA_1)
    with pytest.raises(SubspaceError):
        Subspace2D(SIGMA_1 + np.eye(2), SIGMA_2)
    with pytest.raises(SubspaceError):
        Subspace2D(2 * SIGMA_1, SIGMA_2)
    us = Subspace2D.from_pair(np.diag([1.0, 2, 3]), np.array([[1, 1, 0], [1, 0, 0], [0, 0, 5]]))
    assert hs_inner(us.u, us.v) == pytest.approx(0, abs=1e-14)


def test_frame_coordinates_round_trip():
    us = random_subspace(4, 3)
    x, y = 0.05, -0.02
    assert us.coords(us.point(x, y) - np.eye(4) / 4) == pytest.approx((x, y))


def test_diagonal_plane_is_the_classical_triangle():
    us = named_plane("diagonal")
    sec = cross_section(us, 512)
    f = boundary_features(sec)
    assert len(f.flats) == 3 and len(f.corners) == 3
    assert all(c.polyhedral for c in f.corners) and not f.nonexposed
    vertices = np.array([c.point for c in f.corners])
    for p in vertices:
        rho = us.point(*p)
        assert np.allclose(np.sort(np.linalg.eigvalsh(rho)), [0, 0, 1], atol=1e-10)
    # circumradius R(3) and inradius R(3)/2, in HS units
    big, small = radii(3)
    assert np.linalg.norm(vertices, axis=1) / SQRT2 == pytest.approx([big] * 3, abs=1e-10)
    assert sec.h.min() / SQRT2 == pytest.approx(big / 2, abs=1e-10)
    assert big / 2 == pytest.approx(small)
    # projection of the triangle onto its own plane is the triangle again
    assert hausdorff(sec, projection(us, 512)) < 1e-10


def test_elliptope_z0_axis_points():
    us = named_plane("elliptope-z0")
    # boundary at x = +-1/3 (matrix entry) along the first axis
    for phi in (0.0, np.pi):
        s = ray_bisect(us, phi)
        assert s / SQRT2 == pytest.approx(1 / 3, abs=1e-12)
        rho = us.point(np.cos(phi) * s, np.sin(phi) * s)
        assert np.linalg.eigvalsh(rho)[0] == pytest.approx(0, abs=1e-12)
        assert np.allclose(rho, named_matrix(Named3D.ELLIPTOPE, (np.cos(phi) / 3, 0, 0)))


def test_closed_form_matches_bisection():
    us = random_subspace(3, 11)
    a = cross_section(us, 64, refine=False)
    b = cross_section(us, 64, refine=False, method="bisect")
    assert np.max(np.abs(a.points - b.points)) < 1e-12
    for phi in (0.2, 2.5, 4.0):
        direct = ray_bisect(us, phi)
        closed = cross_section(us, 16, refine=False)
        assert direct > 0 and np.isfinite(closed.radii()).all()


def test_centre_is_interior():
    us = random_subspace(5, 0)
    assert np.linalg.eigvalsh(us.point(0, 0))[0] == pytest.approx(1 / 5)


def test_segment_section_with_two_rays():
    us = Subspace2D(SIGMA_3, SIGMA_1)
    b = cross_section(us, 2)
    assert len(b) == 2
    # I/2 + s sigma_3/sqrt2 loses rank at s = 1/sqrt2, i.e. HS distance R(2) = 1/2
    assert b.radii() == pytest.approx([1 / SQRT2, 1 / SQRT2])
    assert b.radii() / SQRT2 == pytest.approx([radii(2)[0]] * 2)


def test_bad_grid_and_method():
    us = random_subspace(3, 0)
    with pytest.raises(QGeomError):
        cross_section(us, 8)
    with pytest.raises(QGeomError):
        cross_section(us, 64, method="newton")


@pytest.mark.parametrize("seed", range(20))
def test_radius_sandwich_and_tangent_lines(seed):
    n = 3 + seed % 3
    us = random_subspace(n, seed)
    b = cross_section(us, 256)
    big, small = radii(n)
    for p in b.points[::7]:
        d = hs_distance(us.point(*p), np.eye(n) / n)
        assert small - 1e-9 <= d <= big + 1e-9
    assert b.h.min() / SQRT2 >= small - 1e-9


def test_polar_dual_of_disk():
    d = polar_dual(disk_boundary(2.0, 256), 1.0)
    assert np.max(np.abs(d.radii() - 0.5)) < 1e-12
    # resampling through the polygon support costs O(1/K^2)
    d = polar_dual(disk_boundary(2.0, 256), 1.0, K=256)
    assert np.max(np.abs(d.radii() - 0.5)) < 1e-4


def test_polar_dual_requires_interior_origin():
    b = disk_boundary(1.0, 64).translated(2.0, 0.0)
    with pytest.raises(OriginNotInteriorError):
        polar_dual(b, 1.0)
    with pytest.raises(OriginNotInteriorError):
        polar_dual(b, 1.0, K=64)
    with pytest.raises(QGeomError):
        polar_dual(disk_boundary(1.0, 64), 0.0)


def test_double_dual_random_polygons():
    rng = np.random.default_rng(5)
    for _ in range(10):
        pts = rng.normal(size=(int(rng.integers(4, 15)), 2))
        pts -= pts.mean(axis=0)
        b = points_boundary(pts, 256)
        c = float(rng.uniform(0.2, 3))
        assert hausdorff(b, polar_dual(polar_dual(b, c), c)) < 1e-6


def test_resampled_double_dual_of_smooth_body():
    t = TWO_PI * np.arange(2000) / 2000
    b = points_boundary(np.stack([np.cos(t), 0.4 * np.sin(t)], axis=1), 512)
    errs = [hausdorff(b, polar_dual(polar_dual(b, 1.0, K=K), 1.0, K=K)) for K in (128, 256, 512)]
    assert errs[0] > errs[1] > errs[2] and errs[2] < 1e-3


def test_triangle_is_self_dual_with_offset_one_third():
    sec = cross_section(named_plane("diagonal"), 512)
    assert hausdorff(sec, polar_dual(sec, 1 / 3)) < 1e-10


def test_qubit_section_equals_projection_disk():
    us = Subspace2D(SIGMA_1, SIGMA_2)
    sec, proj = cross_section(us, 256), projection(us, 256)
    assert np.max(np.abs(sec.radii() / SQRT2 - 0.5)) < 1e-12
    assert np.max(np.abs(proj.radii() / SQRT2 - 0.5)) < 1e-12
    r = verify_duality(us, 256)
    assert r.hausdorff_cross < 1e-10 and r.hausdorff_proj < 1e-10


def test_cone_planes_are_self_dual():
    for name in ("cone", "cone-axis", "diagonal"):
        us = named_plane(name)
        assert hausdorff(cross_section(us, 512), projection(us, 512)) < 1e-6


@pytest.mark.parametrize("seed", range(0, 50, 7))
def test_duality_round_trip(seed):
    r = verify_duality(random_subspace(3, seed), 512)
    assert r.hausdorff_cross < 1e-3 and r.hausdorff_proj < 1e-3
    assert r.hausdorff_cross >= 0 and r.hausdorff_proj >= 0


def test_resampled_dual_converges_with_grid():
    us = random_subspace(3, 36)
    errs = [verify_duality(us, K, resample=True).worst for K in (128, 256, 512)]
    assert errs[0] > errs[1] > errs[2]
    assert errs[1] / errs[2] > 3  # second order in the grid step
    assert verify_duality(us, 512).worst < 1e-12


def test_sections_expose_everything_projections_have_polyhedral_corners():
    for seed in range(10):
        us = random_subspace(3, 100 + seed)
        assert not boundary_features(cross_section(us, 512)).nonexposed
        assert all(c.polyhedral for c in boundary_features(projection(us, 512), *us.frame()).corners)


@pytest.mark.parametrize("name", ["cone-elliptic", "cone-parabolic", "cone-hyperbolic"])
def test_tilted_cone_sections_have_non_polyhedral_corners(name):
    us = named_plane(name)
    f = boundary_features(cross_section(us, 512))
    assert len(f.flats) == 1 and len(f.corners) == 2
    assert not any(c.polyhedral for c in f.corners)
    assert not f.nonexposed
    p = boundary_features(projection(us, 512), *us.frame())
    assert all(c.polyhedral for c in p.corners)


def test_all_named_planes_build():
    for name in NAMED_PLANES:
        assert named_plane(name).n == 3
    with pytest.raises(QGeomError):
        named_plane("sphere")


def test_self_duality_examples():
    a = np.diag([1.0, 0])
    b = np.diag([0, 1.0])
    assert np.trace(a @ b) == 0
    assert np.trace(a @ a) == 1
    sigma = np.diag([1.2, -0.2])
    w = negativity_witness(sigma)
    assert np.allclose(w, np.diag([0, 1.0]))
    assert np.trace(sigma @ w) == pytest.approx(-0.2)
    with pytest.raises(QGeomError):
        negativity_witness(np.eye(2) / 2)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_self_duality_check(n):
    assert self_duality_check(n, 200, seed=n) == 0.0


def test_named_sections():
    assert named_member(Named3D.ELLIPTOPE, (1 / 3, 1 / 3, 1 / 3))
    m = named_matrix(Named3D.ELLIPTOPE, (1 / 3, 1 / 3, 1 / 3))
    assert np.allclose(np.linalg.eigvalsh(m), [0, 0, 1], atol=1e-12)
    assert named_member(Named3D.ELLIPTOPE, (0, 0, 0))
    assert not named_member(Named3D.ELLIPTOPE, (0.4, 0, 0))
    # four vertices at sign patterns with xyz > 0
    for s in [(1, 1, 1), (1, -1, -1), (-1, 1, -1), (-1, -1, 1)]:
        assert np.sum(np.linalg.eigvalsh(named_matrix(Named3D.ELLIPTOPE, np.array(s) / 3)) > 1e-9) == 1
    apex = named_matrix(Named3D.CONE, (0, 0, -1 / np.sqrt(3)))
    assert np.allclose(np.linalg.eigvalsh(apex), [0, 0, 1], atol=1e-12)
    assert named_member(Named3D.CONE, (0, 0, -1 / np.sqrt(3)))
    for name in Named3D:
        g = named_basis(name)
        gram = np.array([[hs_inner(a, b) for b in g] for a in g])
        assert np.allclose(gram, np.eye(3))


def test_named_mesh_lies_on_boundary():
    for name in Named3D:
        mesh = named_mesh(name, 9, 12).reshape(-1, 3)
        lmins = [np.linalg.eigvalsh(named_matrix(name, p))[0] for p in mesh]
        assert np.max(np.abs(lmins)) < 1e-12


def test_windowed_distance_matches_full_scan():
    rng = np.random.default_rng(12)
    for _ in range(50):
        pts = rng.normal(size=(int(rng.integers(3, 30)), 2)) * rng.uniform(0.1, 3, 2)
        b = points_boundary(pts - pts.mean(axis=0), 128)
        q = np.concatenate([rng.normal(size=(100, 2)), b.points + 1e-3 * rng.normal(size=b.points.shape)])
        assert np.array_equal(_dist_to_polygon(q, b.points), _brute_dist(q, b.points))


def test_positive_definite_matches_eigenvalues():
    rng = np.random.default_rng(13)
    for n in (2, 3, 5):
        g = rng.normal(size=(500, n, n)) + 1j * rng.normal(size=(500, n, n))
        h = (g + g.conj().transpose(0, 2, 1)) / 2 + 0.8 * np.eye(n)
        assert np.array_equal(_positive_definite(h), np.linalg.eigvalsh(h)[:, 0] > 0)
