import numpy as np
import pytest
import sympy as sp
from scipy.stats import unitary_group

from qgeom.bases import (
    HadamardCandidate,
    SicCandidate,
    UnitaryBasis,
    complementary_check,
    dephase,
    equivalence_transform,
    fiducial,
    fourier_defect_bound,
    fourier_matrix,
    is_complex_hadamard,
    shift_clock,
    simplex_vertices,
    unitarity_defect,
    verify_sic,
    wh_orbit,
)
from qgeom.errors import DimensionError, QGeomError
from qgeom.herm import hs_inner
from qgeom.states import radii


def test_fourier_examples():
    assert np.allclose(fourier_matrix(2).entries, np.array([[1, 1], [1, -1]]) / np.sqrt(2))
    f3 = fourier_matrix(3).entries
    g = f3.conj().T @ f3
    assert np.max(np.abs(g - np.diag(np.diag(g)))) < 1e-15
    assert unitarity_defect(fourier_matrix(12).entries) < 1e-12
    with pytest.raises(DimensionError):
        fourier_matrix(1)


@pytest.mark.parametrize("n", range(2, 13))
def test_fourier_is_hadamard_and_complementary(n):
    f = fourier_matrix(n)
    assert is_complex_hadamard(f)
    dev = complementary_check(UnitaryBasis(np.eye(n)), UnitaryBasis(f.entries))
    assert dev < 1e-12


def test_hadamard_negative_examples():
    assert not is_complex_hadamard(np.eye(3))
    h = fourier_matrix(2).entries.copy()
    h[0, 0] = 0
    assert not is_complex_hadamard(h)
    assert not is_complex_hadamard(np.ones((2, 3)))


def test_complementary_extremes():
    e = UnitaryBasis(np.eye(4))
    assert complementary_check(e, e) == pytest.approx(1 - 1 / 4)
    a = UnitaryBasis(unitary_group.rvs(3, random_state=1))
    b = UnitaryBasis(unitary_group.rvs(3, random_state=2))
    assert complementary_check(a, b) > 1e-3
    with pytest.raises(DimensionError):
        complementary_check(e, UnitaryBasis(np.eye(3)))
    with pytest.raises(QGeomError):
        UnitaryBasis(np.ones((2, 2)))


def test_equivalence_transform():
    f3 = fourier_matrix(3)
    same = equivalence_transform(f3, np.ones(3), [0, 1, 2], [0, 1, 2], np.ones(3))
    assert np.allclose(same.entries, f3.entries)
    rng = np.random.default_rng(0)
    for _ in range(10):
        d1, d2 = np.exp(2j * np.pi * rng.uniform(size=(2, 3)))
        g = equivalence_transform(f3, d1, rng.permutation(3), rng.permutation(3), d2)
        assert is_complex_hadamard(g)
        assert np.allclose(dephase(g).entries[0], 1 / np.sqrt(3))
        assert np.allclose(dephase(g).entries[:, 0], 1 / np.sqrt(3))
    with pytest.raises(QGeomError):
        equivalence_transform(f3, [2, 1, 1], [0, 1, 2], [0, 1, 2], np.ones(3))
    with pytest.raises(QGeomError):
        equivalence_transform(f3, np.ones(3), [0, 0, 2], [0, 1, 2], np.ones(3))


def test_transform_preserves_complementarity():
    rng = np.random.default_rng(1)
    for n in (3, 5, 6):
        f = fourier_matrix(n)
        d1, d2 = np.exp(2j * np.pi * rng.uniform(size=(2, n)))
        g = equivalence_transform(f, d1, rng.permutation(n), rng.permutation(n), d2)
        base = complementary_check(UnitaryBasis(np.eye(n)), UnitaryBasis(f.entries))
        moved = complementary_check(UnitaryBasis(np.eye(n)), UnitaryBasis(g.entries))
        assert abs(base - moved) < 1e-12


@pytest.mark.parametrize("n", range(2, 10))
def test_fourier_is_already_dephased(n):
    f = fourier_matrix(n)
    assert np.allclose(dephase(f).entries, f.entries, atol=1e-14)


def _pillai_defect(n):
    # sum_{k=1}^{n} gcd(k, n) = sum_{d | n} d phi(n/d)
    return sum(d * int(sp.totient(n // d)) for d in sp.divisors(n)) - (2 * n - 1)


def test_defect_examples():
    for p in (2, 3, 5, 7, 11, 13):
        assert fourier_defect_bound(p) == 0
    assert fourier_defect_bound(4) == 1
    assert fourier_defect_bound(6) == 4


@pytest.mark.parametrize("n", [2, 3, 4, 5, 7, 8, 9, 11, 13, 16] + list(range(17, 40)))
def test_defect_against_divisor_sum(n):
    assert fourier_defect_bound(n) == _pillai_defect(n)
    assert (fourier_defect_bound(n) == 0) == bool(sp.isprime(n))


def test_complementary_bases_give_orthogonal_simplex_planes():
    for n in (2, 3, 5):
        e = UnitaryBasis(np.eye(n)).projectors() - np.eye(n) / n
        f = UnitaryBasis(fourier_matrix(n).entries).projectors() - np.eye(n) / n
        worst = max(abs(hs_inner(a, b)) for a in e for b in f)
        assert worst < 1e-10


def test_orbit_sizes():
    for n in (2, 3, 4):
        psi = np.zeros(n)
        psi[0] = 1
        assert len(wh_orbit(psi).vectors) == n * n
    x, z = shift_clock(3)
    assert np.allclose(x @ [1, 0, 0], [0, 1, 0])
    # Weyl commutation Z X = w X Z
    assert np.allclose(z @ x, np.exp(2j * np.pi / 3) * x @ z)
    with pytest.raises(QGeomError):
        wh_orbit([1, 1])


@pytest.mark.parametrize("n", [2, 3])
def test_shipped_sics(n):
    rep = verify_sic(wh_orbit(fiducial(n)))
    assert rep.ok, rep.failed
    assert abs(rep.overlap - 1 / (n + 1)) < 1e-10
    verts = simplex_vertices(wh_orbit(fiducial(n)))
    big = radii(n)[0]
    assert np.allclose(np.linalg.norm(verts, axis=1), big, atol=1e-10)
    gram = verts @ verts.T
    off = gram[~np.eye(n * n, dtype=bool)]
    # regular simplex centred at the origin: equal inner products -R^2/(n^2 - 1)
    assert np.allclose(off, -big**2 / (n * n - 1), atol=1e-10)


def test_degenerate_orbit_fails():
    rep = verify_sic(wh_orbit([1, 0]))
    assert "equidistance" in rep.failed and not rep.ok
    with pytest.raises(QGeomError):
        fiducial(7)


def test_sic_failures_are_distinct():
    ok = wh_orbit(fiducial(3)).vectors
    rep = verify_sic(SicCandidate(3, ok[:8]))
    assert "count" in rep.failed
    with pytest.raises(QGeomError):
        SicCandidate(2, np.ones((4, 2)))
    with pytest.raises(DimensionError):
        SicCandidate(3, np.ones((4, 2)) / np.sqrt(2))


def test_hadamard_candidate_has_no_invariants():
    assert HadamardCandidate(np.zeros((3, 3))).n == 3
    assert not is_complex_hadamard(HadamardCandidate(np.zeros((3, 3))))
