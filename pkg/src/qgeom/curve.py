"""A trigonometric space curve on the unit sphere and its convex hull C.

The curve ``x(t) = (cos t cos 3t, cos t sin 3t, -sin t)`` becomes a
degree-8 binary form after ``cos t = (y0^2 - y1^2)/(y0^2 + y1^2)``,
``sin t = 2 y0 y1/(y0^2 + y1^2)``.  Its hull is the image of moment
vectors ``u`` of positive measures on the circle under the 4x9 coefficient
matrix ``A``.  Those moment vectors admit a unit-trace positive 6x6
representative ``M``, so C is a linear image of a section of the order-6
state space.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import ConvergenceError, QGeomError
from .states import validate_state

BOUNDARY_BAND = 1e-6
EARLY_EXIT = 1e-4
BARRIER_GAP = 1e-8  # final duality gap size/t, well inside the band

# reference values for rows 1-3 of the coefficient matrix; row 4 comes from the expansion alone
REFERENCE_ROWS = (
    (1, 0, 4, 0, 6, 0, 4, 0, 1),
    (1, 0, -16, 0, 30, 0, -16, 0, 1),
    (0, 6, 0, -26, 0, 26, 0, -6, 0),
)
F = Fraction
# u_i = u~_i - sum_j ELIMINATION[i][j] u_{5+j}, i = 1..4
ELIMINATION = (
    (F(54, 5), 0, 0, 0, 1),
    (0, F(39, 11), 0, F(2, 11), 0),
    (F(-6, 5), 0, 1, 0, 0),
    (0, F(-2, 11), 0, F(3, 11), 0),
)
# u~(v) = const + lin @ v for the first four entries; the rest vanish
U_TILDE_CONST = (F(4, 5), 0, F(1, 20), 0)
U_TILDE_LIN = (
    (F(1, 5), 0, 0),
    (0, F(3, 44), F(-13, 44)),
    (F(-1, 20), 0, 0),
    (0, F(-1, 44), F(-3, 44)),
)
UNIFORM_MOMENTS = np.array([3, 0, 5, 0, 35]) / 128


def curve_point(t: float) -> np.ndarray:
    return np.array([np.cos(t) * np.cos(3 * t), np.cos(t) * np.sin(3 * t), -np.sin(t)])


def curve_points(ts) -> np.ndarray:
    ts = np.asarray(ts, dtype=float)
    return np.stack([np.cos(ts) * np.cos(3 * ts), np.cos(ts) * np.sin(3 * ts), -np.sin(ts)], axis=-1)


# -- exact constants ----------------------------------------------------------


def _mul(p, q):
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return out


def _add(p, q):
    return [a + b for a, b in zip(p, q)]


def _scale(p, k):
    return [k * a for a in p]


def _power(p, k):
    out = [1]
    for _ in range(k):
        out = _mul(out, p)
    return out


def binary_forms() -> list[list[int]]:
    """Coefficients of ``y0^(8-k) y1^k`` in ``q^4``, ``q^4 x1``, ``q^4 x2``, ``q^4 x3``.

    Here ``c = y0^2 - y1^2``, ``s = 2 y0 y1`` and ``q = y0^2 + y1^2``; a
    form is a list indexed by the power of ``y1``.
    """
    c = [1, 0, -1]
    s = [0, 2, 0]
    q = [1, 0, 1]
    c2, s2 = _mul(c, c), _mul(s, s)
    f0 = _power(q, 4)
    f1 = _mul(c2, _add(c2, _scale(s2, -3)))
    f2 = _mul(_mul(c, s), _add(_scale(c2, 3), _scale(s2, -1)))
    f3 = _scale(_mul(_power(q, 3), s), -1)
    return [f0, f1, f2, f3]


def _rref(rows):
    m = [[Fraction(x) for x in r] for r in rows]
    pivots = []
    r = 0
    for col in range(len(m[0])):
        piv = next((i for i in range(r, len(m)) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        lead = m[r][col]
        m[r] = [x / lead for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col] != 0:
                k = m[i][col]
                m[i] = [a - k * b for a, b in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
        if r == len(m):
            break
    return m, pivots


@dataclass(frozen=True)
class AppendixConstants:
    A_exact: tuple[tuple[int, ...], ...]
    rref_exact: tuple[tuple[Fraction, ...], ...]
    pivots: tuple[int, ...]

    @property
    def A(self) -> np.ndarray:
        return np.array(self.A_exact, dtype=float)

    @property
    def A_rref(self) -> np.ndarray:
        return np.array(self.rref_exact, dtype=float)

    def u_tilde(self, v) -> np.ndarray:
        """Particular solution of ``A u = (1, v)``."""
        v = np.asarray(v, dtype=float)
        out = np.zeros(9)
        out[:4] = np.array(U_TILDE_CONST, dtype=float) + np.array(U_TILDE_LIN, dtype=float) @ v
        return out


@lru_cache(maxsize=1)
def build_constants() -> AppendixConstants:
    """Expand the forms exactly, check the reference data, and reduce ``A``.

    Raises ``AssertionError`` if any reference constant disagrees with the
    expansion; that would mean a wrong constant in this module.
    """
    rows = [tuple(int(x) for x in f) for f in binary_forms()]
    assert all(len(r) == 9 for r in rows)
    for k, ref in enumerate(REFERENCE_ROWS):
        assert rows[k] == ref, f"row {k + 1} of A disagrees with the expansion"
    rref, pivots = _rref(rows)
    assert pivots == [0, 1, 2, 3], pivots
    for i in range(4):
        assert tuple(rref[i][4:]) == tuple(F(x) for x in ELIMINATION[i]), f"reduced row {i + 1}"
    # A u~(v) = (1, v) as an identity in v
    const = list(U_TILDE_CONST) + [0] * 5
    for i in range(4):
        assert sum(F(a) * b for a, b in zip(rows[i], const)) == (1 if i == 0 else 0)
        for k in range(3):
            lin = [U_TILDE_LIN[j][k] for j in range(4)] + [0] * 5
            want = 1 if i == k + 1 else 0
            assert sum(F(a) * b for a, b in zip(rows[i], lin)) == want
    return AppendixConstants(tuple(rows), tuple(tuple(r) for r in rref), tuple(pivots))


def moment_vector(y0: float, y1: float) -> np.ndarray:
    """Monomials ``y0^(8-k) y1^k``, k = 0..8, of a point on the circle."""
    k = np.arange(9)
    return y0 ** (8 - k) * y1 ** k


def full_moments(v, u_free) -> np.ndarray:
    """Moment vector ``u1..u9`` solving ``A u = (1, v)`` with free part ``u5..u9``."""
    c = build_constants()
    w = np.asarray(u_free, dtype=float)
    u = c.u_tilde(v)
    u[:4] -= np.array(ELIMINATION, dtype=float) @ w
    u[4:] = w
    return u


def _hankel(u: np.ndarray) -> np.ndarray:
    i = np.arange(5)
    return u[i[:, None] + i[None, :]]


def extended_matrix(v, u_free) -> np.ndarray:
    """Hankel moment matrix of ``u1..u9`` with the trace-correcting scalar block appended."""
    v = np.asarray(v, dtype=float)
    w = np.asarray(u_free, dtype=float)
    u = full_moments(v, w)
    m = np.zeros((6, 6))
    m[:5, :5] = _hankel(u)
    m[5, 5] = 172 / 20 * w[0] + 3 / 20 * (1 - v[0])
    scale = 1 + 20 * float(np.abs(w).sum()) + float(np.abs(v).sum())
    assert abs(np.trace(m) - 1) <= 1e-14 * scale * 10, np.trace(m)
    return m


def _affine_parts(v) -> tuple[np.ndarray, np.ndarray]:
    m0 = extended_matrix(v, np.zeros(5))
    basis = np.array([extended_matrix(v, e) - m0 for e in np.eye(5)])
    return m0, basis


def min_eigenvalue(v, u_free) -> float:
    return float(np.linalg.eigvalsh(extended_matrix(v, u_free))[0])


def extract_v(m) -> np.ndarray:
    """Recover ``v`` from the entries of an extended matrix (inverse bookkeeping)."""
    m = np.asarray(m).real  # lifted states are stored complex; M itself is real
    u = np.concatenate([m[0, :5], m[1:5, 4]])
    w = u[4:]
    ut = u[:4] + np.array(ELIMINATION, dtype=float) @ w
    lin = np.array(U_TILDE_LIN, dtype=float)
    rhs = ut - np.array(U_TILDE_CONST, dtype=float)
    return np.linalg.lstsq(lin, rhs, rcond=None)[0]


# -- membership ---------------------------------------------------------------


class Status(enum.Enum):
    INSIDE = "INSIDE"
    BOUNDARY = "BOUNDARY"
    OUTSIDE = "OUTSIDE"


def status_of(lambda_star: float, band: float = BOUNDARY_BAND) -> Status:
    if lambda_star > band:
        return Status.INSIDE
    if lambda_star < -band:
        return Status.OUTSIDE
    return Status.BOUNDARY


@dataclass(frozen=True)
class MomentCertificate:
    v: np.ndarray
    u_free: np.ndarray
    lambda_star: float
    status: Status

    def as_dict(self) -> dict:
        return {
            "status": self.status.value,
            "lambda_star": self.lambda_star,
            "u_free": [float(x) for x in self.u_free],
        }


def _barrier_max(m0, basis, start, early_exit, max_inner=200):
    """Maximize ``lambda_min(m0 + sum w_j basis_j)`` over ``w`` by a log-barrier method.

    Variables are ``(w, lam)``; for increasing ``t`` the concave function
    ``t lam + logdet(M(w) - lam I)`` is maximized by damped Newton steps.
    """
    size = m0.shape[0]
    c = np.concatenate([basis, -np.eye(size)[None]], axis=0)
    lam0 = np.linalg.eigvalsh(m0 + np.tensordot(start, basis, axes=1))[0] - 1.0
    x = np.concatenate([start, [lam0]])
    t = 1.0
    while size / t > BARRIER_GAP:
        for _ in range(max_inner):
            s = m0 + np.tensordot(x, c, axes=1)
            sc = np.einsum("ab,kbc->kac", np.linalg.inv(s), c)
            g = np.einsum("kaa->k", sc).real.copy()
            g[-1] += t
            hess = -np.einsum("jab,kba->jk", sc, sc)
            dx = np.linalg.solve(hess, -g)
            dec = g @ dx
            if dec / 2 < 1e-9:
                break
            f0 = t * x[-1] + np.linalg.slogdet(s)[1]
            step = 1.0
            while step > 1e-12:
                xn = x + step * dx
                sn = m0 + np.tensordot(xn, c, axes=1)
                try:
                    np.linalg.cholesky(sn)
                except np.linalg.LinAlgError:
                    step /= 2
                    continue
                if t * xn[-1] + np.linalg.slogdet(sn)[1] >= f0 + 0.25 * step * dec:
                    break
                step /= 2
            x = xn
            if step < 1e-3 and dec < 1e-6:
                break  # rounding floor: damped steps no longer improve the objective
        else:
            raise ConvergenceError(f"barrier Newton stalled at t = {t:g}")
        w = x[:-1]
        lam = np.linalg.eigvalsh(m0 + np.tensordot(w, basis, axes=1))[0]
        if early_exit and lam > EARLY_EXIT:
            return w, float(lam)
        t *= 10
    w = x[:-1]
    return w, float(np.linalg.eigvalsh(m0 + np.tensordot(w, basis, axes=1))[0])


def membership_C(v, early_exit: bool = True) -> MomentCertificate:
    """Best free moments for ``v`` and the resulting sign of ``lambda_min(M)``.

    ``v`` lies in C exactly when some free part makes ``M`` positive
    semidefinite; values within ``BOUNDARY_BAND`` of zero are reported as
    boundary.  With ``early_exit`` the search stops as soon as a clearly
    positive certificate is found.
    """
    v = np.asarray(v, dtype=float)
    if v.shape != (3,):
        raise QGeomError("v must be a 3-vector")
    m0, basis = _affine_parts(v)
    w, lam = _barrier_max(m0, basis, UNIFORM_MOMENTS.copy(), early_exit)
    return MomentCertificate(v, w, lam, status_of(lam))


def fibonacci_sphere(m: int) -> np.ndarray:
    i = np.arange(m) + 0.5
    polar = np.arccos(1 - 2 * i / m)
    azim = np.pi * (1 + 5 ** 0.5) * i
    return np.stack([np.cos(azim) * np.sin(polar), np.sin(azim) * np.sin(polar), np.cos(polar)], axis=1)


@lru_cache(maxsize=4)
def _support_table(m: int, k: int) -> tuple[np.ndarray, np.ndarray]:
    d = fibonacci_sphere(m)
    x = curve_points(2 * np.pi * np.arange(k) / k)
    return d, (d @ x.T).max(axis=1)


def oracle_membership_C(v, m: int = 4000, k: int = 4000, slack: float = 1e-9) -> bool:
    """Outer polyhedral test: ``v.d <= max_t x(t).d`` for ``m`` sampled directions."""
    if m < 100 or k < 1000:
        raise QGeomError("oracle needs at least 100 directions and 1000 curve samples")
    d, h = _support_table(m, k)
    return bool(np.all(d @ np.asarray(v, dtype=float) <= h + slack))


def lift_to_Q6(cert: MomentCertificate) -> np.ndarray:
    """The extended matrix of a non-negative certificate, as a state of order 6."""
    if cert.status is Status.OUTSIDE:
        raise QGeomError(f"certificate is not positive (lambda* = {cert.lambda_star:.3e})")
    return validate_state(extended_matrix(cert.v, cert.u_free), tol=BOUNDARY_BAND)


def dirac_certificate(t: float) -> MomentCertificate:
    """Certificate from the point mass at ``(y0, y1) = (cos t/2, sin t/2)``."""
    y = moment_vector(np.cos(t / 2), np.sin(t / 2))
    v = curve_point(t)
    w = y[4:]
    return MomentCertificate(v, w, min_eigenvalue(v, w), status_of(min_eigenvalue(v, w)))
