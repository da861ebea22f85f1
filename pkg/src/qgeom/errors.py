"""Exception types shared by all modules.

Everything a caller can trigger with bad input derives from ``QGeomError``
(a ``ValueError``); the CLI maps those to exit status 1.  ``ConvergenceError``
signals numerically pathological input rather than user error.
"""

from __future__ import annotations


class QGeomError(ValueError):
    """Base class for input validation failures."""


class DimensionError(QGeomError):
    pass


class NotHermitianError(QGeomError):
    def __init__(self, deviation: float):
        super().__init__(f"matrix is not Hermitian (max |a - a^H| = {deviation:.3e})")
        self.value = deviation


class TraceError(QGeomError):
    def __init__(self, trace: float):
        super().__init__(f"trace must be 1, got {trace:.17g}")
        self.value = trace


class PositivityError(QGeomError):
    def __init__(self, eigenvalue: float):
        super().__init__(f"matrix is not positive semidefinite (min eigenvalue {eigenvalue:.17g})")
        self.value = eigenvalue


class NotIdempotentError(QGeomError):
    pass


class SubspaceError(QGeomError):
    """Screen matrices are not an HS-orthonormal traceless pair."""


class OriginNotInteriorError(QGeomError):
    pass


class ConvergenceError(ArithmeticError):
    """An iterative routine exhausted its budget."""


class BracketError(ConvergenceError):
    pass
