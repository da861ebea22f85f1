"""Hilbert-Schmidt geometry of quantum state spaces.

Density matrices, numerical ranges, plane sections and projections with
their polar duality, the hull of a trigonometric space curve as a
spectrahedron, and checks for complementary bases and SIC simplices.
"""

from .errors import (
    BracketError,
    ConvergenceError,
    DimensionError,
    NotHermitianError,
    NotIdempotentError,
    OriginNotInteriorError,
    PositivityError,
    QGeomError,
    SubspaceError,
    TraceError,
)
from .herm import (
    BlochCoords,
    EigenDecomposition,
    as_hermitian,
    bloch_coords,
    bloch_matrix,
    eig_hermitian,
    gell_mann_basis,
    hs_distance,
    hs_inner,
    is_psd,
)
from .states import eigen_mixture, radii, random_state, rank_of, validate_state
from .numrange import Boundary2D, Shape, ShapeClass, boundary_features, classify_shape_n3, numerical_range, support_point
from .duality import (
    DualityReport,
    Subspace2D,
    cross_section,
    hausdorff,
    named_plane,
    polar_dual,
    projection,
    random_subspace,
    self_duality_check,
    verify_duality,
)
from .curve import MomentCertificate, build_constants, curve_point, extended_matrix, lift_to_Q6, membership_C
from .bases import (
    complementary_check,
    equivalence_transform,
    fourier_defect_bound,
    fourier_matrix,
    is_complex_hadamard,
    verify_sic,
    wh_orbit,
)

__version__ = "0.1.0"
