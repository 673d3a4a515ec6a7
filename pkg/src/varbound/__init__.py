"""varbound: state-independent lower bounds for sums of variances of two observables.

The package has three bound engines and the geometry underlying them:

- numeric: global minimization of the minimal eigenvalue of a shifted operator
  family (tight up to solver tolerance);
- certified: sector decompositions of the spectra give bounds with an explicit,
  controllable error;
- exact: characteristic-polynomial systems, elimination (Groebner bases or
  resultants), and real-root isolation produce the bound as a root of an
  integer polynomial.

Geometry helpers sample joint numerical ranges (2D and 3D), their dual sets,
and lower approximations of the region of attainable variance pairs.
"""

from .bounds import (
    BoundResult,
    SolverConfig,
    WeightedPair,
    bound_numeric,
    lambda_min_gradient,
    lambda_min_of_shift,
    shifted_operator,
    weighted_family,
)
from .errors import (
    BudgetExceededError,
    CertificationError,
    DimensionMismatchError,
    EigenConvergenceError,
    GridCapError,
    GridCoverageError,
    HermiticityError,
    OriginNotInteriorError,
    ReconstructionError,
    VarboundError,
    ZeroResultantError,
)
from .geometry import DualCurve, JNRPolytope, dual2d, jnr2d, jnr3d_variance_surface, jnr_xx2
from .linalg import (
    DensityState,
    HermitianOperator,
    Spectrum,
    angular_momentum,
    eig,
    expectation,
    random_hermitian,
    random_state,
    variance_sum_at_state,
)
from .matrixio import load_hermitian, save_hermitian
from .sectors import (
    Grid,
    SectorDecomposition,
    UncertaintyRegionApprox,
    certified_bound,
    certified_bound_auto,
    sector_decompose,
    uncertainty_range_approx,
)

__version__ = "0.1.0"

__all__ = [
    "BoundResult",
    "BudgetExceededError",
    "CertificationError",
    "DensityState",
    "DimensionMismatchError",
    "DualCurve",
    "EigenConvergenceError",
    "Grid",
    "GridCapError",
    "GridCoverageError",
    "HermitianOperator",
    "HermiticityError",
    "JNRPolytope",
    "OriginNotInteriorError",
    "ReconstructionError",
    "SectorDecomposition",
    "SolverConfig",
    "Spectrum",
    "UncertaintyRegionApprox",
    "VarboundError",
    "WeightedPair",
    "ZeroResultantError",
    "angular_momentum",
    "bound_numeric",
    "certified_bound",
    "certified_bound_auto",
    "dual2d",
    "eig",
    "expectation",
    "jnr2d",
    "jnr3d_variance_surface",
    "jnr_xx2",
    "lambda_min_gradient",
    "lambda_min_of_shift",
    "load_hermitian",
    "random_hermitian",
    "random_state",
    "save_hermitian",
    "sector_decompose",
    "shifted_operator",
    "uncertainty_range_approx",
    "variance_sum_at_state",
    "weighted_family",
]
