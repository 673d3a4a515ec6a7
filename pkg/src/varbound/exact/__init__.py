"""Exact algebraic engines: rational polynomials, Groebner bases, resultants,
Sturm root isolation, and the exact variance-bound pipeline."""

from .charpoly import (
    char_poly_interpolated,
    char_poly_system,
    reconstruct_rational,
    spin_mp_entries,
)
from .gaussian import GaussianRational, GaussianRationalMatrix
from .groebner import buchberger, eliminant_from_basis, reduce_poly, s_polynomial
from .pipeline import (
    ExactConfig,
    bound_exact,
    bound_exact_spin,
    minimal_poly_degree_check,
    qubit_bound,
)
from .poly import RationalPolynomial
from .resultant import eliminate_resultant, resultant_wrt, univariate_resultant
from .sturm import IsolatedRoot, isolate_real_roots

__all__ = [
    "ExactConfig",
    "GaussianRational",
    "GaussianRationalMatrix",
    "IsolatedRoot",
    "RationalPolynomial",
    "bound_exact",
    "bound_exact_spin",
    "buchberger",
    "char_poly_interpolated",
    "char_poly_system",
    "eliminant_from_basis",
    "eliminate_resultant",
    "isolate_real_roots",
    "minimal_poly_degree_check",
    "qubit_bound",
    "reconstruct_rational",
    "reduce_poly",
    "resultant_wrt",
    "s_polynomial",
    "spin_mp_entries",
    "univariate_resultant",
]
