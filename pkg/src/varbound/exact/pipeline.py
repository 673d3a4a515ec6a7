"""Exact bound pipeline: stationarity system -> elimination -> isolation -> certification.

The minimal certified real root of the eliminated polynomial equals the tight
variance-sum bound.  Certification couples an algebraic back-substitution
residual check with a mandatory cross-check against the numeric engine, which
also supplies the witness state and minimizer.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ..bounds import BoundResult, SolverConfig, WeightedPair, bound_numeric
from ..errors import BudgetExceededError, CertificationError, ZeroResultantError
from ..linalg import angular_momentum, as_matrix
from .charpoly import (
    DEFAULT_PRECISION_BITS,
    char_poly_interpolated,
    char_poly_system,
    spin_mp_entries,
)
from .gaussian import GaussianRationalMatrix
from .groebner import buchberger, eliminant_from_basis, term_budget_from_env
from .poly import RationalPolynomial
from .resultant import eliminate_resultant, resultant_wrt
from .sturm import IsolatedRoot, dense_coefficients, isolate_real_roots, squarefree_part

log = logging.getLogger(__name__)

DEFAULT_ISOLATION_WIDTH = Fraction(1, 2**48)
NUMERIC_CROSS_TOL = 1e-7
BACKSUB_RTOL = 1e-6


@dataclass(frozen=True)
class ExactConfig:
    precision_bits: int = DEFAULT_PRECISION_BITS
    isolation_width: Fraction = DEFAULT_ISOLATION_WIDTH
    symmetry_reduce: bool = False
    max_terms: int | None = None
    max_total_degree: int = 200
    numeric: SolverConfig = field(default_factory=SolverConfig)


def minimal_poly_degree_check(j) -> int:
    """Expected order of the minimal integer polynomial for the spin-pair bound.

    Closed form in n = 2j: (6 + n(3n+2) - (-1)^n (n(n-2)+6)) / 16.
    """
    from ..linalg import half_integer

    n = int(2 * half_integer(j))
    if n < 1:
        raise ValueError("need 2j >= 1")
    val = 6 + n * (3 * n + 2) - (-1) ** n * (n * (n - 2) + 6)
    if val % 16:
        raise ArithmeticError(f"degree formula gave a non-integer for n={n}")
    return val // 16


def qubit_bound(a: float, b: complex) -> float:
    """Closed-form bound for the qubit pair X = diag(1,-1), Y = [[a,b],[conj(b),-a]].

    C = (S - sqrt(S^2 - 4|b|^2)) / 2 with S = a^2 + |b|^2 + 1; always in [0, 1].
    """
    s = float(a) * float(a) + abs(complex(b)) ** 2 + 1.0
    disc = s * s - 4.0 * abs(complex(b)) ** 2
    return 0.5 * (s - np.sqrt(max(disc, 0.0)))


def _as_system(x_in, y_in, cfg: ExactConfig, mp_entries):
    """Build the stationarity system, exact or via interpolation."""
    if isinstance(x_in, GaussianRationalMatrix) and isinstance(y_in, GaussianRationalMatrix):
        budget = term_budget_from_env(cfg.max_terms if cfg.max_terms is not None else 10**6)
        return char_poly_system(
            x_in, y_in, cfg.symmetry_reduce, max_terms=budget,
            max_degree=cfg.max_total_degree,
        )
    if mp_entries is not None:
        return char_poly_interpolated(
            x_in, y_in, cfg.precision_bits, cfg.symmetry_reduce, mp_entries=mp_entries
        )
    # float matrices are exact dyadic data: lift and expand exactly
    gx = GaussianRationalMatrix.from_float(as_matrix(x_in))
    gy = GaussianRationalMatrix.from_float(as_matrix(y_in))
    budget = term_budget_from_env(cfg.max_terms if cfg.max_terms is not None else 10**6)
    return char_poly_system(
        gx, gy, cfg.symmetry_reduce, max_terms=budget, max_degree=cfg.max_total_degree,
    )


def _eliminate(system: list[RationalPolynomial], cfg: ExactConfig) -> RationalPolynomial:
    """Reduce the system to a primitive univariate polynomial in lam."""
    variables = system[0].vars
    if len(variables) == 2:
        elim = eliminate_resultant(system[0], system[1])
        return elim.primitive()
    # three variables: Groebner elimination first, cascaded resultants as the
    # fallback when the basis computation outgrows its budget
    try:
        basis = buchberger(system, max_terms=cfg.max_terms,
                           max_total_degree=cfg.max_total_degree)
        elim = eliminant_from_basis(basis, "lam")
        if elim is not None:
            return _restrict_to_lam(elim)
        log.warning("lex basis lacks a univariate eliminant; falling back to resultants")
    except BudgetExceededError as exc:
        log.warning("Groebner elimination exceeded its budget (%s); using resultants", exc)
    return _cascade_eliminate(system, cfg)


def _restrict_to_lam(p: RationalPolynomial) -> RationalPolynomial:
    out = p
    for v in p.vars:
        if v != "lam":
            out = out.drop_variable(v)
    return out.primitive()


def _cascade_eliminate(system: list[RationalPolynomial], cfg: ExactConfig,
                       ) -> RationalPolynomial:
    """Eliminate x then y by resultants.

    A vanishing final resultant means the two intermediate polynomials share a
    factor; mixing the derivative generators (D_y + t D_x) breaks the
    coincidence while only adding spurious candidates, which certification
    rejects later.
    """
    d, dx, dy = system
    r1 = resultant_wrt(d, dx, "x").primitive()
    for t in range(0, 8):
        gen = dy if t == 0 else dy + dx * t
        r2 = resultant_wrt(d, gen, "x").primitive()
        final = resultant_wrt(
            r1.with_variables(("y", "lam")) if r1.vars != ("y", "lam") else r1,
            r2.with_variables(("y", "lam")) if r2.vars != ("y", "lam") else r2,
            "y",
        )
        if not final.is_zero():
            return _restrict_to_lam(final)
        log.warning("cascade resultant vanished (t=%d); retrying with a mixed generator", t)
    raise ZeroResultantError(
        "cascaded resultants vanished for every tried generator combination"
    )


def _poly_rel_residual(p: RationalPolynomial, point: dict[str, float]) -> float:
    num = 0.0
    den = 1.0
    vals = [float(point[v]) for v in p.vars]
    for mono, c in p.terms.items():
        term = float(c)
        for v, e in zip(vals, mono):
            if e:
                term *= v**e
        num += term
        den += abs(term)
    return abs(num) / den


def _certify_candidates(system, roots: list[IsolatedRoot], numeric: BoundResult,
                        reduced: bool):
    """First isolated root that matches the numeric bound and admits a real
    back-substitution near the numeric minimizer."""
    x_star, y_star = numeric.minimizer
    rejected = []
    for root in roots:
        lam_hat = root.value
        if abs(lam_hat - numeric.value) > NUMERIC_CROSS_TOL:
            rejected.append((lam_hat, "numeric mismatch"))
            continue
        if reduced:
            # rotational symmetry folded the minimizer circle onto the x axis
            radius = float(np.hypot(x_star, y_star))
            point = {"x": radius, "lam": lam_hat}
        else:
            point = {"x": x_star, "y": y_star, "lam": lam_hat}
        residual = max(_poly_rel_residual(p, point) for p in system)
        if residual > BACKSUB_RTOL:
            rejected.append((lam_hat, f"back-substitution residual {residual:.3e}"))
            continue
        return root, rejected
    return None, rejected


def _certified_factor(eliminant: RationalPolynomial, root: IsolatedRoot,
                      ) -> RationalPolynomial:
    """Irreducible integer factor of the eliminant that vanishes on the
    certified interval (primitive form, positive leading coefficient)."""
    import sympy

    coeffs = dense_coefficients(eliminant.primitive())
    lam = sympy.Symbol("lam")
    expr = sum(sympy.Integer(int(c)) * lam**k for k, c in enumerate(coeffs))
    _, factors = sympy.factor_list(sympy.Poly(expr, lam))
    for fac, _mult in factors:
        poly = sympy.Poly(fac, lam)
        lo = poly.eval(sympy.Rational(root.lo.numerator, root.lo.denominator))
        hi = poly.eval(sympy.Rational(root.hi.numerator, root.hi.denominator))
        if lo == 0 or hi == 0 or (lo > 0) != (hi > 0):
            out_terms = {
                (int(k),): Fraction(int(c))
                for k, c in zip(
                    [m[0] for m in poly.monoms()], [int(c) for c in poly.coeffs()]
                )
            }
            out = RationalPolynomial(("lam",), out_terms)
            return out.primitive()
    raise CertificationError(
        "no irreducible factor of the eliminant vanishes on the certified interval"
    )


def bound_exact(x_in, y_in, config: ExactConfig | None = None, *, mp_entries=None,
                ) -> tuple[BoundResult, RationalPolynomial]:
    """Exact bound as the minimal certified real root of the eliminant.

    Returns the BoundResult (method 'exact', error = isolation width, witness
    and minimizer from the numeric cross-check) together with the certified
    irreducible factor of the eliminant in primitive integer form.
    """
    cfg = config or ExactConfig()
    system = _as_system(x_in, y_in, cfg, mp_entries)
    reduced = len(system[0].vars) == 2

    if isinstance(x_in, GaussianRationalMatrix):
        pair = WeightedPair(x_in.to_complex_ndarray(), y_in.to_complex_ndarray())
    else:
        pair = WeightedPair(as_matrix(x_in), as_matrix(y_in))
    numeric = bound_numeric(pair, cfg.numeric)

    eliminant = _eliminate(system, cfg)
    sf = RationalPolynomial(("lam",), {
        (k,): c for k, c in enumerate(squarefree_part(dense_coefficients(eliminant)))
    })
    roots = isolate_real_roots(sf, cfg.isolation_width)
    if not roots:
        raise CertificationError(
            "eliminant has no real roots", numeric_value=numeric.value
        )
    certified, rejected = _certify_candidates(system, roots, numeric, reduced)
    if certified is None:
        raise CertificationError(
            f"none of {len(roots)} isolated roots certified against the numeric"
            f" bound {numeric.value!r}; candidates: "
            + ", ".join(f"{lam:.9g} ({why})" for lam, why in rejected[:8]),
            candidates=[r.value for r in roots],
            numeric_value=numeric.value,
        )
    factor = _certified_factor(sf, certified)
    result = BoundResult(
        value=certified.value,
        minimizer=numeric.minimizer,
        witness=numeric.witness,
        method="exact",
        error=float(certified.width),
        diagnostics={
            "isolated_roots": [r.value for r in roots],
            "rejected": rejected,
            "eliminant_degree": dense_coefficients(sf).__len__() - 1,
            "factor_degree": factor.degree_in("lam"),
            "numeric_value": numeric.value,
        },
    )
    return result, factor


def bound_exact_spin(j, config: ExactConfig | None = None,
                     ) -> tuple[BoundResult, RationalPolynomial]:
    """Exact bound for the spin pair (J_X, J_Y) at total angular momentum j.

    Uses the rotational symmetry reduction (y shift fixed to 0) and
    extended-precision entry recovery; warns when the certified factor degree
    disagrees with the closed-form degree formula.
    """
    base = config or ExactConfig()
    cfg = ExactConfig(
        precision_bits=base.precision_bits,
        isolation_width=base.isolation_width,
        symmetry_reduce=True,
        max_terms=base.max_terms,
        max_total_degree=base.max_total_degree,
        numeric=base.numeric,
    )
    jx, jy, _ = angular_momentum(j)
    result, factor = bound_exact(jx, jy, cfg, mp_entries=spin_mp_entries(j))
    expected = minimal_poly_degree_check(j)
    got = factor.degree_in("lam")
    if got != expected:
        log.warning(
            "certified factor degree %d differs from the degree formula %d for j=%s",
            got, expected, j,
        )
    result.diagnostics["expected_degree"] = expected
    return result, factor
