"""Characteristic-polynomial systems for the shifted operator family.

D(x, y, lam) = det(X^2 + Y^2 - 2(xX + yY) + (x^2 + y^2 - lam) I) together with
its shift derivatives forms the stationarity system whose eliminant's minimal
certified real root is the variance-sum bound.  Rational-entry operators get
an exact fraction-free expansion; irrational-entry operators (spin matrices)
go through extended-precision evaluation on an integer grid, exact Lagrange
interpolation, and continued-fraction coefficient recovery.
"""

from __future__ import annotations

from fractions import Fraction

import mpmath
import numpy as np

from ..errors import BudgetExceededError, ReconstructionError
from .gaussian import GaussianRational, GaussianRationalMatrix
from .poly import RationalPolynomial

DEFAULT_PRECISION_BITS = 256
CF_DENOMINATOR_CAP = 2**64


def _budget_check(poly: RationalPolynomial, max_terms: int, max_degree: int):
    if len(poly.terms) > max_terms:
        raise BudgetExceededError(
            f"polynomial exceeded the term budget ({len(poly.terms)} > {max_terms})"
        )
    if poly.total_degree() > max_degree:
        raise BudgetExceededError(
            f"polynomial exceeded the degree budget ({poly.total_degree()} > {max_degree})"
        )


def _pencil_entries(x_mat: GaussianRationalMatrix, y_mat: GaussianRationalMatrix,
                    variables: tuple[str, ...]):
    """Entry (i, j) of the shifted pencil as a (real, imag) polynomial pair."""
    d = x_mat.dim
    x2 = x_mat.matmul(x_mat)
    y2 = y_mat.matmul(y_mat)
    x_var = RationalPolynomial.variable("x", variables)
    lam = RationalPolynomial.variable("lam", variables)
    reduced = "y" not in variables
    if reduced:
        shift = x_var * x_var - lam
        y_var = None
    else:
        y_var = RationalPolynomial.variable("y", variables)
        shift = x_var * x_var + y_var * y_var - lam
    rows = []
    for i in range(d):
        row = []
        for j in range(d):
            const = x2[i][j] + y2[i][j]
            re = RationalPolynomial.constant(const.re, variables)
            im = RationalPolynomial.constant(const.im, variables)
            xe = x_mat.entries[i][j]
            re = re - x_var * (2 * xe.re)
            im = im - x_var * (2 * xe.im)
            if not reduced:
                ye = y_mat.entries[i][j]
                re = re - y_var * (2 * ye.re)
                im = im - y_var * (2 * ye.im)
            if i == j:
                re = re + shift
            row.append((re, im))
        rows.append(row)
    return rows


def _determinant_complex_poly(rows, variables, max_terms, max_degree):
    """Determinant of a matrix of (re, im) polynomial pairs.

    Expansion over column subsets (minor dynamic programming): O(d * 2^d)
    polynomial products, far below cofactor recursion for d up to ~9.
    """
    d = len(rows)
    zero = RationalPolynomial.zero(variables)
    minors: dict[frozenset, tuple[RationalPolynomial, RationalPolynomial]] = {
        frozenset(): (RationalPolynomial.constant(1, variables), zero)
    }
    for k in range(d):
        nxt: dict[frozenset, tuple[RationalPolynomial, RationalPolynomial]] = {}
        for cols, (re_m, im_m) in minors.items():
            for c in range(d):
                if c in cols:
                    continue
                re_e, im_e = rows[k][c]
                # sign flips once per already-used column to the right of c
                sign = -1 if sum(1 for s in cols if s > c) % 2 else 1
                prod_re = re_m * re_e - im_m * im_e
                prod_im = re_m * im_e + im_m * re_e
                if sign < 0:
                    prod_re, prod_im = -prod_re, -prod_im
                key = frozenset(cols | {c})
                if key in nxt:
                    a, b = nxt[key]
                    nxt[key] = (a + prod_re, b + prod_im)
                else:
                    nxt[key] = (prod_re, prod_im)
        for re_m, im_m in nxt.values():
            _budget_check(re_m, max_terms, max_degree)
            _budget_check(im_m, max_terms, max_degree)
        minors = nxt
    (re_d, im_d), = minors.values()
    return re_d, im_d


def char_poly_system(x_mat: GaussianRationalMatrix, y_mat: GaussianRationalMatrix,
                     symmetry_reduce: bool = False, *, max_terms: int = 10**6,
                     max_degree: int = 200) -> list[RationalPolynomial]:
    """Exact stationarity system for rational-entry observables.

    Returns [D, dD/dx, dD/dy], or [D, dD/dx] over Q[x, lam] when
    symmetry_reduce is set (valid for rotationally symmetric pairs, where the
    y shift may be fixed to 0).
    """
    if x_mat.dim != y_mat.dim:
        raise ValueError("dimension mismatch")
    variables = ("x", "lam") if symmetry_reduce else ("x", "y", "lam")
    rows = _pencil_entries(x_mat, y_mat, variables)
    re_d, im_d = _determinant_complex_poly(rows, variables, max_terms, max_degree)
    if not im_d.is_zero():
        raise ValueError(
            "determinant has a nonzero imaginary coefficient; the pencil is not Hermitian"
        )
    if re_d.degree_in("lam") != x_mat.dim:
        raise ValueError(
            f"determinant degree in lam is {re_d.degree_in('lam')}, expected {x_mat.dim}"
        )
    out = [re_d, re_d.diff("x")]
    if not symmetry_reduce:
        out.append(re_d.diff("y"))
    return out


# ---------------------------------------------------------------------------
# extended-precision evaluation + interpolation path


def _mpf_to_fraction(v: mpmath.mpf) -> Fraction:
    sign, man, exp, _ = mpmath.mpf(v)._mpf_
    if man == 0:
        if v == 0:
            return Fraction(0)
        raise ValueError(f"cannot convert special value {v!r} to Fraction")
    m = -man if sign else man
    if exp >= 0:
        return Fraction(m * (1 << exp))
    return Fraction(m, 1 << (-exp))


def _mp_det(a) -> mpmath.mpc:
    """LU determinant with partial pivoting at current mpmath precision."""
    n = len(a)
    a = [row[:] for row in a]
    det = mpmath.mpc(1)
    for col in range(n):
        piv = max(range(col, n), key=lambda r: abs(a[r][col]))
        if abs(a[piv][col]) == 0:
            return mpmath.mpc(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det *= a[col][col]
        inv = 1 / a[col][col]
        for r in range(col + 1, n):
            factor = a[r][col] * inv
            if factor == 0:
                continue
            for c in range(col, n):
                a[r][c] -= factor * a[col][c]
    return det


def _lagrange_coeffs(nodes: list[Fraction], values: list[Fraction]) -> list[Fraction]:
    """Exact interpolation: coefficients (ascending) of the unique polynomial
    through (nodes[k], values[k])."""
    n = len(nodes)
    coeffs = [Fraction(0)] * n
    for k in range(n):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for m in range(n):
            if m == k:
                continue
            basis = _poly_mul_linear(basis, -nodes[m])
            denom *= nodes[k] - nodes[m]
        scale = values[k] / denom
        for i, b in enumerate(basis):
            coeffs[i] += scale * b
    return coeffs


def _poly_mul_linear(coeffs: list[Fraction], c0: Fraction) -> list[Fraction]:
    """Multiply a dense polynomial by (t + c0)."""
    out = [Fraction(0)] * (len(coeffs) + 1)
    for i, c in enumerate(coeffs):
        out[i] += c * c0
        out[i + 1] += c
    return out


def reconstruct_rational(value: Fraction, max_denominator: int = CF_DENOMINATOR_CAP,
                         tol: Fraction | None = None) -> Fraction:
    """Snap a high-precision dyadic value to the nearest small rational.

    Walks the continued-fraction convergents and returns the last one with
    denominator below the cap; raises ReconstructionError if the result does
    not actually approximate the input to tol.
    """
    if value.denominator <= max_denominator:
        return value
    h_mm, k_mm = 0, 1  # convergent at index -2
    h_m, k_m = 1, 0  # convergent at index -1
    num, den = value.numerator, value.denominator
    best = None
    while den:
        a = num // den
        num, den = den, num - a * den
        h, k = a * h_m + h_mm, a * k_m + k_mm
        if k > max_denominator:
            break
        best = (h, k)
        h_mm, k_mm, h_m, k_m = h_m, k_m, h, k
    if best is None:
        raise ReconstructionError(
            f"no continued-fraction convergent has denominator <= {max_denominator}"
        )
    approx = Fraction(*best)
    if tol is not None and abs(approx - value) > tol:
        raise ReconstructionError(
            f"no rational with denominator <= {max_denominator} approximates the"
            f" computed coefficient to {float(tol):.3e} (residual {float(abs(approx - value)):.3e})"
        )
    return approx


def _grid_determinant_values(mp_x, mp_y, xs, ys, lams, reduced):
    """det of the pencil at integer shift/eigenvalue nodes, as exact Fractions."""
    d = len(mp_x)
    k_mat = [[sum(mp_x[i][t] * mp_x[t][j] + mp_y[i][t] * mp_y[t][j] for t in range(d))
              for j in range(d)] for i in range(d)]
    values = {}
    imag_peak = mpmath.mpf(0)
    scale_peak = mpmath.mpf(1)
    for xv in xs:
        for yv in ys if not reduced else [0]:
            for lv in lams:
                shift = xv * xv + yv * yv - lv
                a = [
                    [
                        k_mat[i][j] - 2 * xv * mp_x[i][j] - 2 * yv * mp_y[i][j]
                        + (shift if i == j else 0)
                        for j in range(d)
                    ]
                    for i in range(d)
                ]
                det = _mp_det(a)
                imag_peak = max(imag_peak, abs(det.imag))
                scale_peak = max(scale_peak, abs(det.real))
                key = (xv, lv) if reduced else (xv, yv, lv)
                values[key] = _mpf_to_fraction(det.real)
    return values, imag_peak, scale_peak


def char_poly_interpolated(x_op, y_op, precision_bits: int = DEFAULT_PRECISION_BITS,
                           symmetry_reduce: bool = False, *, mp_entries=None,
                           ) -> list[RationalPolynomial]:
    """Recover the exact stationarity system from extended-precision evaluation.

    The determinant is evaluated on an integer tensor grid sized to the known
    degrees (lam-degree = dim, shift degree <= 2*dim), interpolated exactly,
    and each coefficient snapped to a rational by continued fractions, then
    verified by re-evaluation at fresh points.

    mp_entries: optional callable(precision_bits) -> (X, Y) supplying
    entry matrices at working precision (lists of mpmath numbers); by default
    the float entries are taken as exact dyadic values.
    """
    if precision_bits < 128:
        raise ValueError(f"precisionBits must be >= 128, got {precision_bits}")
    from ..linalg import as_matrix

    with mpmath.workprec(precision_bits + 64):
        if mp_entries is not None:
            mp_x, mp_y = mp_entries(precision_bits + 64)
        else:
            mx = as_matrix(x_op)
            my = as_matrix(y_op)
            mp_x = [[mpmath.mpc(mx[i, j]) for j in range(mx.shape[0])]
                    for i in range(mx.shape[0])]
            mp_y = [[mpmath.mpc(my[i, j]) for j in range(my.shape[0])]
                    for i in range(my.shape[0])]
        d = len(mp_x)
        deg_shift = 2 * d
        xs = list(range(deg_shift + 1))
        ys = list(range(deg_shift + 1))
        lams = list(range(d + 1))
        values, imag_peak, scale_peak = _grid_determinant_values(
            mp_x, mp_y, xs, ys, lams, symmetry_reduce
        )
        if imag_peak > scale_peak * mpmath.mpf(2) ** (-precision_bits // 2):
            raise ReconstructionError(
                "pencil determinant has a non-negligible imaginary part; inputs are"
                " not Hermitian at working precision"
            )
        snap_tol = Fraction(1, 2 ** (precision_bits // 2))
        variables = ("x", "lam") if symmetry_reduce else ("x", "y", "lam")

        def interp_axis(getter, nodes):
            return _lagrange_coeffs([Fraction(n) for n in nodes],
                                    [getter(n) for n in nodes])

        terms: dict[tuple[int, ...], Fraction] = {}
        if symmetry_reduce:
            # interpolate in lam per x node, then in x per lam power
            lam_coeffs = {
                xv: interp_axis(lambda lv, xv=xv: values[(xv, lv)], lams) for xv in xs
            }
            for b in range(d + 1):
                x_coeffs = interp_axis(lambda xv, b=b: lam_coeffs[xv][b], xs)
                for a, c in enumerate(x_coeffs):
                    if c:
                        terms[(a, b)] = c
        else:
            lam_coeffs = {
                (xv, yv): interp_axis(lambda lv, xv=xv, yv=yv: values[(xv, yv, lv)], lams)
                for xv in xs for yv in ys
            }
            for b in range(d + 1):
                y_coeffs = {
                    xv: interp_axis(lambda yv, xv=xv, b=b: lam_coeffs[(xv, yv)][b], ys)
                    for xv in xs
                }
                for g in range(deg_shift + 1):
                    x_coeffs = interp_axis(lambda xv, g=g: y_coeffs[xv][g], xs)
                    for a, c in enumerate(x_coeffs):
                        if c:
                            terms[(a, g, b)] = c
        snapped = {
            mono: reconstruct_rational(c, CF_DENOMINATOR_CAP, snap_tol)
            for mono, c in terms.items()
        }
        poly = RationalPolynomial(variables, snapped)
        _verify_reconstruction(poly, mp_x, mp_y, precision_bits, symmetry_reduce, d)
    out = [poly, poly.diff("x")]
    if not symmetry_reduce:
        out.append(poly.diff("y"))
    return out


def _verify_reconstruction(poly, mp_x, mp_y, precision_bits, reduced, d):
    """Check the snapped polynomial at 10 fresh integer points."""
    fresh = []
    for k in range(10):
        xv = 2 * d + 1 + k
        yv = 0 if reduced else (2 * d + 2 + ((k * 3) % 7))
        lv = d + 1 + ((k * 5) % 9)
        fresh.append((xv, yv, lv))
    k_mat = None
    tol = mpmath.mpf(2) ** (-precision_bits // 4)
    for xv, yv, lv in fresh:
        if k_mat is None:
            n = len(mp_x)
            k_mat = [[sum(mp_x[i][t] * mp_x[t][j] + mp_y[i][t] * mp_y[t][j]
                          for t in range(n)) for j in range(n)] for i in range(n)]
        n = len(mp_x)
        shift = xv * xv + yv * yv - lv
        a = [
            [
                k_mat[i][j] - 2 * xv * mp_x[i][j] - 2 * yv * mp_y[i][j]
                + (shift if i == j else 0)
                for j in range(n)
            ]
            for i in range(n)
        ]
        det = _mp_det(a).real
        assign = {"x": Fraction(xv), "lam": Fraction(lv)}
        if not reduced:
            assign["y"] = Fraction(yv)
        model = poly.evaluate(assign)
        scale = max(abs(det), mpmath.mpf(1))
        residual = abs(det - mpmath.mpf(model.numerator) / model.denominator)
        if residual > tol * scale:
            raise ReconstructionError(
                f"reconstructed coefficients fail verification at ({xv},{yv},{lv}):"
                f" residual {mpmath.nstr(residual, 6)} exceeds {mpmath.nstr(tol * scale, 6)};"
                " raise precision_bits"
            )


def spin_mp_entries(j):
    """Entry provider for spin pairs (J_X, J_Y): exact sqrt ladder weights at
    working precision.  Returns a callable suitable for char_poly_interpolated."""
    from ..linalg import half_integer

    jf = half_integer(j)
    d = int(2 * jf) + 1

    def build(prec_bits):
        with mpmath.workprec(prec_bits):
            jj = mpmath.mpf(jf.numerator) / jf.denominator
            ms = [jj - k for k in range(d)]
            c = [mpmath.sqrt(jj * (jj + 1) - m * (m + 1)) for m in ms[1:]]
            zero = mpmath.mpf(0)
            jx = [[zero for _ in range(d)] for _ in range(d)]
            jy = [[mpmath.mpc(0) for _ in range(d)] for _ in range(d)]
            for k in range(d - 1):
                jx[k][k + 1] = c[k] / 2
                jx[k + 1][k] = c[k] / 2
                jy[k][k + 1] = mpmath.mpc(0, -1) * c[k] / 2
                jy[k + 1][k] = mpmath.mpc(0, 1) * c[k] / 2
            return jx, jy

    return build
