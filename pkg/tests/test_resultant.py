from fractions import Fraction

import numpy as np
import pytest

from varbound.errors import ZeroResultantError
from varbound.exact import (
    RationalPolynomial,
    eliminate_resultant,
    isolate_real_roots,
    resultant_wrt,
    univariate_resultant,
)
from varbound.exact.sturm import dense_coefficients, exact_divide


B = ("x", "lam")


def _bi(terms):
    return RationalPolynomial(B, terms)


def test_univariate_resultant_linear():
    # res_x(x - a, x - b) = a - b
    assert univariate_resultant([-3, 1], [-5, 1]) == Fraction(-2)
    assert univariate_resultant([2, 1], [2, 1]) == 0


def test_univariate_resultant_vs_root_products():
    rng = np.random.default_rng(0)
    for _ in range(15):
        f = [Fraction(int(c)) for c in rng.integers(-5, 6, 4)]
        g = [Fraction(int(c)) for c in rng.integers(-5, 6, 3)]
        if f[-1] == 0 or g[-1] == 0:
            continue
        res = univariate_resultant(f, g)
        fr = np.roots([float(c) for c in reversed(f)])
        gr = np.roots([float(c) for c in reversed(g)])
        oracle = complex(float(f[-1]) ** len(gr) * float(g[-1]) ** len(fr))
        for a in fr:
            for b in gr:
                oracle *= a - b
        assert float(res) == pytest.approx(oracle.real, rel=1e-6, abs=1e-6)


def test_eliminate_linear_pair():
    p = _bi({(1, 0): 1, (0, 1): -1})  # x - lam
    q = _bi({(1, 0): 1, (0, 0): -1})  # x - 1
    r = eliminate_resultant(p, q).primitive()
    assert dense_coefficients(r) in ([Fraction(-1), Fraction(1)], [Fraction(1), Fraction(-1)])


def test_eliminate_requires_bivariate():
    t = RationalPolynomial(("x", "y", "lam"), {(1, 0, 0): 1})
    with pytest.raises(ValueError):
        eliminate_resultant(t, t)


def test_zero_resultant_reported():
    common = _bi({(1, 0): 1, (0, 1): -1})  # x - lam
    p = common * _bi({(1, 0): 1, (0, 0): 3})
    q = common * _bi({(1, 0): 2, (0, 1): 5})
    with pytest.raises(ZeroResultantError):
        eliminate_resultant(p, q)


def test_planted_common_root():
    # p(x, lam) = (x-1)(x-2) + (lam-3) x ; q = (x-1) + (lam-3)
    x = RationalPolynomial.variable("x", B)
    lam = RationalPolynomial.variable("lam", B)
    p = (x - 1) * (x - 2) + (lam - 3) * x
    q = (x - 1) + (lam - 3)
    r = eliminate_resultant(p, q)
    assert r.evaluate({"lam": 3}) == 0


def test_spin_three_half_table_divisibility():
    from varbound.exact import char_poly_interpolated, spin_mp_entries

    d_poly, dx_poly = char_poly_interpolated(
        None, None, 256, True, mp_entries=spin_mp_entries("3/2")
    )
    r = eliminate_resultant(d_poly, dx_poly).primitive()
    table = [Fraction(c) for c in (-181, 480, -336, 64)]
    quotient = exact_divide(dense_coefficients(r), table)
    assert quotient  # division is exact: the table cubic divides the eliminant


def test_resultant_roots_are_common_root_projections():
    rng = np.random.default_rng(7)
    found_any = False
    for trial in range(6):
        coeffs_p = {(i, j): int(rng.integers(-3, 4)) for i in range(3) for j in range(2)}
        coeffs_q = {(i, j): int(rng.integers(-3, 4)) for i in range(3) for j in range(2)}
        coeffs_p[(2, 0)] = coeffs_p.get((2, 0), 0) or 1
        coeffs_q[(2, 0)] = coeffs_q.get((2, 0), 0) or 1
        p = _bi(coeffs_p)
        q = _bi(coeffs_q)
        try:
            r = eliminate_resultant(p, q)
        except ZeroResultantError:
            continue
        if r.degree_in("lam") == 0:
            continue
        roots = isolate_real_roots(r, Fraction(1, 2**40))
        for root in roots:
            lam_hat = root.value
            # oracle: at lam_hat the two univariate polynomials share a root
            px = [
                sum(
                    float(c) * lam_hat**m[1]
                    for m, c in p.terms.items()
                    if m[0] == k
                )
                for k in range(p.degree_in("x") + 1)
            ]
            qx = [
                sum(
                    float(c) * lam_hat**m[1]
                    for m, c in q.terms.items()
                    if m[0] == k
                )
                for k in range(q.degree_in("x") + 1)
            ]
            proots = np.roots(list(reversed(px)))
            vals = [abs(np.polyval(list(reversed(qx)), z)) for z in proots]
            assert min(vals) <= 1e-5 * (1 + max(abs(v) for v in qx))
            found_any = True
    assert found_any


def test_resultant_wrt_trivariate():
    v3 = ("x", "y", "lam")
    x = RationalPolynomial.variable("x", v3)
    y = RationalPolynomial.variable("y", v3)
    lam = RationalPolynomial.variable("lam", v3)
    p = x * x + y * y - lam
    q = x - y
    r = resultant_wrt(p, q, "x")
    # res_x(x^2 + y^2 - lam, x - y) = 2 y^2 - lam
    assert r == RationalPolynomial(("y", "lam"), {(2, 0): 2, (0, 1): -1})
