from fractions import Fraction

import pytest

from varbound.exact import RationalPolynomial, isolate_real_roots
from varbound.exact.sturm import (
    count_roots_in,
    dense_coefficients,
    poly_gcd,
    squarefree_part,
    sturm_chain,
)


def _lam_poly(coeffs):
    return RationalPolynomial(("lam",), {(k,): c for k, c in enumerate(coeffs)})


def test_linear_root():
    roots = isolate_real_roots(_lam_poly([-1, 4]))
    assert len(roots) == 1
    assert roots[0].lo <= Fraction(1, 4) <= roots[0].hi
    assert roots[0].value == pytest.approx(0.25, abs=1e-12)


def test_spin_three_half_cubic():
    cubic = _lam_poly([-181, 480, -336, 64])
    roots = isolate_real_roots(cubic)
    assert len(roots) == 3
    assert roots[0].value == pytest.approx(0.6009, abs=1e-4)
    assert all(b.lo > a.hi for a, b in zip(roots, roots[1:]))


def test_no_real_roots():
    assert isolate_real_roots(_lam_poly([1, 0, 1])) == []


def test_width_contract():
    width = Fraction(1, 2**30)
    roots = isolate_real_roots(_lam_poly([-2, 0, 1]), width)  # sqrt(2)
    assert len(roots) == 2
    for r in roots:
        assert r.width <= width


def test_multiple_roots_counted_once():
    # (lam - 1)^2 (lam + 2)
    p = _lam_poly([2, -3, 0, 1])
    roots = isolate_real_roots(p)
    assert len(roots) == 2
    assert roots[0].value == pytest.approx(-2.0, abs=1e-10)
    assert roots[1].value == pytest.approx(1.0, abs=1e-10)


def test_rational_roots_land_in_intervals():
    # roots 1/3 and -5/7
    p = _lam_poly([Fraction(-5, 21), Fraction(1, 3) - Fraction(5, 7), 1])
    roots = isolate_real_roots(p)
    values = sorted(r.value for r in roots)
    assert values[0] == pytest.approx(-5 / 7, abs=1e-12)
    assert values[1] == pytest.approx(1 / 3, abs=1e-12)


def test_dense_coefficients_validation():
    p = RationalPolynomial(("x", "lam"), {(1, 1): 1})
    with pytest.raises(ValueError):
        dense_coefficients(p)
    assert dense_coefficients(_lam_poly([1, 2])) == [1, 2]


def test_squarefree_part():
    # (lam-1)^3 -> lam - 1 (up to a positive constant)
    cube = [Fraction(c) for c in (-1, 3, -3, 1)]
    sf = squarefree_part(cube)
    assert len(sf) == 2
    assert sf[1] > 0 and sf[0] / sf[1] == -1


def test_poly_gcd():
    # gcd((x-1)(x-2), (x-1)(x-3)) = x - 1 (monic)
    a = [Fraction(2), Fraction(-3), Fraction(1)]
    b = [Fraction(3), Fraction(-4), Fraction(1)]
    g = poly_gcd(a, b)
    assert g == [Fraction(-1), Fraction(1)]


def test_sturm_chain_counts():
    # Wilkinson-lite: roots 1..5
    p = [Fraction(-120), Fraction(274), Fraction(-225), Fraction(85), Fraction(-15), Fraction(1)]
    chain = sturm_chain(p)
    assert count_roots_in(chain, Fraction(0), Fraction(6)) == 5
    assert count_roots_in(chain, Fraction(3, 2), Fraction(7, 2)) == 2
    assert count_roots_in(chain, Fraction(1), Fraction(5)) == 4  # (1, 5] excludes root 1


def test_isolation_separates_close_roots():
    # roots at 0 and 1/1024
    p = _lam_poly([0, Fraction(-1, 1024), 1]).terms
    poly = RationalPolynomial(("lam",), p)
    roots = isolate_real_roots(poly)
    assert len(roots) == 2
    assert roots[0].hi < roots[1].lo
