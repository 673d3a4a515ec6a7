import json
from fractions import Fraction

import pytest

from varbound.exact import RationalPolynomial


V = ("x", "y", "lam")


def _p(terms):
    return RationalPolynomial(V, terms)


def test_zero_coefficients_dropped():
    p = _p({(1, 0, 0): 1, (0, 1, 0): 0})
    assert len(p.terms) == 1
    assert not RationalPolynomial.zero(V)


def test_ring_axioms_spotcheck():
    x = RationalPolynomial.variable("x", V)
    y = RationalPolynomial.variable("y", V)
    lam = RationalPolynomial.variable("lam", V)
    left = (x + y) * (x - y)
    assert left == x * x - y * y
    assert (x + 1) ** 3 == x**3 + 3 * x**2 + 3 * x + 1
    assert (x * y * lam).total_degree() == 3
    assert (x + lam).degree_in("lam") == 1


def test_lex_leading_term():
    p = _p({(1, 0, 0): 2, (0, 5, 5): 99, (1, 0, 1): 3})
    mono, coeff = p.leading()
    assert mono == (1, 0, 1) and coeff == 3


def test_diff():
    x = RationalPolynomial.variable("x", V)
    lam = RationalPolynomial.variable("lam", V)
    p = x**3 * lam + 2 * x
    assert p.diff("x") == 3 * x**2 * lam + 2
    assert p.diff("y").is_zero()


def test_substitute_and_evaluate():
    x = RationalPolynomial.variable("x", V)
    y = RationalPolynomial.variable("y", V)
    p = x**2 + y
    q = p.substitute("x", Fraction(3, 2))
    assert q.evaluate({"x": 0, "y": 1, "lam": 7}) == Fraction(13, 4)
    assert p.evaluate({"x": 2, "y": -4, "lam": 0}) == 0
    assert p.evaluate_float({"x": 2.0, "y": -4.0, "lam": 0.0}) == pytest.approx(0.0)


def test_drop_and_extend_variables():
    x = RationalPolynomial.variable("x", V)
    p = x**2 + 1
    q = p.drop_variable("y").drop_variable("lam")
    assert q.vars == ("x",)
    r = q.with_variables(V)
    assert r == p
    with pytest.raises(ValueError):
        (x + RationalPolynomial.variable("y", V)).drop_variable("y")


def test_coefficients_in():
    x = RationalPolynomial.variable("x", V)
    lam = RationalPolynomial.variable("lam", V)
    p = x**2 * lam + x**2 + 3 * lam**2
    by_x = p.coefficients_in("x")
    assert set(by_x) == {0, 2}
    assert by_x[2] == lam + 1


def test_primitive_and_content():
    p = _p({(1, 0, 0): Fraction(4, 6), (0, 0, 0): Fraction(-2, 3)})
    prim = p.primitive()
    assert prim == _p({(1, 0, 0): 1, (0, 0, 0): -1})
    neg = -prim
    assert neg.primitive() == prim


def test_pretty_descending():
    p = RationalPolynomial(("lam",), {(1,): 16, (0,): -7})
    assert p.pretty() == "16*lam - 7"
    cubic = RationalPolynomial(("lam",), {(3,): 64, (2,): -336, (1,): 480, (0,): -181})
    assert cubic.pretty() == "64*lam^3 - 336*lam^2 + 480*lam - 181"


def test_json_round_trip():
    p = _p({(2, 0, 1): Fraction(-3, 7), (0, 0, 0): 5})
    blob = json.loads(p.to_json())
    assert blob["vars"] == ["x", "y", "lam"]
    assert ["num/den" not in t for t in blob["terms"]]
    q = RationalPolynomial.from_json_dict(blob)
    assert q == p


def test_invalid_exponents_rejected():
    with pytest.raises(ValueError):
        _p({(1, 0): 1})
    with pytest.raises(ValueError):
        _p({(-1, 0, 0): 1})
