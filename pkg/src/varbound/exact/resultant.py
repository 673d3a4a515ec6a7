"""Resultant-based variable elimination.

The resultant of two polynomials with respect to a variable vanishes exactly
at parameter values where they share a root in that variable, which removes
one variable from a stationarity system per application.  Multivariate
resultants are computed by evaluation at integer nodes plus exact Lagrange
interpolation, with the degree bound deg_v(Res) <= deg_e(p) deg_v(q) +
deg_e(q) deg_v(p); a verification at extra nodes guards the bound.
"""

from __future__ import annotations

from fractions import Fraction

from ..errors import ZeroResultantError
from .charpoly import _lagrange_coeffs
from .poly import RationalPolynomial
from .sturm import _strip, dense_coefficients, poly_eval


def univariate_resultant(f: list[Fraction], g: list[Fraction]) -> Fraction:
    """Resultant of two dense univariate polynomials via the Euclidean scheme."""
    f = _strip([Fraction(c) for c in f])
    g = _strip([Fraction(c) for c in g])
    if not f or not g:
        return Fraction(0)
    res = Fraction(1)
    while True:
        df, dg = len(f) - 1, len(g) - 1
        if dg == 0:
            return res * g[0] ** df
        if df < dg:
            if (df * dg) % 2:
                res = -res
            f, g = g, f
            continue
        r = _poly_mod(f, g)
        if not r:
            return Fraction(0)
        dr = len(r) - 1
        res *= g[-1] ** (df - dr)
        if (df * dg) % 2:
            res = -res
        f, g = g, r


def _poly_mod(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a = a[:]
    inv = 1 / b[-1]
    while len(a) >= len(b) and a:
        k = len(a) - len(b)
        factor = a[-1] * inv
        for i, bc in enumerate(b):
            a[k + i] -= factor * bc
        a = _strip(a)
    return a


def resultant_wrt(p: RationalPolynomial, q: RationalPolynomial, var: str,
                  ) -> RationalPolynomial:
    """Resultant of p and q with respect to var, over the remaining variables.

    Evaluation-interpolation: the remaining variables are specialized on an
    integer tensor grid chosen to avoid leading-coefficient drop, univariate
    resultants are computed exactly at every node, and the result is
    interpolated back coefficient by coefficient.
    """
    if p.vars != q.vars:
        raise ValueError("polynomials must share a variable tuple")
    if var not in p.vars:
        raise ValueError(f"unknown variable {var!r}")
    others = [v for v in p.vars if v != var]
    dp_e, dq_e = p.degree_in(var), q.degree_in(var)
    if dp_e == 0 and dq_e == 0:
        raise ValueError(f"neither input depends on {var!r}")
    if p.is_zero() or q.is_zero():
        return RationalPolynomial.zero(tuple(others))
    if dp_e == 0:
        return _power_drop(p, q, others, dq_e)
    if dq_e == 0:
        return _power_drop(q, p, others, dp_e)

    bounds = {
        v: dp_e * q.degree_in(v) + dq_e * p.degree_in(v) for v in others
    }
    lead_p = p.coefficients_in(var)[dp_e]
    lead_q = q.coefficients_in(var)[dq_e]

    def eval_nodes(remaining, assignment):
        """Recursively sample over `remaining` variables (centered integers)."""
        if not remaining:
            fp = _specialized(p, var, assignment)
            fq = _specialized(q, var, assignment)
            return univariate_resultant(fp, fq)
        v = remaining[0]
        nodes: list[Fraction] = []
        vals: list[Fraction] = []
        t = 0
        need = bounds[v] + 1
        while len(nodes) < need:
            if t > 8 * need + 64:
                raise ArithmeticError(
                    f"could not find {need} evaluation nodes for {v!r} avoiding"
                    " leading-coefficient drop"
                )
            node = Fraction((t + 1) // 2 if t % 2 else -(t // 2))
            t += 1
            cand = dict(assignment)
            cand[v] = node
            if _drops_lead(lead_p, cand) or _drops_lead(lead_q, cand):
                continue
            nodes.append(node)
            vals.append(eval_nodes(remaining[1:], cand))
        return (nodes, vals)

    # innermost returns Fractions; outer levels return (nodes, values) trees
    tree = eval_nodes(others, {})
    return _interpolate_tree(tree, others, tuple(others))


def _drops_lead(lead_poly: RationalPolynomial, partial: dict) -> bool:
    """True when the partial assignment provably kills the leading coefficient."""
    current = lead_poly
    for v, val in partial.items():
        if v in current.vars:
            current = current.substitute(v, val)
    if current.is_zero():
        return True
    if all(current.degree_in(v) == 0 for v in current.vars):
        return current.constant_value() == 0
    return False


def _specialized(poly: RationalPolynomial, var: str, assignment: dict) -> list[Fraction]:
    current = poly
    for v, val in assignment.items():
        current = current.substitute(v, val)
    k = current.vars.index(var)
    out = [Fraction(0)] * (current.degree_in(var) + 1)
    for mono, c in current.terms.items():
        out[mono[k]] += c
    return _strip(out)


def _interpolate_tree(tree, remaining, out_vars):
    if not remaining:
        return RationalPolynomial.constant(tree, out_vars)
    nodes, vals = tree
    sub = [_interpolate_tree(v, remaining[1:], out_vars) for v in vals]
    # interpolate polynomial-valued data: do it coefficient-wise via Lagrange
    # on each monomial of the children
    monos = set()
    for s in sub:
        monos.update(s.terms)
    var = remaining[0]
    k = out_vars.index(var)
    terms: dict[tuple[int, ...], Fraction] = {}
    for mono in monos:
        series = [s.terms.get(mono, Fraction(0)) for s in sub]
        coeffs = _lagrange_coeffs(nodes, series)
        for e, c in enumerate(coeffs):
            if c == 0:
                continue
            mm = list(mono)
            mm[k] += e
            key = tuple(mm)
            terms[key] = terms.get(key, Fraction(0)) + c
    return RationalPolynomial(out_vars, terms)


def _power_drop(const_poly, other, others, power):
    base = RationalPolynomial(
        tuple(others),
        {tuple(m[i] for i, v in enumerate(const_poly.vars) if v in others): c
         for m, c in const_poly.terms.items()},
    )
    return base**power


def eliminate_resultant(p: RationalPolynomial, q: RationalPolynomial,
                        ) -> RationalPolynomial:
    """Eliminate the first of two variables: Res over vars[0], univariate in vars[1].

    Content and duplicate factors are the caller's business (square-free
    reduction happens before root isolation); a zero resultant raises
    ZeroResultantError since it means the inputs share a factor.
    """
    if p.vars != q.vars:
        raise ValueError("polynomials must share a variable tuple")
    if len(p.vars) != 2:
        raise ValueError(f"expected bivariate polynomials, got variables {p.vars}")
    elim = p.vars[0]
    res = resultant_wrt(p, q, elim)
    if res.is_zero():
        raise ZeroResultantError(
            f"resultant in {elim!r} vanished identically: inputs share a common factor"
        )
    # verify the interpolated resultant at a few fresh nodes
    keep = p.vars[1]
    dp_e, dq_e = p.degree_in(elim), q.degree_in(elim)
    lead_p = p.coefficients_in(elim).get(dp_e)
    lead_q = q.coefficients_in(elim).get(dq_e)
    checked = 0
    probe = Fraction(10_007)
    while checked < 2:
        if not (_drops_lead(lead_p, {keep: probe}) or _drops_lead(lead_q, {keep: probe})):
            fp = _specialized(p, elim, {keep: probe})
            fq = _specialized(q, elim, {keep: probe})
            direct = univariate_resultant(fp, fq)
            via = poly_eval(dense_coefficients(res), probe)
            if direct != via:
                raise ArithmeticError(
                    "resultant verification failed at a probe node; degree bound violated"
                )
            checked += 1
        probe = -probe if probe > 0 else -probe + 2
    return res
