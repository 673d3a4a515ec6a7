"""Buchberger's algorithm for reduced lexicographic Groebner bases.

With the elimination variable order (shift variables first, the eigenvalue
variable last), the reduced basis of a stationarity system contains a
univariate eliminant in the last variable, which is what the exact bound
pipeline consumes.  Pair selection is by minimal lcm; the coprime-lead and
chain criteria prune S-pairs; a term/degree budget aborts runaway expansion.
"""

from __future__ import annotations

import os
from fractions import Fraction

from ..errors import BudgetExceededError
from .poly import Monomial, RationalPolynomial

DEFAULT_MAX_TERMS = 10**6
DEFAULT_MAX_TOTAL_DEGREE = 200
BUDGET_ENV_VAR = "VARBOUND_BUDGET"


def term_budget_from_env(default: int = DEFAULT_MAX_TERMS) -> int:
    raw = os.environ.get(BUDGET_ENV_VAR)
    if not raw:
        return default
    try:
        return int(raw)
    except ValueError as exc:
        raise ValueError(f"{BUDGET_ENV_VAR} must be an integer, got {raw!r}") from exc


def _divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def _mono_sub(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x - y for x, y in zip(a, b))


def reduce_poly(p: RationalPolynomial, basis: list[RationalPolynomial],
                ) -> RationalPolynomial:
    """Full normal form of p modulo the basis (every term reduced)."""
    if not basis:
        return p
    variables = p.vars
    remainder_terms: dict[Monomial, Fraction] = {}
    work = p
    leads = [(g.leading()[0], g.leading()[1], g) for g in basis if not g.is_zero()]
    while not work.is_zero():
        mono, coeff = work.leading()
        hit = None
        for lm, lc, g in leads:
            if _divides(lm, mono):
                hit = (lm, lc, g)
                break
        if hit is None:
            remainder_terms[mono] = remainder_terms.get(mono, Fraction(0)) + coeff
            work = work - RationalPolynomial(variables, {mono: coeff})
        else:
            lm, lc, g = hit
            work = work - g.monomial_times(_mono_sub(mono, lm), coeff / lc)
    return RationalPolynomial(variables, remainder_terms)


def s_polynomial(f: RationalPolynomial, g: RationalPolynomial) -> RationalPolynomial:
    lf, cf = f.leading()
    lg, cg = g.leading()
    lcm = _lcm(lf, lg)
    return f.monomial_times(_mono_sub(lcm, lf), 1 / cf) - g.monomial_times(
        _mono_sub(lcm, lg), 1 / cg
    )


def buchberger(polys: list[RationalPolynomial], order: str = "lex", *,
               max_terms: int | None = None,
               max_total_degree: int = DEFAULT_MAX_TOTAL_DEGREE,
               ) -> list[RationalPolynomial]:
    """Reduced Groebner basis under lex order on the polynomials' variable tuple.

    Raises BudgetExceededError (carrying the partial basis) when intermediate
    polynomials outgrow the term or total-degree budget; callers may switch to
    a resultant-based elimination in that case.
    """
    if order != "lex":
        raise ValueError(f"only lex order is supported, got {order!r}")
    budget = term_budget_from_env(max_terms if max_terms is not None else DEFAULT_MAX_TERMS)
    basis = [p.primitive() for p in polys if not p.is_zero()]
    if not basis:
        return []
    variables = basis[0].vars
    if any(p.vars != variables for p in basis):
        raise ValueError("all polynomials must share a variable tuple")

    pairs = {(i, j) for i in range(len(basis)) for j in range(i)}
    processed: set[tuple[int, int]] = set()

    def lead(i: int) -> Monomial:
        return basis[i].leading()[0]

    while pairs:
        # normal selection: smallest lcm in (total degree, lex) order
        i, j = min(pairs, key=lambda ij: (sum(_lcm(lead(ij[0]), lead(ij[1]))),
                                          _lcm(lead(ij[0]), lead(ij[1]))))
        pairs.discard((i, j))
        processed.add((i, j))
        li, lj = lead(i), lead(j)
        lcm = _lcm(li, lj)
        # coprime criterion
        if _mono_sub(lcm, li) == lj:
            continue
        # chain criterion: some k with lead(k) | lcm and both pairs done
        skip = False
        for k in range(len(basis)):
            if k in (i, j) or not _divides(lead(k), lcm):
                continue
            pik = (max(i, k), min(i, k))
            pjk = (max(j, k), min(j, k))
            if pik not in pairs and pjk not in pairs:
                skip = True
                break
        if skip:
            continue
        s = reduce_poly(s_polynomial(basis[i], basis[j]), basis)
        if s.is_zero():
            continue
        if len(s.terms) > budget or s.total_degree() > max_total_degree:
            raise BudgetExceededError(
                f"basis element would have {len(s.terms)} terms and total degree"
                f" {s.total_degree()}, beyond the configured budget",
                partial=basis,
            )
        s = s.primitive()
        basis.append(s)
        new = len(basis) - 1
        for k in range(new):
            pairs.add((new, k))
    return _interreduce(basis)


def _interreduce(basis: list[RationalPolynomial]) -> list[RationalPolynomial]:
    """Reduce every element against the others; drop zeros; monic-normalize."""
    work = [p for p in basis if not p.is_zero()]
    changed = True
    while changed:
        changed = False
        for idx in range(len(work)):
            others = work[:idx] + work[idx + 1 :]
            r = reduce_poly(work[idx], others)
            if r.is_zero():
                work.pop(idx)
                changed = True
                break
            if r.terms != work[idx].terms:
                work[idx] = r
                changed = True
                break
    out = [p.monic() for p in work]
    out.sort(key=lambda p: p.leading()[0])
    return out


def eliminant_from_basis(basis: list[RationalPolynomial], keep: str,
                         ) -> RationalPolynomial | None:
    """The basis element involving only `keep`, if the order eliminated the rest."""
    for p in basis:
        if all(v == keep or p.degree_in(v) == 0 for v in p.vars):
            if p.degree_in(keep) > 0:
                return p
    return None
