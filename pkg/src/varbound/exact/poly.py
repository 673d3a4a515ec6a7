"""Sparse multivariate polynomials over exact rational coefficients.

Terms map exponent tuples to Fraction coefficients; zero coefficients are
never stored.  The monomial order is lexicographic in the declared variable
tuple (leftmost variable most significant), which doubles as the elimination
order: variables to eliminate come first, the one to keep comes last.
"""

from __future__ import annotations

import json
from fractions import Fraction
from math import gcd

Monomial = tuple[int, ...]


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    if isinstance(c, float):
        return Fraction(c)  # exact dyadic value of the float
    raise TypeError(f"cannot use {type(c).__name__} as an exact coefficient")


class RationalPolynomial:
    """Immutable-by-convention polynomial over Q in named variables."""

    __slots__ = ("vars", "terms")

    def __init__(self, variables, terms=None):
        self.vars = tuple(variables)
        clean: dict[Monomial, Fraction] = {}
        for mono, coeff in (terms or {}).items():
            c = _as_fraction(coeff)
            if c == 0:
                continue
            mono = tuple(int(e) for e in mono)
            if len(mono) != len(self.vars) or any(e < 0 for e in mono):
                raise ValueError(f"bad exponent tuple {mono} for variables {self.vars}")
            clean[mono] = clean.get(mono, Fraction(0)) + c
            if clean[mono] == 0:
                del clean[mono]
        self.terms = clean

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, variables):
        return cls(variables, {})

    @classmethod
    def constant(cls, c, variables):
        variables = tuple(variables)
        return cls(variables, {tuple([0] * len(variables)): _as_fraction(c)})

    @classmethod
    def variable(cls, name, variables):
        variables = tuple(variables)
        mono = [0] * len(variables)
        mono[variables.index(name)] = 1
        return cls(variables, {tuple(mono): Fraction(1)})

    # -- basic structure ----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, RationalPolynomial):
            return NotImplemented
        return self.vars == other.vars and self.terms == other.terms

    def __hash__(self):
        return hash((self.vars, frozenset(self.terms.items())))

    def total_degree(self) -> int:
        return max((sum(m) for m in self.terms), default=0)

    def degree_in(self, name: str) -> int:
        k = self.vars.index(name)
        return max((m[k] for m in self.terms), default=0)

    def leading(self) -> tuple[Monomial, Fraction]:
        """Leading (monomial, coefficient) under lex order on self.vars."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        mono = max(self.terms)
        return mono, self.terms[mono]

    def constant_value(self) -> Fraction:
        if any(sum(m) > 0 for m in self.terms):
            raise ValueError("polynomial is not constant")
        return next(iter(self.terms.values()), Fraction(0))

    # -- ring operations ----------------------------------------------------

    def _check_same_vars(self, other):
        if self.vars != other.vars:
            raise ValueError(f"variable mismatch: {self.vars} vs {other.vars}")

    def __add__(self, other):
        if not isinstance(other, RationalPolynomial):
            other = RationalPolynomial.constant(other, self.vars)
        self._check_same_vars(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            s = terms.get(m, Fraction(0)) + c
            if s == 0:
                terms.pop(m, None)
            else:
                terms[m] = s
        out = RationalPolynomial.__new__(RationalPolynomial)
        out.vars = self.vars
        out.terms = terms
        return out

    __radd__ = __add__

    def __neg__(self):
        out = RationalPolynomial.__new__(RationalPolynomial)
        out.vars = self.vars
        out.terms = {m: -c for m, c in self.terms.items()}
        return out

    def __sub__(self, other):
        if not isinstance(other, RationalPolynomial):
            other = RationalPolynomial.constant(other, self.vars)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, RationalPolynomial):
            c = _as_fraction(other)
            if c == 0:
                return RationalPolynomial.zero(self.vars)
            out = RationalPolynomial.__new__(RationalPolynomial)
            out.vars = self.vars
            out.terms = {m: cc * c for m, cc in self.terms.items()}
            return out
        self._check_same_vars(other)
        terms: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                s = terms.get(m, Fraction(0)) + c1 * c2
                if s == 0:
                    terms.pop(m, None)
                else:
                    terms[m] = s
        out = RationalPolynomial.__new__(RationalPolynomial)
        out.vars = self.vars
        out.terms = terms
        return out

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = RationalPolynomial.constant(1, self.vars)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def monomial_times(self, mono: Monomial, coeff: Fraction) -> "RationalPolynomial":
        out = RationalPolynomial.__new__(RationalPolynomial)
        out.vars = self.vars
        out.terms = {
            tuple(a + b for a, b in zip(m, mono)): c * coeff for m, c in self.terms.items()
        }
        return out

    # -- calculus and evaluation --------------------------------------------

    def diff(self, name: str) -> "RationalPolynomial":
        k = self.vars.index(name)
        terms: dict[Monomial, Fraction] = {}
        for m, c in self.terms.items():
            e = m[k]
            if e == 0:
                continue
            mm = list(m)
            mm[k] = e - 1
            terms[tuple(mm)] = c * e
        return RationalPolynomial(self.vars, terms)

    def substitute(self, name: str, value) -> "RationalPolynomial":
        """Replace one variable by an exact rational value; the variable stays
        declared (with exponent 0 everywhere) so variable tuples stay aligned."""
        k = self.vars.index(name)
        value = _as_fraction(value)
        terms: dict[Monomial, Fraction] = {}
        for m, c in self.terms.items():
            mm = list(m)
            e = mm[k]
            mm[k] = 0
            mono = tuple(mm)
            s = terms.get(mono, Fraction(0)) + c * value**e
            if s == 0:
                terms.pop(mono, None)
            else:
                terms[mono] = s
        return RationalPolynomial(self.vars, terms)

    def evaluate(self, assignment: dict) -> Fraction:
        missing = [v for v in self.vars if v not in assignment]
        if missing:
            raise ValueError(f"missing values for {missing}")
        vals = [_as_fraction(assignment[v]) for v in self.vars]
        total = Fraction(0)
        for m, c in self.terms.items():
            p = c
            for v, e in zip(vals, m):
                if e:
                    p *= v**e
            total += p
        return total

    def evaluate_float(self, assignment: dict) -> float:
        vals = [float(assignment[v]) for v in self.vars]
        total = 0.0
        for m, c in self.terms.items():
            p = float(c)
            for v, e in zip(vals, m):
                if e:
                    p *= v**e
            total += p
        return total

    def drop_variable(self, name: str) -> "RationalPolynomial":
        """Remove a variable that no longer occurs (exponent 0 in every term)."""
        k = self.vars.index(name)
        if any(m[k] for m in self.terms):
            raise ValueError(f"variable {name!r} still occurs")
        new_vars = self.vars[:k] + self.vars[k + 1 :]
        return RationalPolynomial(
            new_vars, {m[:k] + m[k + 1 :]: c for m, c in self.terms.items()}
        )

    def with_variables(self, variables) -> "RationalPolynomial":
        """Re-express over a variable tuple that contains self.vars."""
        variables = tuple(variables)
        idx = [variables.index(v) for v in self.vars]
        terms = {}
        for m, c in self.terms.items():
            mono = [0] * len(variables)
            for pos, e in zip(idx, m):
                mono[pos] = e
            terms[tuple(mono)] = c
        return RationalPolynomial(variables, terms)

    def coefficients_in(self, name: str) -> dict[int, "RationalPolynomial"]:
        """View as univariate in one variable: exponent -> coefficient polynomial
        (over the same variable tuple, with that variable's exponent zeroed)."""
        k = self.vars.index(name)
        out: dict[int, dict[Monomial, Fraction]] = {}
        for m, c in self.terms.items():
            e = m[k]
            mm = list(m)
            mm[k] = 0
            out.setdefault(e, {})[tuple(mm)] = c
        return {e: RationalPolynomial(self.vars, t) for e, t in out.items()}

    # -- normal forms ---------------------------------------------------------

    def content(self) -> Fraction:
        """Positive rational c such that self / c has coprime integer
        coefficients (primitive integer form)."""
        if not self.terms:
            return Fraction(1)
        num = 0
        den = 1
        for c in self.terms.values():
            num = gcd(num, abs(c.numerator))
            den = den * c.denominator // gcd(den, c.denominator)
        return Fraction(num, den)

    def primitive(self) -> "RationalPolynomial":
        """Integer-primitive form with positive leading coefficient."""
        if not self.terms:
            return self
        scaled = self * (1 / self.content())
        if scaled.leading()[1] < 0:
            scaled = -scaled
        return scaled

    def monic(self) -> "RationalPolynomial":
        if not self.terms:
            return self
        return self * (1 / self.leading()[1])

    # -- presentation ---------------------------------------------------------

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: t[0], reverse=True)

    def pretty(self) -> str:
        """Human-readable form, descending lex order, e.g. '16*lam - 7'."""
        if not self.terms:
            return "0"
        parts = []
        for mono, coeff in self.sorted_terms():
            factors = []
            for v, e in zip(self.vars, mono):
                if e == 1:
                    factors.append(v)
                elif e > 1:
                    factors.append(f"{v}^{e}")
            c = coeff
            body = "*".join(factors)
            if not body:
                chunk = str(abs(c))
            elif abs(c) == 1:
                chunk = body
            else:
                chunk = f"{abs(c)}*{body}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, chunk))
        return _join_signed(parts)

    def to_json_dict(self) -> dict:
        return {
            "vars": list(self.vars),
            "terms": [
                [list(m), f"{c.numerator}/{c.denominator}"] for m, c in self.sorted_terms()
            ],
        }

    @classmethod
    def from_json_dict(cls, obj) -> "RationalPolynomial":
        variables = tuple(obj["vars"])
        terms = {tuple(m): Fraction(s) for m, s in obj["terms"]}
        return cls(variables, terms)

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())

    def __repr__(self):
        return f"RationalPolynomial({self.pretty()!r})"


def _join_signed(parts) -> str:
    sign0, chunk0 = parts[0]
    out = ("-" if sign0 == "-" else "") + chunk0
    for sign, chunk in parts[1:]:
        out += f" {sign} {chunk}"
    return out
