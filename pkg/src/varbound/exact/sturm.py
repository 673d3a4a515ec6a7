"""Real-root isolation for univariate rational polynomials.

Square-free reduction, Sturm sequences, and bisection refinement, all in
exact Fraction arithmetic: each returned interval provably contains exactly
one real root and is narrower than the requested width.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .poly import RationalPolynomial


@dataclass(frozen=True)
class IsolatedRoot:
    """Rational interval [lo, hi] containing exactly one real root."""

    lo: Fraction
    hi: Fraction

    @property
    def value(self) -> float:
        return float((self.lo + self.hi) / 2)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo


def dense_coefficients(p) -> list[Fraction]:
    """Ascending dense coefficient list of a univariate polynomial."""
    if isinstance(p, RationalPolynomial):
        live = [v for v in p.vars if p.degree_in(v) > 0]
        if len(live) > 1:
            raise ValueError(f"polynomial is not univariate: depends on {live}")
        name = live[0] if live else (p.vars[-1] if p.vars else None)
        deg = p.degree_in(name) if name else 0
        out = [Fraction(0)] * (deg + 1)
        k = p.vars.index(name) if name else 0
        for mono, c in p.terms.items():
            out[mono[k] if p.vars else 0] += c
        return _strip(out)
    return _strip([Fraction(c) for c in p])


def _strip(c: list[Fraction]) -> list[Fraction]:
    while c and c[-1] == 0:
        c.pop()
    return c


def poly_eval(c: list[Fraction], t: Fraction) -> Fraction:
    acc = Fraction(0)
    for coeff in reversed(c):
        acc = acc * t + coeff
    return acc


def _derivative(c: list[Fraction]) -> list[Fraction]:
    return [k * c[k] for k in range(1, len(c))]


def _primitive_keep_sign(c: list[Fraction]) -> list[Fraction]:
    """Scale by a positive rational to coprime integer coefficients.

    Sign-preserving, so it is safe inside Sturm sequences where flipping a
    chain element would corrupt the variation count.
    """
    if not c:
        return c
    num = 0
    den = 1
    for v in c:
        num = gcd(num, abs(v.numerator))
        den = den * v.denominator // gcd(den, v.denominator)
    scale = Fraction(den, num) if num else Fraction(1)
    return [v * scale for v in c]


def _primitive(c: list[Fraction]) -> list[Fraction]:
    """Scale to coprime integer coefficients with positive leading coefficient."""
    out = _primitive_keep_sign(c)
    if out and out[-1] < 0:
        out = [-v for v in out]
    return out


def _poly_divmod(a: list[Fraction], b: list[Fraction]):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = a[:]
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    inv = 1 / b[-1]
    while len(a) >= len(b) and a:
        k = len(a) - len(b)
        f = a[-1] * inv
        q[k] = f
        for i, bc in enumerate(b):
            a[k + i] -= f * bc
        a = _strip(a)
    return q, a


def poly_gcd(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    """Monic gcd over Q (Euclid with primitive rescaling to tame growth)."""
    a, b = _primitive(_strip(a[:])), _primitive(_strip(b[:]))
    while b:
        _, r = _poly_divmod(a, b)
        a, b = b, _primitive(r)
    if not a:
        return []
    return [v / a[-1] for v in a]


def exact_divide(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    q, r = _poly_divmod(a, b)
    if r:
        raise ValueError("division is not exact")
    return q


def squarefree_part(c: list[Fraction]) -> list[Fraction]:
    c = _strip(c[:])
    if len(c) <= 1:
        return c
    g = poly_gcd(c, _derivative(c))
    if len(g) <= 1:
        return _primitive(c)
    return _primitive(exact_divide(c, g))


def sturm_chain(c: list[Fraction]) -> list[list[Fraction]]:
    """Sturm sequence of a square-free polynomial.

    Chain elements are rescaled to primitive integers by positive factors
    only; a sign flip would break the variation counting.
    """
    chain = [_primitive_keep_sign(c[:]), _primitive_keep_sign(_derivative(c))]
    while chain[-1]:
        _, r = _poly_divmod(chain[-2], chain[-1])
        if not r:
            break
        chain.append(_primitive_keep_sign([-v for v in r]))
    return [p for p in chain if p]


def _variations(signs: list[int]) -> int:
    signs = [s for s in signs if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a * b < 0)


def _sign_at(c: list[Fraction], num: int, den: int) -> int:
    """Sign of P(num/den), den > 0, via homogenized integer Horner.

    Requires integer coefficients (as produced by the primitive rescaling).
    """
    if any(v.denominator != 1 for v in c):
        raise ValueError("sign evaluation requires integer coefficients")
    acc = c[-1].numerator
    qpow = 1
    for k in range(len(c) - 2, -1, -1):
        qpow *= den
        acc = acc * num + c[k].numerator * qpow
    return (acc > 0) - (acc < 0)


def variations_at(chain, t: Fraction) -> int:
    num, den = t.numerator, t.denominator
    return _variations([_sign_at(p, num, den) for p in chain])


def _sign(v: Fraction) -> int:
    return (v > 0) - (v < 0)


def root_bound(c: list[Fraction]) -> Fraction:
    """Dyadic Cauchy bound: all real roots lie in (-B, B), B a power of two."""
    lead = abs(c[-1])
    m = max((abs(v) for v in c[:-1]), default=Fraction(0))
    raw = 1 + m / lead
    b = Fraction(1)
    while b < raw:
        b *= 2
    return b


def count_roots_in(chain, lo: Fraction, hi: Fraction) -> int:
    """Number of distinct real roots in the half-open interval (lo, hi]."""
    return variations_at(chain, lo) - variations_at(chain, hi)


def isolate_real_roots(p, width=Fraction(1, 2**48)) -> list[IsolatedRoot]:
    """Disjoint rational intervals around every real root, ascending.

    The square-free part is isolated via Sturm-count bisection and each
    interval is then narrowed below the requested width.
    """
    width = Fraction(width)
    if width <= 0:
        raise ValueError("width must be positive")
    c = dense_coefficients(p)
    if not c:
        raise ValueError("the zero polynomial has no isolated roots")
    if len(c) == 1:
        return []
    sf = squarefree_part(c)
    if len(sf) == 1:
        return []
    chain = sturm_chain(sf)
    bound = root_bound(sf)
    intervals: list[tuple[Fraction, Fraction]] = []
    stack = [(-bound, bound)]
    while stack:
        lo, hi = stack.pop()
        n = count_roots_in(chain, lo, hi)
        if n == 0:
            continue
        if n == 1:
            intervals.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        # a root exactly at the split point lands in the left half-open piece
        stack.append((lo, mid))
        stack.append((mid, hi))
    out = []
    for lo, hi in intervals:
        while hi - lo > width:
            mid = (lo + hi) / 2
            if count_roots_in(chain, lo, mid) == 1:
                hi = mid
            else:
                lo = mid
        out.append(IsolatedRoot(lo=lo, hi=hi))
    out.sort(key=lambda r: r.lo)
    return out
