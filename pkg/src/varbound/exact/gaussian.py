"""Exact complex-rational scalars and Hermitian matrices over them."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np


def _fr(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, (int, str)):
        return Fraction(v)
    if isinstance(v, float):
        return Fraction(v)  # exact dyadic value
    raise TypeError(f"cannot convert {type(v).__name__} to Fraction")


@dataclass(frozen=True)
class GaussianRational:
    """a + b*i with rational a, b."""

    re: Fraction
    im: Fraction = Fraction(0)

    @classmethod
    def of(cls, value) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, complex):
            return cls(_fr(value.real), _fr(value.imag))
        return cls(_fr(value), Fraction(0))

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def __add__(self, other):
        other = GaussianRational.of(other)
        return GaussianRational(self.re + other.re, self.im + other.im)

    def __sub__(self, other):
        other = GaussianRational.of(other)
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __mul__(self, other):
        other = GaussianRational.of(other)
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def to_complex(self) -> complex:
        return complex(self.re) + 1j * complex(self.im)


class GaussianRationalMatrix:
    """Exactly Hermitian matrix with Gaussian-rational entries."""

    __slots__ = ("dim", "entries")

    def __init__(self, entries):
        rows = [[GaussianRational.of(v) for v in row] for row in entries]
        d = len(rows)
        if d < 1 or any(len(r) != d for r in rows):
            raise ValueError("expected a square matrix")
        for i in range(d):
            for j in range(d):
                if rows[i][j] != rows[j][i].conjugate():
                    raise ValueError(
                        f"matrix is not exactly Hermitian at entry ({i},{j})"
                    )
        self.dim = d
        self.entries = rows

    @classmethod
    def from_float(cls, matrix) -> "GaussianRationalMatrix":
        """Exact dyadic lift of a numerically Hermitian float matrix.

        Symmetrizes first (averaging conjugate pairs is exact in binary
        floating point up to the final halving, done in Fraction arithmetic).
        """
        m = np.asarray(matrix, dtype=complex)
        d = m.shape[0]
        rows = []
        for i in range(d):
            row = []
            for j in range(d):
                re = (_fr(float(m[i, j].real)) + _fr(float(m[j, i].real))) / 2
                im = (_fr(float(m[i, j].imag)) - _fr(float(m[j, i].imag))) / 2
                row.append(GaussianRational(re, im))
            rows.append(row)
        return cls(rows)

    def to_complex_ndarray(self) -> np.ndarray:
        return np.array(
            [[v.to_complex() for v in row] for row in self.entries], dtype=complex
        )

    def matmul(self, other: "GaussianRationalMatrix") -> list[list[GaussianRational]]:
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")
        d = self.dim
        out = []
        for i in range(d):
            row = []
            for j in range(d):
                acc = GaussianRational(Fraction(0))
                for k in range(d):
                    acc = acc + self.entries[i][k] * other.entries[k][j]
                row.append(acc)
            out.append(row)
        return out
