"""Dense Hermitian linear algebra: operator and state types, spin matrices, sampling.

Everything here targets small dense matrices (dimension up to a few dozen) and is
deterministic for fixed inputs, which the optimization and geometry layers rely on.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DimensionMismatchError, EigenConvergenceError, HermiticityError

HERMITICITY_ATOL = 1e-12
EIG_RESIDUAL_RTOL = 1e-10


def _worst_asymmetry(m: np.ndarray):
    delta = np.abs(m - m.conj().T)
    flat = int(np.argmax(delta))
    i, j = divmod(flat, m.shape[1])
    return float(delta[i, j]), i, j


class HermitianOperator:
    """A dense complex Hermitian matrix.

    The input is checked against its conjugate transpose (absolute tolerance
    1e-12 by default) and then symmetrized, so the stored matrix is exactly
    Hermitian and safe for repeated algebra downstream.
    """

    __slots__ = ("_matrix",)

    def __init__(self, entries, *, atol: float = HERMITICITY_ATOL):
        m = np.array(entries, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
            raise ValueError(f"expected a square matrix, got shape {m.shape}")
        worst, i, j = _worst_asymmetry(m)
        if worst > atol:
            raise HermiticityError(
                f"matrix is not Hermitian: |H[{i},{j}] - conj(H[{j},{i}])| = {worst:.3e}"
                f" exceeds tolerance {atol:.1e} (worst entry ({i},{j}))"
            )
        m = (m + m.conj().T) / 2
        m.flags.writeable = False
        self._matrix = m

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    @property
    def dim(self) -> int:
        return self._matrix.shape[0]

    @classmethod
    def identity(cls, dim: int) -> "HermitianOperator":
        return cls(np.eye(dim))

    def __repr__(self):
        return f"HermitianOperator(dim={self.dim})"


def as_matrix(op) -> np.ndarray:
    """Coerce an operator-like object (HermitianOperator or array) to an ndarray."""
    if isinstance(op, HermitianOperator):
        return op.matrix
    return np.asarray(op, dtype=complex)


def as_operator(op) -> HermitianOperator:
    if isinstance(op, HermitianOperator):
        return op
    return HermitianOperator(op)


class DensityState:
    """A mixed quantum state: positive semidefinite, unit trace."""

    __slots__ = ("_matrix",)

    def __init__(self, matrix, *, atol: float = HERMITICITY_ATOL):
        m = np.array(matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
            raise ValueError(f"expected a square matrix, got shape {m.shape}")
        worst, i, j = _worst_asymmetry(m)
        if worst > atol:
            raise HermiticityError(
                f"state is not Hermitian: deviation {worst:.3e} at ({i},{j})"
            )
        m = (m + m.conj().T) / 2
        lowest = float(np.linalg.eigvalsh(m)[0])
        if lowest < -atol:
            raise ValueError(f"state is not positive semidefinite: min eigenvalue {lowest:.3e}")
        tr = float(np.trace(m).real)
        if abs(tr - 1.0) > atol:
            raise ValueError(f"state trace {tr!r} differs from 1 beyond {atol:.1e}")
        m.flags.writeable = False
        self._matrix = m

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    @property
    def dim(self) -> int:
        return self._matrix.shape[0]

    @classmethod
    def pure(cls, vector) -> "DensityState":
        v = np.asarray(vector, dtype=complex).reshape(-1)
        n = np.linalg.norm(v)
        if n == 0:
            raise ValueError("cannot build a pure state from the zero vector")
        v = v / n
        return cls(np.outer(v, v.conj()))

    @classmethod
    def maximally_mixed(cls, dim: int) -> "DensityState":
        return cls(np.eye(dim) / dim)

    def __repr__(self):
        return f"DensityState(dim={self.dim})"


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues in ascending order with matching orthonormal eigenvectors (columns)."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def eig(op) -> Spectrum:
    """Full spectral decomposition of a Hermitian operator.

    Guarantees residuals ||H v - w v|| <= 1e-10 ||H|| and eigenvector
    orthonormality to 1e-10; raises EigenConvergenceError otherwise.
    """
    h = as_operator(op).matrix
    try:
        w, v = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure is pathological
        raise EigenConvergenceError(f"eigensolver did not converge: {exc}") from exc
    scale = float(np.linalg.norm(h, 2))
    residual = np.linalg.norm(h @ v - v * w, axis=0)
    if np.any(residual > EIG_RESIDUAL_RTOL * max(scale, 1e-300)):
        raise EigenConvergenceError(
            f"eigenpair residual {residual.max():.3e} exceeds {EIG_RESIDUAL_RTOL:.1e} * ||H||"
        )
    gram = v.conj().T @ v
    if np.max(np.abs(gram - np.eye(h.shape[0]))) > 1e-10:
        raise EigenConvergenceError("eigenvector set is not orthonormal to 1e-10")
    w = w.copy()
    w.flags.writeable = False
    v = v.copy()
    v.flags.writeable = False
    return Spectrum(eigenvalues=w, eigenvectors=v)


def half_integer(j) -> Fraction:
    """Normalize a spin label given as int, float, Fraction, or string like '3/2'."""
    jf = Fraction(j) if not isinstance(j, str) else Fraction(j.strip())
    if (2 * jf).denominator != 1:
        raise ValueError(f"j = {j!r} is not a half-integer")
    return jf


def angular_momentum(j) -> tuple[HermitianOperator, HermitianOperator, HermitianOperator]:
    """Spin matrices (J_X, J_Y, J_Z) for total angular momentum j.

    Basis ordering follows the J_Z eigenbasis with diagonal entries
    j, j-1, ..., -j; ladder coefficients are sqrt(j(j+1) - m(m+1)).
    """
    jf = half_integer(j)
    if jf < Fraction(1, 2):
        raise ValueError(f"j must be at least 1/2, got {jf}")
    d = int(2 * jf) + 1
    m = float(jf) - np.arange(d)  # j, j-1, ..., -j
    jj = float(jf * (jf + 1))
    # raising operator: <m+1| J+ |m> = sqrt(j(j+1) - m(m+1)); column k holds m = j - k
    c = np.sqrt(jj - m[1:] * (m[1:] + 1.0))
    jplus = np.zeros((d, d))
    jplus[np.arange(d - 1), np.arange(1, d)] = c
    jx = (jplus + jplus.T) / 2
    jy = (jplus - jplus.T) / (2j)
    jz = np.diag(m)
    return HermitianOperator(jx), HermitianOperator(jy), HermitianOperator(jz)


def expectation(f_op, rho) -> float:
    """Tr(rho F) for Hermitian F; the imaginary residual must stay below 1e-12."""
    f = as_operator(f_op)
    if not isinstance(rho, DensityState):
        rho = DensityState(rho)
    if f.dim != rho.dim:
        raise DimensionMismatchError(f"operator dim {f.dim} != state dim {rho.dim}")
    val = complex(np.einsum("ij,ji->", rho.matrix, f.matrix))
    if abs(val.imag) > 1e-12:
        raise ValueError(f"expectation has imaginary residual {val.imag:.3e}")
    return float(val.real)


def variance_sum_at_state(x_op, y_op, rho) -> float:
    """Sum of the two variances at a state: <X^2 + Y^2> - <X>^2 - <Y>^2."""
    x = as_operator(x_op)
    y = as_operator(y_op)
    if x.dim != y.dim:
        raise DimensionMismatchError(f"operator dims differ: {x.dim} != {y.dim}")
    if not isinstance(rho, DensityState):
        rho = DensityState(rho)
    x2 = HermitianOperator(x.matrix @ x.matrix)
    y2 = HermitianOperator(y.matrix @ y.matrix)
    val = (
        expectation(x2, rho)
        + expectation(y2, rho)
        - expectation(x, rho) ** 2
        - expectation(y, rho) ** 2
    )
    if val < -1e-12:
        raise ValueError(f"variance sum evaluated to {val:.3e} < -1e-12")
    return max(val, 0.0)


def random_state(dim: int, seed: int) -> DensityState:
    """Reproducible full-rank mixed state: normalized Gram matrix G G^dagger."""
    if dim < 1:
        raise ValueError("dim must be >= 1")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    rho = g @ g.conj().T
    rho /= np.trace(rho).real
    return DensityState(rho)


def random_hermitian(dim: int, seed: int) -> HermitianOperator:
    """Reproducible Hermitian matrix: symmetrized complex Gaussian."""
    if dim < 1:
        raise ValueError("dim must be >= 1")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return HermitianOperator((g + g.conj().T) / 2)


def commutator(a_op, b_op) -> np.ndarray:
    a = as_matrix(a_op)
    b = as_matrix(b_op)
    return a @ b - b @ a
