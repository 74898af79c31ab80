"""Core types shared across the package: delay vectors, FDN systems, polynomials.

Matrices are plain complex ``numpy`` arrays read in row-major order. A
feedback delay network follows the recursion

    y(n)          = sum_i c_i s_i(n) + d x(n)
    s_i(n + m_i)  = sum_j a_ij s_j(n) + b_i x(n)

with transfer function ``H(z) = c^T [D_m(z^-1) - A]^-1 b + d`` where
``D_m(z^-1) = diag(z^m_1, ..., z^m_N)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class FdnError(ValueError):
    """Base class for invalid input to any operation in this package."""


class DimensionError(FdnError):
    pass


class DomainError(FdnError):
    pass


class PoleEvaluationError(FdnError):
    """Raised when a transfer function is evaluated on (or numerically at) a pole."""


def as_matrix(A, square: bool = True) -> np.ndarray:
    """Return ``A`` as a finite 2-D complex array; optionally require it square."""
    A = np.array(A, dtype=complex)
    if A.ndim == 0:
        A = A.reshape(1, 1)
    if A.ndim != 2:
        raise DimensionError(f"expected a matrix, got array of shape {A.shape}")
    if square and A.shape[0] != A.shape[1]:
        raise DimensionError(f"matrix must be square, got {A.shape[0]}x{A.shape[1]}")
    if not np.all(np.isfinite(A)):
        raise DomainError("matrix has non-finite entries")
    return A


def as_delays(m, n: int | None = None) -> np.ndarray:
    """Validate a delay vector: positive integer sample counts, optionally of length ``n``."""
    arr = np.asarray(m)
    if arr.ndim != 1 or arr.size == 0:
        raise DimensionError("delays must be a non-empty 1-D sequence")
    if not np.all(np.equal(np.mod(arr, 1), 0)):
        raise DomainError(f"delays must be integers, got {list(m)}")
    arr = arr.astype(np.int64)
    if np.any(arr < 1):
        raise DomainError(f"delays must be >= 1, got {arr.tolist()}")
    if n is not None and arr.size != n:
        raise DimensionError(f"expected {n} delays, got {arr.size}")
    return arr


def system_order(m) -> int:
    """Total delay, i.e. the degree of the generalized characteristic polynomial."""
    return int(np.sum(as_delays(m)))


def delay_matrix_eval(m, z: complex) -> np.ndarray:
    """Diagonal of ``D_m(z) = diag(z^-m_1, ..., z^-m_N)``.

    Pass ``1/z`` to get the ``D_m(z^-1)`` that appears in the transfer function.
    """
    m = as_delays(m)
    z = complex(z)
    if z == 0:
        raise DomainError("delay matrix is undefined at z = 0")
    return np.array([z ** (-int(k)) for k in m], dtype=complex)


@dataclass(frozen=True)
class Poly:
    """Polynomial with complex coefficients in ascending order (``coeffs[k]`` multiplies z^k)."""

    coeffs: np.ndarray
    scale: complex = 1.0  # constant factor divided out during normalization

    def __post_init__(self):
        c = np.atleast_1d(np.array(self.coeffs, dtype=complex))
        if c.ndim != 1:
            raise DimensionError("polynomial coefficients must be 1-D")
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        nz = np.flatnonzero(self.coeffs)
        return int(nz[-1]) if nz.size else -1

    def trimmed(self, rel_tol: float = 1e-12) -> Poly:
        """Zero coefficients below ``rel_tol * max|c|`` and drop the vanished top."""
        c = self.coeffs.copy()
        big = np.max(np.abs(c)) if c.size else 0.0
        c[np.abs(c) <= rel_tol * big] = 0
        nz = np.flatnonzero(c)
        c = c[: nz[-1] + 1] if nz.size else c[:1] * 0
        return Poly(c, self.scale)

    def monic(self) -> Poly:
        lead = self.coeffs[self.degree]
        return Poly(self.coeffs[: self.degree + 1] / lead, self.scale * lead)

    def derivative(self) -> Poly:
        c = self.coeffs
        return Poly(c[1:] * np.arange(1, c.size) if c.size > 1 else np.zeros(1))

    def __call__(self, z):
        return np.polynomial.polynomial.polyval(z, self.coeffs)

    def allclose(self, other: Poly, rtol: float = 1e-9) -> bool:
        """Coefficient-wise agreement within ``rtol * max(1, |c_k|)``."""
        a, b = self.coeffs, other.coeffs
        n = max(a.size, b.size)
        a = np.pad(a, (0, n - a.size))
        b = np.pad(b, (0, n - b.size))
        scale = np.maximum(1.0, np.maximum(np.abs(a), np.abs(b)))
        return bool(np.all(np.abs(a - b) <= rtol * scale))

    def __repr__(self):
        return f"Poly({np.array2string(self.coeffs, precision=6)})"


@dataclass(frozen=True)
class FdnSystem:
    """Feedback matrix ``A``, input gains ``b``, output gains ``c``, direct gain ``d``, delays ``m``.

    ``b`` and ``c`` default to all-ones and ``d`` to zero.
    """

    A: np.ndarray
    m: np.ndarray
    b: np.ndarray = field(default=None)
    c: np.ndarray = field(default=None)
    d: complex = 0.0

    def __post_init__(self):
        A = as_matrix(self.A)
        n = A.shape[0]
        m = as_delays(self.m, n)
        b = np.ones(n, complex) if self.b is None else np.array(self.b, dtype=complex).ravel()
        c = np.ones(n, complex) if self.c is None else np.array(self.c, dtype=complex).ravel()
        if b.size != n or c.size != n:
            raise DimensionError(f"b and c must have length {n}, got {b.size} and {c.size}")
        d = complex(self.d)
        if not (np.all(np.isfinite(b)) and np.all(np.isfinite(c)) and np.isfinite(d)):
            raise DomainError("gains must be finite")
        for name, val in (("A", A), ("m", m), ("b", b), ("c", c), ("d", d)):
            object.__setattr__(self, name, val)

    @property
    def N(self) -> int:
        return self.A.shape[0]

    @property
    def order(self) -> int:
        return int(self.m.sum())


def transfer_eval(sys: FdnSystem, z: complex, rcond: float = 1e-13) -> complex:
    """Evaluate ``H(z) = c^T [D_m(z^-1) - A]^-1 b + d`` by a linear solve."""
    z = complex(z)
    if z == 0:
        raise DomainError("transfer function evaluated at z = 0")
    K = np.diag([z ** int(k) for k in sys.m]) - sys.A
    det = np.linalg.det(K)
    scale = np.prod(np.maximum(1.0, np.linalg.norm(K, axis=1)))
    if abs(det) <= rcond * scale:
        raise PoleEvaluationError(f"resolvent singular at z={z}: |det| = {abs(det):.3e}")
    return complex(sys.c @ np.linalg.solve(K, sys.b) + sys.d)
