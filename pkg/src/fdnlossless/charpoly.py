"""Generalized characteristic polynomial ``p_{A,m}(z) = det[diag(z^m) - A]``.

Two independent routes are provided:

* :func:`generalized_charpoly` sums signed principal minors over index sets
  grouped by the total delay they select;
* :func:`charpoly_oracle` evaluates the determinant on the ``(Nbar+1)``-th
  roots of unity and recovers the coefficients with an FFT.
"""

from __future__ import annotations

import numpy as np

from .model import DimensionError, DomainError, FdnError, FdnSystem, Poly, as_delays, as_matrix

MAX_ENUMERATION_N = 20
MAX_ORACLE_ORDER = 4096


def principal_minor(A, index_set) -> complex:
    """Determinant of ``A`` restricted to rows and columns ``index_set`` (0-based).

    The empty set has determinant 1.
    """
    A = as_matrix(A)
    idx = np.asarray(sorted(set(int(i) for i in index_set)), dtype=int)
    if idx.size == 0:
        return 1.0 + 0j
    if idx[0] < 0 or idx[-1] >= A.shape[0]:
        raise DimensionError(f"index set {idx.tolist()} out of range for N={A.shape[0]}")
    return complex(np.linalg.det(A[np.ix_(idx, idx)]))


def gray_code_subsets(n: int):
    """Yield bitmasks of all subsets of ``range(n)`` in reflected Gray-code order."""
    for i in range(1 << n):
        yield i ^ (i >> 1)


def _mask_indices(mask: int, n: int) -> list[int]:
    return [i for i in range(n) if mask >> i & 1]


def generalized_charpoly(A, m) -> Poly:
    """Monic degree-``sum(m)`` polynomial from principal minors.

    ``c_k = sum over index sets I with sum(m_I) = k of (-1)^(N-|I|) det A(I^c)``.
    """
    A = as_matrix(A)
    n = A.shape[0]
    m = as_delays(m, n)
    if n > MAX_ENUMERATION_N:
        raise FdnError(f"N={n} exceeds the subset enumeration bound {MAX_ENUMERATION_N}; use charpoly_oracle")

    # Minors are grouped by complement size and batched through LAPACK LU.
    by_size: dict[int, list[tuple[int, list[int]]]] = {}
    for mask in gray_code_subsets(n):
        comp = _mask_indices(~mask & ((1 << n) - 1), n)
        by_size.setdefault(len(comp), []).append((mask, comp))

    coeffs = np.zeros(int(m.sum()) + 1, dtype=complex)
    for size in sorted(by_size):
        entries = by_size[size]
        if size == 0:
            minors = np.ones(len(entries), dtype=complex)
        else:
            stack = np.array([A[np.ix_(comp, comp)] for _, comp in entries])
            minors = np.linalg.det(stack)
        sign = -1.0 if size % 2 else 1.0
        for (mask, _), minor in zip(entries, minors):
            k = sum(int(m[i]) for i in range(n) if mask >> i & 1)
            coeffs[k] += sign * minor
    return Poly(coeffs)


def charpoly_oracle(A, m) -> Poly:
    """Evaluation-interpolation route to ``p_{A,m}``, independent of principal minors."""
    A = as_matrix(A)
    n = A.shape[0]
    m = as_delays(m, n)
    order = int(m.sum())
    if order > MAX_ORACLE_ORDER:
        raise FdnError(f"system order {order} exceeds oracle bound {MAX_ORACLE_ORDER}")
    npts = order + 1
    nodes = np.exp(2j * np.pi * np.arange(npts) / npts)
    values = np.empty(npts, dtype=complex)
    for j, z in enumerate(nodes):
        values[j] = np.linalg.det(np.diag(z ** m) - A)
    if not np.all(np.isfinite(values)):
        raise FdnError("non-finite determinant while sampling the characteristic polynomial")
    # values_j = sum_k c_k w^{jk}, so c = DFT(values) / npts
    return Poly(np.fft.fft(values) / npts)


def zeros_poly(sys: FdnSystem) -> Poly:
    """Monic polynomial whose roots are the transfer-function zeros.

    Uses ``det[A - b c^T / d - D_m(z^-1)] = (-1)^N p_{A - b c^T/d, m}(z)``; the
    sign factor ``(-1)^N`` is kept in ``Poly.scale``.
    """
    if sys.d == 0:
        raise DomainError("zeros polynomial needs a nonzero direct gain d")
    corrected = sys.A - np.outer(sys.b, sys.c) / sys.d
    p = generalized_charpoly(corrected, sys.m)
    return Poly(p.coeffs, (-1.0) ** sys.N)


def is_self_inversive(p: Poly, tol: float = 1e-9) -> complex | None:
    """Return unimodular ``eps`` with ``c_{deg-j} = eps * conj(c_j)`` for all j, else None.

    The degree is taken after trimming relative to ``tol``.
    """
    p = p.trimmed(tol)
    c = p.coeffs
    if p.degree < 0:
        raise DomainError("zero polynomial")
    big = np.max(np.abs(c))
    j = int(np.argmax(np.abs(c)))
    eps = c[-1 - j] / np.conj(c[j])
    if abs(abs(eps) - 1) > tol:
        return None
    eps /= abs(eps)
    if np.all(np.abs(c[::-1] - eps * np.conj(c)) <= tol * big):
        return complex(eps)
    return None
