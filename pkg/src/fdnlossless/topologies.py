"""Classic reverberator structures written as FDNs, plus random unitary generators."""

from __future__ import annotations

import numpy as np
import scipy.linalg

from .model import DimensionError, DomainError, FdnSystem, as_delays, as_matrix


def comb_filter_eval(m: int, g_b: complex, g_f: complex, z: complex) -> complex:
    """Feedback-feedforward comb ``(z^-m - g_f) / (1 - g_b z^-m)``."""
    zm = complex(z) ** (-int(m))
    den = 1 - g_b * zm
    if abs(den) < 1e-14:
        raise DomainError(f"comb filter evaluated on its pole at z={z}")
    return (zm - g_f) / den


def schroeder_matrix(g) -> np.ndarray:
    g = np.asarray(g, dtype=complex)
    if g.size != 6:
        raise DimensionError("Schroeder reverberator takes exactly 6 gains")
    A = np.diag(g)
    A[4, :4] = 1
    A[5, :4] = -g[4]
    A[5, 4] = 1 - g[4] ** 2
    return A


def schroeder(g, m) -> FdnSystem:
    """Four parallel feedback combs into two series allpass combs.

    The combs have no direct path, so ``b = [1, 1, 1, 1, 0, 0]`` and ``d = 0``.
    """
    g = np.asarray(g, dtype=complex)
    m = as_delays(m, 6)
    A = schroeder_matrix(g)
    g5, g6 = g[4], g[5]
    c = np.array([g5 * g6] * 4 + [g6 * (g5**2 - 1), 1 - g6**2])
    b = np.array([1, 1, 1, 1, 0, 0], dtype=complex)
    return FdnSystem(A, m, b, c, 0.0)


def schroeder_transfer(g, m, z: complex) -> complex:
    """Product form: sum of four combs times two allpass combs."""
    g = np.asarray(g, dtype=complex)
    par = sum(comb_filter_eval(m[i], g[i], 0, z) for i in range(4))
    return par * comb_filter_eval(m[4], g[4], g[4], z) * comb_filter_eval(m[5], g[5], g[5], z)


def allpass_fdn(A, g, m, m_ap) -> tuple[np.ndarray, np.ndarray]:
    """Absorbent allpass FDN as a standard FDN of twice the size.

    Returns ``[[-A G, A], [I - G^2, G]]`` and the delays ``[m, m_ap]``.
    """
    A = as_matrix(A)
    n = A.shape[0]
    g = np.asarray(g, dtype=complex).ravel()
    if g.size != n:
        raise DimensionError(f"need {n} allpass gains, got {g.size}")
    if np.any(np.abs(g) >= 1):
        raise DomainError(
            "allpass gains must satisfy |g| < 1: at |g| = 1 the factor sqrt(1 - g^2) "
            "vanishes and the network splits into decoupled parts"
        )
    m = as_delays(m, n)
    m_ap = as_delays(m_ap, n)
    G = np.diag(g)
    top = np.hstack([-A @ G, A])
    bottom = np.hstack([np.eye(n) - G @ G, G])
    return np.vstack([top, bottom]), np.concatenate([m, m_ap])


def allpass_similarity(A, g) -> tuple[np.ndarray, np.ndarray]:
    """Diagonal ``S = blkdiag(I, sqrt(I - G^2))`` and the unitary factor ``S^-1 A_AP S``."""
    A = as_matrix(A)
    n = A.shape[0]
    g = np.asarray(g, dtype=complex)
    gp = np.sqrt(1 - g**2)
    G, Gp = np.diag(g), np.diag(gp)
    s = np.concatenate([np.ones(n), gp])
    core = np.block([[A, np.zeros((n, n))], [np.zeros((n, n)), np.eye(n)]]) @ np.block([[-G, Gp], [Gp, G]])
    return s, core


def sdn_even(y) -> np.ndarray:
    """``(2 / <1, y>) 1 y^T - I``."""
    y = np.asarray(y, dtype=float)
    total = y.sum()
    if total == 0:
        raise DomainError("<1, y> must be nonzero")
    return (2 / total) * np.outer(np.ones(y.size), y) - np.eye(y.size)


def sdn_householder(y) -> np.ndarray:
    """Householder reflection ``(2 / ||y||^2) y y^T - I``."""
    y = np.asarray(y, dtype=float)
    nrm = y @ y
    if nrm == 0:
        raise DomainError("y must be nonzero")
    return (2 / nrm) * np.outer(y, y) - np.eye(y.size)


def conjugate_involutory(M) -> np.ndarray:
    """``exp(i M)`` for real ``M``; the result satisfies ``A conj(A) = I``."""
    M = np.asarray(M)
    if np.iscomplexobj(M):
        if np.any(M.imag != 0):
            raise DomainError("M must be real")
        M = M.real
    M = as_matrix(M).real
    return scipy.linalg.expm(1j * M)


def random_unitary(n: int, seed=None) -> np.ndarray:
    """``exp`` of a random skew-Hermitian matrix."""
    if n < 1:
        raise DomainError("n must be >= 1")
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    H = (X + X.conj().T) / 2
    return scipy.linalg.expm(1j * H)


def random_unilossless(n: int, seed=None, spread: float = 2.0, return_scaling: bool = False):
    """``F^-1 Q F`` with ``Q`` random unitary and ``F`` positive diagonal in ``[1/spread, spread]``.

    With ``return_scaling`` the diagonal ``f`` of ``F`` is returned too;
    ``e = 1/f^2`` then satisfies ``A diag(e) A^H = diag(e)``.
    """
    rng = np.random.default_rng(seed)
    Q = random_unitary(n, rng)
    f = np.exp(rng.uniform(-np.log(spread), np.log(spread), n))
    A = Q * f[None, :] / f[:, None]
    return (A, f) if return_scaling else A


# Orthogonal 4x4 matrix whose (12|34) block has rank one.
RANK_DEFICIENT_ORTHOGONAL = (
    np.array(
        [
            [-1, 4, -2, -2],
            [-4, 1, 2, 2],
            [2, 2, -1, 4],
            [-2, -2, -4, 1],
        ],
        dtype=float,
    )
    / 5
)

MOTIVATING_MATRIX = np.array([[3.0, 2.0], [-4.0, -3.0]])


def hyperbolic(t: float) -> np.ndarray:
    return np.array([[np.cosh(t), np.sinh(t)], [np.sinh(t), np.cosh(t)]])
