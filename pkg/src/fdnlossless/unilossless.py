"""Decide whether a feedback matrix is lossless for every choice of delays.

A matrix passes when each irreducible diagonal block of its block-triangular
form is diagonally similar to a unitary matrix. For a block ``B`` this is
witnessed by a positive vector ``e`` with ``B diag(e) B^H = diag(e)``.
Taking the diagonal of that identity gives ``M e = e`` with ``M = |B|^2``
entrywise, so the only candidate is the Perron vector of ``M``; the full
matrix identity is then checked as a residual.

Only positive ``e`` are accepted. An indefinite ``e`` can satisfy the identity
for matrices that are not lossless, e.g. ``[[cosh t, sinh t], [sinh t, cosh t]]``
with ``e = (1, -1)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import itertools

import numpy as np

from .charpoly import generalized_charpoly
from .model import DimensionError, DomainError, FdnError, as_delays, as_matrix
from .roots import poly_roots
from .structure import BlockDecomposition, decompose, is_irreducible

DEFAULT_TOL = 1e-8
POWER_TOL = 1e-12
POWER_MAX_ITER = 100_000


class ReducibleInputError(FdnError):
    pass


def perron_vector(M: np.ndarray, tol: float = POWER_TOL, max_iter: int = POWER_MAX_ITER) -> tuple[float, np.ndarray]:
    """Perron root and vector (normalized ``e[0] = 1``) of an irreducible nonnegative matrix.

    Power iteration from the all-ones vector; imprimitive matrices make it
    oscillate, in which case a dense eigensolve picks the positive eigenvector.
    """
    M = np.asarray(M, dtype=float)
    n = M.shape[0]
    x = np.ones(n) / n
    lam = 0.0
    for _ in range(max_iter):
        y = M @ x
        s = y.sum()
        if s <= 0:
            break
        y /= s
        if np.max(np.abs(y - x)) <= tol * np.max(y):
            x = y
            lam = float((M @ x).sum() / x.sum())
            return lam, x / x[0]
        x = y
    w, V = np.linalg.eig(M)
    k = int(np.argmax(w.real))
    v = V[:, k]
    v = (v / v[np.argmax(np.abs(v))]).real
    return float(w[k].real), v / v[0]


def certificate_residual(B, e) -> float:
    """Relative residual ``||B diag(e) B^H - diag(e)||_F / ||diag(e)||_F``."""
    B = as_matrix(B)
    e = np.asarray(e, dtype=float)
    E = np.diag(e)
    return float(np.linalg.norm(B @ E @ B.conj().T - E) / np.linalg.norm(e))


def unitary_similarity_certificate(B, tol: float = DEFAULT_TOL) -> np.ndarray | None:
    """Positive ``e`` with ``B diag(e) B^H = diag(e)``, or None if none exists."""
    return _certify_block(B, tol)[2]


def _certify_block(B, tol):
    B = as_matrix(B)
    if B.shape[0] > 1 and not is_irreducible(B):
        raise ReducibleInputError("certificate search needs an irreducible block; decompose first")
    M = np.abs(B) ** 2
    lam, e = perron_vector(M)
    if abs(lam - 1) > tol or not np.all(e > 0):
        return lam, None, None
    res = certificate_residual(B, e)
    return lam, res, (e if res <= tol else None)


@dataclass
class BlockRecord:
    indices: list[int]
    perron_value: float
    certificate_e: np.ndarray | None
    residual: float | None

    @property
    def passed(self) -> bool:
        return self.certificate_e is not None

    def to_dict(self) -> dict:
        return {
            "indices": self.indices,
            "perron": self.perron_value,
            "residual": self.residual,
            "certificate_e": None if self.certificate_e is None else self.certificate_e.tolist(),
        }


@dataclass
class UnilosslessReport:
    verdict: str
    blocks: list[BlockRecord]
    decomposition: BlockDecomposition
    tolerances: dict = field(default_factory=dict)

    @property
    def is_unilossless(self) -> bool:
        return self.verdict == "unilossless"

    def __bool__(self):
        return self.is_unilossless

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "blocks": [b.to_dict() for b in self.blocks],
            "decomposition": self.decomposition.to_dict(),
            "tolerances": dict(self.tolerances),
        }


def is_unilossless(A, tol: float = DEFAULT_TOL, zero_tol: float = 0.0) -> UnilosslessReport:
    """Block-wise certification of ``A``; the verdict is the conjunction over blocks."""
    A = as_matrix(A)
    dec = decompose(A, zero_tol)
    records = []
    for idx in dec.block_indices:
        B = A[np.ix_(idx, idx)]
        if len(idx) == 1:
            a = abs(B[0, 0])
            ok = abs(a - 1) <= tol
            records.append(BlockRecord(idx, a * a, np.ones(1) if ok else None, abs(a * a - 1)))
            continue
        lam, res, e = _certify_block(B, tol)
        records.append(BlockRecord(idx, lam, e, res))
    verdict = "unilossless" if all(r.passed for r in records) else "not_unilossless"
    return UnilosslessReport(verdict, records, dec, {"tol": tol, "zero_tol": zero_tol})


def find_witness(A, max_delay: int = 4, tol: float = 1e-5) -> tuple[np.ndarray, float] | None:
    """First delay vector in ``{1..max_delay}^N`` (lexicographic) with a pole off the unit circle.

    Returns ``(m, deviation)`` where ``deviation = max | |r| - 1 |`` exceeds
    ``tol``, or None when every delay vector in the sweep is lossless.
    """
    A = as_matrix(A)
    if max_delay < 1:
        raise DomainError("max_delay must be >= 1")
    for m in itertools.product(range(1, max_delay + 1), repeat=A.shape[0]):
        dev = poly_roots(generalized_charpoly(A, m)).max_deviation
        if dev > tol:
            return np.array(m), dev
    return None


def diagonal_conjugate(A, E) -> np.ndarray:
    """``E^-1 A E`` for a diagonal ``E`` given by its diagonal."""
    A = as_matrix(A)
    e = _diag(E, A.shape[0])
    return A * e[None, :] / e[:, None]


def rotate_feedback(A, gamma: complex, m) -> np.ndarray:
    """``D_m(gamma) A`` with ``D_m(gamma) = diag(gamma^-m_i)``.

    ``r`` is a root of ``p_{D(gamma)A,m}`` exactly when ``r * gamma`` is a root of ``p_{A,m}``.
    """
    A = as_matrix(A)
    m = as_delays(m, A.shape[0])
    gamma = complex(gamma)
    if abs(abs(gamma) - 1) > 1e-12:
        raise DomainError(f"gamma must be unimodular, |gamma| = {abs(gamma)!r}")
    d = np.array([gamma ** (-int(k)) for k in m])
    return d[:, None] * A


def io_gain_transform(b, c, E) -> tuple[np.ndarray, np.ndarray]:
    """Gains ``(E b, E^-T c)`` that pair ``A`` with the same zeros as ``(E^-1 A E, b, c)``."""
    b = np.asarray(b, dtype=complex)
    c = np.asarray(c, dtype=complex)
    e = _diag(E, b.size)
    return e * b, c / e


def _diag(E, n: int) -> np.ndarray:
    e = np.asarray(E, dtype=complex)
    if e.ndim == 2:
        e = np.diag(e)
    if e.size != n:
        raise DimensionError(f"diagonal of length {e.size} does not match N={n}")
    if np.any(e == 0):
        raise DomainError("diagonal similarity needs nonzero entries")
    return e
