"""Polynomial roots, unimodularity classification and Cohn's criterion."""

from __future__ import annotations

from dataclasses import dataclass
import math
import warnings

import numpy as np
from scipy.sparse.csgraph import connected_components

from .charpoly import is_self_inversive
from .model import DomainError, Poly

DEFAULT_TOL = 1e-8
ILL_CONDITIONED_ORDER = 64


class IllConditionedWarning(UserWarning):
    """Coefficient-based root finding on a high-order polynomial."""


@dataclass(frozen=True)
class RootSet:
    roots: np.ndarray

    def __post_init__(self):
        r = np.asarray(self.roots, dtype=complex)
        order = np.lexsort((np.abs(r), np.round(np.angle(r), 12)))
        object.__setattr__(self, "roots", r[order])

    def __len__(self):
        return self.roots.size

    @property
    def magnitudes(self) -> np.ndarray:
        return np.abs(self.roots)

    @property
    def max_deviation(self) -> float:
        """``max | |r| - 1 |`` over all roots (0 for an empty set)."""
        return float(np.max(np.abs(self.magnitudes - 1))) if self.roots.size else 0.0


def companion(p: Poly) -> np.ndarray:
    """Companion matrix of the monic normalization of ``p``."""
    p = p.trimmed().monic()
    c = p.coeffs
    n = c.size - 1
    C = np.zeros((n, n), dtype=complex)
    C[1:, :-1] = np.eye(n - 1)
    C[:, -1] = -c[:-1]
    return C


def _cluster_groups(r: np.ndarray, link: float) -> list[list[int]]:
    dist = np.abs(r[:, None] - r[None, :])
    close = dist <= link * np.maximum(1.0, np.abs(r))[:, None]
    np.fill_diagonal(close, False)
    if not close.any():
        return []
    _, labels = connected_components(close, directed=False)
    groups: dict[int, list[int]] = {}
    for i, lab in enumerate(labels):
        groups.setdefault(int(lab), []).append(i)
    return [g for g in groups.values() if len(g) > 1]


def _cluster_mean_refine(p: Poly, r: np.ndarray, link: float = 1e-2, slack: float = 5.0) -> np.ndarray:
    """Replace clusters that look like one perturbed multiple root by their centroid.

    A k-fold root under coefficient noise splits into k roots on a circle of
    radius ~ (k! eps sum|c_j||mu|^j / |p^(k)(mu)|)^(1/k) around the true root
    ``mu``, while their mean stays accurate to O(eps). A cluster is merged only
    when its spread is within ``slack`` of that prediction.
    """
    out = r.copy()
    absc = np.abs(p.coeffs)
    for members in _cluster_groups(r, link):
        k = len(members)
        mu = r[members].mean()
        spread = np.max(np.abs(r[members] - mu))
        dk = p
        for _ in range(k):
            dk = dk.derivative()
        pk = abs(dk(mu))
        if pk == 0:
            continue
        noise = np.finfo(float).eps * np.polynomial.polynomial.polyval(abs(mu), absc)
        predicted = (math.factorial(k) * noise / pk) ** (1.0 / k)
        if spread <= slack * predicted:
            out[members] = mu
    return out


def refine_eigenvalue_clusters(w: np.ndarray, norm: float, link: float = 1e-2, slack: float = 5.0) -> np.ndarray:
    """Centroid refinement for eigenvalues of a matrix with Frobenius norm ``norm``.

    A k-fold defective eigenvalue scatters by about ``(eps * norm)^(1/k)``.
    """
    out = w.copy()
    noise = np.finfo(float).eps * max(norm, 1.0)
    for members in _cluster_groups(w, link):
        k = len(members)
        mu = w[members].mean()
        if np.max(np.abs(w[members] - mu)) <= slack * noise ** (1.0 / k):
            out[members] = mu
    return out


def poly_roots(p: Poly, refine_clusters: bool = True) -> RootSet:
    """Eigenvalues of the companion matrix (LAPACK balances before the QR iteration).

    With ``refine_clusters`` numerically split multiple roots are collapsed to
    their centroid.
    """
    q = p.trimmed()
    if q.degree < 0:
        raise DomainError("zero polynomial has no finite root set")
    if q.degree == 0:
        raise DomainError("constant polynomial has no roots")
    if q.degree > ILL_CONDITIONED_ORDER:
        warnings.warn(
            f"degree {q.degree} > {ILL_CONDITIONED_ORDER}: coefficient-based roots are "
            "ill-conditioned, prefer statespace.poles",
            IllConditionedWarning,
            stacklevel=2,
        )
    q = q.monic()
    r = np.linalg.eigvals(companion(q))
    if refine_clusters:
        r = _cluster_mean_refine(q, r)
    return RootSet(r)


def is_lossless_poly(p: Poly, tol: float = DEFAULT_TOL) -> tuple[bool, float]:
    """Whether every root lies within ``tol`` of the unit circle, plus the max deviation."""
    dev = poly_roots(p).max_deviation
    return dev <= tol, dev


def cohn_is_unimodular(p: Poly, tol: float = DEFAULT_TOL) -> bool:
    """Cohn's test: self-inversive and every root of ``p'`` in the closed unit disk."""
    q = p.trimmed()
    if q.degree < 1:
        raise DomainError("need degree >= 1")
    if is_self_inversive(q, tol) is None:
        return False
    dp = q.derivative()
    if dp.trimmed().degree < 1:
        return True
    return bool(np.all(poly_roots(dp).magnitudes <= 1 + tol))
