"""State-space embedding of an FDN of order ``Nbar = sum(m)``.

Layout: delay line 1's registers first, then line 2, and so on. Within line
``j`` the registers hold ``s_j(n), s_j(n+1), ..., s_j(n+m_j-1)``, oldest
first. Each step shifts every line by one and writes ``A s(n) + b x(n)``
into the newest slot of each line, so

    s_hat(n+1) = A_hat s_hat(n) + b_hat x(n)
    y(n)       = c_hat^T s_hat(n) + d x(n)

is the FDN recursion exactly. Lines of length 1 degenerate to a single
register fed directly by the matrix. The transition matrix is the same
shift-plus-coupling structure as the classical embedding, up to a
permutation of the state.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .model import DimensionError, FdnError, FdnSystem
from .roots import RootSet, refine_eigenvalue_clusters

MAX_DENSE_ORDER = 512


@dataclass(frozen=True)
class StateSpace:
    A_hat: sp.csr_matrix
    b_hat: np.ndarray
    c_hat: np.ndarray
    d_hat: complex
    layout: tuple[tuple[int, int], ...]

    @property
    def order(self) -> int:
        return self.b_hat.size

    @property
    def heads(self) -> np.ndarray:
        """State index of ``s_j(n)`` (the oldest register) for each line."""
        return np.array([a for a, _ in self.layout])

    @property
    def tails(self) -> np.ndarray:
        """State index of the newest register of each line."""
        return np.array([b - 1 for _, b in self.layout])

    def zero_state(self) -> np.ndarray:
        return np.zeros(self.order, dtype=complex)


def build(sys: FdnSystem) -> StateSpace:
    m = sys.m
    starts = np.concatenate(([0], np.cumsum(m)[:-1]))
    layout = tuple((int(s), int(s + k)) for s, k in zip(starts, m))
    heads = starts
    tails = starts + m - 1
    order = int(m.sum())

    rows, cols, vals = [], [], []
    for s, e in layout:
        for r in range(s, e - 1):
            rows.append(r)
            cols.append(r + 1)
            vals.append(1.0)
    for i, t in enumerate(tails):
        for j, h in enumerate(heads):
            if sys.A[i, j] != 0:
                rows.append(int(t))
                cols.append(int(h))
                vals.append(sys.A[i, j])
    A_hat = sp.csr_matrix((np.array(vals, dtype=complex), (rows, cols)), shape=(order, order))

    b_hat = np.zeros(order, dtype=complex)
    b_hat[tails] = sys.b
    c_hat = np.zeros(order, dtype=complex)
    c_hat[heads] = sys.c
    return StateSpace(A_hat, b_hat, c_hat, complex(sys.d), layout)


def poles(sys: FdnSystem | StateSpace, refine_clusters: bool = True) -> RootSet:
    """Eigenvalues of the dense transition matrix.

    Numerically split multiple eigenvalues are collapsed to their centroid
    unless ``refine_clusters`` is False.
    """
    ss = build(sys) if isinstance(sys, FdnSystem) else sys
    if ss.order > MAX_DENSE_ORDER:
        raise FdnError(f"order {ss.order} exceeds dense eigensolver bound {MAX_DENSE_ORDER}")
    dense = ss.A_hat.toarray()
    w = np.linalg.eigvals(dense)
    if refine_clusters:
        w = refine_eigenvalue_clusters(w, float(np.linalg.norm(dense)))
    return RootSet(w)


def step(ss: StateSpace, state: np.ndarray, x: complex) -> tuple[np.ndarray, complex]:
    if state.shape != (ss.order,):
        raise DimensionError(f"state must have length {ss.order}, got {state.shape}")
    y = complex(ss.c_hat @ state + ss.d_hat * x)
    return ss.A_hat @ state + ss.b_hat * x, y


def impulse_response(ss: StateSpace, length: int) -> np.ndarray:
    state = ss.zero_state()
    out = np.empty(length, dtype=complex)
    x = 1.0
    for n in range(length):
        state, out[n] = step(ss, state, x)
        x = 0.0
    return out
