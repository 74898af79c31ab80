"""Reducibility analysis: strongly connected components of the matrix digraph.

The digraph of ``A`` has an edge ``i -> j`` whenever ``|a_ij| > zero_tol``, i.e.
delay line ``i`` reads from delay line ``j``. Ordering the components
topologically along these edges makes ``P^T A P`` block upper-triangular.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import as_matrix


def adjacency(A, zero_tol: float = 0.0) -> list[list[int]]:
    """Successor lists (0-based, ascending) of the matrix digraph."""
    A = as_matrix(A)
    mask = np.abs(A) > zero_tol
    return [np.flatnonzero(row).tolist() for row in mask]


def tarjan_scc(succ: list[list[int]]) -> list[list[int]]:
    """Strongly connected components, emitted sinks-first (reverse topological order).

    Iterative so deep graphs cannot hit the recursion limit.
    """
    n = len(succ)
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    out: list[list[int]] = []
    counter = 0

    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            v, pos = work[-1]
            if pos == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            if pos < len(succ[v]):
                work[-1] = (v, pos + 1)
                w = succ[v][pos]
                if index[w] == -1:
                    work.append((w, 0))
                elif on_stack[w]:
                    low[v] = min(low[v], index[w])
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                out.append(sorted(comp))
    return out


@dataclass(frozen=True)
class BlockDecomposition:
    """``permutation[k]`` is the original index placed at position ``k``.

    ``blocks`` are half-open ranges into the permuted order; ``condensation_edges``
    are ``(p, q)`` pairs of block numbers with some edge from block p into block q.
    """

    permutation: tuple[int, ...]
    blocks: tuple[tuple[int, int], ...]
    condensation_edges: tuple[tuple[int, int], ...]

    @property
    def block_indices(self) -> list[list[int]]:
        return [list(self.permutation[a:b]) for a, b in self.blocks]

    def permute(self, A) -> np.ndarray:
        p = np.asarray(self.permutation)
        return np.asarray(A)[np.ix_(p, p)]

    def unpermute(self, B) -> np.ndarray:
        inv = np.argsort(self.permutation)
        return np.asarray(B)[np.ix_(inv, inv)]

    def to_dict(self) -> dict:
        return {
            "permutation": list(self.permutation),
            "blocks": [list(b) for b in self.blocks],
            "block_indices": self.block_indices,
            "condensation_edges": [list(e) for e in self.condensation_edges],
        }


def decompose(A, zero_tol: float = 0.0) -> BlockDecomposition:
    """Permutation to block upper-triangular form with irreducible diagonal blocks."""
    succ = adjacency(A, zero_tol)
    comps = tarjan_scc(succ)[::-1]
    block_of = {}
    perm: list[int] = []
    ranges = []
    for k, comp in enumerate(comps):
        ranges.append((len(perm), len(perm) + len(comp)))
        perm.extend(comp)
        for v in comp:
            block_of[v] = k
    edges = sorted(
        {(block_of[i], block_of[j]) for i, js in enumerate(succ) for j in js if block_of[i] != block_of[j]}
    )
    return BlockDecomposition(tuple(perm), tuple(ranges), tuple(edges))


def is_irreducible(A, zero_tol: float = 0.0) -> bool:
    return len(decompose(A, zero_tol).blocks) == 1
