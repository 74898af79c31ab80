import numpy as np
import pytest

from fdnlossless.charpoly import generalized_charpoly
from fdnlossless.structure import adjacency, decompose, is_irreducible, tarjan_scc
from fdnlossless.topologies import RANK_DEFICIENT_ORTHOGONAL, random_unitary, schroeder_matrix, sdn_householder

from conftest import random_complex


def assert_block_upper_triangular(A, dec, zero_tol=0.0):
    P = dec.permute(A)
    for p, (a, b) in enumerate(dec.blocks):
        for q, (c, d) in enumerate(dec.blocks):
            if q < p:
                assert np.all(np.abs(P[a:b, c:d]) <= zero_tol)


def test_identity_adjacency():
    assert adjacency(np.eye(3)) == [[0], [1], [2]]


def test_schroeder_adjacency():
    succ = adjacency(schroeder_matrix([0.7, 0.7, 0.7, 0.7, 0.5, 0.5]))
    assert succ[:4] == [[0], [1], [2], [3]]
    assert succ[4] == [0, 1, 2, 3, 4]
    assert succ[5] == [0, 1, 2, 3, 4, 5]


def test_dense_is_complete(rng):
    succ = adjacency(random_complex(rng, 4))
    assert all(s == [0, 1, 2, 3] for s in succ)


def test_zero_tol_drops_small_entries():
    A = np.array([[1, 1e-14], [1e-14, 1]])
    assert len(decompose(A).blocks) == 1
    assert len(decompose(A, zero_tol=1e-12).blocks) == 2


def test_circulant_shift_is_irreducible():
    C = np.roll(np.eye(4), 1, axis=1)
    dec = decompose(C)
    assert dec.blocks == ((0, 4),)


def test_schroeder_six_scalar_blocks():
    A = schroeder_matrix([0.7, 0.7, 0.7, 0.7, 0.5, 0.5])
    dec = decompose(A)
    assert [b - a for a, b in dec.blocks] == [1] * 6
    assert_block_upper_triangular(A, dec)
    assert sorted(dec.permutation) == list(range(6))


def test_block_diagonal_unitary_and_scalar(rng):
    U = random_unitary(2, rng)
    A = np.zeros((3, 3), dtype=complex)
    A[:2, :2] = U
    A[2, 2] = 3
    dec = decompose(A)
    assert sorted(map(sorted, dec.block_indices)) == [[0, 1], [2]]
    assert_block_upper_triangular(A, dec)


def test_random_sparse_patterns(rng):
    for _ in range(50):
        n = int(rng.integers(1, 9))
        A = random_complex(rng, n) * (rng.random((n, n)) < 0.3)
        dec = decompose(A)
        assert_block_upper_triangular(A, dec)
        np.testing.assert_array_equal(dec.unpermute(dec.permute(A)), A)
        for idx in dec.block_indices:
            if len(idx) > 1:
                assert is_irreducible(A[np.ix_(idx, idx)])
        # condensation must be acyclic: edges only go forward in block order
        assert all(p < q for p, q in dec.condensation_edges)


def test_block_product_formula(rng):
    for _ in range(20):
        n = int(rng.integers(2, 7))
        A = random_complex(rng, n) * (rng.random((n, n)) < 0.35)
        m = rng.integers(1, 5, n)
        dec = decompose(A)
        prod = np.array([1.0 + 0j])
        for idx in dec.block_indices:
            sub = generalized_charpoly(A[np.ix_(idx, idx)], m[idx])
            prod = np.polynomial.polynomial.polymul(prod, sub.coeffs)
        assert generalized_charpoly(A, m).allclose(type(generalized_charpoly(A, m))(prod), 1e-9)


def test_householder_irreducible():
    assert is_irreducible(sdn_householder([1.0, 2.3, 0.7, 1.9]))


@pytest.mark.parametrize("n", [2, 3, 6])
def test_triangular_reducible(n, rng):
    assert not is_irreducible(np.triu(random_complex(rng, n)))


def test_rank_deficient_orthogonal_irreducible():
    assert is_irreducible(RANK_DEFICIENT_ORTHOGONAL)


def test_tarjan_deep_chain_no_recursion_limit():
    n = 5000
    succ = [[i + 1] for i in range(n - 1)] + [[0]]
    comps = tarjan_scc(succ)
    assert len(comps) == 1 and len(comps[0]) == n
