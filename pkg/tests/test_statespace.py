import numpy as np
import pytest

from fdnlossless.charpoly import generalized_charpoly
from fdnlossless.model import DimensionError, FdnSystem, Poly
from fdnlossless.roots import poly_roots
from fdnlossless.simulate import render_ir
from fdnlossless.statespace import build, impulse_response, poles, step
from fdnlossless.topologies import MOTIVATING_MATRIX, random_unilossless

from conftest import random_complex


def _match(a, b):
    from scipy.optimize import linear_sum_assignment

    cost = np.abs(a[:, None] - b[None, :])
    r, c = linear_sum_assignment(cost)
    return cost[r, c].max()


def test_single_comb_degenerate_block():
    ss = build(FdnSystem([[0.4]], [1]))
    np.testing.assert_allclose(ss.A_hat.toarray(), [[0.4]])


def test_motivating_poles():
    r = poles(FdnSystem(MOTIVATING_MATRIX, [1, 2])).roots
    np.testing.assert_allclose(r, [1, 1, 1], atol=1e-12)


def test_half_matrix_instability():
    assert np.max(poles(FdnSystem(MOTIVATING_MATRIX / 2, [2, 1])).magnitudes) == pytest.approx(2.145, abs=1e-3)


def test_random_poles_match_charpoly_roots(rng):
    A = random_complex(rng, 3)
    m = [2, 3, 4]
    ss_roots = poles(FdnSystem(A, m)).roots
    cp_roots = poly_roots(generalized_charpoly(A, m)).roots
    assert _match(ss_roots, cp_roots) <= 1e-8


def test_unilossless_poles_on_circle(rng):
    A = random_unilossless(4, rng)
    for _ in range(5):
        assert poles(FdnSystem(A, rng.integers(1, 9, 4))).max_deviation <= 1e-8


def test_charpoly_of_transition_matrix(rng):
    for _ in range(20):
        n = int(rng.integers(1, 5))
        m = rng.integers(1, 7, n)
        if m.sum() > 24:
            continue
        A = random_complex(rng, n)
        ss = build(FdnSystem(A, m))
        p_hat = Poly(np.poly(ss.A_hat.toarray())[::-1])
        assert p_hat.allclose(generalized_charpoly(A, m), 1e-8)


def test_sparsity_and_row_structure(rng):
    A = random_complex(rng, 3)
    m = np.array([1, 4, 6])
    ss = build(FdnSystem(A, m))
    assert ss.A_hat.nnz <= ss.order + 9
    dense = ss.A_hat.toarray()
    tails = set(ss.tails.tolist())
    for r in range(ss.order):
        if r not in tails:
            assert np.count_nonzero(dense[r]) == 1 and dense[r, r + 1] == 1
    assert [b - a for a, b in ss.layout] == m.tolist()


def test_zero_step():
    ss = build(FdnSystem(np.eye(2) * 0.5, [2, 3]))
    state, y = step(ss, ss.zero_state(), 0)
    assert y == 0 and not state.any()


def test_pure_delay_impulse():
    ss = build(FdnSystem([[0]], [3], [1], [1], 0))
    y = impulse_response(ss, 8)
    np.testing.assert_array_equal(y.real, [0, 0, 0, 1, 0, 0, 0, 0])


def test_step_dimension_check():
    ss = build(FdnSystem(np.eye(2), [2, 3]))
    with pytest.raises(DimensionError):
        step(ss, np.zeros(4), 0)


def test_agrees_with_ring_buffer_engine(rng):
    A = random_unilossless(3, rng)
    sys = FdnSystem(A, [1, 2, 7], rng.standard_normal(3), rng.standard_normal(3), 0.3)
    a = render_ir(sys, 1000)
    b = impulse_response(build(sys), 1000)
    assert np.max(np.abs(a - b)) <= 1e-10
