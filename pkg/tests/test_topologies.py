import numpy as np
import pytest

from fdnlossless.model import DomainError, FdnSystem, transfer_eval
from fdnlossless.structure import decompose
from fdnlossless.topologies import (
    RANK_DEFICIENT_ORTHOGONAL,
    allpass_fdn,
    allpass_similarity,
    comb_filter_eval,
    conjugate_involutory,
    random_unilossless,
    random_unitary,
    schroeder,
    schroeder_transfer,
    sdn_even,
    sdn_householder,
)
from fdnlossless.unilossless import certificate_residual, is_unilossless


def test_schroeder_zero_gains_is_pure_delay_sum(rng):
    m = [5, 6, 7, 8, 3, 2]
    sys = schroeder([0] * 6, m)
    for t in rng.uniform(0, 2 * np.pi, 8):
        z = np.exp(1j * t)
        want = sum(z ** -k for k in m[:4]) * z ** -m[4] * z ** -m[5]
        assert abs(transfer_eval(sys, z) - want) <= 1e-12


def test_schroeder_unimodular_gains_certified():
    assert is_unilossless(schroeder([1, -1, 1, -1, 1, 1], [3, 4, 5, 6, 2, 1]).A).is_unilossless


def test_schroeder_transfer_16_points(rng):
    g = [0.7, 0.7, 0.7, 0.7, 0.5, 0.5]
    m = rng.integers(1, 40, 6)
    sys = schroeder(g, m)
    for t in rng.uniform(0, 2 * np.pi, 16):
        z = np.exp(1j * t)
        assert abs(transfer_eval(sys, z) - schroeder_transfer(g, m, z)) <= 1e-9


def test_schroeder_defaults_reducible():
    assert len(decompose(schroeder([0.7] * 6, [1, 2, 3, 4, 5, 6]).A).blocks) == 6


def test_comb_plain_delay():
    z = np.exp(0.4j)
    assert comb_filter_eval(3, 0, 0, z) == pytest.approx(z**-3)


def test_comb_allpass_unit_magnitude(rng):
    for t in rng.uniform(0, 2 * np.pi, 20):
        assert abs(abs(comb_filter_eval(7, 0.6, 0.6, np.exp(1j * t))) - 1) <= 1e-12


def test_comb_arithmetic():
    assert comb_filter_eval(1, 0.5, 0, 2) == pytest.approx(2 / 3)


def test_comb_pole():
    with pytest.raises(DomainError):
        comb_filter_eval(1, 0.5, 0, 0.5)


def test_allpass_zero_gains(rng):
    A = random_unitary(3, rng)
    A_ap, m = allpass_fdn(A, np.zeros(3), [4, 5, 6], [1, 2, 3])
    np.testing.assert_allclose(A_ap, np.block([[np.zeros((3, 3)), A], [np.eye(3), np.zeros((3, 3))]]))
    assert m.tolist() == [4, 5, 6, 1, 2, 3]


def test_allpass_with_unitary_core_certified(rng):
    A = random_unitary(3, rng)
    g = rng.uniform(-0.99, 0.99, 3)
    A_ap, _ = allpass_fdn(A, g, [4, 5, 6], [1, 2, 3])
    assert is_unilossless(A_ap).is_unilossless
    assert np.all(np.abs(np.abs(np.linalg.eigvals(A_ap)) - 1) <= 1e-8)


def test_allpass_similarity_factor(rng):
    A = random_unitary(4, rng)
    g = rng.uniform(-0.99, 0.99, 4)
    A_ap, _ = allpass_fdn(A, g, [1] * 4, [1] * 4)
    s, core = allpass_similarity(A, g)
    np.testing.assert_allclose(np.diag(1 / s) @ A_ap @ np.diag(s), core, atol=1e-12)
    assert np.linalg.norm(core @ core.conj().T - np.eye(8)) <= 1e-10


def test_allpass_rejects_unit_gain(rng):
    with pytest.raises(DomainError, match="sqrt"):
        allpass_fdn(np.eye(2), [1.0, 0.3], [1, 2], [1, 2])


def test_allpass_boundary_is_reducible(rng):
    A = random_unitary(2, rng)
    G = np.diag([1.0, 0.4])
    A_b = np.block([[-A @ G, A], [np.eye(2) - G @ G, G]])
    assert len(decompose(A_b).blocks) > 1


def test_allpass_damped_is_stable(rng):
    A = random_unitary(3, rng)
    A_ap, m = allpass_fdn(A, [0.5, -0.3, 0.7], [3, 4, 5], [1, 2, 2])
    from fdnlossless.statespace import poles

    assert np.max(poles(FdnSystem(0.999 * A_ap, m)).magnitudes) < 1


def test_sdn_symmetric_case():
    J = np.ones((4, 4))
    want = 0.5 * J - np.eye(4)
    np.testing.assert_allclose(sdn_even(np.ones(4)), want)
    np.testing.assert_allclose(sdn_householder(np.ones(4)), want)


def test_householder_unitary_and_involutory(rng):
    H = sdn_householder(rng.uniform(0.1, 3, 5))
    np.testing.assert_allclose(H @ H, np.eye(5), atol=1e-10)
    assert is_unilossless(H).is_unilossless


def test_sdn_even_weighted_isometry():
    y = np.array([1.0, 2, 3, 4])
    A = sdn_even(y)
    np.testing.assert_allclose(A.conj().T @ np.diag(y) @ A, np.diag(y), atol=1e-10)
    assert is_unilossless(A).is_unilossless


def test_sdn_zero_denominator():
    with pytest.raises(DomainError):
        sdn_even([1, -1])
    with pytest.raises(DomainError):
        sdn_householder([0, 0])


def test_conjugate_involutory_zero():
    np.testing.assert_allclose(conjugate_involutory(np.zeros((3, 3))), np.eye(3))


def test_conjugate_involutory_pi():
    A = conjugate_involutory(np.pi * np.eye(2))
    np.testing.assert_allclose(A, -np.eye(2), atol=1e-14)
    np.testing.assert_allclose(A @ A.conj(), np.eye(2), atol=1e-14)


def test_conjugate_involutory_random(rng):
    for _ in range(10):
        M = rng.standard_normal((4, 4))
        M *= 2 / np.linalg.norm(M, 2)
        A = conjugate_involutory(M)
        assert np.linalg.norm(A @ A.conj() - np.eye(4)) <= 1e-10


def test_conjugate_involutory_spectrum(rng):
    M = rng.standard_normal((4, 4))
    A = conjugate_involutory(M)
    w_M = np.linalg.eigvals(M)
    w_A = np.linalg.eigvals(A)
    for w in np.exp(1j * w_M):
        assert np.min(np.abs(w_A - w)) <= 1e-8
    # unimodular exactly for the real eigenvalues of M
    real = np.abs(w_M.imag) < 1e-12
    assert np.all(np.abs(np.abs(np.exp(1j * w_M[real])) - 1) < 1e-12)
    assert np.all(np.abs(np.abs(np.exp(1j * w_M[~real])) - 1) > 1e-6)


def test_conjugate_involutory_rejects_complex():
    with pytest.raises(DomainError):
        conjugate_involutory(np.eye(2) * 1j)


def test_random_unitary_scalar():
    q = random_unitary(1, 3)
    assert abs(abs(q[0, 0]) - 1) <= 1e-14


def test_random_unitary_property(rng):
    for n in range(1, 7):
        Q = random_unitary(n, rng)
        assert np.linalg.norm(Q @ Q.conj().T - np.eye(n)) <= 1e-10


def test_random_unitary_deterministic():
    np.testing.assert_array_equal(random_unitary(3, 7), random_unitary(3, 7))


def test_random_unilossless_certificate():
    A, f = random_unilossless(4, 11, return_scaling=True)
    e = 1 / f**2
    assert certificate_residual(A, e) <= 1e-12
    rep = is_unilossless(A)
    np.testing.assert_allclose(rep.blocks[0].certificate_e, e / e[0], rtol=1e-9)


def test_rank_deficient_orthogonal_fixture():
    A = RANK_DEFICIENT_ORTHOGONAL
    np.testing.assert_allclose(A @ A.T, np.eye(4), atol=1e-15)
    assert np.linalg.matrix_rank(A[np.ix_([0, 1], [2, 3])]) == 1
    rep = is_unilossless(A)
    assert rep.is_unilossless
    np.testing.assert_allclose(rep.blocks[0].certificate_e, np.ones(4), atol=1e-12)
