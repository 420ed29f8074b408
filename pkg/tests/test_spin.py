import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zenolab import spin
from zenolab.errors import DomainError

finite = st.floats(-1, 1, allow_nan=False, allow_subnormal=False)
matrices = st.lists(finite, min_size=8, max_size=8).map(
    lambda v: np.array(v[:4]).reshape(2, 2) + 1j * np.array(v[4:]).reshape(2, 2))


def random_matrix(rng):
    return rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))


def test_rotation_zero_is_identity():
    assert np.array_equal(spin.rotation(0.0), spin.I2)


def test_rotation_half_pi_flips_up_to_minus_i_down():
    np.testing.assert_allclose(spin.rotation(math.pi / 2), -1j * spin.SIGMA_X, atol=1e-16)
    np.testing.assert_allclose(spin.rotation(math.pi / 2) @ spin.UP, -1j * spin.DOWN, atol=1e-16)


def test_rotation_composes():
    q = spin.rotation(math.pi / 4)
    np.testing.assert_allclose(q @ q @ spin.UP, spin.rotation(math.pi / 2) @ spin.UP, atol=1e-15)


@pytest.mark.parametrize("angle", [0.1, 1.0, math.pi / 2, 7.3])
def test_rotation_unitary(angle):
    assert spin.is_unitary(spin.rotation(angle), atol=1e-14)


@pytest.mark.parametrize("bad", [math.nan, math.inf])
def test_rotation_rejects_non_finite(bad):
    with pytest.raises(DomainError):
        spin.rotation(bad)


def test_eigenvalues_basic():
    assert spin.eigenvalues(spin.I2) == (1, 1)
    assert spin.eigenvalues(spin.SIGMA_Z) == (1, -1)


def test_eigenvalues_of_ideal_transfer_operator():
    m = np.diag([1, 0]) @ spin.rotation(math.pi / 4)
    plus, minus = spin.eigenvalues(m)
    c = math.cos(math.pi / 4)
    assert plus == pytest.approx(c, abs=1e-15)
    assert minus == pytest.approx(0, abs=1e-15)
    # characteristic polynomial solved independently
    roots = sorted(np.roots([1, -np.trace(m), np.linalg.det(m)]), key=abs, reverse=True)
    np.testing.assert_allclose([plus, minus], roots, atol=1e-15)


def test_eigenvalue_identities(rng):
    for _ in range(1000):
        m = random_matrix(rng)
        plus, minus = spin.eigenvalues(m)
        tr, det = np.trace(m), np.linalg.det(m)
        assert abs(plus + minus - tr) <= 1e-12 * max(1.0, abs(tr), abs(plus))
        assert abs(plus * minus - det) <= 1e-12 * max(1.0, abs(det), abs(plus) ** 2)


def test_eigenvalues_plus_branch_is_principal_root():
    m = np.array([[2, 1], [1j, -1]], dtype=complex)
    plus, minus = spin.eigenvalues(m)
    h = np.trace(m) / 2
    q = np.sqrt(h * h - np.linalg.det(m))
    assert plus == pytest.approx(h + q, rel=1e-14)
    assert minus == pytest.approx(h - q, rel=1e-14)


def test_pauli_round_trip(rng):
    for _ in range(1000):
        m = random_matrix(rng)
        back = spin.pauli_reconstruct(spin.pauli_decompose(m))
        assert np.linalg.norm(back - m) <= 1e-14 * np.linalg.norm(m)


def test_pauli_decompose_of_pauli_basis():
    for k, p in enumerate(spin.PAULI):
        expected = np.zeros(4)
        expected[k] = 1
        np.testing.assert_allclose(spin.pauli_decompose(p), expected, atol=0)


def test_matrix_power_identity():
    np.testing.assert_array_equal(spin.matrix_power(spin.I2, 7), spin.I2)


@pytest.mark.parametrize("theta,n", [(math.pi / 2, 2), (1.0, 37), (math.pi / 2, 157)])
def test_matrix_power_of_rotation(theta, n):
    np.testing.assert_allclose(spin.matrix_power(spin.rotation(theta / n), n),
                               spin.rotation(theta), atol=1e-13)


def test_matrix_power_matches_repeated_product(rng):
    m = random_matrix(rng)
    np.testing.assert_allclose(spin.matrix_power(m, 5), m @ m @ m @ m @ m, rtol=1e-12, atol=0)


def test_matrix_power_rejects_zero():
    with pytest.raises(DomainError):
        spin.matrix_power(spin.I2, 0)


def test_matrix_power_jordan_block():
    m = np.array([[1, 1], [0, 1]], dtype=complex)
    np.testing.assert_array_equal(spin.matrix_power(m, 9), [[1, 9], [0, 1]])


def test_matrix_power_nilpotent():
    m = np.array([[0, 1], [0, 0]], dtype=complex)
    np.testing.assert_array_equal(spin.matrix_power(m, 1), m)
    np.testing.assert_array_equal(spin.matrix_power(m, 3), np.zeros((2, 2)))


def test_near_degenerate_power_is_accurate():
    # eigenvalue gap just above the degeneracy threshold
    m = np.array([[1, 1], [1e-17, 1 + 1e-8]], dtype=complex)
    exact = np.linalg.matrix_power(m, 400)
    np.testing.assert_allclose(spin.matrix_power(m, 400), exact, rtol=1e-11)


@settings(max_examples=200, deadline=None)
@given(matrices, st.sampled_from([1, 2, 5, 37, 1000, 10_000]))
def test_closed_and_iterated_powers_agree(m, n):
    radius = max(abs(x) for x in spin.eigenvalues(m))
    if radius < 1e-100:
        return
    m = m / radius
    plus, minus = spin.eigenvalues(m)
    # extreme non-normality (eigenvector condition ~1e100) is out of reach for any
    # eigenvalue route; the random-matrix test below carries no such filter
    if abs(plus - minus) <= 1e-8 * abs(plus) or np.linalg.cond(np.linalg.eig(m)[1]) > 1e4:
        return
    closed = spin.matrix_power(m, n)
    iterated = spin.matrix_power(m, n, method="iterate")
    scale = np.abs(iterated).max()
    assert np.abs(closed - iterated).max() <= 1e-10 * scale


@pytest.mark.parametrize("n", [3, 64, 1000, 10_000])
def test_closed_and_iterated_powers_agree_on_random_matrices(rng, n):
    for _ in range(300 if n < 10_000 else 60):
        m = random_matrix(rng)
        m = m / max(abs(x) for x in spin.eigenvalues(m))
        plus, minus = spin.eigenvalues(m)
        if abs(plus - minus) <= 1e-8 * abs(plus):
            continue
        closed = spin.matrix_power(m, n)
        iterated = spin.matrix_power(m, n, method="iterate")
        np.testing.assert_allclose(closed, iterated, rtol=1e-10, atol=1e-10 * np.abs(iterated).max())


@settings(max_examples=100, deadline=None)
@given(st.floats(-10, 10), st.floats(0, 2 * math.pi), st.integers(1, 10_000))
def test_powers_of_unitaries_stay_unitary(angle, phase, n):
    u = np.exp(1j * phase) * spin.rotation(angle)
    assert spin.is_unitary(u)
    assert spin.is_unitary(spin.matrix_power(u, n), atol=1e-10)


def test_divided_power_symmetric():
    a, b = 0.3 + 0.4j, -0.2 + 0.1j
    for n in (1, 2, 10, 500):
        assert spin.divided_power(a, b, n) == pytest.approx(spin.divided_power(b, a, n), rel=1e-14)
        assert spin.divided_power(a, b, n) == pytest.approx((a ** n - b ** n) / (a - b), rel=1e-12)


def test_divided_power_confluent_limit():
    x = 0.9 + 0.1j
    assert spin.divided_power(x, x, 50) == pytest.approx(50 * x ** 49, rel=1e-13)


def test_spin_state_rejects_supernormalized():
    spin.spin_state(0.6, 0.8)
    spin.spin_state(0.5, 0.0)
    with pytest.raises(DomainError):
        spin.spin_state(1.0, 0.1)
    with pytest.raises(DomainError):
        spin.spin_state(math.nan)


def test_as_operator_validates():
    with pytest.raises(DomainError):
        spin.as_operator(np.eye(3))
    with pytest.raises(DomainError):
        spin.as_operator([[1, math.inf], [0, 1]])
