import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from oracles import cayley_explicit_inverse, random_symmetric

from qstem_ris.scattering import (
    ChannelSet,
    SystemDims,
    is_symmetric_unitary,
    scattering_from_susceptance,
    sum_channel_gain,
)


def test_zero_susceptance_gives_identity():
    np.testing.assert_array_equal(scattering_from_susceptance(np.zeros((5, 5))), np.eye(5))


def test_diagonal_susceptance_is_phase_shift():
    b = np.array([0.01, -0.03, 0.2, 0.0])
    z0 = 50.0
    theta = scattering_from_susceptance(np.diag(b), z0)
    expected = (1 - 1j * z0 * b) / (1 + 1j * z0 * b)
    np.testing.assert_allclose(np.diag(theta), expected, rtol=1e-14)
    np.testing.assert_allclose(np.abs(np.diag(theta)), 1.0, rtol=1e-14)
    assert np.count_nonzero(theta - np.diag(np.diag(theta))) == 0


def test_random_symmetric_is_symmetric_unitary(rng):
    B = random_symmetric(rng, 8, scale=0.05)
    theta = scattering_from_susceptance(B, 50.0)
    assert np.linalg.norm(theta @ theta.conj().T - np.eye(8)) < 1e-10
    assert np.linalg.norm(theta - theta.T) < 1e-10
    np.testing.assert_allclose(theta, cayley_explicit_inverse(B, 50.0), atol=1e-12)


@given(st.integers(1, 32), st.floats(1e-3, 10), st.integers(0, 2**32 - 1))
def test_symmetric_unitary_property(n, scale, seed):
    B = random_symmetric(np.random.default_rng(seed), n, scale=scale)
    assert is_symmetric_unitary(scattering_from_susceptance(B, 50.0))


def test_asymmetric_rejected():
    B = np.zeros((3, 3))
    B[0, 1] = 1.0
    with pytest.raises(ValueError):
        scattering_from_susceptance(B)


def test_perturbation_smoke(rng):
    B = random_symmetric(rng, 64, scale=0.02)
    dB = random_symmetric(rng, 64)
    dB *= 1e-8 / np.linalg.norm(dB)
    diff = scattering_from_susceptance(B + dB) - scattering_from_susceptance(B)
    assert np.linalg.norm(diff) < 1e-5


def test_gain_identity_case():
    n = 5
    ch = ChannelSet(np.eye(n), np.eye(n))
    assert sum_channel_gain(ch, np.eye(n)) == pytest.approx(n)


def test_gain_per_user_sum_and_homogeneity(channels, rng):
    ch = channels(8, 3, 4, seed=7)
    theta = scattering_from_susceptance(random_symmetric(rng, 8, 0.05))
    per_user = sum(np.linalg.norm(ch.h[:, k].conj() @ theta @ ch.e) ** 2 for k in range(4))
    gain = sum_channel_gain(ch, theta)
    assert gain == pytest.approx(per_user, rel=1e-9)
    c = 3.0 - 2.0j
    assert sum_channel_gain(ch.scaled(ch=c), theta) == pytest.approx(abs(c) ** 2 * gain, rel=1e-12)


def test_unitary_preserves_power(channels, rng):
    ch = channels(8, 4, 2)
    theta = scattering_from_susceptance(random_symmetric(rng, 8, 0.05))
    assert np.linalg.norm(theta @ ch.e) == pytest.approx(np.linalg.norm(ch.e), rel=1e-12)


def test_gain_dimension_mismatch(channels):
    with pytest.raises(ValueError):
        sum_channel_gain(channels(8, 2, 2), np.eye(4))


def test_channelset_validation():
    with pytest.raises(ValueError):
        ChannelSet(np.ones((4, 2)), np.ones((3, 2)))
    with pytest.raises(ValueError):
        ChannelSet(np.full((2, 2), np.nan), np.ones((2, 2)))
    assert ChannelSet(np.ones((4, 2)), np.ones((4, 3))).dims == SystemDims(n=4, l=3, k=2)
