import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import random_symmetric, random_unitary

from qstem_ris.scattering import ChannelSet, SystemDims, scattering_from_susceptance, sum_channel_gain
from qstem_ris.spectral import (
    SpectralDecomposition,
    decompose,
    dof,
    reciprocity_obstruction,
    relaxed_optimal_theta,
    upper_bound,
)


@pytest.mark.parametrize("n, l, k, m", [(64, 4, 4, 4), (1, 8, 8, 1), (64, 5, 3, 3)])
def test_dof(n, l, k, m):  # noqa: E741
    assert dof(SystemDims(n, l, k)) == m == SystemDims(n, l, k).m


def test_identity_channels():
    dec = decompose(ChannelSet(np.eye(4), np.eye(4)))
    np.testing.assert_allclose(dec.s, 1.0)
    np.testing.assert_allclose(dec.sigma, 1.0)
    assert dec.m == 4
    assert upper_bound(dec) == pytest.approx(4.0)


@pytest.mark.parametrize("n, l, k", [(8, 4, 4), (16, 2, 5), (4, 6, 3)])
def test_reconstruction(channels, n, l, k):  # noqa: E741
    ch = channels(n, l, k, seed=3)
    dec = decompose(ch)
    hh = ch.h.conj().T
    assert np.linalg.norm(dec.u @ dec.s_matrix() @ dec.v.conj().T - hh) < 1e-10 * np.linalg.norm(hh)
    assert np.linalg.norm(dec.p @ dec.sigma_matrix() @ dec.w.conj().T - ch.e) < 1e-10 * np.linalg.norm(ch.e)
    assert np.all(np.diff(dec.s) <= 0) and np.all(np.diff(dec.sigma) <= 0)
    assert dec.m == min(n, l, k)


def test_rank_one(rng):
    h = np.outer(rng.standard_normal(6), rng.standard_normal(3))
    dec = decompose(ChannelSet(h, rng.standard_normal((6, 2))))
    assert np.sum(dec.s > 1e-12 * dec.s[0]) == 1


def test_upper_bound_arithmetic():
    n = 2
    dec = SpectralDecomposition(np.eye(n), np.array([2.0, 1.0]), np.eye(n), np.eye(n),
                                np.array([3.0, 1.0]), np.eye(n), 2)
    assert upper_bound(dec) == 37.0


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([4, 8, 16]), st.sampled_from([1, 2, 4]), st.integers(0, 2**32 - 1))
def test_bound_dominates_random_symmetric_unitary(n, m, seed):
    rng = np.random.default_rng(seed)
    ch = ChannelSet(rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m)),
                    rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m)))
    ub = upper_bound(decompose(ch))
    theta = scattering_from_susceptance(random_symmetric(rng, n, 1.0))
    assert sum_channel_gain(ch, theta) <= ub * (1 + 1e-9)


def test_relaxed_optimum_identity():
    dec = decompose(ChannelSet(np.eye(3), np.eye(3)))
    np.testing.assert_allclose(relaxed_optimal_theta(dec), np.eye(3), atol=1e-14)


@pytest.mark.parametrize("seed", range(5))
def test_relaxed_optimum_attains_bound(channels, rng, seed):
    ch = channels(16, 4, 4, seed=seed)
    dec = decompose(ch)
    x = random_unitary(rng, 12)
    phases = rng.uniform(0, 2 * np.pi, 4)
    for theta in (relaxed_optimal_theta(dec), relaxed_optimal_theta(dec, phases, x)):
        assert np.linalg.norm(theta @ theta.conj().T - np.eye(16)) < 1e-10
        assert sum_channel_gain(ch, theta) == pytest.approx(upper_bound(dec), rel=1e-9)
    assert np.linalg.norm(theta - theta.T) > 1e-6


def test_relaxed_optimum_rejects_nonunitary(channels):
    dec = decompose(channels(6, 2, 2))
    with pytest.raises(ValueError):
        relaxed_optimal_theta(dec, x=2 * np.eye(4))


def test_obstruction_scalar_case(channels):
    _, asym = reciprocity_obstruction(decompose(channels(8, 4, 1)))
    assert asym == 0.0


def test_obstruction_generic(channels):
    for seed in range(100):
        _, asym = reciprocity_obstruction(decompose(channels(16, 4, 4, seed=seed)))
        assert asym > 1e-6


def test_obstruction_constructed_symmetric(rng):
    p = random_unitary(rng, 6)
    dec = SpectralDecomposition(np.eye(3), np.ones(3), p.conj(), p, np.ones(3), np.eye(3), 3)
    lam, asym = reciprocity_obstruction(dec)
    np.testing.assert_allclose(lam, np.eye(3), atol=1e-12)
    assert asym < 1e-12
