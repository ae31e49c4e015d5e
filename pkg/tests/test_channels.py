import math

import numpy as np
import pytest

from qstem_ris.channels import (
    PropagationConfig,
    derive_seed,
    dump_channels,
    load_channels,
    path_loss,
    sample_channels,
)
from qstem_ris.scattering import SystemDims

D = 50 * math.sqrt(2)


@pytest.mark.parametrize("d, l0, alpha, expected", [
    (1.0, -30.0, 2.0, 1e-3),
    (1.0, 0.0, 3.7, 1.0),
    (100.0, -30.0, 2.0, 1e-7),
    (D, -30.0, 2.0, 2e-7),
])
def test_path_loss(d, l0, alpha, expected):
    assert path_loss(d, l0, alpha) == pytest.approx(expected, rel=1e-12)


def test_path_loss_rejects_nonpositive_distance():
    with pytest.raises(ValueError):
        path_loss(0.0, -30, 2)


def test_config_validation():
    with pytest.raises(ValueError):
        PropagationConfig(d_bs_ris=0.0)
    with pytest.raises(ValueError):
        PropagationConfig(alpha_ris_user=-1.0)


def test_deterministic():
    dims = SystemDims(16, 4, 3)
    a = sample_channels(dims, PropagationConfig(), 99)
    b = sample_channels(dims, PropagationConfig(), 99)
    np.testing.assert_array_equal(a.h, b.h)
    np.testing.assert_array_equal(a.e, b.e)
    c = sample_channels(dims, PropagationConfig(), 100)
    assert not np.array_equal(a.h, c.h)
    assert a.h.shape == (16, 3) and a.e.shape == (16, 4)


def test_derived_seeds_distinct_and_stable():
    seeds = [derive_seed(7, r) for r in range(1000)]
    assert len(set(seeds)) == 1000
    assert derive_seed(7, 3) == seeds[3]
    assert all(0 <= s < 2**64 for s in seeds)


def test_second_moments():
    # 400 draws of a 64x4 H (and 64x4 E) give 102400 samples per link
    cfg = PropagationConfig()
    dims = SystemDims(64, 4, 4)
    hs, es = [], []
    for r in range(400):
        ch = sample_channels(dims, cfg, derive_seed(2024, r))
        hs.append(ch.h.ravel())
        es.append(ch.e.ravel())
    h = np.concatenate(hs)
    e = np.concatenate(es)
    ph = path_loss(D, -30, 2.2)
    pe = path_loss(D, -30, 2.0)
    assert np.mean(np.abs(h) ** 2) == pytest.approx(ph, rel=0.03)
    assert np.mean(np.abs(e) ** 2) == pytest.approx(pe, rel=0.03)
    # circular symmetry: each quadrature carries half the power; var of x^2 is 2 sigma^4
    for x, p in ((h, ph), (e, pe)):
        for part in (x.real, x.imag):
            se = math.sqrt(2.0) * (p / 2) / math.sqrt(part.size)
            assert abs(np.mean(part**2) - p / 2) < 3 * se
        assert abs(np.mean(x.real * x.imag)) < 3 * (p / 2) / math.sqrt(x.size)


def test_dump_load_roundtrip(tmp_path):
    ch = sample_channels(SystemDims(5, 2, 3), PropagationConfig(), 1)
    path = tmp_path / "ch.csv"
    dump_channels(ch, path)
    back = load_channels(path)
    np.testing.assert_array_equal(back.h, ch.h)
    np.testing.assert_array_equal(back.e, ch.e)
