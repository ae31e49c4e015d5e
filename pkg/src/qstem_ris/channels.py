"""Rayleigh-faded channels with distance-based path loss."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .scattering import ChannelSet, SystemDims


@dataclass(frozen=True)
class PropagationConfig:
    """Large-scale propagation parameters; defaults follow the reference setup."""

    l0_db: float = -30.0
    alpha_bs_ris: float = 2.0
    alpha_ris_user: float = 2.2
    d_bs_ris: float = 50.0 * math.sqrt(2.0)
    d_ris_user: float = 50.0 * math.sqrt(2.0)

    def __post_init__(self):
        if self.alpha_bs_ris < 0 or self.alpha_ris_user < 0:
            raise ValueError("path-loss exponents must be nonnegative")
        if self.d_bs_ris <= 0 or self.d_ris_user <= 0:
            raise ValueError("link distances must be positive")


def path_loss(d: float, l0_db: float, alpha: float) -> float:
    """Linear power gain ``10^(l0_db/10) * d^-alpha``."""
    if d <= 0:
        raise ValueError(f"distance must be positive, got {d}")
    return 10.0 ** (l0_db / 10.0) * d ** (-alpha)


def derive_seed(base_seed: int, realization: int) -> int:
    """64-bit seed for one Monte-Carlo realization, independent of run order."""
    ss = np.random.SeedSequence([int(base_seed), int(realization)])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def _cn(rng, shape, power):
    scale = math.sqrt(power / 2.0)
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


def sample_channels(dims: SystemDims, cfg: PropagationConfig, seed: int) -> ChannelSet:
    """Draw E (N x L) then H (N x K) with i.i.d. CN(0, path loss) entries."""
    rng = np.random.Generator(np.random.PCG64(seed))
    e = _cn(rng, (dims.n, dims.l), path_loss(cfg.d_bs_ris, cfg.l0_db, cfg.alpha_bs_ris))
    h = _cn(rng, (dims.n, dims.k), path_loss(cfg.d_ris_user, cfg.l0_db, cfg.alpha_ris_user))
    return ChannelSet(h, e)


def dump_channels(ch: ChannelSet, path) -> None:
    """Write ``h`` then ``e`` as CSV rows of interleaved real/imag parts.

    The first line of each block is ``name,rows,cols``.
    """
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        for name, mat in (("h", ch.h), ("e", ch.e)):
            w.writerow([name, *mat.shape])
            for row in mat:
                w.writerow([repr(float(x)) for z in row for x in (z.real, z.imag)])


def load_channels(path) -> ChannelSet:
    with Path(path).open(newline="") as fh:
        rows = list(csv.reader(fh))
    mats = {}
    i = 0
    while i < len(rows):
        name, r, c = rows[i][0], int(rows[i][1]), int(rows[i][2])
        block = np.array(rows[i + 1:i + 1 + r], dtype=float).reshape(r, c, 2)
        mats[name] = block[..., 0] + 1j * block[..., 1]
        i += 1 + r
    return ChannelSet(mats["h"], mats["e"])
