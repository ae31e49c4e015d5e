"""Closed-form least-squares design of the susceptance variables.

Forcing ``V_M^H Theta P_M = I`` with Theta from the Cayley-type map is the
linear condition ``B C = D``.  Splitting it into real and imaginary parts and
substituting ``vec(B) = R b`` gives a real system ``A b = z`` that is solved
in the least-squares sense.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .scattering import DEFAULT_Z0, ChannelSet, scattering_from_susceptance, sum_channel_gain
from .spectral import SpectralDecomposition, decompose
from .topology import ArchitectureSpec, TransformMatrix, build_mask, build_transform, expand

RANK_RTOL = 1e-10


@dataclass(frozen=True, eq=False)
class LsSystem:
    a: np.ndarray
    z: np.ndarray
    c: np.ndarray
    dd: np.ndarray


@dataclass(frozen=True, eq=False)
class LsResult:
    b: np.ndarray
    residual: float
    theta: np.ndarray
    gain: float
    transform: TransformMatrix = field(repr=False)
    rank: int = 0
    underdetermined: bool = False


def build_cd(dec: SpectralDecomposition, z0: float = DEFAULT_Z0) -> tuple[np.ndarray, np.ndarray]:
    c = 1j * z0 * (dec.v_m + dec.p_m)
    dd = dec.p_m - dec.v_m
    return c, dd


def assemble_system(c, dd, t: TransformMatrix) -> LsSystem:
    """Build ``A = [(Re C^T kron I) R; (Im C^T kron I) R]`` and ``z``.

    Column k of the upper block is ``vec(expand(e_k) @ Re C)``; ``expand(e_k)``
    has ones at (i, j) and (j, i), so only rows i and j of the product are
    nonzero and the Kronecker product is never formed.
    """
    c = np.asarray(c)
    dd = np.asarray(dd)
    n, m = c.shape
    if n != t.n or dd.shape != (n, m):
        raise ValueError(f"shape mismatch: C {c.shape}, D {dd.shape}, N={t.n}")
    i, j = t.rows, t.cols
    offdiag = i != j
    k = np.arange(t.d)
    a = np.zeros((2 * m * n, t.d))
    for blk, part in enumerate((c.real, c.imag)):
        base = blk * m * n
        for col in range(m):
            off = base + col * n
            # row i of (E_ij + E_ji) @ X is X[j], row j is X[i]
            a[off + i, k] += part[j, col]
            a[off + j[offdiag], k[offdiag]] += part[i[offdiag], col]
    z = np.concatenate([dd.real.ravel(order="F"), dd.imag.ravel(order="F")])
    return LsSystem(a, z, c, dd)


def solve_ls(sys: LsSystem) -> tuple[np.ndarray, float, int]:
    """Minimum-norm least-squares solution, its residual norm and the numerical rank."""
    b, _, rank, _ = np.linalg.lstsq(sys.a, sys.z, rcond=RANK_RTOL)
    residual = float(np.linalg.norm(sys.a @ b - sys.z))
    return b, residual, int(rank)


def ls_design(ch: ChannelSet, spec: ArchitectureSpec, z0: float = DEFAULT_Z0,
              dec: SpectralDecomposition | None = None) -> LsResult:
    if spec.n != ch.dims.n:
        raise ValueError(f"architecture has N={spec.n} but channels have N={ch.dims.n}")
    if dec is None:
        dec = decompose(ch)
    t = build_transform(build_mask(spec))
    c, dd = build_cd(dec, z0)
    sys = assemble_system(c, dd, t)
    b, residual, rank = solve_ls(sys)
    theta = scattering_from_susceptance(expand(b, t), z0)
    return LsResult(
        b=b,
        residual=residual,
        theta=theta,
        gain=sum_channel_gain(ch, theta),
        transform=t,
        rank=rank,
        underdetermined=sys.a.shape[0] < t.d,
    )
