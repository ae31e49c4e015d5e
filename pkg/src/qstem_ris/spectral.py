"""SVD analysis of the cascaded channel: DoF, upper bound, relaxed optimum."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .scattering import ChannelSet, SystemDims


def dof(dims: SystemDims) -> int:
    return min(dims.k, dims.l, dims.n)


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Full SVDs ``H^H = U S V^H`` and ``E = P Sigma W^H``.

    ``s`` and ``sigma`` hold the singular values in descending order, not the
    rectangular diagonal matrices.
    """

    u: np.ndarray
    s: np.ndarray
    v: np.ndarray
    p: np.ndarray
    sigma: np.ndarray
    w: np.ndarray
    m: int

    @property
    def n(self) -> int:
        return self.v.shape[0]

    @property
    def v_m(self) -> np.ndarray:
        return self.v[:, :self.m]

    @property
    def p_m(self) -> np.ndarray:
        return self.p[:, :self.m]

    @property
    def v_rest(self) -> np.ndarray:
        return self.v[:, self.m:]

    @property
    def p_rest(self) -> np.ndarray:
        return self.p[:, self.m:]

    def s_matrix(self) -> np.ndarray:
        out = np.zeros((self.u.shape[0], self.n))
        np.fill_diagonal(out, self.s)
        return out

    def sigma_matrix(self) -> np.ndarray:
        out = np.zeros((self.n, self.w.shape[0]))
        np.fill_diagonal(out, self.sigma)
        return out


def decompose(ch: ChannelSet) -> SpectralDecomposition:
    u, s, vh = np.linalg.svd(ch.h.conj().T, full_matrices=True)
    p, sigma, wh = np.linalg.svd(ch.e, full_matrices=True)
    return SpectralDecomposition(u, s, vh.conj().T, p, sigma, wh.conj().T, dof(ch.dims))


def upper_bound(dec: SpectralDecomposition) -> float:
    """Largest sum channel gain over all unitary (not necessarily symmetric) Theta."""
    m = dec.m
    return float(np.sum((dec.s[:m] * dec.sigma[:m]) ** 2))


def relaxed_optimal_theta(dec: SpectralDecomposition, phases=None, x=None) -> np.ndarray:
    """Unitary Theta attaining :func:`upper_bound`; generally not symmetric.

    ``phases`` (length M, default zeros) sets the diagonal alignment phases and
    ``x`` (unitary, N-M square, default identity) acts on the unused subspace.
    """
    m, n = dec.m, dec.n
    phases = np.zeros(m) if phases is None else np.mod(np.asarray(phases, dtype=float), 2 * np.pi)
    if phases.shape != (m,):
        raise ValueError(f"expected {m} phases, got shape {phases.shape}")
    if x is None:
        x = np.eye(n - m)
    x = np.asarray(x, dtype=complex)
    if x.shape != (n - m, n - m):
        raise ValueError(f"x must be {n - m}x{n - m}, got shape {x.shape}")
    if x.size and np.linalg.norm(x @ x.conj().T - np.eye(n - m)) > 1e-10:
        raise ValueError("x must be unitary")
    phi = np.exp(1j * phases)
    return (dec.v_m * phi) @ dec.p_m.conj().T + dec.v_rest @ x @ dec.p_rest.conj().T


def reciprocity_obstruction(dec: SpectralDecomposition) -> tuple[np.ndarray, float]:
    """``Lambda = P_M^H conj(V_M)`` and its asymmetry ``||Lambda - Lambda^T||_F``.

    A symmetric Theta meeting the alignment condition exists only if Lambda is
    symmetric, which for M > 1 fails almost surely.
    """
    lam = dec.p_m.conj().T @ dec.v_m.conj()
    return lam, float(np.linalg.norm(lam - lam.T))
