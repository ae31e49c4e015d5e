"""Susceptance-to-scattering map and the sum channel gain objective."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DEFAULT_Z0 = 50.0


@dataclass(frozen=True)
class SystemDims:
    """RIS elements ``n``, BS antennas ``l`` and single-antenna users ``k``."""

    n: int
    l: int  # noqa: E741
    k: int

    def __post_init__(self):
        if min(self.n, self.l, self.k) < 1:
            raise ValueError(f"dimensions must be positive, got {self}")

    @property
    def m(self) -> int:
        """Degrees of freedom of the effective channel."""
        return min(self.k, self.l, self.n)


@dataclass(frozen=True, eq=False)
class ChannelSet:
    """RIS-to-user channels ``h`` (N x K, one column per user) and BS-to-RIS ``e`` (N x L)."""

    h: np.ndarray
    e: np.ndarray

    def __post_init__(self):
        h = np.array(self.h, dtype=complex)
        e = np.array(self.e, dtype=complex)
        if h.ndim != 2 or e.ndim != 2 or h.shape[0] != e.shape[0]:
            raise ValueError(f"inconsistent channel shapes {h.shape} and {e.shape}")
        if not (np.isfinite(h).all() and np.isfinite(e).all()):
            raise ValueError("channels contain non-finite entries")
        h.flags.writeable = False
        e.flags.writeable = False
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "e", e)

    @property
    def dims(self) -> SystemDims:
        return SystemDims(n=self.h.shape[0], l=self.e.shape[1], k=self.h.shape[1])

    def scaled(self, ch=1.0, ce=1.0) -> ChannelSet:
        return ChannelSet(self.h * ch, self.e * ce)


def scattering_from_susceptance(B, z0: float = DEFAULT_Z0) -> np.ndarray:
    """Theta = (I + j z0 B)^-1 (I - j z0 B) for real symmetric B.

    The result is symmetric unitary.  The system matrix always has full rank
    because its eigenvalues are 1 + j z0 lambda with real lambda.
    """
    B = np.asarray(B)
    if np.iscomplexobj(B):
        if np.any(B.imag != 0):
            raise ValueError("susceptance matrix must be real")
        B = B.real
    if B.ndim != 2 or B.shape[0] != B.shape[1]:
        raise ValueError(f"susceptance matrix must be square, got shape {B.shape}")
    if not np.allclose(B, B.T, rtol=0, atol=1e-12 * max(1.0, np.abs(B).max(initial=0))):
        raise ValueError("susceptance matrix must be symmetric")
    n = B.shape[0]
    jzb = 1j * z0 * B
    eye = np.eye(n)
    return np.linalg.solve(eye + jzb, eye - jzb)


def is_symmetric_unitary(theta, tol: float | None = None) -> bool:
    """Check ``||Theta Theta^H - I||_F`` and ``||Theta - Theta^T||_F`` against ``tol`` (default 1e-10 N)."""
    theta = np.asarray(theta)
    n = theta.shape[0]
    if tol is None:
        tol = 1e-10 * n
    unit = np.linalg.norm(theta @ theta.conj().T - np.eye(n))
    sym = np.linalg.norm(theta - theta.T)
    return bool(unit <= tol and sym <= tol)


def sum_channel_gain(ch: ChannelSet, theta) -> float:
    """Sum of effective channel gains ``||H^H Theta E||_F^2``."""
    theta = np.asarray(theta)
    n = ch.h.shape[0]
    if theta.shape != (n, n):
        raise ValueError(f"scattering matrix shape {theta.shape} does not match N={n}")
    f = ch.h.conj().T @ theta @ ch.e
    return float(np.vdot(f, f).real)
