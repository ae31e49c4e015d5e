"""Circuit architectures of a BD-RIS as symmetric susceptance masks.

Ports are numbered 1..N in docstrings and 0..N-1 in code; port ``n`` lives at
array index ``n - 1`` everywhere.  ``vec`` is column-major stacking, so entry
``(i, j)`` of an N x N matrix sits at ``vec`` position ``j * N + i``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

KINDS = ("single", "tree", "group", "qstem", "fully")


@dataclass(frozen=True)
class ArchitectureSpec:
    """Architecture of the reconfigurable impedance network.

    ``param`` is the group size G for ``group`` and the stem count Q for
    ``qstem``; it is ignored for the other kinds.
    """

    kind: str
    n: int
    param: int | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown architecture kind {self.kind!r}")
        if self.n < 1:
            raise ValueError(f"element count must be positive, got {self.n}")
        if self.kind == "qstem":
            if self.param is None or not 0 <= self.param <= self.n - 1:
                raise ValueError(f"Q must lie in [0, {self.n - 1}], got {self.param}")
        elif self.kind == "group":
            if self.param is None or self.param < 1 or self.n % self.param:
                raise ValueError(f"group size {self.param} does not divide N={self.n}")

    @classmethod
    def single(cls, n):
        return cls("single", n)

    @classmethod
    def tree(cls, n):
        return cls("tree", n)

    @classmethod
    def fully(cls, n):
        return cls("fully", n)

    @classmethod
    def group(cls, n, g):
        return cls("group", n, g)

    @classmethod
    def qstem(cls, n, q):
        return cls("qstem", n, q)

    @property
    def stems(self) -> int | None:
        """Equivalent stem count Q, or None for group architectures."""
        return {"single": 0, "tree": 1, "fully": self.n - 1, "qstem": self.param}.get(self.kind)

    def label(self) -> str:
        if self.kind in ("group", "qstem"):
            return f"{self.kind}:{self.param}"
        return self.kind


def parse_architecture(text: str, n: int) -> ArchitectureSpec:
    """Parse ``single``, ``tree``, ``group:G``, ``qstem:Q`` or ``fully``."""
    kind, _, arg = text.strip().lower().partition(":")
    if kind in ("group", "qstem"):
        if not arg:
            raise ValueError(f"architecture {kind!r} needs a parameter, e.g. '{kind}:2'")
        return ArchitectureSpec(kind, n, int(arg))
    if arg:
        raise ValueError(f"architecture {kind!r} takes no parameter")
    return ArchitectureSpec(kind, n)


def circuit_complexity(spec: ArchitectureSpec) -> int:
    """Closed-form count of tunable admittances for each architecture."""
    n = spec.n
    if spec.kind == "single":
        return n
    if spec.kind == "tree":
        return 2 * n - 1
    if spec.kind == "fully":
        return n * (n + 1) // 2
    if spec.kind == "group":
        # tabulated as N(N/G' + 1)/2 with G' the number of groups; param is the group size
        groups = n // spec.param
        return n * (n // groups + 1) // 2
    q = spec.param
    return q * n + n - q * (q + 1) // 2


@dataclass(frozen=True, eq=False)
class SusceptanceMask:
    """Symmetric boolean pattern of entries of B allowed to be nonzero."""

    allowed: np.ndarray

    def __post_init__(self):
        a = np.array(self.allowed, dtype=bool)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"mask must be square, got shape {a.shape}")
        if not np.array_equal(a, a.T):
            raise ValueError("mask must be symmetric")
        if not a.diagonal().all():
            raise ValueError("mask must allow every diagonal entry")
        a.flags.writeable = False
        object.__setattr__(self, "allowed", a)

    @property
    def n(self) -> int:
        return self.allowed.shape[0]

    def __eq__(self, other):
        if not isinstance(other, SusceptanceMask):
            return NotImplemented
        return np.array_equal(self.allowed, other.allowed)

    def __hash__(self):
        return hash(self.allowed.tobytes())

    def offdiag_count(self) -> int:
        """Number of allowed off-diagonal entries, both triangles."""
        return int(self.allowed.sum()) - self.n

    def degrees(self) -> np.ndarray:
        """Vertex degrees of the circuit graph."""
        return self.allowed.sum(axis=1) - 1

    def contains(self, other: SusceptanceMask) -> bool:
        return bool(np.all(other.allowed <= self.allowed))

    def to_text(self) -> str:
        return "\n".join("".join("1" if x else "0" for x in row) for row in self.allowed) + "\n"

    @classmethod
    def from_text(cls, text: str) -> SusceptanceMask:
        rows = [line.strip() for line in text.splitlines() if line.strip()]
        return cls(np.array([[c == "1" for c in row] for row in rows], dtype=bool))


def build_mask(spec: ArchitectureSpec) -> SusceptanceMask:
    n = spec.n
    if spec.kind == "group":
        g = spec.param
        blocks = np.arange(n) // g
        return SusceptanceMask(blocks[:, None] == blocks[None, :])
    q = spec.stems
    idx = np.arange(n)
    # forbidden exactly when both ports are outside the stem set 1..Q
    outside = idx >= q
    allowed = ~(outside[:, None] & outside[None, :]) | np.eye(n, dtype=bool)
    return SusceptanceMask(allowed)


def independent_dim(mask: SusceptanceMask) -> int:
    return mask.n + mask.offdiag_count() // 2


@dataclass(frozen=True, eq=False)
class TransformMatrix:
    """Sparse form of the 0/1 matrix R with ``vec(B) = R @ b``.

    Variable ``k`` sets ``B[rows[k], cols[k]]`` and its mirror.  Variables are
    ordered by a row-major sweep of the allowed upper triangle, which for a
    Q-stem mask gives rows 1..Q in full followed by the remaining diagonal.
    """

    n: int
    rows: np.ndarray
    cols: np.ndarray
    _mask: SusceptanceMask = field(repr=False)

    @property
    def d(self) -> int:
        return len(self.rows)

    @property
    def mask(self) -> SusceptanceMask:
        return self._mask

    @cached_property
    def is_diag(self) -> np.ndarray:
        return self.rows == self.cols

    def dense(self) -> np.ndarray:
        """Materialize R as an N^2 x d float array."""
        r = np.zeros((self.n * self.n, self.d))
        k = np.arange(self.d)
        r[self.cols * self.n + self.rows, k] = 1.0
        r[self.rows * self.n + self.cols, k] = 1.0
        return r


def build_transform(mask: SusceptanceMask) -> TransformMatrix:
    rows, cols = np.nonzero(np.triu(mask.allowed))
    rows.flags.writeable = False
    cols.flags.writeable = False
    return TransformMatrix(mask.n, rows, cols, mask)


def expand(b, t: TransformMatrix) -> np.ndarray:
    """Place the independent variables into a symmetric N x N matrix."""
    b = np.asarray(b, dtype=float)
    if b.shape != (t.d,):
        raise ValueError(f"expected {t.d} independent variables, got shape {b.shape}")
    out = np.zeros((t.n, t.n))
    out[t.rows, t.cols] = b
    out[t.cols, t.rows] = b
    return out


def contract(B, t: TransformMatrix | SusceptanceMask) -> np.ndarray:
    """Inverse of :func:`expand`; B must be exactly symmetric and masked."""
    if isinstance(t, SusceptanceMask):
        t = build_transform(t)
    B = np.asarray(B, dtype=float)
    if B.shape != (t.n, t.n):
        raise ValueError(f"expected a {t.n}x{t.n} matrix, got shape {B.shape}")
    if not np.array_equal(B, B.T):
        raise ValueError("susceptance matrix is not symmetric")
    outside = ~t.mask.allowed & (B != 0)
    if outside.any():
        i, j = np.argwhere(outside)[0]
        raise ValueError(f"nonzero entry at forbidden position ({i + 1}, {j + 1})")
    return B[t.rows, t.cols].copy()
