"""Limited-memory quasi-Newton ascent on the independent susceptance variables.

Every iterate is mapped through the susceptance-to-scattering transform, so
all Theta visited are symmetric unitary by construction.

Internally the optimizer works on ``x = z0 * b`` and on the gain divided by
its SVD upper bound.  Channel gains are O(1e-12) under realistic path loss,
so tolerances on the raw objective would be meaningless.
"""
from __future__ import annotations

import warnings
from collections import deque
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import line_search

from .ls_solver import ls_design
from .scattering import DEFAULT_Z0, ChannelSet, scattering_from_susceptance, sum_channel_gain
from .spectral import decompose, upper_bound
from .topology import ArchitectureSpec, TransformMatrix, build_mask, build_transform, expand


class NonFiniteObjectiveError(ArithmeticError):
    pass


@dataclass(frozen=True)
class OptimizerConfig:
    max_iters: int = 500
    grad_tol: float = 1e-6
    step_tol: float = 1e-10
    history: int = 10
    seed: int = 0

    def __post_init__(self):
        if self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")
        if self.grad_tol <= 0 or self.step_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.history < 1:
            raise ValueError("history must be at least 1")


@dataclass(frozen=True, eq=False)
class OptimizeTrace:
    iterations: int
    objective_path: np.ndarray
    final_grad_norm: float
    converged: bool
    reason: str = ""


@dataclass(frozen=True, eq=False)
class DesignResult:
    scheme: str
    theta: np.ndarray
    b: np.ndarray
    gain: float
    residual: float | None = None
    trace: OptimizeTrace | None = field(default=None, repr=False)

    @property
    def iterations(self) -> int | None:
        return None if self.trace is None else self.trace.iterations


class _Problem:
    """Gain and its gradient for a fixed channel, in normalized coordinates."""

    def __init__(self, ch: ChannelSet, t: TransformMatrix, scale: float = 1.0):
        self.ch = ch
        self.t = t
        self.hh = ch.h @ ch.h.conj().T
        self.ee = ch.e @ ch.e.conj().T
        self.scale = scale
        self._cache_key = None
        self._cache = None
        self.nfev = 0

    def evaluate(self, x):
        """Return ``(f, grad)`` with ``B = expand(x) / z0``, so ``z0`` drops out.

        ``df = 2 Re tr(Y dX)`` with ``Y = -2j M^-1 EE^H Theta^H HH^H M^-1``
        and ``M = I + j X``, using ``Theta = 2 M^-1 - I``.
        """
        key = x.tobytes()
        if key == self._cache_key:
            return self._cache
        self.nfev += 1
        n = self.t.n
        xm = expand(x, self.t)
        minv = np.linalg.inv(np.eye(n) + 1j * xm)
        theta = 2.0 * minv - np.eye(n)
        ft = self.ch.h.conj().T @ theta @ self.ch.e
        f = float(np.vdot(ft, ft).real)
        y = -2j * (minv @ self.ee @ theta.conj().T @ self.hh @ minv)
        gm = 2.0 * y.real.T
        rows, cols = self.t.rows, self.t.cols
        g = gm[rows, cols] + np.where(rows != cols, gm[cols, rows], 0.0)
        self._cache_key = key
        self._cache = (f / self.scale, g / self.scale)
        return self._cache


def objective(b, ch: ChannelSet, t: TransformMatrix, z0: float = DEFAULT_Z0) -> float:
    """Sum channel gain of the Theta generated by the independent variables ``b``."""
    b = np.asarray(b, dtype=float)
    f, _ = _Problem(ch, t).evaluate(z0 * b)
    return f


def gradient(b, ch: ChannelSet, t: TransformMatrix, z0: float = DEFAULT_Z0) -> np.ndarray:
    """Analytic gradient of :func:`objective` with respect to ``b``.

    An off-diagonal variable drives both mirrored entries of B and receives
    the sum of both partial derivatives.
    """
    b = np.asarray(b, dtype=float)
    if b.shape != (t.d,):
        raise ValueError(f"expected {t.d} independent variables, got shape {b.shape}")
    _, g = _Problem(ch, t).evaluate(z0 * b)
    return z0 * g


def _two_loop(g, pairs):
    q = g.copy()
    alphas = []
    for s, y, rho in reversed(pairs):
        a = rho * (s @ q)
        alphas.append(a)
        q -= a * y
    if pairs:
        s, y, _ = pairs[-1]
        q *= (s @ y) / (y @ y)
    for (s, y, rho), a in zip(pairs, reversed(alphas)):
        q += (a - rho * (y @ q)) * s
    return q


def _backtrack(fun, x, fx, g, p, c1=1e-4, shrink=0.5, tries=40):
    slope = g @ p
    alpha = 1.0
    for _ in range(tries):
        f_new = fun(x + alpha * p)
        if f_new <= fx + c1 * alpha * slope:
            return alpha
        alpha *= shrink
    return None


def _minimize(prob: _Problem, x0, cfg: OptimizerConfig):
    """L-BFGS minimization of ``-f`` with a Wolfe line search."""

    def phi(x):
        f, _ = prob.evaluate(x)
        if not np.isfinite(f):
            raise NonFiniteObjectiveError(f"objective evaluated to {f}")
        return -f

    def dphi(x):
        return -prob.evaluate(x)[1]

    x = np.array(x0, dtype=float)
    fx, gx = phi(x), dphi(x)
    if not np.all(np.isfinite(gx)):
        raise NonFiniteObjectiveError("gradient is not finite at the initial point")
    pairs = deque(maxlen=cfg.history)
    path = [-fx]
    old_fx = None
    converged, reason = False, "max_iters"
    for it in range(cfg.max_iters + 1):
        if np.max(np.abs(gx), initial=0.0) <= cfg.grad_tol * (abs(fx) + 1.0):
            converged, reason = True, "grad_tol"
            break
        if it == cfg.max_iters:
            break
        p = -_two_loop(gx, list(pairs))
        if gx @ p >= 0:
            pairs.clear()
            p = -gx
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            alpha, *_ = line_search(phi, dphi, x, p, gfk=gx, old_fval=fx,
                                    old_old_fval=old_fx, c1=1e-4, c2=0.9)
        if alpha is None:
            pairs.clear()
            p = -gx
            alpha = _backtrack(phi, x, fx, gx, p)
            if alpha is None:
                reason = "line_search"
                break
        s = alpha * p
        x_new = x + s
        f_new, g_new = phi(x_new), dphi(x_new)
        if f_new > fx:
            # line search never accepts an increase; guard against rounding
            reason = "line_search"
            break
        y = g_new - gx
        sy = s @ y
        if sy > 1e-12 * np.linalg.norm(s) * np.linalg.norm(y):
            pairs.append((s, y, 1.0 / sy))
        old_fx, x, fx, gx = fx, x_new, f_new, g_new
        path.append(-fx)
        if np.max(np.abs(s)) <= cfg.step_tol * (1.0 + np.max(np.abs(x))):
            converged, reason = True, "step_tol"
            break
    grad_norm = float(np.max(np.abs(gx), initial=0.0))
    return x, path, len(path) - 1, grad_norm, converged, reason


def optimize(b0, ch: ChannelSet, t: TransformMatrix, z0: float = DEFAULT_Z0,
             cfg: OptimizerConfig | None = None):
    """Maximize the sum channel gain over ``b`` starting from ``b0``.

    Returns ``(b_star, trace)``.  ``trace.objective_path`` holds the raw gain
    after each accepted step and never decreases.  ``final_grad_norm`` and the
    ``grad_tol`` test refer to the normalized problem.
    """
    cfg = cfg or OptimizerConfig()
    b0 = np.asarray(b0, dtype=float)
    if b0.shape != (t.d,):
        raise ValueError(f"expected {t.d} independent variables, got shape {b0.shape}")
    scale = upper_bound(decompose(ch))
    if not np.isfinite(scale) or scale <= 0:
        scale = 1.0
    prob = _Problem(ch, t, scale)
    x, path, iters, gnorm, converged, reason = _minimize(prob, z0 * b0, cfg)
    trace = OptimizeTrace(
        iterations=iters,
        objective_path=np.asarray(path) * scale,
        final_grad_norm=gnorm,
        converged=converged,
        reason=reason,
    )
    return x / z0, trace


def _finish(scheme, b, ch, t, z0, trace):
    theta = scattering_from_susceptance(expand(b, t), z0)
    return DesignResult(scheme, theta, b, sum_channel_gain(ch, theta), trace=trace)


def newton_ls_design(ch: ChannelSet, spec: ArchitectureSpec, z0: float = DEFAULT_Z0,
                     cfg: OptimizerConfig | None = None) -> DesignResult:
    init = ls_design(ch, spec, z0)
    b, trace = optimize(init.b, ch, init.transform, z0, cfg)
    return _finish("newton_ls", b, ch, init.transform, z0, trace)


def newton_random_design(ch: ChannelSet, spec: ArchitectureSpec, z0: float = DEFAULT_Z0,
                         cfg: OptimizerConfig | None = None, seed: int | None = None) -> DesignResult:
    """Quasi-Newton from ``b0 ~ N(0, 1) / z0``; ``seed`` overrides ``cfg.seed``."""
    cfg = cfg or OptimizerConfig()
    if seed is not None:
        cfg = replace(cfg, seed=seed)
    t = build_transform(build_mask(spec))
    rng = np.random.default_rng(cfg.seed)
    b0 = rng.standard_normal(t.d) / z0
    b, trace = optimize(b0, ch, t, z0, cfg)
    return _finish("newton_random", b, ch, t, z0, trace)
