"""Monte-Carlo experiment harness comparing the design schemes.

Every scheme in a realization sees the same channel draw, so per-realization
comparisons are paired.  Records come out in canonical order (dims, Q,
realization, scheme) whatever the worker count.
"""
from __future__ import annotations

import csv
import math
import os
import time
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path

import numpy as np

from .channels import PropagationConfig, derive_seed, sample_channels
from .ls_solver import ls_design
from .quasi_newton import OptimizerConfig, newton_ls_design, newton_random_design
from .scattering import DEFAULT_Z0, SystemDims
from .spectral import decompose, upper_bound
from .topology import ArchitectureSpec

SCHEMES = ("LS", "NewtonLS", "NewtonRandom", "NewtonLSFully", "UpperBound")
PRESETS = ("fig3", "fig4", "fig5", "custom")
WORKERS_ENV = "QSTEM_RIS_WORKERS"


def resolve_q(q, dims: SystemDims) -> int:
    """Turn a grid entry into a stem count: an int, ``"full"`` (N-1) or ``"2m-1"``."""
    if isinstance(q, str):
        key = q.strip().lower()
        if key in ("full", "fully", "n-1"):
            value = dims.n - 1
        elif key == "2m-1":
            value = 2 * dims.m - 1
        else:
            value = int(key)
    else:
        value = int(q)
    if not 0 <= value <= dims.n - 1:
        raise ValueError(f"Q={value} is outside [0, {dims.n - 1}] for N={dims.n}")
    return value


def grid_qs(q_grid, dims: SystemDims) -> list[int]:
    """Resolved stem counts for one dims entry, duplicates dropped, order kept."""
    return list(dict.fromkeys(resolve_q(q, dims) for q in q_grid))


@dataclass(frozen=True)
class ExperimentConfig:
    preset: str = "custom"
    dims_grid: tuple[SystemDims, ...] = (SystemDims(16, 4, 4),)
    q_grid: tuple = (1,)
    schemes: tuple[str, ...] = SCHEMES
    realizations: int = 100
    base_seed: int = 0
    propagation: PropagationConfig = field(default_factory=PropagationConfig)
    z0: float = DEFAULT_Z0
    optimizer: OptimizerConfig = field(default_factory=OptimizerConfig)
    timing: bool = False

    def __post_init__(self):
        if self.preset not in PRESETS:
            raise ValueError(f"unknown preset {self.preset!r}")
        if self.realizations < 1:
            raise ValueError("realizations must be at least 1")
        bad = set(self.schemes) - set(SCHEMES)
        if bad:
            raise ValueError(f"unknown schemes {sorted(bad)}")
        if not self.dims_grid or not self.q_grid:
            raise ValueError("dims_grid and q_grid must be nonempty")
        for dims in self.dims_grid:
            for q in self.q_grid:
                resolve_q(q, dims)


def preset_config(name: str, full_scale: bool = False, **overrides) -> ExperimentConfig:
    """Desk-scale presets (N=16, 50 realizations) or the full-size setup."""
    n = 64 if full_scale else 16
    reps = 100 if full_scale else 50
    if name == "fig3":
        qs = (0, 1, 2, 3, 5, 7, 15, 31, "full") if full_scale else (0, 1, 2, 3, 5, 7, "full")
        cfg = dict(dims_grid=(SystemDims(n, 4, 4),), q_grid=qs)
    elif name == "fig4":
        ns = (16, 32, 48, 64) if full_scale else (8, 16, 32)
        cfg = dict(dims_grid=tuple(SystemDims(x, 4, 4) for x in ns), q_grid=(1, 7, "full"),
                   schemes=("LS", "NewtonLS", "NewtonLSFully", "UpperBound"))
    elif name == "fig5":
        cfg = dict(dims_grid=tuple(SystemDims(n, 5, k) for k in range(1, 6)), q_grid=("2m-1",),
                   schemes=("NewtonLS", "NewtonLSFully", "UpperBound"))
    elif name == "custom":
        cfg = {}
    else:
        raise ValueError(f"unknown preset {name!r}")
    cfg.update(preset=name, realizations=reps)
    cfg.update(overrides)
    return ExperimentConfig(**cfg)


@dataclass(frozen=True)
class ResultRecord:
    preset: str
    n: int
    k: int
    l: int  # noqa: E741
    q: int
    scheme: str
    realization_index: int
    derived_seed: int
    gain: float
    residual: float | None = None
    iterations: int | None = None
    wall_ms: float | None = None


@dataclass(frozen=True)
class SummaryRow:
    preset: str
    n: int
    k: int
    l: int  # noqa: E741
    q: int
    scheme: str
    count: int
    mean: float
    std: float
    min: float
    max: float
    ub_ratio: float | None = None


def _timed(fn, *args, **kwargs):
    t0 = time.perf_counter()
    out = fn(*args, **kwargs)
    return out, (time.perf_counter() - t0) * 1e3


def _run_realization(cfg: ExperimentConfig, dims: SystemDims, r: int) -> list[ResultRecord]:
    """All Q values and schemes for one channel draw, in canonical order."""
    seed = derive_seed(cfg.base_seed, r)
    ch = sample_channels(dims, cfg.propagation, seed)
    dec = decompose(ch)
    ub, ub_ms = _timed(upper_bound, dec)
    fully = None
    out = []
    for q in grid_qs(cfg.q_grid, dims):
        spec = ArchitectureSpec.qstem(dims.n, q)
        for scheme in cfg.schemes:
            residual = iterations = None
            if scheme == "LS":
                res, ms = _timed(ls_design, ch, spec, cfg.z0, dec)
                gain, residual = res.gain, res.residual
            elif scheme == "NewtonLS":
                res, ms = _timed(newton_ls_design, ch, spec, cfg.z0, cfg.optimizer)
                gain, iterations = res.gain, res.iterations
            elif scheme == "NewtonRandom":
                res, ms = _timed(newton_random_design, ch, spec, cfg.z0, cfg.optimizer,
                                 seed=derive_seed(seed, q))
                gain, iterations = res.gain, res.iterations
            elif scheme == "NewtonLSFully":
                if fully is None:
                    fully = _timed(newton_ls_design, ch, ArchitectureSpec.fully(dims.n),
                                   cfg.z0, cfg.optimizer)
                res, ms = fully
                gain, iterations = res.gain, res.iterations
            else:
                gain, ms = ub, ub_ms
            out.append(ResultRecord(
                preset=cfg.preset, n=dims.n, k=dims.k, l=dims.l, q=q, scheme=scheme,
                realization_index=r, derived_seed=seed, gain=gain, residual=residual,
                iterations=iterations, wall_ms=ms if cfg.timing else None,
            ))
    return out


def _workers(requested: int | None) -> int:
    if requested is not None:
        return max(1, requested)
    env = os.environ.get(WORKERS_ENV)
    return max(1, int(env)) if env else 1


def run_experiment(cfg: ExperimentConfig, workers: int | None = None) -> list[ResultRecord]:
    """Evaluate every scheme on every (dims, Q, realization).

    ``workers`` (or the ``QSTEM_RIS_WORKERS`` environment variable) sets the
    process count; output does not depend on it.
    """
    tasks = [(dims, r) for dims in cfg.dims_grid for r in range(cfg.realizations)]
    nw = _workers(workers)
    if nw == 1:
        chunks = [_run_realization(cfg, dims, r) for dims, r in tasks]
    else:
        with ProcessPoolExecutor(max_workers=nw) as pool:
            chunks = list(pool.map(_run_realization, [cfg] * len(tasks),
                                   *zip(*tasks), chunksize=max(1, len(tasks) // (4 * nw))))
    # realization-major chunks -> grid-major order
    by_key = defaultdict(list)
    for (dims, r), recs in zip(tasks, chunks):
        for rec in recs:
            by_key[(dims, rec.q)].append(rec)
    ordered = []
    for dims in cfg.dims_grid:
        for q in grid_qs(cfg.q_grid, dims):
            # stable sort keeps scheme order inside a realization
            ordered.extend(sorted(by_key[(dims, q)],
                                  key=lambda rec: rec.realization_index))
    return ordered


def summarize(records) -> list[SummaryRow]:
    """Per (preset, dims, Q, scheme) statistics of the gain, independent of input order."""
    records = list(records)
    if not records:
        raise ValueError("cannot summarize an empty record list")
    groups = defaultdict(list)
    for rec in records:
        groups[(rec.preset, rec.n, rec.k, rec.l, rec.q, rec.scheme)].append(rec.gain)
    means = {key: math.fsum(g) / len(g) for key, g in groups.items()}
    rank = {s: i for i, s in enumerate(SCHEMES)}
    rows = []
    for key in sorted(groups, key=lambda k: (*k[:5], rank.get(k[5], len(rank)), k[5])):
        gains = sorted(groups[key])
        mean = means[key]
        std = math.sqrt(math.fsum((g - mean) ** 2 for g in gains) / (len(gains) - 1)) if len(gains) > 1 else 0.0
        ub = means.get((*key[:5], "UpperBound"))
        rows.append(SummaryRow(*key, count=len(gains), mean=mean, std=std, min=gains[0], max=gains[-1],
                               ub_ratio=mean / ub if ub else None))
    return rows


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return format(value, ".12g")
    return str(value)


def emit_csv(rows, path, row_type=None) -> Path:
    """Write dataclass rows as CSV with 12 significant digits; header-only when empty."""
    rows = list(rows)
    row_type = row_type or (type(rows[0]) if rows else ResultRecord)
    names = [f.name for f in fields(row_type)]
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(names)
        for row in rows:
            w.writerow([_fmt(getattr(row, name)) for name in names])
    return path


def _parse(value: str, annotation):
    if value == "":
        return None
    ann = str(annotation)
    if ann.startswith("int"):
        return int(value)
    if ann.startswith("float"):
        return float(value)
    return value


def read_csv(path, row_type=ResultRecord) -> list:
    with Path(path).open(newline="") as fh:
        reader = csv.DictReader(fh)
        types = {f.name: f.type for f in fields(row_type)}
        if reader.fieldnames != list(types):
            raise ValueError(f"{path}: header {reader.fieldnames} does not match {row_type.__name__}")
        return [row_type(**{k: _parse(v, types[k]) for k, v in row.items()}) for row in reader]


PLOT_SCRIPT = '''\
"""Plot mean gain per scheme from summary.csv (generated file)."""
import csv
import sys
from collections import defaultdict

import matplotlib.pyplot as plt

path = sys.argv[1] if len(sys.argv) > 1 else "summary.csv"
xaxis = sys.argv[2] if len(sys.argv) > 2 else "{xaxis}"
series = defaultdict(list)
with open(path, newline="") as fh:
    for row in csv.DictReader(fh):
        series[row["scheme"]].append((float(row[xaxis]), float(row["mean"])))
for scheme, pts in sorted(series.items()):
    pts.sort()
    plt.plot([p[0] for p in pts], [p[1] for p in pts], marker="o", label=scheme)
plt.xlabel(xaxis)
plt.ylabel("sum channel gain")
plt.legend()
plt.savefig(path.rsplit(".", 1)[0] + ".png", dpi=150)
'''

_XAXIS = {"fig3": "q", "fig4": "n", "fig5": "k", "custom": "q"}


def write_outputs(cfg: ExperimentConfig, records, out_dir) -> dict[str, Path]:
    """Write records.csv, summary.csv and plot_summary.py into ``out_dir``.

    The summary is computed from the records as written, so ``summarize`` on
    records.csv reproduces summary.csv exactly.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = {"records": emit_csv(records, out_dir / "records.csv", ResultRecord)}
    written = read_csv(paths["records"], ResultRecord)
    paths["summary"] = emit_csv(summarize(written), out_dir / "summary.csv", SummaryRow)
    paths["plot"] = out_dir / "plot_summary.py"
    paths["plot"].write_text(PLOT_SCRIPT.format(xaxis=_XAXIS[cfg.preset]))
    return paths


def config_to_dict(cfg: ExperimentConfig) -> dict:
    d = asdict(cfg)
    d["q_grid"] = list(cfg.q_grid)
    d["schemes"] = list(cfg.schemes)
    d["dims_grid"] = [asdict(x) for x in cfg.dims_grid]
    return d


def config_from_dict(d: dict, base: ExperimentConfig | None = None) -> ExperimentConfig:
    """Build a config from a mapping that mirrors :class:`ExperimentConfig`.

    Keys missing from ``d`` keep their value in ``base`` (or the preset named
    by ``d["preset"]``).
    """
    d = dict(d)
    if base is None:
        base = preset_config(d.get("preset", "custom"), full_scale=bool(d.pop("full_scale", False)))
    d.pop("full_scale", None)
    if "dims_grid" in d:
        d["dims_grid"] = tuple(SystemDims(**x) for x in d["dims_grid"])
    for key in ("q_grid", "schemes"):
        if key in d:
            d[key] = tuple(d[key])
    if "propagation" in d:
        d["propagation"] = replace(base.propagation, **d["propagation"])
    if "optimizer" in d:
        d["optimizer"] = replace(base.optimizer, **d["optimizer"])
    return replace(base, **d)


def aligned_gains(records, scheme: str, q: int | None = None, dims: SystemDims | None = None) -> np.ndarray:
    """Gains of one scheme indexed by realization, for paired comparisons."""
    sel = [r for r in records if r.scheme == scheme
           and (q is None or r.q == q)
           and (dims is None or (r.n, r.l, r.k) == (dims.n, dims.l, dims.k))]
    sel.sort(key=lambda r: r.realization_index)
    return np.array([r.gain for r in sel])
