"""Command line entry point: ``qstem-ris run | summarize | mask``."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path

import yaml

from . import bench
from .scattering import SystemDims
from .topology import build_mask, circuit_complexity, independent_dim, parse_architecture

log = logging.getLogger("qstem_ris")


def _q_entry(text: str):
    try:
        return int(text)
    except ValueError:
        return text


def _config_from_args(args) -> bench.ExperimentConfig:
    if args.config:
        data = yaml.safe_load(Path(args.config).read_text()) or {}
        if args.preset:
            data["preset"] = args.preset
        if args.full_scale:
            data["full_scale"] = True
        cfg = bench.config_from_dict(data)
    else:
        cfg = bench.preset_config(args.preset or "fig3", full_scale=args.full_scale)

    over = {}
    if args.n or args.k or args.l:
        first = cfg.dims_grid[0]
        ns = args.n or [first.n]
        ks = args.k or [first.k]
        ls = args.l or [first.l]
        over["dims_grid"] = tuple(SystemDims(n, l, k) for n in ns for l in ls for k in ks)  # noqa: E741
    if args.q:
        over["q_grid"] = tuple(_q_entry(q) for q in args.q)
    if args.schemes:
        over["schemes"] = tuple(s.strip() for s in args.schemes.split(",") if s.strip())
    if args.realizations is not None:
        over["realizations"] = args.realizations
    if args.seed is not None:
        over["base_seed"] = args.seed
    if args.z0 is not None:
        over["z0"] = args.z0
    if args.max_iters is not None:
        over["optimizer"] = replace(cfg.optimizer, max_iters=args.max_iters)
    if args.timing:
        over["timing"] = True
    return replace(cfg, **over)


def cmd_run(args) -> int:
    cfg = _config_from_args(args)
    log.info("running preset=%s dims=%d q=%s realizations=%d",
             cfg.preset, len(cfg.dims_grid), list(cfg.q_grid), cfg.realizations)
    records = bench.run_experiment(cfg, workers=args.workers)
    paths = bench.write_outputs(cfg, records, args.out)
    (Path(args.out) / "config.json").write_text(json.dumps(bench.config_to_dict(cfg), indent=2, sort_keys=True) + "\n")
    for row in bench.summarize(records):
        ratio = "" if row.ub_ratio is None else f"  ub_ratio={row.ub_ratio:.4f}"
        print(f"N={row.n:<3d} K={row.k} L={row.l} Q={row.q:<3d} {row.scheme:<14s} "
              f"mean={row.mean:.6g} std={row.std:.3g}{ratio}")
    log.info("wrote %s", ", ".join(str(p) for p in paths.values()))
    return 0


def cmd_summarize(args) -> int:
    records = bench.read_csv(args.inp, bench.ResultRecord)
    bench.emit_csv(bench.summarize(records), args.out, bench.SummaryRow)
    return 0


def cmd_mask(args) -> int:
    spec = parse_architecture(args.arch, args.n)
    mask = build_mask(spec)
    sys.stdout.write(mask.to_text())
    print(f"# {spec.label()} N={spec.n}: {independent_dim(mask)} admittances "
          f"(closed form {circuit_complexity(spec)})", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qstem-ris", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a Monte-Carlo experiment and write CSV tables")
    run.add_argument("--config", help="YAML/JSON file mirroring ExperimentConfig")
    run.add_argument("--preset", choices=bench.PRESETS)
    run.add_argument("--full-scale", action="store_true", help="N=64 and 100 realizations")
    run.add_argument("--n", type=int, action="append", help="RIS elements (repeatable)")
    run.add_argument("--k", type=int, action="append", help="users (repeatable)")
    run.add_argument("--l", type=int, action="append", help="BS antennas (repeatable)")
    run.add_argument("--q", action="append", help="stem count, 'full' or '2m-1' (repeatable)")
    run.add_argument("--schemes", help="comma list from " + ",".join(bench.SCHEMES))
    run.add_argument("--realizations", type=int)
    run.add_argument("--seed", type=int)
    run.add_argument("--z0", type=float)
    run.add_argument("--max-iters", type=int)
    run.add_argument("--timing", action="store_true", help="record wall_ms (output no longer reproducible)")
    run.add_argument("--workers", type=int, help=f"process count (default ${bench.WORKERS_ENV} or 1)")
    run.add_argument("--out", default="results")
    run.set_defaults(func=cmd_run)

    summ = sub.add_parser("summarize", help="aggregate a records CSV")
    summ.add_argument("--in", dest="inp", required=True)
    summ.add_argument("--out", required=True)
    summ.set_defaults(func=cmd_summarize)

    mask = sub.add_parser("mask", help="print an architecture mask as a 0/1 grid")
    mask.add_argument("--arch", required=True, help="single, tree, group:G, qstem:Q or fully")
    mask.add_argument("--n", type=int, required=True)
    mask.set_defaults(func=cmd_mask)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
