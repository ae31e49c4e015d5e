"""Run the figure presets and write records, summaries and plot scripts.

    python scripts/run_presets.py --out results            # desk scale
    python scripts/run_presets.py --full-scale --out big  # N=64, 100 realizations
"""
import argparse
import sys
import time
from pathlib import Path

from qstem_ris import bench


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=Path("results"))
    ap.add_argument("--presets", default="fig3,fig4,fig5")
    ap.add_argument("--full-scale", action="store_true")
    ap.add_argument("--realizations", type=int)
    ap.add_argument("--workers", type=int)
    args = ap.parse_args(argv)

    overrides = {} if args.realizations is None else {"realizations": args.realizations}
    for name in args.presets.split(","):
        cfg = bench.preset_config(name.strip(), full_scale=args.full_scale, **overrides)
        t0 = time.perf_counter()
        recs = bench.run_experiment(cfg, workers=args.workers)
        paths = bench.write_outputs(cfg, recs, args.out / name)
        print(f"{name}: {len(recs)} records in {time.perf_counter() - t0:.1f}s -> {paths['summary']}",
              file=sys.stderr)


if __name__ == "__main__":
    main()
