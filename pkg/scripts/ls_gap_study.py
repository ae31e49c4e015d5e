"""How far LS trails Newton-LS at Q = 2M-1 as the surface grows.

Prints mean gain / mean upper bound for both schemes for each N. Used to check
whether the LS closed form catches up with the refined design at larger N.
"""
import argparse

from qstem_ris import bench
from qstem_ris.scattering import SystemDims


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, action="append")
    ap.add_argument("--realizations", type=int, default=30)
    args = ap.parse_args(argv)

    ns = args.n or [16, 32, 64]
    cfg = bench.preset_config(
        "custom", dims_grid=tuple(SystemDims(n, 4, 4) for n in ns), q_grid=("2m-1",),
        schemes=("LS", "NewtonLS", "UpperBound"), realizations=args.realizations)
    rows = {(r.n, r.scheme): r for r in bench.summarize(bench.run_experiment(cfg))}
    print(f"{'N':>4} {'LS/UB':>8} {'NLS/UB':>8} {'gap':>7}")
    for n in ns:
        ls, nls = rows[(n, "LS")].ub_ratio, rows[(n, "NewtonLS")].ub_ratio
        print(f"{n:>4} {ls:8.4f} {nls:8.4f} {1 - ls / nls:7.2%}")


if __name__ == "__main__":
    main()
