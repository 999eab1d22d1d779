#!/usr/bin/env python3
"""Sweep epsilon for each noise family on a grid instance and plot regret.

Writes eps_sweep.csv and eps_sweep.svg to --outdir. The regret * epsilon
column in the printed table should stay roughly flat.
"""
import argparse
import os

from dpexperts.core import MechanismSpec, NoiseKind
from dpexperts.harness import scaling_report, sweep, write_csv
from dpexperts.instances import uniform_grid_instance
from dpexperts.svg import line_chart


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--K", type=int, default=16)
    ap.add_argument("--T", type=int, default=(1 << 20) - 1)
    ap.add_argument("--trials", type=int, default=20_000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--outdir", default=".")
    args = ap.parse_args()

    eps_grid = [0.25, 0.5, 1.0, 2.0, 4.0]
    instances = [(f"grid:K={args.K}", uniform_grid_instance(args.K))]
    all_cells = []
    series = {}
    for kind in (NoiseKind.LAPLACE, NoiseKind.EXPONENTIAL, NoiseKind.GUMBEL):
        specs = [MechanismSpec(0, kind, epsilon=e) for e in eps_grid]
        cells = sweep(instances, specs, [args.T], args.trials, args.seed)
        all_cells.extend(cells)
        rows = scaling_report(cells, "epsilon")
        series[kind.value] = [(v, regret) for v, regret, _ in rows]
        print(f"{kind.value}")
        print(f"{'eps':>6} {'regret':>10} {'regret*eps':>12}")
        for v, regret, norm in rows:
            print(f"{v:>6g} {regret:>10.4f} {norm:>12.4f}")

    csv_path = os.path.join(args.outdir, "eps_sweep.csv")
    write_csv(all_cells, csv_path)
    svg_path = os.path.join(args.outdir, "eps_sweep.svg")
    with open(svg_path, "w", encoding="utf-8") as fh:
        fh.write(line_chart(series, x_label="epsilon"))
    print(f"wrote {csv_path} and {svg_path}")


if __name__ == "__main__":
    main()
