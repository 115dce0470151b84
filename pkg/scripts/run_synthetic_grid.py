#!/usr/bin/env python3
"""Sweep the synthetic evaluation grids for both weak-oracle models.

Runs improved and vanilla variants over eta in {2, 5, 10, 20, 30} with
c_dist in {0.6, 0.8, 1.0} (local) and {0.7, 0.85, 1.0} (global) on fresh
margin-controlled Gaussian data per repetition, then merges the two
summary files so one CSV feeds all four chart panels.
"""
import argparse
import csv
import os
from pathlib import Path

from weakssac.cli import ExperimentConfig, run_grid
from weakssac.datagen import SynthConfig

GRIDS = {
    "local": (0.6, 0.8, 1.0),
    "global": (0.7, 0.85, 1.0),
}
ETAS = (2.0, 5.0, 10.0, 20.0, 30.0)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="results/synthetic")
    parser.add_argument("--reps", type=int, default=1000,
                        help="repetitions per cell (10000 reproduces the full-scale run)")
    parser.add_argument("--n", type=int, default=600)
    parser.add_argument("--k", type=int, default=3)
    parser.add_argument("--sigma", type=float, default=2.0)
    parser.add_argument("--gamma-min", type=float, default=1.0)
    parser.add_argument("--gamma-max", type=float, default=1.1)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--parallel", type=int, default=os.cpu_count() or 1)
    args = parser.parse_args()

    synth = SynthConfig(n=args.n, k=args.k, sigma=args.sigma,
                        gamma_min=args.gamma_min, gamma_max=args.gamma_max)
    merged = []
    header = None
    for oracle, cdists in GRIDS.items():
        out_dir = Path(args.out) / oracle
        cfg = ExperimentConfig(
            data=synth, oracles=(oracle,), c_dist=cdists, eta=ETAS,
            repetitions=args.reps, base_seed=args.seed,
            out=str(out_dir), parallel=args.parallel,
        )
        run_grid(cfg)
        with open(out_dir / "summary.csv", newline="") as fh:
            rows = list(csv.reader(fh))
        header = rows[0]
        merged.extend(rows[1:])

    merged_path = Path(args.out) / "summary.csv"
    with open(merged_path, "w", encoding="utf-8", newline="\n") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(merged)
    print(f"merged summary -> {merged_path}")


if __name__ == "__main__":
    main()
