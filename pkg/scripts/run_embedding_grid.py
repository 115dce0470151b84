#!/usr/bin/env python3
"""Sweep the evaluation grids over a precomputed labeled embedding file.

The file holds one point per row (integer label first, coordinates after,
comma or tab delimited); pass --labels to keep a subset, e.g. the digits
0, 6 and 8 of a 2-D embedding.  One fixed dataset is shared across all
repetitions; both weak-oracle models run with c_dist in {0.6, 0.8, 1.0}.
"""
import argparse
import csv
import os
from pathlib import Path

from weakssac.cli import EmbeddingSource, ExperimentConfig, run_grid

ETAS = (2.0, 5.0, 10.0, 20.0, 30.0)
CDISTS = (0.6, 0.8, 1.0)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--data", required=True, help="embedding file path")
    parser.add_argument("--labels", default=None,
                        help="comma-separated labels to keep, e.g. 0,6,8")
    parser.add_argument("--out", default="results/embedding")
    parser.add_argument("--reps", type=int, default=1000,
                        help="repetitions per cell (5000 reproduces the full-scale run)")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--parallel", type=int, default=os.cpu_count() or 1)
    args = parser.parse_args()

    keep = None
    if args.labels:
        keep = tuple(int(v) for v in args.labels.split(","))
    data = EmbeddingSource(path=args.data, keep_labels=keep)

    merged = []
    header = None
    for oracle in ("local", "global"):
        out_dir = Path(args.out) / oracle
        cfg = ExperimentConfig(
            data=data, oracles=(oracle,), c_dist=CDISTS, eta=ETAS,
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
