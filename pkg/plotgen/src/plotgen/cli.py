"""Command-line entry point: one chart per invocation."""
from __future__ import annotations

import argparse
import sys

from .render import PlotSpec, SchemaError, render
import matplotlib.pyplot as plt


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="plotgen",
        description="Render accuracy / failure charts from a weakssac summary CSV",
    )
    parser.add_argument("--in", dest="input_csv", required=True, help="summary CSV path")
    parser.add_argument("--metric", choices=("accuracy", "failures"), default="accuracy")
    parser.add_argument("--oracle", default=None, help="filter rows by oracle name")
    parser.add_argument("--out", required=True, help="output image path (.png; .svg sibling)")
    args = parser.parse_args(argv)
    try:
        fig = render(PlotSpec(input_csv=args.input_csv, metric=args.metric,
                              oracle=args.oracle, out=args.out))
        plt.close(fig)
    except (OSError, ValueError, SchemaError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
