"""Render accuracy / failure-count line charts from a summary CSV.

One chart per invocation: x is the sampling multiplier eta, one series per
(variant, c_dist) pair, solid lines for the improved variant and dashed
for the vanilla baseline.  Output is deterministic for a fixed input CSV:
same bytes in, same image bytes out.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

matplotlib.rcParams["svg.hashsalt"] = "plotgen"

METRIC_COLUMNS = {
    "accuracy": "mean_accuracy",
    "failures": "failure_count",
}
METRIC_LABELS = {
    "accuracy": "Accuracy",
    "failures": "# Failure",
}
REQUIRED = ("variant", "oracle", "c_dist", "eta")
LINESTYLE = {"improved": "-", "vanilla": "--"}
COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


class SchemaError(ValueError):
    """The summary CSV is missing a required column."""


@dataclass(frozen=True)
class PlotSpec:
    input_csv: str
    metric: str  # "accuracy" or "failures"
    out: str  # image path; .png and .svg siblings are written
    oracle: str | None = None  # keep only rows with this oracle

    def __post_init__(self):
        if self.metric not in METRIC_COLUMNS:
            raise ValueError(
                f"metric must be one of {sorted(METRIC_COLUMNS)}, got {self.metric!r}"
            )


def read_summary(path, metric):
    """Rows of the summary CSV with the columns the chart needs."""
    column = METRIC_COLUMNS[metric]
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for name in REQUIRED + (column,):
            if name not in header:
                raise SchemaError(f"summary CSV is missing column {name!r}")
        return [
            {
                "variant": row["variant"],
                "oracle": row["oracle"],
                "c_dist": float(row["c_dist"]),
                "eta": float(row["eta"]),
                "value": float(row[column]),
            }
            for row in reader
        ]


def build_series(rows, oracle=None):
    """Group rows into {(variant, c_dist): sorted [(eta, value), ...]}."""
    series: dict = {}
    for row in rows:
        if oracle is not None and row["oracle"] != oracle:
            continue
        series.setdefault((row["variant"], row["c_dist"]), []).append(
            (row["eta"], row["value"])
        )
    return {key: sorted(pts) for key, pts in sorted(series.items())}


def render(spec: PlotSpec):
    """Draw the chart and write <out>.png and <out>.svg; returns the figure."""
    rows = read_summary(spec.input_csv, spec.metric)
    series = build_series(rows, spec.oracle)
    if not series:
        raise ValueError(
            f"no rows to plot (oracle filter {spec.oracle!r} on {spec.input_csv})"
        )

    fig, ax = plt.subplots(figsize=(4.2, 3.4), dpi=150)
    cdists = sorted({c for _, c in series})
    etas = sorted({eta for pts in series.values() for eta, _ in pts})
    for (variant, c_dist), pts in series.items():
        ax.plot(
            [p[0] for p in pts],
            [p[1] for p in pts],
            linestyle=LINESTYLE.get(variant, "-"),
            color=COLORS[cdists.index(c_dist) % len(COLORS)],
            marker="o",
            markersize=3,
            label=f"{variant}, c_dist={c_dist:g}",
        )
    ax.set_xticks(etas)
    ax.set_xlabel("eta (number of samples)")
    ax.set_ylabel(METRIC_LABELS[spec.metric])
    if spec.oracle:
        ax.set_title(f"{spec.oracle} distance-weak oracle")
    ax.legend(fontsize=7)
    fig.tight_layout()

    out = Path(spec.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    base = out.with_suffix("")
    fig.savefig(base.with_suffix(".png"), metadata={"Software": "plotgen"})
    fig.savefig(base.with_suffix(".svg"), metadata={"Date": None})
    return fig
