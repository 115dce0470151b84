"""Scoring recovered clusterings against ground truth.

Recovered clusters are matched to true clusters by a minimum-total-distance
assignment between their centers; accuracy is the fraction of points whose
mapped label equals their true label.  Unassigned points and points in
unmatched clusters count as incorrect.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .core import Clustering, Dataset
from .ssac import SsacOutput


@dataclass
class RunResult:
    """One repetition's outcome plus its parameter echo."""

    accuracy: float
    failed: bool
    phase1_failures: int  # rounds that ended with no usable best group
    queries_phase1: int
    queries_phase2: int
    ambiguity_events: int
    assignment_drops: int = 0
    variant: str = ""
    oracle: str = ""
    c_dist: float = math.nan
    eta: float = math.nan
    beta: int = 1
    seed: int = 0
    realized_gamma: float = math.nan


@dataclass
class CellSummary:
    """Aggregate of all repetitions sharing one parameter cell."""

    variant: str
    oracle: str
    c_dist: float
    eta: float
    mean_accuracy: float
    std_accuracy: float
    failure_count: int
    mean_queries: float
    n_reps: int


def recovered_centers(ds: Dataset, output: SsacOutput) -> np.ndarray:
    """Arithmetic means of the nonempty recovered clusters, emission order."""
    nonempty = output.nonempty_clusters()
    if not nonempty:
        return np.empty((0, ds.dim))
    return np.stack([ds.points[c].mean(axis=0) for c in nonempty])


def match_labels(truth: Clustering, centers: np.ndarray) -> dict:
    """Optimal one-to-one map from recovered-cluster index to true-cluster index.

    Minimizes the total center distance over one-to-one assignments; when
    fewer recovered than true centers exist the map is partial (and vice
    versa).
    """
    if centers.shape[0] == 0:
        return {}
    diffs = centers[:, None, :] - truth.centers[None, :, :]
    cost = np.sqrt((diffs * diffs).sum(axis=2))
    rows, cols = linear_sum_assignment(cost)
    return {int(r): int(c) for r, c in zip(rows, cols)}


def score(truth: Clustering, output: SsacOutput, ds: Dataset, **echo) -> RunResult:
    """Score one run; keyword arguments fill the parameter-echo fields."""
    nonempty = output.nonempty_clusters()
    n = ds.n
    correct = 0
    if nonempty:
        mapping = match_labels(truth, recovered_centers(ds, output))
        for rec_idx, true_idx in mapping.items():
            members = nonempty[rec_idx]
            correct += int((truth.labels[members] == true_idx).sum())
    phase1_failures = sum(1 for rec in output.rounds if rec.phase1_failed)
    return RunResult(
        accuracy=correct / n,
        failed=output.failed,
        phase1_failures=phase1_failures,
        queries_phase1=output.queries_phase1,
        queries_phase2=output.queries_phase2,
        ambiguity_events=output.ambiguity_events,
        assignment_drops=output.assignment_drops,
        **echo,
    )


def aggregate(results) -> list:
    """Collapse run results into per-cell summaries.

    Cells are keyed by (variant, oracle, c_dist, eta) and emitted in sorted
    key order.  ``failure_count`` is the number of runs with failed=True;
    the standard deviation is the population deviation (0 for one run).
    """
    results = list(results)
    if not results:
        raise ValueError("no results to aggregate")
    cells: dict = {}
    for res in results:
        cells.setdefault((res.variant, res.oracle, res.c_dist, res.eta), []).append(res)
    out = []
    for key in sorted(cells):
        group = cells[key]
        acc = np.array([r.accuracy for r in group])
        queries = np.array([r.queries_phase1 + r.queries_phase2 for r in group], dtype=float)
        out.append(
            CellSummary(
                variant=key[0],
                oracle=key[1],
                c_dist=key[2],
                eta=key[3],
                mean_accuracy=float(acc.mean()),
                std_accuracy=float(acc.std()),
                failure_count=sum(1 for r in group if r.failed),
                mean_queries=float(queries.mean()),
                n_reps=len(group),
            )
        )
    return out
