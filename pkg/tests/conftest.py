"""Shared fixtures and independent reference implementations for the tests."""
from __future__ import annotations

import math

import numpy as np
import pytest

from weakssac import (
    Clustering,
    Dataset,
    GlobalDistanceWeak,
    LocalDistanceWeak,
    Perfect,
)


@pytest.fixture
def line_ds():
    """The 1-D fixture: points 0, 2 | 6, 8 with centers 1 and 7."""
    ds = Dataset(np.array([[0.0], [2.0], [6.0], [8.0]]))
    truth = Clustering.from_labels(ds, [0, 0, 1, 1], 2)
    return ds, truth


def random_labeled_dataset(rng, n=30, k=3, dim=2, spread=3.0):
    """A random labeled blob dataset; every cluster nonempty, labels arbitrary."""
    centers = rng.uniform(-12.0, 12.0, size=(k, dim))
    labels = np.concatenate([np.arange(k), rng.integers(0, k, size=n - k)])
    pts = centers[labels] + rng.normal(0.0, spread, size=(n, dim))
    ds = Dataset(pts)
    return ds, Clustering.from_labels(ds, labels, k)


def brute_force_answer(ds, truth, kind, i, j):
    """Direct transcription of the weak-oracle definitions, scalar math only.

    Deliberately recomputes every distance from raw coordinates so it
    shares no code path with the Oracle implementation.
    """
    pts = ds.points
    li, lj = int(truth.labels[i]), int(truth.labels[j])
    same = li == lj

    def dist(a, b):
        return math.sqrt(sum((x - y) ** 2 for x, y in zip(a, b)))

    not_sure = False
    if not isinstance(kind, Perfect):
        dxy = dist(pts[i], pts[j])
        if same:
            r = dist_max_member(ds, truth, li)
            not_sure = dxy > 2.0 * kind.rho * r
        elif isinstance(kind, LocalDistanceWeak):
            di = dist(pts[i], truth.centers[li])
            dj = dist(pts[j], truth.centers[lj])
            not_sure = dxy < (kind.nu - 1.0) * min(di, dj)
        elif isinstance(kind, GlobalDistanceWeak):
            di = dist(pts[i], truth.centers[li])
            dj = dist(pts[j], truth.centers[lj])
            ri = dist_max_member(ds, truth, li)
            rj = dist_max_member(ds, truth, lj)
            not_sure = di > kind.rho * ri or dj > kind.rho * rj
    if not_sure:
        return 0
    return 1 if same else -1


def dist_max_member(ds, truth, cluster):
    """Cluster radius recomputed by linear scan (reference path)."""
    center = truth.centers[cluster]
    best = 0.0
    for idx in np.flatnonzero(truth.labels == cluster):
        d = math.sqrt(sum((x - y) ** 2 for x, y in zip(ds.points[idx], center)))
        best = max(best, d)
    return best
