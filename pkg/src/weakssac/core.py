"""Geometric primitives: datasets, center-based clusterings, margin math.

Everything here is immutable after construction and free of hidden state,
so instances can be shared across parallel repetitions.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

INF = math.inf


class InvalidClusteringError(ValueError):
    """A labeling that cannot form a valid clustering (e.g. empty cluster)."""


def distance(a, b) -> float:
    """Euclidean distance between two points of equal dimension."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return float(np.linalg.norm(a - b))


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class Dataset:
    """An indexed collection of m-dimensional points.

    Points are addressed by their row index in ``points``; indices are
    dense and stable for the lifetime of a run.
    """

    points: np.ndarray  # (n, m) float64

    def __post_init__(self):
        pts = np.ascontiguousarray(np.asarray(self.points, dtype=float))
        if pts.ndim != 2:
            raise ValueError(f"points must be 2-D (n, m), got shape {pts.shape}")
        n, m = pts.shape
        if n < 1 or m < 1:
            raise ValueError(f"need n >= 1 and m >= 1, got shape {pts.shape}")
        if not np.isfinite(pts).all():
            raise ValueError("points contain NaN or infinity")
        object.__setattr__(self, "points", _freeze(pts))

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]


@dataclass(frozen=True)
class Clustering:
    """A partition of point indices into k clusters with derived geometry.

    ``centers[i]`` is the arithmetic mean of cluster i's members and
    ``radii[i]`` the maximum member distance to that mean.  A ground-truth
    clustering labels every point; algorithm outputs may be ``partial``,
    in which case unassigned points carry the label -1.
    """

    labels: np.ndarray  # (n,) int
    k: int
    centers: np.ndarray  # (k, m)
    radii: np.ndarray  # (k,)
    partial: bool = False

    def __post_init__(self):
        object.__setattr__(self, "labels", _freeze(np.asarray(self.labels, dtype=int).copy()))
        object.__setattr__(self, "centers", _freeze(np.asarray(self.centers, dtype=float).copy()))
        object.__setattr__(self, "radii", _freeze(np.asarray(self.radii, dtype=float).copy()))

    @classmethod
    def from_labels(cls, ds: Dataset, labels, k: int) -> "Clustering":
        """Full clustering from a complete labeling; centers and radii derived."""
        labels = np.asarray(labels, dtype=int)
        if labels.shape != (ds.n,):
            raise ValueError(f"labels must have shape ({ds.n},), got {labels.shape}")
        if labels.min() < 0 or labels.max() >= k:
            raise InvalidClusteringError(f"labels out of range [0, {k})")
        centers = compute_centers(ds, labels, k)
        radii = compute_radii(ds, labels, centers)
        return cls(labels=labels, k=k, centers=centers, radii=radii, partial=False)

    def members(self, i: int) -> np.ndarray:
        return np.flatnonzero(self.labels == i)


def compute_centers(ds: Dataset, labels, k: int) -> np.ndarray:
    """Arithmetic mean of each cluster's members; every cluster must be nonempty."""
    labels = np.asarray(labels, dtype=int)
    centers = np.empty((k, ds.dim), dtype=float)
    for i in range(k):
        mask = labels == i
        if not mask.any():
            raise InvalidClusteringError(f"cluster {i} is empty")
        centers[i] = ds.points[mask].mean(axis=0)
    return centers


def compute_radii(ds: Dataset, labels, centers: np.ndarray) -> np.ndarray:
    """Maximum member distance to the cluster center, per cluster."""
    labels = np.asarray(labels, dtype=int)
    k = centers.shape[0]
    radii = np.zeros(k, dtype=float)
    for i in range(k):
        mask = labels == i
        if mask.any():
            diffs = ds.points[mask] - centers[i]
            radii[i] = float(np.sqrt((diffs * diffs).sum(axis=1)).max())
    return radii


def _center_distances(ds: Dataset, centers: np.ndarray) -> np.ndarray:
    """(n, k) matrix of distances from every point to every center."""
    diffs = ds.points[:, None, :] - centers[None, :, :]
    return np.sqrt((diffs * diffs).sum(axis=2))


def is_center_based(ds: Dataset, clustering: Clustering) -> bool:
    """True iff every point's label is the strict arg-min over center distances.

    Ties count as violations: the definition requires a unique nearest
    center, and margin > 1 data never ties.
    """
    if clustering.k == 1:
        return True
    D = _center_distances(ds, clustering.centers)
    own = D[np.arange(ds.n), clustering.labels]
    D = D.copy()
    D[np.arange(ds.n), clustering.labels] = np.inf
    return bool((own < D.min(axis=1)).all())


def realized_gamma(ds: Dataset, clustering: Clustering) -> float:
    """Largest margin factor the clustering supports.

    Per cluster i this is (min distance from a non-member to center i) /
    (max distance from a member to center i); the result is the minimum
    over clusters.  The strict margin property holds for every value
    below the returned supremum, not for the supremum itself.  With a
    single cluster, or when a zero-radius cluster has no non-member at
    distance zero, the unconstrained clusters contribute +inf.  A
    non-member coinciding with a center yields 0 (no margin).
    """
    if clustering.k == 1:
        return INF
    D = _center_distances(ds, clustering.centers)
    best = INF
    for i in range(clustering.k):
        mask = clustering.labels == i
        radius = float(D[mask, i].max())
        ext = float(D[~mask, i].min())
        if ext == 0.0:
            return 0.0
        ratio = INF if radius == 0.0 else ext / radius
        best = min(best, ratio)
    return best
