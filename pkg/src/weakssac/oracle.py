"""Simulated same-cluster oracles, including distance-weak models.

An oracle holds a fixed ground-truth clustering and answers same-cluster
queries about pairs of point indices.  The weak models return a not-sure
answer under geometric conditions tied to cluster radii and center
distances; the perfect model always answers truthfully.  Every
non-not-sure answer matches ground truth exactly.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .core import Clustering, Dataset


class Answer(enum.IntEnum):
    SAME = 1
    NOT_SURE = 0
    DIFFERENT = -1


class Assignment(enum.Enum):
    """Non-index outcomes of a cluster-assignment query."""

    NEW_GROUP = "new_group"
    NOT_SURE = "not_sure"


@dataclass(frozen=True)
class Perfect:
    """Always answers truthfully."""


@dataclass(frozen=True)
class LocalDistanceWeak:
    """Not-sure when cross-cluster points are mutually close relative to
    their own center distances (factor nu - 1), or same-cluster points are
    farther apart than 2 * rho * radius."""

    nu: float
    rho: float

    def __post_init__(self):
        if not self.nu >= 1.0:
            raise ValueError(f"nu must be >= 1, got {self.nu}")
        if not 0.0 < self.rho <= 1.0:
            raise ValueError(f"rho must be in (0, 1], got {self.rho}")


@dataclass(frozen=True)
class GlobalDistanceWeak:
    """Not-sure when either cross-cluster point lies outside rho * radius of
    its own center, or same-cluster points are farther apart than
    2 * rho * radius."""

    rho: float

    def __post_init__(self):
        if not 0.0 < self.rho <= 1.0:
            raise ValueError(f"rho must be in (0, 1], got {self.rho}")


OracleKind = Union[Perfect, LocalDistanceWeak, GlobalDistanceWeak]


class Oracle:
    """Answers weak same-cluster queries against a fixed truth clustering.

    ``resolve_random`` replaces every not-sure answer with SAME or
    DIFFERENT, each with probability 0.5, from the oracle's own seeded
    generator (the baseline behaviour the vanilla algorithm runs against).
    The query counter increments exactly once per same-cluster query,
    regardless of the answer.  Instances are not thread safe; confine each
    oracle to one repetition.
    """

    def __init__(
        self,
        ds: Dataset,
        truth: Clustering,
        kind: OracleKind = Perfect(),
        resolve_random: bool = False,
        resolve_seed: int = 0,
    ):
        if truth.partial or truth.labels.shape != (ds.n,):
            raise ValueError("oracle truth must be a full clustering of the dataset")
        self.points = ds.points
        self.truth = truth
        self.kind = kind
        self.resolve_random = resolve_random
        self._rng = np.random.default_rng(resolve_seed)
        self.query_count = 0
        # own-center distances d(x, mu_i) for x in C_i, used by both weak
        # models; plain-python rows keep the per-query cost low
        diffs = ds.points - truth.centers[truth.labels]
        self._dcent = np.sqrt((diffs * diffs).sum(axis=1)).tolist()
        self._labels = truth.labels.tolist()
        self._radii = truth.radii.tolist()
        self._rows = [tuple(row) for row in ds.points.tolist()]
        self._members = [np.flatnonzero(truth.labels == i) for i in range(truth.k)]

    def reset_counter(self) -> None:
        self.query_count = 0

    def read_counter(self) -> int:
        return self.query_count

    def sample_representatives(self) -> list:
        """One uniformly drawn member per truth cluster, in cluster order.

        Models the assignment-query protocol: the oracle compares a point
        against a representative of each of its clusters, so a round's
        assignments share representatives and can fail together when a
        drawn representative sits far from its center.
        """
        return [int(m[self._rng.integers(len(m))]) for m in self._members]

    def same_cluster_query(self, i: int, j: int) -> Answer:
        n = len(self._rows)
        if not (0 <= i < n and 0 <= j < n):
            raise IndexError(f"point index out of range: ({i}, {j}) with n={n}")
        self.query_count += 1
        li = self._labels[i]
        lj = self._labels[j]
        same = li == lj
        not_sure = False
        kind = self.kind
        if not isinstance(kind, Perfect):
            dxy = math.dist(self._rows[i], self._rows[j])
            if same:
                not_sure = dxy > 2.0 * kind.rho * self._radii[li]
            elif isinstance(kind, LocalDistanceWeak):
                not_sure = dxy < (kind.nu - 1.0) * min(self._dcent[i], self._dcent[j])
            else:
                not_sure = (
                    self._dcent[i] > kind.rho * self._radii[li]
                    or self._dcent[j] > kind.rho * self._radii[lj]
                )
        if not_sure:
            if self.resolve_random:
                return Answer.SAME if self._rng.random() < 0.5 else Answer.DIFFERENT
            return Answer.NOT_SURE
        return Answer.SAME if same else Answer.DIFFERENT

    def cluster_assignment_query(self, x: int, reps, k: int):
        """Identify x's group by querying one representative per discovered group.

        Returns the first group index whose representative answers SAME.
        With no SAME: all-DIFFERENT opens a new group while fewer than k
        groups exist; any NOT_SURE (or all-DIFFERENT with k groups already
        discovered) leaves the point unassigned.
        """
        any_not_sure = False
        for g, rep in enumerate(reps):
            a = self.same_cluster_query(x, rep)
            if a == Answer.SAME:
                return g
            if a == Answer.NOT_SURE:
                any_not_sure = True
        if any_not_sure:
            return Assignment.NOT_SURE
        if len(reps) < k:
            return Assignment.NEW_GROUP
        return Assignment.NOT_SURE
