"""Two-phase active clustering driven by weak same-cluster queries.

Each round samples points from the remaining pool, groups them with
cluster-assignment queries (Phase 1), then binary-searches the pool sorted
by distance to the best group's empirical mean for the cluster boundary
(Phase 2).  The improved variant anchors binary-search queries at the
assignment-known point nearest the empirical mean; the vanilla baseline
anchors at random known points and is meant to run against an oracle that
resolves not-sure answers randomly.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .core import Clustering, Dataset
from .oracle import Answer, Assignment, Oracle

INF = math.inf


class Variant(str, enum.Enum):
    IMPROVED = "improved"
    VANILLA = "vanilla"


class AnchorPolicy(str, enum.Enum):
    NEAREST_TO_MEAN = "nearest_to_mean"
    RANDOM_KNOWN = "random_known"


@dataclass(frozen=True)
class SsacParams:
    """Inputs of one algorithm run.

    ``eta`` controls the per-round sample size r = ceil(k * eta); ``beta``
    caps the fallback queries per binary-search probe (capped further by
    the known-group size at use).  ``delta`` is carried into output
    metadata only and does not drive the sampling rate.
    """

    k: int
    eta: float
    beta: int = 1
    delta: float = 0.05
    variant: Variant = Variant.IMPROVED
    seed: int = 0

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if not self.eta > 0:
            raise ValueError(f"eta must be positive, got {self.eta}")
        if self.beta < 1:
            raise ValueError(f"beta must be >= 1, got {self.beta}")
        if not 0.0 < self.delta < 1.0:
            raise ValueError(f"delta must be in (0, 1), got {self.delta}")
        object.__setattr__(self, "variant", Variant(self.variant))

    @property
    def r(self) -> int:
        return int(math.ceil(self.k * self.eta))


@dataclass
class RoundRecord:
    """Diagnostics for one extraction round."""

    round: int
    pool_size: int
    n_sampled: int
    n_dropped: int  # sampled points left unassigned by Phase 1
    chosen_group: int  # -1 when the round collapsed before choosing
    z_size: int
    empirical_mean: np.ndarray | None
    threshold: float  # r' (inf when no non-member was found)
    captured: int
    queries_phase1: int
    queries_phase2: int
    ambiguity_events: int
    phase1_failed: bool


@dataclass
class SsacOutput:
    """Result of one run: recovered clusters in emission order plus accounting.

    ``labels[x]`` is the emission index of the cluster that captured x, or
    -1 if x was never captured.  ``failed`` is set when the run ends with
    fewer than k nonempty clusters (a round captured nothing or the pool
    ran out early).
    """

    clusters: list  # list of np.ndarray of point indices, emission order
    labels: np.ndarray
    rounds: list
    k: int
    failed: bool
    queries_phase1: int = 0
    queries_phase2: int = 0
    ambiguity_events: int = 0
    assignment_drops: int = 0

    @property
    def total_queries(self) -> int:
        return self.queries_phase1 + self.queries_phase2

    def nonempty_clusters(self) -> list:
        return [c for c in self.clusters if len(c) > 0]

    def to_dict(self) -> dict:
        """Plain-types view, stable across runs, for serialization and tests."""
        return {
            "clusters": [[int(x) for x in c] for c in self.clusters],
            "labels": [int(x) for x in self.labels],
            "k": self.k,
            "failed": self.failed,
            "queries_phase1": self.queries_phase1,
            "queries_phase2": self.queries_phase2,
            "ambiguity_events": self.ambiguity_events,
            "assignment_drops": self.assignment_drops,
            "rounds": [
                {
                    "round": rec.round,
                    "pool_size": rec.pool_size,
                    "n_sampled": rec.n_sampled,
                    "n_dropped": rec.n_dropped,
                    "chosen_group": rec.chosen_group,
                    "z_size": rec.z_size,
                    "empirical_mean": None
                    if rec.empirical_mean is None
                    else [float(v) for v in rec.empirical_mean],
                    "threshold": float(rec.threshold),
                    "captured": rec.captured,
                    "queries_phase1": rec.queries_phase1,
                    "queries_phase2": rec.queries_phase2,
                    "ambiguity_events": rec.ambiguity_events,
                    "phase1_failed": rec.phase1_failed,
                }
                for rec in self.rounds
            ],
        }


def binary_search(
    sorted_ids: np.ndarray,
    sorted_dists: np.ndarray,
    oracle: Oracle,
    anchor_policy: AnchorPolicy,
    z_p: np.ndarray,
    mu_p: np.ndarray,
    beta: int,
    rng: np.random.Generator,
) -> tuple[float, int]:
    """Search the distance-sorted pool for the cluster boundary radius.

    Probes the smallest index whose point is judged outside the anchor's
    cluster and returns that point's distance to the empirical mean (inf
    when every point is judged a member).  A probe is judged by one
    same-cluster query against the anchor; a not-sure answer falls back to
    beta - 1 additional known points, first definitive answer wins.  When
    every answer is not-sure the point is conservatively excluded and an
    ambiguity event is counted.

    Returns (threshold, ambiguity_events).
    """
    n = len(sorted_ids)
    z_p = np.asarray(z_p)
    if n == 0 or len(z_p) == 0:
        raise ValueError("sorted pool and known group must be nonempty")
    if beta > len(z_p):
        raise ValueError(f"beta={beta} exceeds known-group size {len(z_p)}")

    if anchor_policy == AnchorPolicy.NEAREST_TO_MEAN:
        diffs = oracle.points[z_p] - mu_p
        dz = np.sqrt((diffs * diffs).sum(axis=1))
        fixed_anchor = int(z_p[np.lexsort((z_p, dz))[0]])
    else:
        fixed_anchor = -1

    ambiguity = 0

    def is_member(x: int) -> bool:
        nonlocal ambiguity
        if anchor_policy == AnchorPolicy.RANDOM_KNOWN:
            anchor = int(z_p[rng.integers(len(z_p))])
        else:
            anchor = fixed_anchor
        a = oracle.same_cluster_query(anchor, x)
        if a != Answer.NOT_SURE:
            return a == Answer.SAME
        pool = z_p[z_p != anchor]
        if beta > 1:
            extra = rng.choice(pool, size=beta - 1, replace=False)
            for y in extra:
                a = oracle.same_cluster_query(x, int(y))
                if a != Answer.NOT_SURE:
                    return a == Answer.SAME
        ambiguity += 1
        return False

    lo, hi = 0, n - 1
    while lo <= hi:
        mid = (lo + hi) // 2
        if is_member(int(sorted_ids[mid])):
            lo = mid + 1
        else:
            hi = mid - 1
    if lo >= n:
        return INF, ambiguity
    return float(sorted_dists[lo]), ambiguity


def run_ssac(ds: Dataset, oracle: Oracle, params: SsacParams) -> SsacOutput:
    """Run the two-phase algorithm for k rounds and return the recovery.

    Each round draws fresh per-cluster representatives from the oracle for
    its assignment queries; a round where every sampled point is left
    unassigned is a Phase-1 failure and terminates the run.  Deterministic
    given (dataset, oracle state, params): all randomness comes from
    generators seeded by ``params.seed`` and by the oracle's own seed.
    """
    rng = np.random.default_rng(params.seed)
    pts = ds.points
    n = ds.n
    improved = params.variant == Variant.IMPROVED
    r = params.r
    remaining = np.arange(n)
    clusters: list[np.ndarray] = []
    rounds: list[RoundRecord] = []
    pool_exhausted = False
    phase1_collapsed = False

    for i in range(params.k):
        pool = int(remaining.size)
        if pool == 0:
            rounds.append(
                RoundRecord(i, 0, 0, 0, -1, 0, None, INF, 0, 0, 0, 0, True)
            )
            pool_exhausted = True
            break
        q0 = oracle.query_count

        # Phase 1: group the sample by cluster-assignment queries against
        # this round's representatives.
        m = min(r, pool)
        sample = rng.choice(remaining, size=m, replace=False)
        reps = oracle.sample_representatives()
        groups: list[list[int]] = [[] for _ in reps]
        dropped = 0
        for x in sample:
            res = oracle.cluster_assignment_query(int(x), reps, len(reps))
            if isinstance(res, Assignment):
                dropped += 1
            else:
                groups[res].append(int(x))
        q1 = oracle.query_count

        if dropped == m:
            # every assignment failed: empty best group, the round is lost
            rounds.append(
                RoundRecord(i, pool, m, dropped, -1, 0, None, INF, 0, q1 - q0, 0, 0, True)
            )
            phase1_collapsed = True
            break

        p = int(np.argmax([len(g) for g in groups]))  # ties -> lowest group id
        z_p = np.array(sorted(groups[p]))
        mu_p = pts[z_p].mean(axis=0)

        # Phase 2: sort the pool by distance to the empirical mean and
        # binary-search for the boundary.
        diffs = pts[remaining] - mu_p
        dists = np.sqrt((diffs * diffs).sum(axis=1))
        order = np.lexsort((remaining, dists))
        policy = AnchorPolicy.NEAREST_TO_MEAN if improved else AnchorPolicy.RANDOM_KNOWN
        eff_beta = min(params.beta, len(z_p))
        r_prime, amb = binary_search(
            remaining[order], dists[order], oracle, policy, z_p, mu_p, eff_beta, rng
        )
        captured_mask = dists < r_prime
        captured = remaining[captured_mask]
        clusters.append(captured)
        remaining = remaining[~captured_mask]
        q2 = oracle.query_count
        rounds.append(
            RoundRecord(
                i, pool, m, dropped, p, len(z_p), mu_p, r_prime,
                int(captured.size), q1 - q0, q2 - q1, amb, False,
            )
        )

    labels = np.full(n, -1, dtype=int)
    for idx, c in enumerate(clusters):
        labels[c] = idx
    nonempty = sum(1 for c in clusters if len(c) > 0)
    failed = pool_exhausted or phase1_collapsed or nonempty < params.k
    return SsacOutput(
        clusters=clusters,
        labels=labels,
        rounds=rounds,
        k=params.k,
        failed=failed,
        queries_phase1=sum(rec.queries_phase1 for rec in rounds),
        queries_phase2=sum(rec.queries_phase2 for rec in rounds),
        ambiguity_events=sum(rec.ambiguity_events for rec in rounds),
        assignment_drops=sum(rec.n_dropped for rec in rounds),
    )


def map_cdist_params(c_dist: float, gamma: float) -> tuple[float, float]:
    """Map the experiment control c_dist to oracle parameters (nu, rho)."""
    if not 0.0 < c_dist <= 1.0:
        raise ValueError(f"c_dist must be in (0, 1], got {c_dist}")
    return max(1.0, gamma) + 2.0 * (1.0 - c_dist), c_dist


@dataclass(frozen=True)
class TheoremParams:
    """Constants for the point-coverage condition checks."""

    epsilon: float
    gamma: float
    nu: float
    rho: float

    def __post_init__(self):
        if not 0.0 < self.epsilon <= (self.gamma - 1.0) / 2.0:
            raise ValueError(
                f"epsilon must be in (0, (gamma-1)/2]; got epsilon={self.epsilon}, "
                f"gamma={self.gamma}"
            )


@dataclass
class TheoremReport:
    """Per-cluster margin report for a coverage-condition check."""

    model: str
    c: float
    min_ratios: list  # min over members of d(x, mu_i) / r(C_i), per cluster
    satisfied: list  # strict d(x, mu_i) < c * r(C_i) holds for some member
    ok: bool


def theorem_constant(tp: TheoremParams, model: str) -> float:
    if model == "local":
        return min(2.0 * tp.rho - 1.0, tp.gamma - tp.nu + 1.0) - 2.0 * tp.epsilon
    if model == "global":
        return 2.0 * tp.rho - 1.0 - 2.0 * tp.epsilon
    raise ValueError(f"model must be 'local' or 'global', got {model!r}")


def check_theorem_condition(
    ds: Dataset, truth: Clustering, tp: TheoremParams, model: str
) -> TheoremReport:
    """Check that every cluster has a point strictly inside c * radius.

    The verdict uses the raw strict inequality, so a zero-radius cluster
    never satisfies it; ``min_ratios`` reports 0.0 there since the nearest
    member sits exactly on the center.  A non-positive c makes the
    condition unsatisfiable and the report says so per cluster.
    """
    c = theorem_constant(tp, model)
    min_ratios = []
    satisfied = []
    for i in range(truth.k):
        members = truth.members(i)
        diffs = ds.points[members] - truth.centers[i]
        d = np.sqrt((diffs * diffs).sum(axis=1))
        dmin = float(d.min())
        radius = float(truth.radii[i])
        min_ratios.append(dmin / radius if radius > 0 else 0.0)
        satisfied.append(bool(dmin < c * radius))
    return TheoremReport(
        model=model, c=c, min_ratios=min_ratios, satisfied=satisfied,
        ok=all(satisfied),
    )
