"""Active clustering with weak same-cluster oracles: library and simulator."""

from .core import (
    Clustering,
    Dataset,
    InvalidClusteringError,
    compute_centers,
    compute_radii,
    distance,
    is_center_based,
    realized_gamma,
)
from .datagen import (
    EmbeddingParseError,
    GenerationError,
    LabeledDataset,
    SynthConfig,
    generate_synthetic,
    load_embedding,
)
from .evaluation import CellSummary, RunResult, aggregate, match_labels, score
from .oracle import (
    Answer,
    Assignment,
    GlobalDistanceWeak,
    LocalDistanceWeak,
    Oracle,
    Perfect,
)
from .ssac import (
    AnchorPolicy,
    SsacOutput,
    SsacParams,
    TheoremParams,
    TheoremReport,
    Variant,
    binary_search,
    check_theorem_condition,
    map_cdist_params,
    run_ssac,
    theorem_constant,
)

__all__ = [
    "Answer",
    "AnchorPolicy",
    "Assignment",
    "CellSummary",
    "Clustering",
    "Dataset",
    "EmbeddingParseError",
    "GenerationError",
    "GlobalDistanceWeak",
    "InvalidClusteringError",
    "LabeledDataset",
    "LocalDistanceWeak",
    "Oracle",
    "Perfect",
    "RunResult",
    "SsacOutput",
    "SsacParams",
    "SynthConfig",
    "TheoremParams",
    "TheoremReport",
    "Variant",
    "aggregate",
    "binary_search",
    "check_theorem_condition",
    "compute_centers",
    "compute_radii",
    "distance",
    "generate_synthetic",
    "is_center_based",
    "load_embedding",
    "map_cdist_params",
    "match_labels",
    "realized_gamma",
    "run_ssac",
    "score",
    "theorem_constant",
]
