"""Online distributed PCA: estimators, subspace metrics and a streaming simulator."""

from ._core import (
    ArgumentError,
    ConvergenceError,
    DegenerateTaskError,
    Error,
    IdentifiabilityError,
    IngestionError,
    OdpcaState,
    ParseError,
    RankError,
    SpikedModel,
    StateError,
    aggregate_local,
    baseline_all_eigenvectors,
    clustering_cost_ratio,
    dpca,
    empirical_covariance,
    full_pca,
    h_objective,
    kmeans_lloyd,
    local_top_k,
    lowrank_error,
    make_spiked_model,
    mean_projector,
    orthonormalize,
    projection_distance,
    relative_error,
    run_stream,
    spectrum_stats,
    sym_eig,
    top_k_eig,
)

__version__ = "0.1.0"
__all__ = [name for name in dir() if not name.startswith("_")]
