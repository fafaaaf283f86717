#pragma once

// Eigenspace estimators over a simulated star topology: pooled PCA, one-shot
// distributed PCA, the online two-level aggregation scheme, and the
// all-eigenvector baseline.

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "odpca/linalg.hpp"

namespace odpca {

/// How a node obtains the leading eigenvectors of its sample covariance.
enum class EigenPath {
  automatic,   // gram when n < d, else covariance
  covariance,  // eigendecompose the d×d covariance
  gram,        // eigendecompose the n×n Gram matrix
};

/// Top-`rank` eigenvectors of n⁻¹ Σ xxᵀ over the rows of `batch`.
OrthonormalBasis local_top_k(const Matrix& batch, std::size_t rank, EigenPath path = EigenPath::automatic);

/// local_top_k on every batch, one task per node on up to `workers` threads.
std::vector<OrthonormalBasis> local_top_k_all(std::span<const Matrix> batches, std::size_t rank,
                                              std::size_t workers = 1, EigenPath path = EigenPath::automatic);

/// Top-`rank` eigenvectors of m⁻¹ Σ VᵢVᵢᵀ. Each input basis must have rank
/// at least `rank`.
OrthonormalBasis aggregate_local(std::span<const OrthonormalBasis> bases, std::size_t rank);

/// Running state of the online estimator at the fusion center.
class OdpcaState {
 public:
  OdpcaState(std::size_t ambient_dim, std::size_t rank, std::size_t horizon);

  std::size_t ambient_dim() const noexcept { return accumulator_.dim(); }
  std::size_t rank() const noexcept { return rank_; }
  std::size_t horizon() const noexcept { return horizon_; }
  std::size_t round() const noexcept { return round_; }
  const SymmetricMatrix& accumulator() const noexcept { return accumulator_; }

  /// One round: every node sends its top-`projection_rank` basis, the center
  /// aggregates them to rank K and adds T⁻¹ V̄V̄ᵀ to the accumulator. Returns
  /// the round's aggregated basis V̄.
  OrthonormalBasis step(std::span<const Matrix> node_batches, std::size_t projection_rank,
                        std::size_t workers = 1);

  /// Accumulator update alone, for callers that run the node phase themselves.
  void accumulate(const OrthonormalBasis& round_basis);

  /// Top-K eigenvectors of the accumulator. Only valid once round == horizon.
  OrthonormalBasis finalize() const;

 private:
  std::size_t rank_;
  std::size_t horizon_;
  std::size_t round_ = 0;
  SymmetricMatrix accumulator_;
};

OdpcaState odpca_init(std::size_t ambient_dim, std::size_t rank, std::size_t horizon);
std::pair<OdpcaState, OrthonormalBasis> odpca_step(OdpcaState state, std::span<const Matrix> node_batches,
                                                   std::size_t projection_rank);
OrthonormalBasis odpca_finalize(const OdpcaState& state);

/// One-shot distributed PCA: nodes send rank `projection_rank` bases, the
/// center aggregates to rank `rank`.
OrthonormalBasis dpca(std::span<const Matrix> node_batches, std::size_t rank, std::size_t projection_rank,
                      std::size_t workers = 1);

/// Top-`rank` eigenvectors of the pooled empirical covariance.
OrthonormalBasis full_pca(const Matrix& samples, std::size_t rank);

/// What a node sends under the all-eigenvector baseline: every eigenpair of
/// its sample covariance.
EigenDecomposition baseline_node_message(const Matrix& batch);

/// Center side of the baseline: rebuilds m⁻¹ Σ VᵢΛᵢVᵢᵀ and returns its
/// top-`rank` eigenvectors.
OrthonormalBasis baseline_aggregate(std::span<const EigenDecomposition> messages, std::size_t rank);

/// Every node sends all d eigenpairs; the center rebuilds the mean of the
/// node covariances and takes its top-`rank` eigenvectors. Batches must all
/// have the same number of rows.
OrthonormalBasis baseline_all_eigenvectors(std::span<const Matrix> node_batches, std::size_t rank,
                                           std::size_t workers = 1);

}  // namespace odpca
