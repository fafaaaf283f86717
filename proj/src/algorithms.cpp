#include "odpca/algorithms.hpp"

#include <cmath>
#include <string>

#include "odpca/detail/parallel.hpp"
#include "odpca/errors.hpp"
#include "odpca/subspace.hpp"

namespace odpca {

namespace {

void require_batches(std::span<const Matrix> batches, const char* op) {
  if (batches.empty()) throw ArgumentError(std::string(op) + ": no node batches");
  const std::size_t d = batches.front().cols();
  for (const auto& b : batches) {
    if (b.rows() == 0) throw ArgumentError(std::string(op) + ": empty node batch");
    if (b.cols() != d) throw ArgumentError(std::string(op) + ": node batches disagree on dimension");
  }
}

// Top-`rank` eigenvectors of W Wᵀ from the w×w Gram WᵀW, where
// W = m^{-1/2} [V₁ … V_m]. Returns an empty basis when the Gram spectrum is
// numerically rank deficient at `rank`.
OrthonormalBasis aggregate_factored(std::span<const OrthonormalBasis> bases, std::size_t rank, std::size_t width) {
  const std::size_t d = bases.front().ambient_dim();
  const double scale = 1.0 / std::sqrt(static_cast<double>(bases.size()));
  Matrix w(d, width);
  std::size_t offset = 0;
  for (const auto& b : bases) {
    const Matrix& v = b.matrix();
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < v.cols(); ++j) w(i, offset + j) = scale * v(i, j);
    }
    offset += v.cols();
  }
  const EigenDecomposition g = top_k_eig(SymmetricMatrix::symmetrize(matmul_tn(w, w)), rank);
  if (!(g.values[rank - 1] > 1e-12)) return {};

  Matrix lifted = matmul(w, g.basis.matrix());
  for (std::size_t j = 0; j < rank; ++j) {
    const double s = 1.0 / std::sqrt(g.values[j]);
    for (std::size_t i = 0; i < d; ++i) lifted(i, j) *= s;
  }
  Matrix cols = orthonormalize(lifted).matrix();
  apply_sign_convention(cols);
  return OrthonormalBasis(std::move(cols));
}

}  // namespace

OrthonormalBasis local_top_k(const Matrix& batch, std::size_t rank, EigenPath path) {
  if (batch.rows() == 0) throw ArgumentError("local_top_k: empty batch");
  if (rank == 0 || rank > batch.cols()) throw ArgumentError("local_top_k: rank out of range");

  const bool try_gram = path == EigenPath::gram ||
                        (path == EigenPath::automatic && batch.rows() < batch.cols() && rank <= batch.rows());
  if (try_gram) {
    try {
      return top_k_via_gram(batch, rank).basis;
    } catch (const RankError&) {
      if (path == EigenPath::gram) throw;
    }
  }
  return top_k_eig(empirical_covariance(batch), rank).basis;
}

std::vector<OrthonormalBasis> local_top_k_all(std::span<const Matrix> batches, std::size_t rank, std::size_t workers,
                                              EigenPath path) {
  std::vector<OrthonormalBasis> out(batches.size());
  detail::parallel_for(batches.size(), workers,
                       [&](std::size_t i) { out[i] = local_top_k(batches[i], rank, path); });
  return out;
}

OrthonormalBasis aggregate_local(std::span<const OrthonormalBasis> bases, std::size_t rank) {
  if (bases.empty()) throw ArgumentError("aggregate_local: no bases");
  const std::size_t d = bases.front().ambient_dim();
  std::size_t width = 0;
  for (const auto& b : bases) {
    if (b.ambient_dim() != d) throw ArgumentError("aggregate_local: ambient dimensions differ");
    if (b.rank() < rank) throw ArgumentError("aggregate_local: a node basis has rank below the target rank");
    width += b.rank();
  }
  if (rank == 0 || rank > d) throw ArgumentError("aggregate_local: rank out of range");

  if (width < d) {
    OrthonormalBasis factored = aggregate_factored(bases, rank, width);
    if (factored.rank() == rank) return factored;
  }
  return top_k_eig(mean_projector(bases), rank).basis;
}

// ------------------------------------------------------------ OdpcaState

OdpcaState::OdpcaState(std::size_t ambient_dim, std::size_t rank, std::size_t horizon)
    : rank_(rank), horizon_(horizon) {
  if (rank == 0 || rank > ambient_dim) throw ArgumentError("odpca_init: need 1 <= K <= d");
  if (horizon == 0) throw ArgumentError("odpca_init: horizon must be at least 1");
  accumulator_ = SymmetricMatrix::zeros(ambient_dim);
}

OrthonormalBasis OdpcaState::step(std::span<const Matrix> node_batches, std::size_t projection_rank,
                                  std::size_t workers) {
  if (round_ >= horizon_) throw StateError("odpca step: horizon of " + std::to_string(horizon_) + " rounds reached");
  require_batches(node_batches, "odpca step");
  if (node_batches.front().cols() != ambient_dim()) throw ArgumentError("odpca step: batch dimension mismatch");
  if (projection_rank < rank_ || projection_rank > ambient_dim()) {
    throw ArgumentError("odpca step: projection rank must lie in [K, d]");
  }
  const auto locals = local_top_k_all(node_batches, projection_rank, workers);
  OrthonormalBasis round_basis = aggregate_local(locals, rank_);
  accumulate(round_basis);
  return round_basis;
}

void OdpcaState::accumulate(const OrthonormalBasis& round_basis) {
  if (round_ >= horizon_) throw StateError("odpca accumulate: horizon reached");
  if (round_basis.ambient_dim() != ambient_dim() || round_basis.rank() != rank_) {
    throw ArgumentError("odpca accumulate: round basis has the wrong shape");
  }
  accumulator_.add_outer(round_basis.matrix(), 1.0 / static_cast<double>(horizon_));
  ++round_;
}

OrthonormalBasis OdpcaState::finalize() const {
  if (round_ != horizon_) {
    throw StateError("odpca finalize: only " + std::to_string(round_) + " of " + std::to_string(horizon_) +
                     " rounds completed");
  }
  return top_k_eig(accumulator_, rank_).basis;
}

OdpcaState odpca_init(std::size_t ambient_dim, std::size_t rank, std::size_t horizon) {
  return OdpcaState(ambient_dim, rank, horizon);
}

std::pair<OdpcaState, OrthonormalBasis> odpca_step(OdpcaState state, std::span<const Matrix> node_batches,
                                                   std::size_t projection_rank) {
  OrthonormalBasis round_basis = state.step(node_batches, projection_rank);
  return {std::move(state), std::move(round_basis)};
}

OrthonormalBasis odpca_finalize(const OdpcaState& state) { return state.finalize(); }

// ------------------------------------------------------------- one-shot

OrthonormalBasis dpca(std::span<const Matrix> node_batches, std::size_t rank, std::size_t projection_rank,
                      std::size_t workers) {
  require_batches(node_batches, "dpca");
  if (projection_rank < rank) throw ArgumentError("dpca: projection rank below K");
  const auto locals = local_top_k_all(node_batches, projection_rank, workers);
  return aggregate_local(locals, rank);
}

OrthonormalBasis full_pca(const Matrix& samples, std::size_t rank) { return local_top_k(samples, rank); }

EigenDecomposition baseline_node_message(const Matrix& batch) {
  if (batch.rows() == 0) throw ArgumentError("baseline_node_message: empty batch");
  return sym_eig(empirical_covariance(batch));
}

OrthonormalBasis baseline_aggregate(std::span<const EigenDecomposition> messages, std::size_t rank) {
  if (messages.empty()) throw ArgumentError("baseline_aggregate: no messages");
  const std::size_t d = messages.front().basis.ambient_dim();
  if (rank == 0 || rank > d) throw ArgumentError("baseline_aggregate: rank out of range");
  SymmetricMatrix pooled = SymmetricMatrix::zeros(d);
  const double w = 1.0 / static_cast<double>(messages.size());
  for (const auto& e : messages) {
    if (e.basis.ambient_dim() != d) throw ArgumentError("baseline_aggregate: ambient dimensions differ");
    pooled.add_weighted_outer(e.basis.matrix(), e.values, w);
  }
  return top_k_eig(pooled, rank).basis;
}

OrthonormalBasis baseline_all_eigenvectors(std::span<const Matrix> node_batches, std::size_t rank,
                                           std::size_t workers) {
  require_batches(node_batches, "baseline_all_eigenvectors");
  const std::size_t n = node_batches.front().rows();
  for (const auto& b : node_batches) {
    if (b.rows() != n) throw ArgumentError("baseline_all_eigenvectors: node batches must have equal sizes");
  }
  if (rank == 0 || rank > node_batches.front().cols()) {
    throw ArgumentError("baseline_all_eigenvectors: rank out of range");
  }
  std::vector<EigenDecomposition> sent(node_batches.size());
  detail::parallel_for(node_batches.size(), workers,
                       [&](std::size_t i) { sent[i] = baseline_node_message(node_batches[i]); });
  return baseline_aggregate(sent, rank);
}

}  // namespace odpca
