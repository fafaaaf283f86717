#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "odpca/linalg.hpp"

namespace odpca {

struct ClusteringResult {
  Matrix centers;                    // k×p
  std::vector<std::size_t> assignments;
  double cost = 0.0;                 // Σ ‖xᵢ − center(aᵢ)‖²
  std::size_t iterations = 0;        // Lloyd updates performed
  std::vector<double> cost_history;  // cost after seeding and after each update
  bool converged = false;            // reached an assignment fixpoint
};

/// ‖X − XUUᵀ‖_F as sqrt(max(‖X‖² − ‖XU‖², 0)).
double lowrank_error(const Matrix& x, const OrthonormalBasis& u);

/// method / baseline. Throws DegenerateTaskError when baseline ≤ 0.
double relative_error(double method_err, double baseline_err);

/// X·U, the coordinates of each row in the basis.
Matrix project_data(const Matrix& x, const OrthonormalBasis& u);

/// Lloyd iterations from k-means++ seeding drawn from SeededStream(seed).
/// Stops at an assignment fixpoint or after `max_iters` updates. An empty
/// cluster is reseeded at the point farthest from its assigned center.
ClusteringResult kmeans_lloyd(const Matrix& points, std::size_t k, std::uint64_t seed, std::size_t max_iters = 300);

/// Lloyd iterations from explicit initial centers (k×p).
ClusteringResult kmeans_lloyd_from(const Matrix& points, Matrix initial_centers, std::size_t max_iters = 300);

/// Σ ‖xᵢ − U·cᵢ‖² in the original space for centers `centers` (k×K) expressed
/// in basis U and the given assignments.
double lifted_cost(const Matrix& x, const OrthonormalBasis& u, const Matrix& centers,
                   std::span<const std::size_t> assignments);

/// Median over `seeds` of lifted k-means cost on X·method over lifted cost on
/// X·baseline, both clustered with the same seed.
double clustering_cost_ratio(const OrthonormalBasis& method_basis, const OrthonormalBasis& baseline_basis,
                             const Matrix& x, std::size_t k, std::span<const std::uint64_t> seeds,
                             std::size_t max_iters = 300);

}  // namespace odpca
