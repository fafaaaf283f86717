#include "odpca/tasks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "odpca/errors.hpp"
#include "odpca/random.hpp"

namespace odpca {

namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double t = a[i] - b[i];
    s += t * t;
  }
  return s;
}

// Nearest center per point, lowest index on ties. Returns the total cost.
double assign_nearest(const Matrix& points, const Matrix& centers, std::vector<std::size_t>& assignments,
                      std::vector<double>& distances) {
  double cost = 0.0;
  for (std::size_t i = 0; i < points.rows(); ++i) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centers.rows(); ++c) {
      const double dist = squared_distance(points.row(i), centers.row(c));
      if (dist < best_d) {
        best_d = dist;
        best = c;
      }
    }
    assignments[i] = best;
    distances[i] = best_d;
    cost += best_d;
  }
  return cost;
}

double cost_of(const Matrix& points, const Matrix& centers, std::span<const std::size_t> assignments) {
  double cost = 0.0;
  for (std::size_t i = 0; i < points.rows(); ++i) cost += squared_distance(points.row(i), centers.row(assignments[i]));
  return cost;
}

// Means of assigned points; empty clusters move to the point farthest from
// its current center, which is then claimed so no two empties share it.
void update_centers(const Matrix& points, Matrix& centers, std::vector<std::size_t>& assignments,
                    std::vector<double>& distances) {
  const std::size_t k = centers.rows();
  const std::size_t p = points.cols();
  Matrix sums(k, p);
  std::vector<std::size_t> counts(k, 0);
  for (std::size_t i = 0; i < points.rows(); ++i) {
    auto dst = sums.row(assignments[i]);
    const auto src = points.row(i);
    for (std::size_t j = 0; j < p; ++j) dst[j] += src[j];
    ++counts[assignments[i]];
  }
  for (std::size_t c = 0; c < k; ++c) {
    if (counts[c] == 0) continue;
    for (std::size_t j = 0; j < p; ++j) centers(c, j) = sums(c, j) / static_cast<double>(counts[c]);
  }
  if (std::find(counts.begin(), counts.end(), std::size_t{0}) == counts.end()) return;
  for (std::size_t i = 0; i < points.rows(); ++i) {
    distances[i] = squared_distance(points.row(i), centers.row(assignments[i]));
  }
  for (std::size_t c = 0; c < k; ++c) {
    if (counts[c] != 0) continue;
    std::size_t far = 0;
    double far_d = -1.0;
    for (std::size_t i = 0; i < points.rows(); ++i) {
      if (distances[i] > far_d) {
        far_d = distances[i];
        far = i;
      }
    }
    const auto src = points.row(far);
    std::copy(src.begin(), src.end(), centers.row(c).begin());
    distances[far] = 0.0;
  }
}

Matrix kmeans_plus_plus(const Matrix& points, std::size_t k, SeededStream& stream) {
  const std::size_t n = points.rows();
  Matrix centers(k, points.cols());
  std::vector<double> nearest(n, std::numeric_limits<double>::infinity());

  std::size_t chosen = static_cast<std::size_t>(stream.next_below(n));
  for (std::size_t c = 0; c < k; ++c) {
    const auto src = points.row(chosen);
    std::copy(src.begin(), src.end(), centers.row(c).begin());
    if (c + 1 == k) break;

    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      nearest[i] = std::min(nearest[i], squared_distance(points.row(i), centers.row(c)));
      total += nearest[i];
    }
    if (total <= 0.0) {
      // Every point coincides with a chosen center; fall back to uniform picks.
      chosen = static_cast<std::size_t>(stream.next_below(n));
      continue;
    }
    const double target = stream.next_uniform() * total;
    double running = 0.0;
    chosen = n - 1;
    for (std::size_t i = 0; i < n; ++i) {
      running += nearest[i];
      if (running >= target && nearest[i] > 0.0) {
        chosen = i;
        break;
      }
    }
  }
  return centers;
}

}  // namespace

double lowrank_error(const Matrix& x, const OrthonormalBasis& u) {
  if (x.cols() != u.ambient_dim()) throw ArgumentError("lowrank_error: dimension mismatch");
  const double total = frobenius_norm_squared(x);
  const double kept = frobenius_norm_squared(matmul(x, u.matrix()));
  return std::sqrt(std::max(total - kept, 0.0));
}

double relative_error(double method_err, double baseline_err) {
  if (!(baseline_err > 0.0)) throw DegenerateTaskError("relative_error: baseline error is zero");
  return method_err / baseline_err;
}

Matrix project_data(const Matrix& x, const OrthonormalBasis& u) {
  if (x.cols() != u.ambient_dim()) throw ArgumentError("project_data: dimension mismatch");
  return matmul(x, u.matrix());
}

ClusteringResult kmeans_lloyd(const Matrix& points, std::size_t k, std::uint64_t seed, std::size_t max_iters) {
  if (k == 0 || points.rows() < k) {
    throw ArgumentError("kmeans_lloyd: need 1 <= k <= n, got k=" + std::to_string(k) +
                        " n=" + std::to_string(points.rows()));
  }
  SeededStream stream(seed);
  return kmeans_lloyd_from(points, kmeans_plus_plus(points, k, stream), max_iters);
}

ClusteringResult kmeans_lloyd_from(const Matrix& points, Matrix initial_centers, std::size_t max_iters) {
  const std::size_t n = points.rows();
  const std::size_t k = initial_centers.rows();
  if (k == 0 || n < k) throw ArgumentError("kmeans_lloyd_from: need 1 <= k <= n");
  if (initial_centers.cols() != points.cols()) throw ArgumentError("kmeans_lloyd_from: center dimension mismatch");

  ClusteringResult r;
  r.centers = std::move(initial_centers);
  r.assignments.assign(n, 0);
  std::vector<double> distances(n);
  r.cost_history.push_back(assign_nearest(points, r.centers, r.assignments, distances));

  std::vector<std::size_t> next(n);
  for (std::size_t it = 0; it < max_iters; ++it) {
    update_centers(points, r.centers, r.assignments, distances);
    ++r.iterations;
    r.cost_history.push_back(assign_nearest(points, r.centers, next, distances));
    if (next == r.assignments) {
      r.converged = true;
      break;
    }
    r.assignments.swap(next);
  }
  r.cost = cost_of(points, r.centers, r.assignments);
  return r;
}

double lifted_cost(const Matrix& x, const OrthonormalBasis& u, const Matrix& centers,
                   std::span<const std::size_t> assignments) {
  if (x.cols() != u.ambient_dim() || centers.cols() != u.rank() || assignments.size() != x.rows()) {
    throw ArgumentError("lifted_cost: dimension mismatch");
  }
  const Matrix lifted = matmul_nt(centers, u.matrix());  // k×d
  return cost_of(x, lifted, assignments);
}

double clustering_cost_ratio(const OrthonormalBasis& method_basis, const OrthonormalBasis& baseline_basis,
                             const Matrix& x, std::size_t k, std::span<const std::uint64_t> seeds,
                             std::size_t max_iters) {
  if (seeds.empty()) throw ArgumentError("clustering_cost_ratio: no seeds");
  const Matrix method_points = project_data(x, method_basis);
  const Matrix baseline_points = project_data(x, baseline_basis);

  std::vector<double> ratios;
  ratios.reserve(seeds.size());
  for (std::uint64_t seed : seeds) {
    const ClusteringResult m = kmeans_lloyd(method_points, k, seed, max_iters);
    const ClusteringResult b = kmeans_lloyd(baseline_points, k, seed, max_iters);
    const double mc = lifted_cost(x, method_basis, m.centers, m.assignments);
    const double bc = lifted_cost(x, baseline_basis, b.centers, b.assignments);
    if (!(bc > 0.0)) throw DegenerateTaskError("clustering_cost_ratio: baseline cost is zero");
    ratios.push_back(mc / bc);
  }
  std::sort(ratios.begin(), ratios.end());
  const std::size_t mid = ratios.size() / 2;
  return ratios.size() % 2 == 1 ? ratios[mid] : 0.5 * (ratios[mid - 1] + ratios[mid]);
}

}  // namespace odpca
