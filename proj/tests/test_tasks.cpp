#include <doctest.h>

#include <cmath>
#include <limits>

#include "odpca/algorithms.hpp"
#include "odpca/datagen.hpp"
#include "odpca/errors.hpp"
#include "odpca/tasks.hpp"
#include "support.hpp"

using namespace odpca;
using namespace odpca::testing;

namespace {

double dense_residual(const Matrix& x, const OrthonormalBasis& u) {
  const Matrix p = dense_projector(u);
  double s = 0.0;
  for (std::size_t r = 0; r < x.rows(); ++r)
    for (std::size_t j = 0; j < x.cols(); ++j) {
      double v = x(r, j);
      for (std::size_t c = 0; c < x.cols(); ++c) v -= x(r, c) * p(c, j);
      s += v * v;
    }
  return std::sqrt(s);
}

double recomputed_cost(const Matrix& x, const ClusteringResult& r) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) {
      const double t = x(i, j) - r.centers(r.assignments[i], j);
      s += t * t;
    }
  return s;
}

void check_lloyd_invariants(const Matrix& x, const ClusteringResult& r) {
  for (std::size_t i = 1; i < r.cost_history.size(); ++i) CHECK(r.cost_history[i] <= r.cost_history[i - 1]);
  CHECK(std::abs(r.cost - recomputed_cost(x, r)) <= 1e-8 * std::max(1.0, r.cost));
  if (!r.converged) return;
  for (std::size_t c = 0; c < r.centers.rows(); ++c) {
    std::vector<double> mean(x.cols(), 0.0);
    std::size_t count = 0;
    for (std::size_t i = 0; i < x.rows(); ++i) {
      if (r.assignments[i] != c) continue;
      ++count;
      for (std::size_t j = 0; j < x.cols(); ++j) mean[j] += x(i, j);
    }
    if (count == 0) continue;
    for (std::size_t j = 0; j < x.cols(); ++j) CHECK(std::abs(mean[j] / count - r.centers(c, j)) < 1e-8);
  }
  // fixpoint: another pass from the final centers changes nothing
  const ClusteringResult again = kmeans_lloyd_from(x, r.centers, 1);
  CHECK(again.assignments == r.assignments);
}

// Best 2-partition cost over all 2^(n-1) - 1 splits.
double exhaustive_two_means(const Matrix& x) {
  const std::size_t n = x.rows();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t mask = 1; mask < (std::size_t{1} << (n - 1)); ++mask) {
    double cost = 0.0;
    for (int side = 0; side < 2; ++side) {
      std::vector<double> mean(x.cols(), 0.0);
      std::size_t count = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (static_cast<int>((mask >> i) & 1U) != side) continue;
        ++count;
        for (std::size_t j = 0; j < x.cols(); ++j) mean[j] += x(i, j);
      }
      for (double& m : mean) m /= static_cast<double>(count);
      for (std::size_t i = 0; i < n; ++i) {
        if (static_cast<int>((mask >> i) & 1U) != side) continue;
        for (std::size_t j = 0; j < x.cols(); ++j) cost += (x(i, j) - mean[j]) * (x(i, j) - mean[j]);
      }
    }
    best = std::min(best, cost);
  }
  return best;
}

}  // namespace

TEST_SUITE("lowrank_error") {
  TEST_CASE("rows inside the span") {
    SeededStream rng(1);
    const auto u = random_basis(5, 2, rng);
    const Matrix x = matmul_nt(gaussian_matrix(7, 2, rng), u.matrix());
    CHECK(lowrank_error(x, u) < 1e-7);
  }

  TEST_CASE("identity against e1") {
    const std::size_t axis[] = {0};
    CHECK(lowrank_error(Matrix::identity(2), OrthonormalBasis::coordinate_axes(2, axis)) == 1.0);
  }

  TEST_CASE("dense residual oracle and Pythagoras") {
    SeededStream rng(2);
    for (int rep = 0; rep < 20; ++rep) {
      const Matrix x = gaussian_matrix(20, 6, rng);
      const auto u = random_basis(6, 2, rng);
      const double err = lowrank_error(x, u);
      CHECK(std::abs(err - dense_residual(x, u)) < 1e-8);
      const double kept = frobenius_norm_squared(project_data(x, u));
      CHECK(std::abs(frobenius_norm_squared(x) - kept - err * err) <= 1e-6 * frobenius_norm_squared(x));
      CHECK(std::sqrt(kept) <= frobenius_norm(x) + 1e-12);
    }
  }

  TEST_CASE("Eckart-Young floor") {
    SeededStream rng(3);
    const Matrix x = gaussian_matrix(30, 8, rng);
    const double best = lowrank_error(x, full_pca(x, 3));
    for (int rep = 0; rep < 50; ++rep) CHECK(best <= lowrank_error(x, random_basis(8, 3, rng)) + 1e-8);
  }

  TEST_CASE("dimension mismatch") {
    SeededStream rng(4);
    CHECK_THROWS_AS(lowrank_error(Matrix(3, 4), random_basis(5, 2, rng)), ArgumentError);
    CHECK_THROWS_AS(project_data(Matrix(3, 4), random_basis(5, 2, rng)), ArgumentError);
  }
}

TEST_SUITE("relative_error") {
  TEST_CASE("examples") {
    CHECK(relative_error(2.5, 2.5) == 1.0);
    CHECK_THROWS_AS(relative_error(1.0, 0.0), DegenerateTaskError);
    // a basis orthogonal to the data against the optimal one
    const Matrix x = Matrix::from_rows({{3, 0, 0.1}, {-2, 0, 0.2}, {1, 0, -0.1}});
    const std::size_t off[] = {1};
    const double worst = lowrank_error(x, OrthonormalBasis::coordinate_axes(3, off));
    CHECK(relative_error(worst, lowrank_error(x, full_pca(x, 1))) > 1.0);
  }
}

TEST_SUITE("project_data") {
  TEST_CASE("coordinate basis selects columns") {
    const Matrix x = Matrix::from_rows({{1, 2, 3}, {4, 5, 6}});
    const std::size_t idx[] = {2, 0};
    CHECK(project_data(x, OrthonormalBasis::coordinate_axes(3, idx)) == Matrix::from_rows({{3, 1}, {6, 4}}));
  }
}

TEST_SUITE("kmeans") {
  TEST_CASE("k = n gives zero cost") {
    SeededStream rng(5);
    const Matrix x = gaussian_matrix(6, 3, rng);
    const auto r = kmeans_lloyd(x, 6, 1);
    CHECK(r.cost == 0.0);
  }

  TEST_CASE("two separated pairs") {
    const Matrix x = Matrix::from_rows({{0, 0}, {0, 1}, {10, 0}, {10, 1}});
    const auto r = kmeans_lloyd(x, 2, 3);
    CHECK(r.assignments[0] == r.assignments[1]);
    CHECK(r.assignments[2] == r.assignments[3]);
    CHECK(r.assignments[0] != r.assignments[2]);
    CHECK(r.cost == doctest::Approx(4 * 0.25));
  }

  TEST_CASE("n=8, k=2 against the exhaustive partition oracle") {
    SeededStream rng(6);
    for (int instance = 0; instance < 5; ++instance) {
      const Matrix x = gaussian_matrix(8, 2, rng);
      const double oracle = exhaustive_two_means(x);
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t a = 0; a < 8; ++a)
        for (std::size_t b = a + 1; b < 8; ++b) {
          Matrix init(2, 2);
          for (std::size_t j = 0; j < 2; ++j) {
            init(0, j) = x(a, j);
            init(1, j) = x(b, j);
          }
          const auto r = kmeans_lloyd_from(x, init);
          check_lloyd_invariants(x, r);
          best = std::min(best, r.cost);
        }
      CHECK(best == doctest::Approx(oracle).epsilon(1e-12));
      CHECK(best >= oracle - 1e-12);
    }
  }

  TEST_CASE("monotone cost and fixpoints on random data") {
    SeededStream rng(7);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const Matrix x = gaussian_matrix(60, 3, rng);
      const auto r = kmeans_lloyd(x, 4, seed);
      CHECK(r.converged);
      check_lloyd_invariants(x, r);
    }
  }

  TEST_CASE("empty cluster is reseeded to the farthest point") {
    const Matrix x = Matrix::from_rows({{0}, {1}, {2}, {10}});
    const Matrix init = Matrix::from_rows({{1}, {100}});
    const auto r = kmeans_lloyd_from(x, init);
    check_lloyd_invariants(x, r);
    CHECK(r.assignments[3] != r.assignments[0]);
    CHECK(r.cost == doctest::Approx(2.0));
  }

  TEST_CASE("deterministic given the seed") {
    SeededStream rng(8);
    const Matrix x = gaussian_matrix(40, 2, rng);
    const auto a = kmeans_lloyd(x, 3, 11);
    const auto b = kmeans_lloyd(x, 3, 11);
    CHECK(a.assignments == b.assignments);
    CHECK(a.cost == b.cost);
  }

  TEST_CASE("errors") { CHECK_THROWS_AS(kmeans_lloyd(Matrix(2, 2), 3, 0), ArgumentError); }
}

TEST_SUITE("clustering_cost_ratio") {
  TEST_CASE("method equal to baseline") {
    const auto model = make_spiked_model(10, 2, {6, 5}, 1.0, 1);
    SeededStream s(2);
    const auto pc = sample_planted_clusters(model, 200, 2, 6.0, s);
    const auto u = full_pca(pc.samples, 2);
    const std::uint64_t seeds[] = {1, 2, 3};
    const double ratio = clustering_cost_ratio(u, u, pc.samples, 2, seeds);
    CHECK((ratio >= 0.95 && ratio <= 1.05));
  }

  TEST_CASE("lifted cost is measured in the original space") {
    const Matrix x = Matrix::from_rows({{1, 5}, {3, 5}});
    const std::size_t axis[] = {0};
    const auto u = OrthonormalBasis::coordinate_axes(2, axis);
    const Matrix centers = Matrix::from_rows({{2}});
    const std::size_t assign[] = {0, 0};
    CHECK(lifted_cost(x, u, centers, assign) == doctest::Approx(1 + 25 + 1 + 25));
  }

  TEST_CASE("ratios positive and finite") {
    const auto model = make_spiked_model(10, 2, {6, 5}, 1.0, 3);
    SeededStream s(4);
    const auto pc = sample_planted_clusters(model, 150, 3, 5.0, s);
    SeededStream rng(5);
    const std::uint64_t seeds[] = {7, 8};
    const double ratio = clustering_cost_ratio(random_basis(10, 2, rng), full_pca(pc.samples, 2), pc.samples, 3, seeds);
    CHECK(std::isfinite(ratio));
    CHECK(ratio > 0.0);
    CHECK_THROWS_AS(clustering_cost_ratio(full_pca(pc.samples, 2), full_pca(pc.samples, 2), pc.samples, 3, {}),
                    ArgumentError);
  }
}
