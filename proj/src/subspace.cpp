#include "odpca/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "odpca/errors.hpp"

namespace odpca {

namespace {

void require_same_ambient(const OrthonormalBasis& u, const OrthonormalBasis& v, const char* op) {
  if (u.ambient_dim() != v.ambient_dim()) {
    throw ArgumentError(std::string(op) + ": ambient dimensions differ (" + std::to_string(u.ambient_dim()) +
                        " vs " + std::to_string(v.ambient_dim()) + ")");
  }
}

// ‖A − B·G‖²_F where A is d×a, B is d×b, G is b×a.
double residual_squared(const Matrix& a, const Matrix& b, const Matrix& g) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const auto ai = a.row(i);
    const auto bi = b.row(i);
    for (std::size_t j = 0; j < a.cols(); ++j) {
      double r = ai[j];
      for (std::size_t k = 0; k < bi.size(); ++k) r -= bi[k] * g(k, j);
      sum += r * r;
    }
  }
  return sum;
}

}  // namespace

double projection_distance(const OrthonormalBasis& u, const OrthonormalBasis& v) {
  require_same_ambient(u, v, "projection_distance");
  const Matrix vtu = matmul_tn(v.matrix(), u.matrix());
  const Matrix utv = vtu.transpose();
  return std::sqrt(residual_squared(u.matrix(), v.matrix(), vtu) +
                   residual_squared(v.matrix(), u.matrix(), utv));
}

double projection_distance_gram(const OrthonormalBasis& u, const OrthonormalBasis& v) {
  require_same_ambient(u, v, "projection_distance_gram");
  const Matrix utv = matmul_tn(u.matrix(), v.matrix());
  const double sq = static_cast<double>(u.rank() + v.rank()) - 2.0 * frobenius_norm_squared(utv);
  return std::sqrt(std::max(sq, 0.0));
}

double h_objective(const OrthonormalBasis& u, std::span<const OrthonormalBasis> bases) {
  if (bases.empty()) throw ArgumentError("h_objective: empty basis list");
  // Neumaier summation.
  double sum = 0.0;
  double carry = 0.0;
  for (const auto& v : bases) {
    const double dist = projection_distance(u, v);
    const double term = dist * dist;
    const double t = sum + term;
    if (std::abs(sum) >= std::abs(term)) {
      carry += (sum - t) + term;
    } else {
      carry += (term - t) + sum;
    }
    sum = t;
  }
  return (sum + carry) / static_cast<double>(bases.size());
}

SymmetricMatrix mean_projector(std::span<const OrthonormalBasis> bases) {
  if (bases.empty()) throw ArgumentError("mean_projector: empty basis list");
  const std::size_t d = bases.front().ambient_dim();
  SymmetricMatrix acc = SymmetricMatrix::zeros(d);
  const double w = 1.0 / static_cast<double>(bases.size());
  for (const auto& b : bases) {
    if (b.ambient_dim() != d) throw ArgumentError("mean_projector: ambient dimensions differ");
    acc.add_outer(b.matrix(), w);
  }
  return acc;
}

SpectrumStats spectrum_stats(std::span<const double> values, std::size_t k) {
  if (k == 0 || k + 1 > values.size()) {
    throw ArgumentError("spectrum_stats: need K >= 1 and at least K+1 eigenvalues");
  }
  for (std::size_t i = 0; i + 1 < values.size(); ++i) {
    if (values[i] < values[i + 1]) throw ArgumentError("spectrum_stats: eigenvalues not descending");
  }
  if (!(values[0] > 0.0)) throw ArgumentError("spectrum_stats: leading eigenvalue must be positive");

  SpectrumStats s;
  s.lambda1 = values[0];
  s.lambdaK = values[k - 1];
  s.lambdaK1 = values[k];
  s.eigengap = s.lambdaK - s.lambdaK1;
  if (!(s.eigengap > 0.0)) {
    throw IdentifiabilityError("spectrum_stats: eigengap at K=" + std::to_string(k) + " is not positive");
  }
  s.kappa = s.lambda1 / s.eigengap;
  s.effective_rank = std::accumulate(values.begin(), values.end(), 0.0) / s.lambda1;
  return s;
}

}  // namespace odpca
