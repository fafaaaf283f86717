#include "odpca/datagen.hpp"

#include <cmath>
#include <string>

#include "odpca/errors.hpp"

namespace odpca {

namespace {

// L = V diag(√λ), so x = L z has covariance Σ.
Matrix covariance_root(const SpikedModel& model) {
  Matrix l = model.full_basis.matrix();
  for (std::size_t i = 0; i < l.rows(); ++i) {
    for (std::size_t j = 0; j < l.cols(); ++j) l(i, j) *= std::sqrt(model.eigenvalues[j]);
  }
  return l;
}

}  // namespace

SymmetricMatrix SpikedModel::covariance() const {
  SymmetricMatrix sigma = SymmetricMatrix::zeros(ambient_dim);
  sigma.add_weighted_outer(full_basis.matrix(), eigenvalues, 1.0);
  return sigma;
}

SpectrumStats SpikedModel::stats() const { return spectrum_stats(eigenvalues, rank); }

SpikedModel make_spiked_model(std::size_t d, std::size_t k, const std::vector<double>& spike_values,
                              double bulk_value, std::uint64_t seed) {
  if (k == 0 || k >= d) throw ArgumentError("make_spiked_model: need 1 <= K < d");
  if (spike_values.size() != k) {
    throw ArgumentError("make_spiked_model: expected " + std::to_string(k) + " spike values");
  }
  for (std::size_t i = 0; i + 1 < k; ++i) {
    if (spike_values[i] < spike_values[i + 1]) throw ArgumentError("make_spiked_model: spikes not descending");
  }
  if (!(bulk_value > 0.0)) throw ArgumentError("make_spiked_model: bulk value must be positive");
  if (!(spike_values.back() > bulk_value)) {
    throw ArgumentError("make_spiked_model: smallest spike must exceed the bulk value");
  }

  SeededStream stream(seed);
  Matrix gaussian(d, d);
  for (double& x : gaussian.entries()) x = stream.next_gaussian();

  SpikedModel model;
  model.ambient_dim = d;
  model.rank = k;
  model.eigenvalues = spike_values;
  model.eigenvalues.resize(d, bulk_value);
  model.full_basis = orthonormalize(gaussian);
  model.ground_truth = model.full_basis.leading(k);
  return model;
}

std::vector<double> default_spikes(std::size_t k) {
  std::vector<double> spikes(k);
  for (std::size_t j = 0; j < k; ++j) spikes[j] = static_cast<double>(k + 5 - j);
  return spikes;
}

Matrix sample_gaussian(const SpikedModel& model, std::size_t n, SeededStream& stream) {
  const std::size_t d = model.ambient_dim;
  Matrix z(n, d);
  for (double& x : z.entries()) x = stream.next_gaussian();
  return matmul_nt(z, covariance_root(model));
}

Matrix sample_heavy_shuffled(const SpikedModel& model, std::size_t n, SeededStream& stream) {
  const std::size_t d = model.ambient_dim;
  Matrix z(n, d);
  for (double& x : z.entries()) x = stream.next_signed_half_normal();
  return matmul_nt(z, covariance_root(model));
}

PlantedClusters sample_planted_clusters(const SpikedModel& model, std::size_t n, std::size_t k, double separation,
                                        SeededStream& stream) {
  const std::size_t d = model.ambient_dim;
  if (k == 0 || k > 2 * model.rank) throw ArgumentError("sample_planted_clusters: need 1 <= k <= 2K");

  PlantedClusters out;
  out.centers = Matrix(k, d);
  const Matrix& v = model.ground_truth.matrix();
  for (std::size_t c = 0; c < k; ++c) {
    const std::size_t axis = c % model.rank;
    const double sign = c < model.rank ? 1.0 : -1.0;
    for (std::size_t i = 0; i < d; ++i) out.centers(c, i) = sign * separation * v(i, axis);
  }

  out.labels.resize(n);
  for (auto& label : out.labels) label = static_cast<std::size_t>(stream.next_below(k));
  out.samples = sample_gaussian(model, n, stream);
  for (std::size_t r = 0; r < n; ++r) {
    auto row = out.samples.row(r);
    const auto center = out.centers.row(out.labels[r]);
    for (std::size_t i = 0; i < d; ++i) row[i] += center[i];
  }
  return out;
}

}  // namespace odpca
