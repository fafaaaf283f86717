#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "odpca/linalg.hpp"
#include "odpca/random.hpp"
#include "odpca/subspace.hpp"

namespace odpca {

/// Population covariance Σ = V diag(λ) Vᵀ with K spikes above a flat bulk.
struct SpikedModel {
  std::size_t ambient_dim = 0;
  std::size_t rank = 0;
  std::vector<double> eigenvalues;  // d values, descending
  OrthonormalBasis ground_truth;    // V_K, first K columns of full_basis
  OrthonormalBasis full_basis;      // V

  SymmetricMatrix covariance() const;
  SpectrumStats stats() const;
};

/// λ = (spikes, bulk × (d−K)); V from Gram-Schmidt of a seeded standard
/// Gaussian d×d matrix (positive R diagonal, so Haar distributed).
SpikedModel make_spiked_model(std::size_t d, std::size_t k, const std::vector<double>& spike_values,
                              double bulk_value, std::uint64_t seed);

/// Spikes (K+5, K+4, ..., 6) over a unit bulk; for K = 5 this is 10..6.
std::vector<double> default_spikes(std::size_t k);

/// n i.i.d. rows x = V Λ^{1/2} z with z ~ N(0, I). Advances `stream` by n·d.
Matrix sample_gaussian(const SpikedModel& model, std::size_t n, SeededStream& stream);

/// n i.i.d. rows x = V Λ^{1/2} (ε ⊙ |g|), ε Rademacher, g Gaussian. Same
/// covariance as sample_gaussian(). Advances `stream` by n·d.
Matrix sample_heavy_shuffled(const SpikedModel& model, std::size_t n, SeededStream& stream);

struct PlantedClusters {
  Matrix samples;                   // n×d
  std::vector<std::size_t> labels;  // planted cluster of each row
  Matrix centers;                   // k×d
};

/// Rows drawn as center[label] + Gaussian noise from `model`. Center c is
/// +separation·v_c for c < K and −separation·v_{c−K} for K ≤ c < 2K, so
/// every center lies in the principal eigenspace. Requires 1 ≤ k ≤ 2K.
/// Advances `stream` by n·(d+1).
PlantedClusters sample_planted_clusters(const SpikedModel& model, std::size_t n, std::size_t k, double separation,
                                        SeededStream& stream);

}  // namespace odpca
