#pragma once

#include <cstddef>
#include <span>

#include "odpca/linalg.hpp"

namespace odpca {

/// Spectrum summaries at rank K: eigengap δ = λ_K − λ_{K+1}, κ = λ₁/δ and
/// effective rank r = Tr/λ₁.
struct SpectrumStats {
  double lambda1 = 0.0;
  double lambdaK = 0.0;
  double lambdaK1 = 0.0;
  double eigengap = 0.0;
  double kappa = 0.0;
  double effective_rank = 0.0;
};

/// ‖UUᵀ − VVᵀ‖_F without forming d×d projectors. Ranks may differ.
///
/// Evaluated as sqrt(‖U − V(VᵀU)‖² + ‖V − U(UᵀV)‖²), which equals
/// sqrt(rank U + rank V − 2‖UᵀV‖²) but does not cancel catastrophically when
/// the two subspaces nearly coincide.
double projection_distance(const OrthonormalBasis& u, const OrthonormalBasis& v);

/// sqrt(rank U + rank V − 2‖UᵀV‖²), clamped at zero. Same quantity as
/// projection_distance(); loses about half the digits near Δ = 0.
double projection_distance_gram(const OrthonormalBasis& u, const OrthonormalBasis& v);

/// Mean of Δ²(U, Vᵢ) over `bases`, compensated summation in list order.
double h_objective(const OrthonormalBasis& u, std::span<const OrthonormalBasis> bases);

/// Mean of the projectors VᵢVᵢᵀ.
SymmetricMatrix mean_projector(std::span<const OrthonormalBasis> bases);

/// `values` must be descending with at least K+1 entries and λ₁ > 0. Throws
/// IdentifiabilityError when λ_K − λ_{K+1} ≤ 0.
SpectrumStats spectrum_stats(std::span<const double> values, std::size_t k);

}  // namespace odpca
