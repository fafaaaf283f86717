#pragma once

// Star-topology streaming simulator. Materializes N = T·m·n samples once,
// hands the same rows to every requested estimator, and records per-round
// errors, communication volume and phase timings.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "odpca/datagen.hpp"
#include "odpca/io.hpp"
#include "odpca/linalg.hpp"

namespace odpca {

enum class Algorithm { odpca, dpca, full, baseline };

std::string_view to_string(Algorithm algorithm);
Algorithm parse_algorithm(std::string_view name);
/// Comma-separated list, e.g. "odpca,dpca".
std::vector<Algorithm> parse_algorithms(std::string_view list);

enum class Sampler { gaussian, rademacher };

struct SyntheticSource {
  std::vector<double> spikes;  // empty means default_spikes(K)
  double bulk = 1.0;
  std::uint64_t model_seed = 0;
  Sampler sampler = Sampler::gaussian;
  /// When nonzero, rows come from sample_planted_clusters() with this many
  /// clusters at the given separation.
  std::size_t planted_clusters = 0;
  double separation = 6.0;
};

struct FileSource {
  DatasetSpec spec;
};

using DataSource = std::variant<SyntheticSource, FileSource>;

struct RunConfig {
  std::size_t nodes = 4;        // m
  std::size_t batch_size = 100; // n, per node per round
  std::size_t horizon = 5;      // T
  std::size_t rank = 5;         // K
  std::size_t surplus = 0;      // Z
  std::size_t ambient_dim = 50; // d; 0 for file sources means "take it from the file"
  std::uint64_t seed = 1;
  DataSource source = SyntheticSource{};
  std::vector<Algorithm> algorithms = {Algorithm::odpca, Algorithm::dpca, Algorithm::full, Algorithm::baseline};
  std::size_t workers = 0;      // 0 means min(m, hardware threads)

  std::size_t total_samples() const noexcept { return horizon * nodes * batch_size; }
  std::size_t projection_rank() const noexcept { return rank + surplus; }
  bool wants(Algorithm a) const;
  /// Throws ArgumentError on m, n, T, K < 1 or K+Z > d.
  void validate() const;
};

/// The rows every estimator sees, plus ground truth when it is known.
struct StreamData {
  Matrix pooled;  // N×d, after any centering
  StreamGrid grid;
  std::optional<SpikedModel> model;
};

/// Samples or loads the N rows for `config`. Synthetic rows come from
/// SeededStream(config.seed) starting at counter 0, so a longer horizon
/// extends a shorter one.
StreamData materialize(const RunConfig& config);

/// Number of reals sent from nodes to the center: T·m·d·(K+Z) for odpca,
/// m·d·(K+Z) for dpca, m·d·(d+1) for the baseline and N·d (raw rows) for
/// pooled PCA.
std::uint64_t comm_entries(Algorithm algorithm, const RunConfig& config, std::size_t ambient_dim);

struct PhaseTimes {
  double local_ms = 0.0;
  double aggregate_ms = 0.0;
  double total_ms = 0.0;
};

struct RoundRecord {
  std::size_t round = 0;  // 1-based
  double error = 0.0;     // Δ(V̄_K(t), reference)
  double trace = 0.0;     // trace of the accumulator after this round
  std::uint64_t comm_entries = 0;
  double local_ms = 0.0;
  double aggregate_ms = 0.0;
};

struct AlgorithmResult {
  Algorithm algorithm = Algorithm::odpca;
  OrthonormalBasis basis;
  double final_error = 0.0;
  std::uint64_t comm_entries = 0;
  PhaseTimes times;
  std::uint64_t data_digest = 0;      // order-independent hash of the rows consumed
  std::size_t local_batch_rows = 0;   // rows per local eigenproblem
};

enum class ErrorReference { ground_truth, pooled_pca };
std::string_view to_string(ErrorReference reference);

struct RunReport {
  RunConfig config;
  std::size_t ambient_dim = 0;
  ErrorReference reference = ErrorReference::ground_truth;
  std::vector<RoundRecord> rounds;  // odpca only; empty if not requested
  std::vector<AlgorithmResult> results;

  const AlgorithmResult* find(Algorithm algorithm) const;
};

/// Runs every requested estimator on `data`. Errors are Δ to the model's V_K,
/// or to pooled PCA when the source carries no ground truth.
RunReport run_on(const RunConfig& config, const StreamData& data);
RunReport run_stream(const RunConfig& config);

/// Order-independent digest of a set of rows.
std::uint64_t row_digest(const Matrix& rows);

enum class ScaleAxis { horizon, batch_size };

struct ScalingRow {
  std::size_t factor = 1;
  std::size_t total_samples = 0;
  double mean_error = 0.0;
  double std_error = 0.0;  // sample standard deviation
  std::vector<double> errors;
};

/// For each factor, multiplies T (or n) and reruns odpca over `replications`
/// seeds derive_seed(base.seed, r). Replication r uses the same seed at every
/// factor. Needs a synthetic source and replications ≥ 10.
std::vector<ScalingRow> scaling_experiment(const RunConfig& base, std::span<const std::size_t> factors,
                                           std::size_t replications, ScaleAxis axis = ScaleAxis::horizon);

struct TimingRow {
  Algorithm algorithm = Algorithm::odpca;
  PhaseTimes median;
  double spread_ms = 0.0;  // max − min of total over repetitions
  std::size_t local_batch_rows = 0;
  std::size_t repetitions = 0;
  double final_error = 0.0;
};

/// Runs `config` `repetitions` times (at least 3) on the same data and
/// reports median phase timings per algorithm.
std::vector<TimingRow> timing_probe(const RunConfig& config, std::size_t repetitions = 3);

}  // namespace odpca
