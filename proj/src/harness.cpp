#include "odpca/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <string>

#include "odpca/algorithms.hpp"
#include "odpca/detail/parallel.hpp"
#include "odpca/errors.hpp"
#include "odpca/random.hpp"
#include "odpca/subspace.hpp"

namespace odpca {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

std::size_t worker_count(const RunConfig& config) {
  return config.workers != 0 ? config.workers : detail::default_workers(config.nodes);
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 == 1 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

}  // namespace

std::string_view to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::odpca: return "odpca";
    case Algorithm::dpca: return "dpca";
    case Algorithm::full: return "full";
    case Algorithm::baseline: return "baseline";
  }
  return "odpca";
}

Algorithm parse_algorithm(std::string_view name) {
  if (name == "odpca") return Algorithm::odpca;
  if (name == "dpca") return Algorithm::dpca;
  if (name == "full") return Algorithm::full;
  if (name == "baseline") return Algorithm::baseline;
  throw ArgumentError("unknown algorithm '" + std::string(name) + "'");
}

std::vector<Algorithm> parse_algorithms(std::string_view list) {
  std::vector<Algorithm> out;
  std::size_t start = 0;
  while (start <= list.size()) {
    const std::size_t comma = list.find(',', start);
    const std::string_view token =
        list.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    if (!token.empty()) {
      const Algorithm a = parse_algorithm(token);
      if (std::find(out.begin(), out.end(), a) == out.end()) out.push_back(a);
    }
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (out.empty()) throw ArgumentError("no algorithms selected");
  return out;
}

std::string_view to_string(ErrorReference reference) {
  return reference == ErrorReference::ground_truth ? "ground_truth" : "pooled_pca";
}

bool RunConfig::wants(Algorithm a) const { return std::find(algorithms.begin(), algorithms.end(), a) != algorithms.end(); }

void RunConfig::validate() const {
  if (nodes == 0 || batch_size == 0 || horizon == 0 || rank == 0) {
    throw ArgumentError("run config: m, n, T and K must all be at least 1");
  }
  if (ambient_dim != 0 && projection_rank() > ambient_dim) {
    throw ArgumentError("run config: K+Z = " + std::to_string(projection_rank()) + " exceeds d = " +
                        std::to_string(ambient_dim));
  }
  if (std::holds_alternative<SyntheticSource>(source) && ambient_dim == 0) {
    throw ArgumentError("run config: synthetic source needs d >= 1");
  }
  if (algorithms.empty()) throw ArgumentError("run config: no algorithms selected");
}

const AlgorithmResult* RunReport::find(Algorithm algorithm) const {
  for (const auto& r : results) {
    if (r.algorithm == algorithm) return &r;
  }
  return nullptr;
}

std::uint64_t row_digest(const Matrix& rows) {
  std::uint64_t digest = 0;
  for (std::size_t i = 0; i < rows.rows(); ++i) {
    std::uint64_t h = 0x243f6a8885a308d3ULL;
    for (double x : rows.row(i)) {
      std::uint64_t bits = 0;
      std::memcpy(&bits, &x, sizeof bits);
      h = mix64(h ^ bits);
    }
    digest += h;
  }
  return digest;
}

StreamData materialize(const RunConfig& config) {
  config.validate();
  const std::size_t total = config.total_samples();
  StreamData data;

  if (const auto* synth = std::get_if<SyntheticSource>(&config.source)) {
    const std::vector<double> spikes = synth->spikes.empty() ? default_spikes(config.rank) : synth->spikes;
    data.model = make_spiked_model(config.ambient_dim, config.rank, spikes, synth->bulk, synth->model_seed);
    SeededStream stream(config.seed);
    if (synth->planted_clusters > 0) {
      data.pooled =
          sample_planted_clusters(*data.model, total, synth->planted_clusters, synth->separation, stream).samples;
    } else if (synth->sampler == Sampler::gaussian) {
      data.pooled = sample_gaussian(*data.model, total, stream);
    } else {
      data.pooled = sample_heavy_shuffled(*data.model, total, stream);
    }
    data.grid = partition_stream(data.pooled, config.nodes, config.batch_size, config.horizon);
    return data;
  }

  const auto& file = std::get<FileSource>(config.source);
  Matrix x = load_dataset(file.spec);
  if (config.ambient_dim != 0 && x.cols() != config.ambient_dim) {
    throw IngestionError("dataset has " + std::to_string(x.cols()) + " columns but d = " +
                         std::to_string(config.ambient_dim) + " was requested");
  }
  if (config.projection_rank() > x.cols()) throw ArgumentError("run config: K+Z exceeds the dataset dimension");
  data.grid = partition_stream(x, config.nodes, config.batch_size, config.horizon);
  if (file.spec.center == Centering::per_batch) {
    for (std::size_t t = 0; t < config.horizon; ++t) {
      for (std::size_t l = 0; l < config.nodes; ++l) center_columns(data.grid.batch(l, t));
    }
  }
  data.pooled = data.grid.pooled();
  return data;
}

std::uint64_t comm_entries(Algorithm algorithm, const RunConfig& config, std::size_t d) {
  const std::uint64_t m = config.nodes;
  const std::uint64_t p = config.projection_rank();
  switch (algorithm) {
    case Algorithm::odpca: return static_cast<std::uint64_t>(config.horizon) * m * d * p;
    case Algorithm::dpca: return m * d * p;
    case Algorithm::baseline: return m * d * (d + 1);
    case Algorithm::full: return static_cast<std::uint64_t>(config.total_samples()) * d;
  }
  return 0;
}

RunReport run_on(const RunConfig& config, const StreamData& data) {
  config.validate();
  const std::size_t d = data.pooled.cols();
  const std::size_t k = config.rank;
  const std::size_t p = config.projection_rank();
  if (p > d) throw ArgumentError("run config: K+Z exceeds d");
  const std::size_t workers = worker_count(config);

  RunReport report;
  report.config = config;
  report.ambient_dim = d;

  OrthonormalBasis reference;
  if (data.model) {
    reference = data.model->ground_truth;
    report.reference = ErrorReference::ground_truth;
  } else {
    reference = full_pca(data.pooled, k);
    report.reference = ErrorReference::pooled_pca;
  }

  // Node streams for the one-shot methods: node ℓ holds its n·T rows.
  std::vector<Matrix> node_streams;
  if (config.wants(Algorithm::dpca) || config.wants(Algorithm::baseline)) {
    node_streams.reserve(config.nodes);
    for (std::size_t l = 0; l < config.nodes; ++l) node_streams.push_back(data.grid.node_stream(l));
  }
  auto node_digest = [&] {
    std::uint64_t h = 0;
    for (const auto& s : node_streams) h += row_digest(s);
    return h;
  };

  for (Algorithm algorithm : config.algorithms) {
    AlgorithmResult r;
    r.algorithm = algorithm;
    r.comm_entries = comm_entries(algorithm, config, d);
    const auto start = Clock::now();

    switch (algorithm) {
      case Algorithm::odpca: {
        OdpcaState state(d, k, config.horizon);
        std::vector<OrthonormalBasis> round_bases;
        report.rounds.clear();
        for (std::size_t t = 0; t < config.horizon; ++t) {
          RoundRecord rec;
          rec.round = t + 1;
          auto phase = Clock::now();
          const auto locals = local_top_k_all(data.grid.round(t), p, workers);
          rec.local_ms = elapsed_ms(phase);
          phase = Clock::now();
          OrthonormalBasis round_basis = aggregate_local(locals, k);
          state.accumulate(round_basis);
          rec.aggregate_ms = elapsed_ms(phase);
          rec.trace = state.accumulator().trace();
          rec.comm_entries = static_cast<std::uint64_t>(config.nodes) * d * p;
          r.times.local_ms += rec.local_ms;
          r.times.aggregate_ms += rec.aggregate_ms;
          round_bases.push_back(std::move(round_basis));
          report.rounds.push_back(rec);
        }
        const auto phase = Clock::now();
        r.basis = state.finalize();
        r.times.aggregate_ms += elapsed_ms(phase);
        r.times.total_ms = elapsed_ms(start);
        for (std::size_t t = 0; t < config.horizon; ++t) {
          report.rounds[t].error = projection_distance(round_bases[t], reference);
        }
        std::uint64_t h = 0;
        for (std::size_t t = 0; t < config.horizon; ++t) {
          for (const auto& b : data.grid.round(t)) h += row_digest(b);
        }
        r.data_digest = h;
        r.local_batch_rows = config.batch_size;
        break;
      }
      case Algorithm::dpca: {
        auto phase = Clock::now();
        const auto locals = local_top_k_all(node_streams, p, workers);
        r.times.local_ms = elapsed_ms(phase);
        phase = Clock::now();
        r.basis = aggregate_local(locals, k);
        r.times.aggregate_ms = elapsed_ms(phase);
        r.times.total_ms = elapsed_ms(start);
        r.data_digest = node_digest();
        r.local_batch_rows = config.batch_size * config.horizon;
        break;
      }
      case Algorithm::baseline: {
        auto phase = Clock::now();
        std::vector<EigenDecomposition> messages(node_streams.size());
        detail::parallel_for(node_streams.size(), workers,
                             [&](std::size_t i) { messages[i] = baseline_node_message(node_streams[i]); });
        r.times.local_ms = elapsed_ms(phase);
        phase = Clock::now();
        r.basis = baseline_aggregate(messages, k);
        r.times.aggregate_ms = elapsed_ms(phase);
        r.times.total_ms = elapsed_ms(start);
        r.data_digest = node_digest();
        r.local_batch_rows = config.batch_size * config.horizon;
        break;
      }
      case Algorithm::full: {
        r.basis = full_pca(data.pooled, k);
        r.times.aggregate_ms = elapsed_ms(start);
        r.times.total_ms = r.times.aggregate_ms;
        r.data_digest = row_digest(data.pooled);
        r.local_batch_rows = data.pooled.rows();
        break;
      }
    }
    r.final_error = projection_distance(r.basis, reference);
    report.results.push_back(std::move(r));
  }
  return report;
}

RunReport run_stream(const RunConfig& config) { return run_on(config, materialize(config)); }

std::vector<ScalingRow> scaling_experiment(const RunConfig& base, std::span<const std::size_t> factors,
                                           std::size_t replications, ScaleAxis axis) {
  if (!std::holds_alternative<SyntheticSource>(base.source)) {
    throw ArgumentError("scaling_experiment: needs a synthetic source with known ground truth");
  }
  if (replications < 10) throw ArgumentError("scaling_experiment: needs at least 10 replications");
  if (factors.empty()) throw ArgumentError("scaling_experiment: no factors");

  std::vector<ScalingRow> rows;
  for (std::size_t factor : factors) {
    if (factor == 0) throw ArgumentError("scaling_experiment: factors must be positive");
    RunConfig config = base;
    config.algorithms = {Algorithm::odpca};
    if (axis == ScaleAxis::horizon) {
      config.horizon *= factor;
    } else {
      config.batch_size *= factor;
    }
    ScalingRow row;
    row.factor = factor;
    row.total_samples = config.total_samples();
    for (std::size_t rep = 0; rep < replications; ++rep) {
      config.seed = derive_seed(base.seed, rep);
      row.errors.push_back(run_stream(config).results.front().final_error);
    }
    double sum = 0.0;
    for (double e : row.errors) sum += e;
    row.mean_error = sum / static_cast<double>(replications);
    double ss = 0.0;
    for (double e : row.errors) ss += (e - row.mean_error) * (e - row.mean_error);
    row.std_error = replications > 1 ? std::sqrt(ss / static_cast<double>(replications - 1)) : 0.0;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<TimingRow> timing_probe(const RunConfig& config, std::size_t repetitions) {
  repetitions = std::max<std::size_t>(repetitions, 3);
  const StreamData data = materialize(config);

  std::vector<std::vector<AlgorithmResult>> runs;
  for (std::size_t rep = 0; rep < repetitions; ++rep) runs.push_back(run_on(config, data).results);

  std::vector<TimingRow> rows;
  for (std::size_t a = 0; a < config.algorithms.size(); ++a) {
    TimingRow row;
    row.algorithm = config.algorithms[a];
    row.repetitions = repetitions;
    std::vector<double> local, aggregate, total;
    for (const auto& run : runs) {
      local.push_back(run[a].times.local_ms);
      aggregate.push_back(run[a].times.aggregate_ms);
      total.push_back(run[a].times.total_ms);
      row.local_batch_rows = run[a].local_batch_rows;
      row.final_error = run[a].final_error;
    }
    row.median = {median(local), median(aggregate), median(total)};
    const auto [lo, hi] = std::minmax_element(total.begin(), total.end());
    row.spread_ms = *hi - *lo;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace odpca
