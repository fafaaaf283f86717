#include "odpca/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>

#include "odpca/errors.hpp"
#include "odpca/harness.hpp"
#include "odpca/random.hpp"
#include "odpca/report.hpp"
#include "odpca/tasks.hpp"

namespace odpca {

namespace {

using nlohmann::ordered_json;

// Argument problems detected after CLI11 parsing; reported with exit code 1.
class UsageError : public ArgumentError {
 public:
  using ArgumentError::ArgumentError;
};

struct Options {
  std::size_t d = 0;
  std::size_t K = 5;
  std::size_t Z = 0;
  std::size_t m = 4;
  std::size_t n = 100;
  std::size_t T = 5;
  std::uint64_t seed = 1;
  std::size_t reps = 0;
  std::string dataset;
  std::string format = "csv";
  std::string center = "none";
  std::string out;
  std::string json;
  std::string algorithms;
  bool header = false;
  std::uint64_t shuffle = 0;
  std::size_t limit_rows = 0;
  std::vector<double> spikes;
  double bulk = 1.0;
  std::uint64_t model_seed = 0;
  std::string sampler = "gaussian";
  std::size_t workers = 0;
  double mem_cap_gb = 8.0;

  // subcommand specific
  std::vector<std::size_t> factors = {1, 4};
  std::string scale_axis = "T";
  std::size_t k = 0;
  double separation = 6.0;
  std::vector<std::size_t> z_sweep = {0, 1, 2, 4};

  // set by CLI11 when the flag was given
  CLI::Option* shuffle_opt = nullptr;
  CLI::Option* limit_opt = nullptr;
};

void add_common(CLI::App& sub, Options& o) {
  sub.add_option("--d", o.d, "Ambient dimension (synthetic data; libsvm width)");
  sub.add_option("--K", o.K, "Target rank K")->check(CLI::PositiveNumber);
  sub.add_option("--Z", o.Z, "Projection surplus: nodes send K+Z eigenvectors");
  sub.add_option("--m", o.m, "Number of nodes")->check(CLI::PositiveNumber);
  sub.add_option("--n", o.n, "Samples per node per round")->check(CLI::PositiveNumber);
  sub.add_option("--T", o.T, "Number of rounds")->check(CLI::PositiveNumber);
  sub.add_option("--seed", o.seed, "Sampling seed");
  sub.add_option("--reps", o.reps, "Replications");
  sub.add_option("--dataset", o.dataset, "Dataset path (otherwise synthetic spiked model)");
  sub.add_option("--format", o.format, "Dataset format")->check(CLI::IsMember({"csv", "libsvm"}));
  sub.add_option("--center", o.center, "Centering")->check(CLI::IsMember({"none", "global", "per_batch"}));
  sub.add_option("--out", o.out, "Report CSV path (stdout when omitted)");
  sub.add_option("--json", o.json, "JSON summary path (defaults to --out with a .json extension)");
  sub.add_option("--algorithms", o.algorithms, "Comma-separated subset of odpca,dpca,full,baseline");
  sub.add_flag("--header", o.header, "CSV dataset has a header row");
  o.shuffle_opt = sub.add_option("--shuffle", o.shuffle, "Shuffle dataset rows with this seed");
  o.limit_opt = sub.add_option("--limit-rows", o.limit_rows, "Read at most this many dataset rows");
  sub.add_option("--spikes", o.spikes, "Spike eigenvalues (descending, K values)")->delimiter(',');
  sub.add_option("--bulk", o.bulk, "Bulk eigenvalue");
  sub.add_option("--model-seed", o.model_seed, "Seed of the random eigenbasis");
  sub.add_option("--sampler", o.sampler, "Synthetic sampler")->check(CLI::IsMember({"gaussian", "rademacher"}));
  sub.add_option("--workers", o.workers, "Worker threads for node computations (0 = auto)");
  sub.add_option("--mem-cap-gb", o.mem_cap_gb, "Refuse dense datasets above this size");
}

RunConfig make_config(const Options& o, std::size_t default_d, const char* command) {
  RunConfig config;
  config.nodes = o.m;
  config.batch_size = o.n;
  config.horizon = o.T;
  config.rank = o.K;
  config.surplus = o.Z;
  config.seed = o.seed;
  config.workers = o.workers;
  if (!o.algorithms.empty()) config.algorithms = parse_algorithms(o.algorithms);

  if (!o.dataset.empty()) {
    FileSource file;
    file.spec.path = o.dataset;
    file.spec.format = parse_format(o.format);
    file.spec.center = parse_centering(o.center);
    file.spec.has_header = o.header;
    file.spec.ambient_dim = file.spec.format == DataFormat::libsvm ? o.d : 0;
    file.spec.memory_cap_bytes = o.mem_cap_gb * 1e9;
    if (o.shuffle_opt->count() > 0) file.spec.shuffle_seed = o.shuffle;
    if (o.limit_opt->count() > 0) file.spec.limit_rows = o.limit_rows;
    config.source = file;
    config.ambient_dim = o.d;
  } else {
    const std::size_t d = o.d != 0 ? o.d : default_d;
    if (d == 0) {
      throw UsageError(std::string(command) + ": pass --dataset, or --d for a synthetic spiked model");
    }
    SyntheticSource synth;
    synth.spikes = o.spikes;
    synth.bulk = o.bulk;
    synth.model_seed = o.model_seed;
    synth.sampler = o.sampler == "gaussian" ? Sampler::gaussian : Sampler::rademacher;
    config.source = synth;
    config.ambient_dim = d;
  }
  config.validate();
  return config;
}

ordered_json config_json(const RunConfig& config, std::size_t ambient_dim) {
  ordered_json j;
  j["d"] = ambient_dim;
  j["K"] = config.rank;
  j["Z"] = config.surplus;
  j["m"] = config.nodes;
  j["n"] = config.batch_size;
  j["T"] = config.horizon;
  j["N"] = config.total_samples();
  j["seed"] = config.seed;
  std::vector<std::string> names;
  for (Algorithm a : config.algorithms) names.emplace_back(to_string(a));
  j["algorithms"] = names;
  if (const auto* synth = std::get_if<SyntheticSource>(&config.source)) {
    ordered_json s;
    s["type"] = "synthetic";
    s["spikes"] = synth->spikes.empty() ? default_spikes(config.rank) : synth->spikes;
    s["bulk"] = synth->bulk;
    s["model_seed"] = synth->model_seed;
    s["sampler"] = synth->sampler == Sampler::gaussian ? "gaussian" : "rademacher";
    if (synth->planted_clusters > 0) {
      s["planted_clusters"] = synth->planted_clusters;
      s["separation"] = synth->separation;
    }
    j["source"] = s;
  } else {
    const auto& spec = std::get<FileSource>(config.source).spec;
    ordered_json s;
    s["type"] = "dataset";
    s["path"] = spec.path;
    s["format"] = to_string(spec.format);
    s["center"] = to_string(spec.center);
    s["shuffle_seed"] = spec.shuffle_seed ? ordered_json(*spec.shuffle_seed) : ordered_json(nullptr);
    s["limit_rows"] = spec.limit_rows ? ordered_json(*spec.limit_rows) : ordered_json(nullptr);
    j["source"] = s;
  }
  j["dpca_comparator"] = "all N samples; each node holds its n*T rows";
  return j;
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 == 1 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

std::string json_path_for(const Options& o) {
  if (!o.json.empty()) return o.json;
  if (o.out.empty()) return {};
  const auto dot = o.out.rfind('.');
  const auto slash = o.out.rfind('/');
  if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) return o.out.substr(0, dot) + ".json";
  return o.out + ".json";
}

void emit(const Options& o, std::ostream& out, const std::string& csv, const ordered_json& summary) {
  if (o.out.empty()) {
    out << csv;
  } else {
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw IngestionError("cannot write report '" + o.out + "'");
    f << csv;
  }
  const std::string json_path = json_path_for(o);
  if (!json_path.empty()) {
    std::ofstream f(json_path, std::ios::binary);
    if (!f) throw IngestionError("cannot write summary '" + json_path + "'");
    f << summary.dump(2) << '\n';
  }
}

ordered_json timing_json(const PhaseTimes& t) {
  ordered_json j;
  j["local"] = t.local_ms;
  j["aggregate"] = t.aggregate_ms;
  j["total"] = t.total_ms;
  return j;
}

void ensure_algorithm(RunConfig& config, Algorithm a) {
  if (!config.wants(a)) config.algorithms.push_back(a);
}

// --------------------------------------------------------------- synth

int run_synth(const Options& o, std::ostream& out) {
  RunConfig config = make_config(o, 50, "synth");
  const std::size_t reps = o.reps == 0 ? 20 : o.reps;

  std::vector<RunReport> reports;
  for (std::size_t r = 0; r < reps; ++r) {
    RunConfig c = config;
    c.seed = derive_seed(config.seed, r);
    reports.push_back(run_stream(c));
  }
  std::ostringstream csv;
  write_report_csv(csv, summarize_rows(reports));

  ordered_json summary;
  summary["schema"] = "odpca-summary v1";
  summary["command"] = "synth";
  summary["config"] = config_json(config, reports.front().ambient_dim);
  summary["replications"] = reps;
  summary["error_reference"] = to_string(reports.front().reference);
  ordered_json finals;
  ordered_json timings;
  for (std::size_t a = 0; a < config.algorithms.size(); ++a) {
    std::vector<double> errors;
    std::vector<double> local, aggregate, total;
    for (const auto& rep : reports) {
      errors.push_back(rep.results[a].final_error);
      local.push_back(rep.results[a].times.local_ms);
      aggregate.push_back(rep.results[a].times.aggregate_ms);
      total.push_back(rep.results[a].times.total_ms);
    }
    double mean = 0.0;
    for (double e : errors) mean += e;
    mean /= static_cast<double>(errors.size());
    const std::string name(to_string(config.algorithms[a]));
    finals[name] = {{"mean", mean},
                    {"median", median_of(errors)},
                    {"comm_entries", reports.front().results[a].comm_entries}};
    timings[name] = timing_json({median_of(local), median_of(aggregate), median_of(total)});
  }
  summary["final_errors"] = finals;

  if (std::holds_alternative<SyntheticSource>(config.source) && reps >= 10) {
    const ScaleAxis axis = o.scale_axis == "n" ? ScaleAxis::batch_size : ScaleAxis::horizon;
    ordered_json table = ordered_json::array();
    for (const auto& row : scaling_experiment(config, o.factors, reps, axis)) {
      table.push_back({{"factor", row.factor},
                       {"total_samples", row.total_samples},
                       {"mean_error", row.mean_error},
                       {"std_error", row.std_error}});
    }
    summary["scaling"] = {{"axis", o.scale_axis}, {"rows", table}};
  }
  summary["timing_medians_ms"] = timings;
  emit(o, out, csv.str(), summary);
  return kExitOk;
}

// ------------------------------------------------------------- lowrank

int run_lowrank(const Options& o, std::ostream& out) {
  RunConfig config = make_config(o, 0, "lowrank");
  if (o.algorithms.empty()) config.algorithms = {Algorithm::odpca, Algorithm::dpca, Algorithm::full};
  ensure_algorithm(config, Algorithm::baseline);
  const std::size_t reps = o.reps == 0 ? 5 : o.reps;

  const std::size_t count = config.algorithms.size();
  std::vector<std::vector<double>> relative(count), absolute(count), subspace(count), wall(count);
  std::size_t ambient = 0;
  std::string reference;
  for (std::size_t r = 0; r < reps; ++r) {
    RunConfig c = config;
    c.seed = derive_seed(config.seed, r);
    const StreamData data = materialize(c);
    const RunReport report = run_on(c, data);
    ambient = report.ambient_dim;
    reference = to_string(report.reference);
    const double base = lowrank_error(data.pooled, report.find(Algorithm::baseline)->basis);
    for (std::size_t a = 0; a < count; ++a) {
      const auto& res = report.results[a];
      const double err = lowrank_error(data.pooled, res.basis);
      absolute[a].push_back(err);
      relative[a].push_back(relative_error(err, base));
      subspace[a].push_back(res.final_error);
      wall[a].push_back(res.times.total_ms);
    }
  }

  std::vector<ReportRow> rows;
  ordered_json per_algorithm;
  for (std::size_t a = 0; a < count; ++a) {
    const std::string name(to_string(config.algorithms[a]));
    rows.push_back({name, 0, median_of(relative[a]), comm_entries(config.algorithms[a], config, ambient),
                    median_of(wall[a])});
    per_algorithm[name] = {{"relative_lowrank_error", median_of(relative[a])},
                           {"lowrank_error", median_of(absolute[a])},
                           {"subspace_error", median_of(subspace[a])}};
  }
  std::ostringstream csv;
  write_report_csv(csv, rows);

  ordered_json summary;
  summary["schema"] = "odpca-summary v1";
  summary["command"] = "lowrank";
  summary["config"] = config_json(config, ambient);
  summary["replications"] = reps;
  summary["error_column"] = "median relative rank-K approximation error vs the all-eigenvector baseline";
  summary["subspace_error_reference"] = reference;
  summary["results"] = per_algorithm;
  emit(o, out, csv.str(), summary);
  return kExitOk;
}

// -------------------------------------------------------------- kmeans

int run_kmeans(const Options& o, std::ostream& out) {
  RunConfig config = make_config(o, 0, "kmeans");
  if (o.algorithms.empty()) config.algorithms = {Algorithm::odpca, Algorithm::dpca, Algorithm::full};
  ensure_algorithm(config, Algorithm::baseline);
  const std::size_t k = o.k == 0 ? config.rank : o.k;
  if (auto* synth = std::get_if<SyntheticSource>(&config.source)) {
    if (k > 2 * config.rank) throw UsageError("kmeans: synthetic planted clusters need k <= 2K");
    synth->planted_clusters = k;
    synth->separation = o.separation;
  }
  const std::size_t reps = o.reps == 0 ? 5 : o.reps;
  std::vector<std::uint64_t> seeds;
  for (std::size_t i = 0; i < reps; ++i) seeds.push_back(derive_seed(config.seed, 1000 + i));

  const StreamData data = materialize(config);
  if (data.pooled.rows() < k) throw UsageError("kmeans: fewer samples than clusters");
  const RunReport report = run_on(config, data);
  const OrthonormalBasis& baseline = report.find(Algorithm::baseline)->basis;

  // Lloyd on the unprojected data, the reference used for reporting only.
  std::vector<double> full_space_costs;
  for (std::uint64_t s : seeds) full_space_costs.push_back(kmeans_lloyd(data.pooled, k, s).cost);
  const double full_space = median_of(full_space_costs);

  std::vector<ReportRow> rows;
  ordered_json per_algorithm;
  for (const auto& res : report.results) {
    const std::string name(to_string(res.algorithm));
    const double ratio = clustering_cost_ratio(res.basis, baseline, data.pooled, k, seeds);
    std::vector<double> lifted;
    const Matrix projected = project_data(data.pooled, res.basis);
    for (std::uint64_t s : seeds) {
      const ClusteringResult c = kmeans_lloyd(projected, k, s);
      lifted.push_back(lifted_cost(data.pooled, res.basis, c.centers, c.assignments));
    }
    rows.push_back({name, 0, ratio, res.comm_entries, res.times.total_ms});
    per_algorithm[name] = {{"cost_ratio_vs_baseline", ratio},
                           {"lifted_cost", median_of(lifted)},
                           {"cost_ratio_vs_full_space_lloyd", median_of(lifted) / full_space},
                           {"subspace_error", res.final_error}};
  }
  std::ostringstream csv;
  write_report_csv(csv, rows);

  ordered_json summary;
  summary["schema"] = "odpca-summary v1";
  summary["command"] = "kmeans";
  summary["config"] = config_json(config, report.ambient_dim);
  summary["k"] = k;
  summary["clustering_seeds"] = reps;
  summary["error_column"] = "median lifted k-means cost ratio vs the all-eigenvector baseline";
  summary["full_space_lloyd_cost"] = full_space;
  summary["results"] = per_algorithm;
  emit(o, out, csv.str(), summary);
  return kExitOk;
}

// --------------------------------------------------------------- bench

int run_bench(const Options& o, std::ostream& out) {
  RunConfig config = make_config(o, 50, "bench");
  if (o.algorithms.empty()) config.algorithms = {Algorithm::odpca, Algorithm::dpca};
  const std::size_t reps = std::max<std::size_t>(o.reps == 0 ? 3 : o.reps, 3);

  std::ostringstream csv;
  csv << "# odpca-bench v1\n"
      << "algorithm,Z,projection_dim,local_batch_rows,error,local_ms,aggregate_ms,total_ms,spread_ms\n";
  ordered_json table = ordered_json::array();
  std::size_t ambient = config.ambient_dim;
  for (std::size_t z : o.z_sweep) {
    RunConfig c = config;
    c.surplus = z;
    c.validate();
    for (const auto& row : timing_probe(c, reps)) {
      char buf[256];
      std::snprintf(buf, sizeof buf, "%s,%zu,%zu,%zu,%.17g,%.3f,%.3f,%.3f,%.3f\n",
                    std::string(to_string(row.algorithm)).c_str(), z, c.projection_rank(), row.local_batch_rows,
                    row.final_error, row.median.local_ms, row.median.aggregate_ms, row.median.total_ms,
                    row.spread_ms);
      csv << buf;
      table.push_back({{"algorithm", to_string(row.algorithm)},
                       {"Z", z},
                       {"projection_dim", c.projection_rank()},
                       {"local_batch_rows", row.local_batch_rows},
                       {"error", row.final_error},
                       {"median_ms", timing_json(row.median)},
                       {"spread_ms", row.spread_ms},
                       {"repetitions", row.repetitions}});
    }
  }
  if (ambient == 0) ambient = materialize(config).pooled.cols();

  ordered_json summary;
  summary["schema"] = "odpca-summary v1";
  summary["command"] = "bench";
  summary["config"] = config_json(config, ambient);
  summary["timing_note"] = "median of repeated runs on one dataset; wall times depend on the host";
  summary["rows"] = table;
  emit(o, out, csv.str(), summary);
  return kExitOk;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Online distributed PCA benchmarks", "odpca"};
  app.require_subcommand(1);
  Options o;

  auto* synth = app.add_subcommand("synth", "Synthetic runs plus a sample-size scaling table");
  add_common(*synth, o);
  synth->add_option("--factors", o.factors, "Sample multipliers for the scaling table")->delimiter(',');
  synth->add_option("--scale-axis", o.scale_axis, "Scale T or n")->check(CLI::IsMember({"T", "n"}));

  auto* lowrank = app.add_subcommand("lowrank", "Relative rank-K approximation error");
  add_common(*lowrank, o);

  auto* kmeans = app.add_subcommand("kmeans", "Relative k-means cost on projected data");
  add_common(*kmeans, o);
  kmeans->add_option("--k", o.k, "Number of clusters (defaults to K)");
  kmeans->add_option("--separation", o.separation, "Planted cluster separation (synthetic data)");

  auto* bench = app.add_subcommand("bench", "Phase timings across a sweep of Z");
  add_common(*bench, o);
  bench->add_option("--z-sweep", o.z_sweep, "Values of Z")->delimiter(',');

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (synth->parsed()) return run_synth(o, out);
    if (lowrank->parsed()) return run_lowrank(o, out);
    if (kmeans->parsed()) return run_kmeans(o, out);
    return run_bench(o, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace odpca
