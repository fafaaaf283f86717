#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "odpca/errors.hpp"
#include "odpca/harness.hpp"
#include "odpca/report.hpp"
#include "support.hpp"

using namespace odpca;
using namespace odpca::testing;

namespace {

RunConfig small_config() {
  RunConfig c;
  c.ambient_dim = 20;
  c.rank = 3;
  c.nodes = 3;
  c.batch_size = 30;
  c.horizon = 4;
  c.seed = 5;
  return c;
}

}  // namespace

TEST_SUITE("run config") {
  TEST_CASE("validation") {
    RunConfig c = small_config();
    CHECK_NOTHROW(c.validate());
    CHECK(c.total_samples() == 360);
    c.surplus = 18;
    CHECK_THROWS_AS(c.validate(), ArgumentError);
    c = small_config();
    c.nodes = 0;
    CHECK_THROWS_AS(c.validate(), ArgumentError);
    c = small_config();
    c.algorithms.clear();
    CHECK_THROWS_AS(c.validate(), ArgumentError);
  }

  TEST_CASE("algorithm names") {
    CHECK(parse_algorithms("odpca,full") == std::vector<Algorithm>{Algorithm::odpca, Algorithm::full});
    CHECK(to_string(Algorithm::baseline) == "baseline");
    CHECK_THROWS_AS(parse_algorithm("svd"), ArgumentError);
  }
}

TEST_SUITE("run_stream") {
  TEST_CASE("m=1, T=1 reduction") {
    RunConfig c = small_config();
    c.nodes = 1;
    c.horizon = 1;
    c.batch_size = 100;
    const auto report = run_stream(c);
    const double odpca = report.find(Algorithm::odpca)->final_error;
    CHECK(std::abs(odpca - report.find(Algorithm::full)->final_error) < 1e-8);
    CHECK(std::abs(odpca - report.find(Algorithm::dpca)->final_error) < 1e-8);
    CHECK(std::abs(odpca - report.find(Algorithm::baseline)->final_error) < 1e-8);
  }

  TEST_CASE("communication closed forms") {
    RunConfig c = small_config();
    c.surplus = 2;
    const auto report = run_stream(c);
    const std::uint64_t d = 20, m = 3, T = 4, p = 5;
    CHECK(report.find(Algorithm::odpca)->comm_entries == T * m * d * p);
    CHECK(report.find(Algorithm::dpca)->comm_entries == m * d * p);
    CHECK(report.find(Algorithm::baseline)->comm_entries == m * d * (d + 1));
    CHECK(report.find(Algorithm::full)->comm_entries == 360 * d);
    for (const auto& rec : report.rounds) CHECK(rec.comm_entries == m * d * p);
  }

  TEST_CASE("every algorithm consumes the same rows") {
    const auto report = run_stream(small_config());
    const std::uint64_t digest = report.results.front().data_digest;
    for (const auto& r : report.results) CHECK(r.data_digest == digest);
    CHECK(report.find(Algorithm::odpca)->local_batch_rows == 30);
    CHECK(report.find(Algorithm::dpca)->local_batch_rows == 120);
  }

  TEST_CASE("trace trajectory and error bounds") {
    const auto report = run_stream(small_config());
    REQUIRE(report.rounds.size() == 4);
    for (const auto& rec : report.rounds) {
      CHECK(std::abs(rec.trace - rec.round * 3.0 / 4.0) < 1e-8);
      CHECK(rec.error >= 0.0);
      CHECK(rec.error <= std::sqrt(6.0));
    }
    CHECK(report.reference == ErrorReference::ground_truth);
  }

  TEST_CASE("deterministic apart from wall times") {
    const auto a = run_stream(small_config());
    const auto b = run_stream(small_config());
    REQUIRE(a.results.size() == b.results.size());
    for (std::size_t i = 0; i < a.results.size(); ++i) {
      CHECK(a.results[i].final_error == b.results[i].final_error);
      CHECK(a.results[i].basis.matrix() == b.results[i].basis.matrix());
    }
    for (std::size_t t = 0; t < a.rounds.size(); ++t) CHECK(a.rounds[t].error == b.rounds[t].error);
  }

  TEST_CASE("worker count does not change results") {
    RunConfig c = small_config();
    c.workers = 1;
    const auto serial = run_stream(c);
    c.workers = 3;
    const auto threaded = run_stream(c);
    for (std::size_t i = 0; i < serial.results.size(); ++i) {
      CHECK(serial.results[i].basis.matrix() == threaded.results[i].basis.matrix());
    }
  }

  TEST_CASE("longer horizon extends the same stream") {
    RunConfig c = small_config();
    const auto short_data = materialize(c);
    c.horizon = 6;
    const auto long_data = materialize(c);
    CHECK(long_data.pooled.row_block(0, 360) == short_data.pooled);
  }

  TEST_CASE("file source uses pooled PCA as the reference") {
    const auto path = std::filesystem::temp_directory_path() / "odpca_harness.csv";
    {
      SeededStream rng(3);
      std::ofstream out(path);
      for (int i = 0; i < 80; ++i) {
        const double a = 3 * rng.next_gaussian();
        out << a << ',' << a + 0.1 * rng.next_gaussian() << ',' << rng.next_gaussian() << ','
            << 0.5 * rng.next_gaussian() << '\n';
      }
    }
    RunConfig c;
    c.ambient_dim = 0;
    c.rank = 1;
    c.nodes = 2;
    c.batch_size = 10;
    c.horizon = 3;
    FileSource f;
    f.spec.path = path.string();
    f.spec.center = Centering::per_batch;
    c.source = f;
    const auto data = materialize(c);
    CHECK(data.pooled.rows() == 60);
    for (std::size_t j = 0; j < 4; ++j) {
      double mean = 0.0;
      for (std::size_t i = 0; i < 10; ++i) mean += data.grid.batch(1, 2)(i, j);
      CHECK(std::abs(mean) < 1e-10);
    }
    const auto report = run_on(c, data);
    CHECK(report.reference == ErrorReference::pooled_pca);
    CHECK(report.find(Algorithm::full)->final_error < 1e-8);
    CHECK(report.ambient_dim == 4);

    c.horizon = 5;  // 100 rows needed, 80 available
    CHECK_THROWS_AS(run_stream(c), IngestionError);
    c.horizon = 3;
    c.ambient_dim = 5;
    CHECK_THROWS_AS(run_stream(c), IngestionError);
    std::filesystem::remove(path);
  }
}

TEST_SUITE("scaling and timing") {
  TEST_CASE("1x against 1x on disjoint seeds") {
    RunConfig c = small_config();
    const std::size_t one[] = {1};
    const auto a = scaling_experiment(c, one, 10);
    c.seed = 999;
    const auto b = scaling_experiment(c, one, 10);
    const double ratio = a.front().mean_error / b.front().mean_error;
    CHECK((ratio >= 0.8 && ratio <= 1.25));
    for (const auto& row : {a.front(), b.front()}) {
      CHECK(row.errors.size() == 10);
      for (double e : row.errors) CHECK((e > 0.0 && std::isfinite(e)));
      CHECK(row.std_error > 0.0);
    }
  }

  TEST_CASE("batch-size axis and preconditions") {
    RunConfig c = small_config();
    const std::size_t factors[] = {1, 2};
    const auto rows = scaling_experiment(c, factors, 10, ScaleAxis::batch_size);
    CHECK(rows[1].total_samples == 2 * rows[0].total_samples);
    CHECK_THROWS_AS(scaling_experiment(c, factors, 9), ArgumentError);
    FileSource f;
    f.spec.path = "unused.csv";
    c.source = f;
    CHECK_THROWS_AS(scaling_experiment(c, factors, 10), ArgumentError);
  }

  TEST_CASE("timing probe: phases account for the total") {
    RunConfig c = small_config();
    c.algorithms = {Algorithm::odpca, Algorithm::dpca};
    const auto rows = timing_probe(c, 3);
    REQUIRE(rows.size() == 2);
    for (const auto& row : rows) {
      CHECK(row.repetitions == 3);
      CHECK(row.median.local_ms > 0.0);
      CHECK(row.median.aggregate_ms > 0.0);
      CHECK(row.spread_ms >= 0.0);
    }
    const auto report = run_stream(c);
    for (const auto& r : report.results) {
      const double phases = r.times.local_ms + r.times.aggregate_ms;
      CHECK(phases <= r.times.total_ms * 1.0 + 1e-9);
      CHECK(phases >= 0.9 * r.times.total_ms);
    }
  }
}

TEST_SUITE("report csv") {
  TEST_CASE("schema and row layout") {
    const auto report = run_stream(small_config());
    std::ostringstream out;
    write_report_csv(out, report_rows(report));
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == std::string(kReportVersionLine));
    std::getline(in, line);
    CHECK(line == "algorithm,round,error,comm_entries,wall_ms");
    std::size_t rows = 0, finals = 0;
    while (std::getline(in, line)) {
      ++rows;
      if (line.find(",final,") != std::string::npos) ++finals;
    }
    CHECK(rows == 4 + 4);
    CHECK(finals == 4);
  }

  TEST_CASE("summaries average errors") {
    RunConfig c = small_config();
    std::vector<RunReport> reports{run_stream(c)};
    c.seed = 6;
    reports.push_back(run_stream(c));
    const auto rows = summarize_rows(reports);
    const auto a = report_rows(reports[0]);
    const auto b = report_rows(reports[1]);
    for (std::size_t i = 0; i < rows.size(); ++i) CHECK(rows[i].error == doctest::Approx(0.5 * (a[i].error + b[i].error)));
  }
}
