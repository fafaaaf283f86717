#include "odpca/report.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>

#include "odpca/errors.hpp"

namespace odpca {

std::vector<ReportRow> report_rows(const RunReport& report) {
  std::vector<ReportRow> rows;
  for (const auto& rec : report.rounds) {
    rows.push_back({"odpca", rec.round, rec.error, rec.comm_entries, rec.local_ms + rec.aggregate_ms});
  }
  for (const auto& r : report.results) {
    rows.push_back({std::string(to_string(r.algorithm)), 0, r.final_error, r.comm_entries, r.times.total_ms});
  }
  return rows;
}

std::vector<ReportRow> summarize_rows(std::span<const RunReport> reports) {
  if (reports.empty()) return {};
  std::vector<std::vector<ReportRow>> all;
  for (const auto& r : reports) all.push_back(report_rows(r));
  std::vector<ReportRow> out = all.front();
  for (std::size_t i = 0; i < out.size(); ++i) {
    double sum = 0.0;
    std::vector<double> walls;
    for (const auto& rows : all) {
      if (rows.size() != out.size() || rows[i].algorithm != out[i].algorithm || rows[i].round != out[i].round) {
        throw ArgumentError("summarize_rows: reports do not share a layout");
      }
      sum += rows[i].error;
      walls.push_back(rows[i].wall_ms);
    }
    out[i].error = sum / static_cast<double>(all.size());
    std::sort(walls.begin(), walls.end());
    const std::size_t mid = walls.size() / 2;
    out[i].wall_ms = walls.size() % 2 == 1 ? walls[mid] : 0.5 * (walls[mid - 1] + walls[mid]);
  }
  return out;
}

void write_report_csv(std::ostream& out, std::span<const ReportRow> rows) {
  out << kReportVersionLine << '\n' << kReportHeader << '\n';
  char error[32];
  char wall[32];
  for (const auto& r : rows) {
    std::snprintf(error, sizeof error, "%.17g", r.error);
    std::snprintf(wall, sizeof wall, "%.3f", r.wall_ms);
    out << r.algorithm << ',';
    if (r.round == 0) {
      out << "final";
    } else {
      out << r.round;
    }
    out << ',' << error << ',' << r.comm_entries << ',' << wall << '\n';
  }
}

}  // namespace odpca
