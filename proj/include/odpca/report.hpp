#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "odpca/harness.hpp"

namespace odpca {

inline constexpr std::string_view kReportVersionLine = "# odpca-report v1";
inline constexpr std::string_view kReportHeader = "algorithm,round,error,comm_entries,wall_ms";

/// One line of the report CSV. round == 0 marks an algorithm's summary row.
struct ReportRow {
  std::string algorithm;
  std::size_t round = 0;
  double error = 0.0;
  std::uint64_t comm_entries = 0;
  double wall_ms = 0.0;
};

/// Per-round odpca rows followed by one summary row per algorithm.
std::vector<ReportRow> report_rows(const RunReport& report);

/// Row-wise aggregate of reports that share a config: error is the mean over
/// reports, wall_ms the median.
std::vector<ReportRow> summarize_rows(std::span<const RunReport> reports);

/// Version comment line, header, then rows. Errors use 17 significant digits;
/// summary rows print "final" in the round column.
void write_report_csv(std::ostream& out, std::span<const ReportRow> rows);

}  // namespace odpca
