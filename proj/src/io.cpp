#include "odpca/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <tuple>

#include "odpca/errors.hpp"
#include "odpca/random.hpp"

namespace odpca {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view token, std::size_t line) {
  token = trim(token);
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size() || token.empty()) {
    throw ParseError("cannot parse number '" + std::string(token) + "'", line);
  }
  if (!std::isfinite(value)) throw ParseError("non-finite value '" + std::string(token) + "'", line);
  return value;
}

void check_memory(std::size_t rows, std::size_t cols, double cap) {
  const double bytes = static_cast<double>(rows) * static_cast<double>(cols) * sizeof(double);
  if (bytes > cap) {
    throw IngestionError("dense matrix of " + std::to_string(rows) + "x" + std::to_string(cols) +
                         " exceeds the memory cap of " + std::to_string(cap) + " bytes");
  }
}

}  // namespace

DataFormat parse_format(std::string_view name) {
  if (name == "csv") return DataFormat::csv;
  if (name == "libsvm") return DataFormat::libsvm;
  throw ArgumentError("unknown dataset format '" + std::string(name) + "' (expected csv or libsvm)");
}

Centering parse_centering(std::string_view name) {
  if (name == "none") return Centering::none;
  if (name == "global") return Centering::global;
  if (name == "per_batch" || name == "per-batch") return Centering::per_batch;
  throw ArgumentError("unknown centering '" + std::string(name) + "' (expected none, global or per_batch)");
}

std::string_view to_string(DataFormat format) { return format == DataFormat::csv ? "csv" : "libsvm"; }

std::string_view to_string(Centering centering) {
  switch (centering) {
    case Centering::none: return "none";
    case Centering::global: return "global";
    case Centering::per_batch: return "per_batch";
  }
  return "none";
}

Matrix parse_csv(std::istream& in, bool has_header, double memory_cap_bytes) {
  std::vector<double> entries;
  std::size_t cols = 0;
  std::size_t rows = 0;
  std::size_t line_no = 0;
  std::string line;
  bool header_pending = has_header;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view view = trim(line);
    if (view.empty() || view.front() == '#') continue;
    if (header_pending) {
      header_pending = false;
      continue;
    }
    std::size_t fields = 0;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = view.find(',', start);
      const std::string_view token =
          view.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
      entries.push_back(parse_double(token, line_no));
      ++fields;
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (rows == 0) {
      cols = fields;
    } else if (fields != cols) {
      throw ParseError("expected " + std::to_string(cols) + " fields, found " + std::to_string(fields), line_no);
    }
    ++rows;
    check_memory(rows, cols, memory_cap_bytes);
  }
  if (rows == 0) throw IngestionError("CSV input contains no data rows");
  return Matrix(rows, cols, std::move(entries));
}

Matrix parse_libsvm(std::istream& in, std::size_t ambient_dim, double memory_cap_bytes) {
  // (row, column, value) triplets; densified once the shape is known.
  std::vector<std::tuple<std::size_t, std::size_t, double>> triplets;
  std::size_t rows = 0;
  std::size_t max_index = 0;
  std::size_t line_no = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = trim(line);
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = trim(view.substr(0, hash));
    if (view.empty()) continue;

    std::istringstream tokens{std::string(view)};
    std::string token;
    tokens >> token;  // label, discarded
    if (token.find(':') != std::string::npos) throw ParseError("missing label", line_no);
    while (tokens >> token) {
      const auto colon = token.find(':');
      if (colon == std::string::npos) throw ParseError("expected idx:val, found '" + token + "'", line_no);
      std::size_t index = 0;
      const auto [ptr, ec] = std::from_chars(token.data(), token.data() + colon, index);
      if (ec != std::errc() || ptr != token.data() + colon) {
        throw ParseError("bad feature index in '" + token + "'", line_no);
      }
      if (index == 0) throw ParseError("feature indices are 1-based", line_no);
      if (ambient_dim != 0 && index > ambient_dim) {
        throw ParseError("feature index " + std::to_string(index) + " exceeds dimension " + std::to_string(ambient_dim),
                         line_no);
      }
      const double value = parse_double(std::string_view(token).substr(colon + 1), line_no);
      max_index = std::max(max_index, index);
      triplets.emplace_back(rows, index - 1, value);
    }
    ++rows;
  }
  if (rows == 0) throw IngestionError("libsvm input contains no data rows");
  const std::size_t d = ambient_dim != 0 ? ambient_dim : max_index;
  if (d == 0) throw IngestionError("libsvm input has no features; pass the dimension explicitly");
  check_memory(rows, d, memory_cap_bytes);

  Matrix x(rows, d);
  for (const auto& [r, c, v] : triplets) x(r, c) = v;
  return x;
}

Matrix load_dataset(const DatasetSpec& spec) {
  std::ifstream in(spec.path);
  if (!in) throw IngestionError("cannot open dataset '" + spec.path + "'");
  Matrix x = spec.format == DataFormat::csv ? parse_csv(in, spec.has_header, spec.memory_cap_bytes)
                                            : parse_libsvm(in, spec.ambient_dim, spec.memory_cap_bytes);
  if (spec.limit_rows && *spec.limit_rows < x.rows()) x = x.row_block(0, *spec.limit_rows);
  if (spec.shuffle_seed) shuffle_rows(x, *spec.shuffle_seed);
  if (spec.center == Centering::global) center_columns(x);
  return x;
}

void write_csv(std::ostream& out, const Matrix& x) {
  char buf[32];
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const auto row = x.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) out << ',';
      std::snprintf(buf, sizeof buf, "%.17g", row[j]);
      out << buf;
    }
    out << '\n';
  }
}

void center_columns(Matrix& x) {
  if (x.rows() == 0) return;
  std::vector<double> mean(x.cols(), 0.0);
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const auto row = x.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) mean[j] += row[j];
  }
  for (double& m : mean) m /= static_cast<double>(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    auto row = x.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) row[j] -= mean[j];
  }
}

void shuffle_rows(Matrix& x, std::uint64_t seed) {
  SeededStream stream(seed);
  for (std::size_t i = x.rows(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(stream.next_below(i));
    if (j == i - 1) continue;
    auto a = x.row(i - 1);
    auto b = x.row(j);
    std::swap_ranges(a.begin(), a.end(), b.begin());
  }
}

// ------------------------------------------------------------ StreamGrid

StreamGrid::StreamGrid(std::size_t nodes, std::size_t batch_size, std::size_t horizon, std::vector<Matrix> batches)
    : nodes_(nodes), batch_size_(batch_size), horizon_(horizon), batches_(std::move(batches)) {
  if (batches_.size() != nodes * horizon) throw ArgumentError("StreamGrid: batch count must equal m*T");
}

std::span<const Matrix> StreamGrid::round(std::size_t round) const {
  return std::span<const Matrix>(batches_).subspan(round * nodes_, nodes_);
}

Matrix StreamGrid::node_stream(std::size_t node) const {
  const std::size_t d = batches_.empty() ? 0 : batches_.front().cols();
  Matrix out(batch_size_ * horizon_, d);
  for (std::size_t t = 0; t < horizon_; ++t) {
    const auto src = batch(node, t).entries();
    std::copy(src.begin(), src.end(), out.entries().begin() + static_cast<std::ptrdiff_t>(t * batch_size_ * d));
  }
  return out;
}

Matrix StreamGrid::pooled() const {
  const std::size_t d = batches_.empty() ? 0 : batches_.front().cols();
  Matrix out(batch_size_ * nodes_ * horizon_, d);
  std::size_t offset = 0;
  for (const auto& b : batches_) {
    const auto src = b.entries();
    std::copy(src.begin(), src.end(), out.entries().begin() + static_cast<std::ptrdiff_t>(offset));
    offset += src.size();
  }
  return out;
}

StreamGrid partition_stream(const Matrix& x, std::size_t nodes, std::size_t batch_size, std::size_t horizon) {
  if (nodes == 0 || batch_size == 0 || horizon == 0) throw ArgumentError("partition_stream: m, n, T must be >= 1");
  const std::size_t needed = nodes * batch_size * horizon;
  if (x.rows() < needed) {
    throw IngestionError("data source has " + std::to_string(x.rows()) + " rows but m*n*T = " +
                         std::to_string(needed) + " are required");
  }
  std::vector<Matrix> batches;
  batches.reserve(nodes * horizon);
  for (std::size_t t = 0; t < horizon; ++t) {
    for (std::size_t l = 0; l < nodes; ++l) batches.push_back(x.row_block((t * nodes + l) * batch_size, batch_size));
  }
  return StreamGrid(nodes, batch_size, horizon, std::move(batches));
}

}  // namespace odpca
