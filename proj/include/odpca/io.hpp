#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "odpca/linalg.hpp"

namespace odpca {

enum class DataFormat { csv, libsvm };
enum class Centering { none, global, per_batch };

DataFormat parse_format(std::string_view name);
Centering parse_centering(std::string_view name);
std::string_view to_string(DataFormat format);
std::string_view to_string(Centering centering);

struct DatasetSpec {
  std::string path;
  DataFormat format = DataFormat::csv;
  /// `global` is applied by load_dataset(); `per_batch` is applied when the
  /// stream is partitioned.
  Centering center = Centering::none;
  std::optional<std::size_t> limit_rows;
  std::optional<std::uint64_t> shuffle_seed;
  bool has_header = false;               // CSV only
  std::size_t ambient_dim = 0;           // libsvm only; 0 infers max index
  double memory_cap_bytes = 8.0e9;       // refuse dense loads larger than this
};

/// Reads a dense N×d matrix. libsvm labels are dropped and 1-based indices
/// materialized densely. Rows are then truncated to `limit_rows`, shuffled
/// with a seeded permutation, and globally centered, in that order.
Matrix load_dataset(const DatasetSpec& spec);

/// Same parsers over an in-memory stream; used by load_dataset().
Matrix parse_csv(std::istream& in, bool has_header, double memory_cap_bytes = 8.0e9);
Matrix parse_libsvm(std::istream& in, std::size_t ambient_dim = 0, double memory_cap_bytes = 8.0e9);

/// Writes rows with 17 significant digits, so reading back is bit-exact.
void write_csv(std::ostream& out, const Matrix& x);

/// Subtracts each column's mean.
void center_columns(Matrix& x);

/// Fisher-Yates row shuffle driven by SeededStream(seed).
void shuffle_rows(Matrix& x, std::uint64_t seed);

/// Node × round grid of batches. batch(node, round) holds rows
/// [(round·m + node)·n, (round·m + node + 1)·n) of the source; indices are
/// 0-based here.
class StreamGrid {
 public:
  StreamGrid() = default;
  StreamGrid(std::size_t nodes, std::size_t batch_size, std::size_t horizon, std::vector<Matrix> batches);

  std::size_t nodes() const noexcept { return nodes_; }
  std::size_t batch_size() const noexcept { return batch_size_; }
  std::size_t horizon() const noexcept { return horizon_; }

  const Matrix& batch(std::size_t node, std::size_t round) const { return batches_[round * nodes_ + node]; }
  Matrix& batch(std::size_t node, std::size_t round) { return batches_[round * nodes_ + node]; }
  /// The m batches of one round, in node order.
  std::span<const Matrix> round(std::size_t round) const;
  /// First source row of batch(node, round).
  std::size_t first_row(std::size_t node, std::size_t round) const {
    return (round * nodes_ + node) * batch_size_;
  }

  /// Every round of one node stacked in time order (n·T rows).
  Matrix node_stream(std::size_t node) const;
  /// All batches stacked in source row order (m·n·T rows).
  Matrix pooled() const;

 private:
  std::size_t nodes_ = 0;
  std::size_t batch_size_ = 0;
  std::size_t horizon_ = 0;
  std::vector<Matrix> batches_;  // round-major
};

/// Splits the first m·n·T rows of `x` into the grid. Throws IngestionError
/// when `x` has fewer rows.
StreamGrid partition_stream(const Matrix& x, std::size_t nodes, std::size_t batch_size, std::size_t horizon);

}  // namespace odpca
