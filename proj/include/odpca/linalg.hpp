#pragma once

// Dense real linear algebra used throughout the library: a row-major matrix,
// symmetric and orthonormal-basis wrappers that enforce their invariants, a
// cyclic Jacobi eigensolver and a handful of products.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace odpca {

/// Rectangular real matrix stored row-major. Entries are always finite.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols);
  /// Takes ownership of `entries`; throws ArgumentError on a size mismatch or
  /// a non-finite entry.
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

  static Matrix identity(std::size_t n);
  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return entries_.empty(); }

  double& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {entries_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const { return {entries_.data() + i * cols_, cols_}; }

  std::span<const double> entries() const noexcept { return entries_; }
  std::span<double> entries() noexcept { return entries_; }

  Matrix transpose() const;
  /// Columns [first, first + count).
  Matrix columns(std::size_t first, std::size_t count) const;
  /// Rows [first, first + count).
  Matrix row_block(std::size_t first, std::size_t count) const;

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> entries_;
};

Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator*(double s, const Matrix& a);

/// A * B
Matrix matmul(const Matrix& a, const Matrix& b);
/// Aᵀ * B
Matrix matmul_tn(const Matrix& a, const Matrix& b);
/// A * Bᵀ
Matrix matmul_nt(const Matrix& a, const Matrix& b);

double frobenius_norm(const Matrix& a);
double frobenius_norm_squared(const Matrix& a);

/// Square matrix with A == Aᵀ up to 1e-12 × (1 + max|A|). Full storage.
class SymmetricMatrix {
 public:
  SymmetricMatrix() = default;
  /// Validates symmetry; throws ArgumentError otherwise.
  explicit SymmetricMatrix(Matrix full);

  static SymmetricMatrix zeros(std::size_t dim);
  /// Returns (A + Aᵀ)/2. Use when A is symmetric by construction but may
  /// carry rounding asymmetry.
  static SymmetricMatrix symmetrize(const Matrix& a);

  std::size_t dim() const noexcept { return full_.rows(); }
  const Matrix& matrix() const noexcept { return full_; }
  double operator()(std::size_t i, std::size_t j) const { return full_(i, j); }
  double trace() const;

  /// this += scale * B Bᵀ, keeping exact symmetry.
  void add_outer(const Matrix& b, double scale);
  /// this += scale * B diag(weights) Bᵀ
  void add_weighted_outer(const Matrix& b, std::span<const double> weights, double scale);

 private:
  Matrix full_;
};

/// d×K matrix with orthonormal columns, 1 ≤ K ≤ d.
class OrthonormalBasis {
 public:
  OrthonormalBasis() = default;
  /// Validates ‖UᵀU − I‖_F ≤ 1e-8; throws ArgumentError otherwise.
  explicit OrthonormalBasis(Matrix columns);

  std::size_t ambient_dim() const noexcept { return columns_.rows(); }
  std::size_t rank() const noexcept { return columns_.cols(); }
  const Matrix& matrix() const noexcept { return columns_; }

  /// The first k columns.
  OrthonormalBasis leading(std::size_t k) const;
  /// Embedding of the coordinate axes e_{index[0]}, e_{index[1]}, ...
  static OrthonormalBasis coordinate_axes(std::size_t ambient_dim, std::span<const std::size_t> index);

 private:
  Matrix columns_;
};

struct EigenDecomposition {
  std::vector<double> values;  // descending
  OrthonormalBasis basis;      // column j pairs with values[j]
};

/// Full eigendecomposition by cyclic Jacobi rotations. Each eigenvector is
/// flipped so its largest-magnitude entry (lowest index on ties) is positive.
/// Throws ConvergenceError after 100 sweeps.
EigenDecomposition sym_eig(const SymmetricMatrix& a);

/// The k leading pairs of sym_eig(a).
EigenDecomposition top_k_eig(const SymmetricMatrix& a, std::size_t k);

/// n⁻¹ Σᵢ xᵢxᵢᵀ over the rows of `samples`. No centering.
SymmetricMatrix empirical_covariance(const Matrix& samples);

/// Top-k eigenvectors of n⁻¹ XᵀX computed from the n×n Gram matrix n⁻¹ XXᵀ.
/// Needs rank(X) ≥ k; throws RankError when the k-th Gram eigenvalue is
/// numerically zero.
EigenDecomposition top_k_via_gram(const Matrix& samples, std::size_t k);

/// Modified Gram-Schmidt with one reorthogonalization pass. Throws RankError
/// when a column loses more than all but 1e-10 of its norm.
OrthonormalBasis orthonormalize(const Matrix& b);

/// Flip columns so each column's largest-magnitude entry is positive.
void apply_sign_convention(Matrix& columns);

}  // namespace odpca
