#include "odpca/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "odpca/errors.hpp"

namespace odpca {

namespace {

constexpr int kMaxSweeps = 100;
constexpr double kOffDiagonalTolerance = 1e-12;

void require_same_shape(const Matrix& a, const Matrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ArgumentError(std::string(op) + ": shape mismatch " + std::to_string(a.rows()) + "x" +
                        std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                        std::to_string(b.cols()));
  }
}

double off_diagonal_norm(const Matrix& a) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (i != j) sum += a(i, j) * a(i, j);
    }
  }
  return std::sqrt(sum);
}

// Sort eigenpairs descending; `rows` holds eigenvectors as rows.
EigenDecomposition assemble(const std::vector<double>& diag, const Matrix& rows) {
  const std::size_t n = diag.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return diag[a] > diag[b]; });

  std::vector<double> values(n);
  Matrix columns(rows.cols(), n);
  for (std::size_t j = 0; j < n; ++j) {
    values[j] = diag[order[j]];
    const auto v = rows.row(order[j]);
    for (std::size_t i = 0; i < rows.cols(); ++i) columns(i, j) = v[i];
  }
  apply_sign_convention(columns);
  return {std::move(values), OrthonormalBasis(std::move(columns))};
}

}  // namespace

// ---------------------------------------------------------------- Matrix

Matrix::Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), entries_(rows * cols, 0.0) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (entries_.size() != rows * cols) {
    throw ArgumentError("Matrix: expected " + std::to_string(rows * cols) + " entries, got " +
                        std::to_string(entries_.size()));
  }
  for (double x : entries_) {
    if (!std::isfinite(x)) throw ArgumentError("Matrix: non-finite entry");
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  std::vector<double> entries;
  entries.reserve(r * c);
  for (const auto& row : rows) {
    if (row.size() != c) throw ArgumentError("Matrix::from_rows: ragged rows");
    entries.insert(entries.end(), row.begin(), row.end());
  }
  return Matrix(r, c, std::move(entries));
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  }
  return t;
}

Matrix Matrix::columns(std::size_t first, std::size_t count) const {
  if (first + count > cols_) throw ArgumentError("Matrix::columns: range out of bounds");
  Matrix out(rows_, count);
  for (std::size_t i = 0; i < rows_; ++i) {
    std::copy_n(entries_.begin() + static_cast<std::ptrdiff_t>(i * cols_ + first), count,
                out.entries_.begin() + static_cast<std::ptrdiff_t>(i * count));
  }
  return out;
}

Matrix Matrix::row_block(std::size_t first, std::size_t count) const {
  if (first + count > rows_) throw ArgumentError("Matrix::row_block: range out of bounds");
  Matrix out(count, cols_);
  std::copy_n(entries_.begin() + static_cast<std::ptrdiff_t>(first * cols_), count * cols_,
              out.entries_.begin());
  return out;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "operator+");
  Matrix out = a;
  auto dst = out.entries();
  auto src = b.entries();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
  return out;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "operator-");
  Matrix out = a;
  auto dst = out.entries();
  auto src = b.entries();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] -= src[i];
  return out;
}

Matrix operator*(double s, const Matrix& a) {
  Matrix out = a;
  for (double& x : out.entries()) x *= s;
  return out;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw ArgumentError("matmul: inner dimensions differ");
  Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto dst = out.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      const auto src = b.row(k);
      for (std::size_t j = 0; j < dst.size(); ++j) dst[j] += aik * src[j];
    }
  }
  return out;
}

Matrix matmul_tn(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) throw ArgumentError("matmul_tn: row counts differ");
  Matrix out(a.cols(), b.cols());
  for (std::size_t k = 0; k < a.rows(); ++k) {
    const auto ak = a.row(k);
    const auto bk = b.row(k);
    for (std::size_t i = 0; i < ak.size(); ++i) {
      const double aki = ak[i];
      if (aki == 0.0) continue;
      auto dst = out.row(i);
      for (std::size_t j = 0; j < bk.size(); ++j) dst[j] += aki * bk[j];
    }
  }
  return out;
}

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) throw ArgumentError("matmul_nt: column counts differ");
  Matrix out(a.rows(), b.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const auto ai = a.row(i);
    for (std::size_t j = 0; j < b.rows(); ++j) {
      const auto bj = b.row(j);
      double s = 0.0;
      for (std::size_t k = 0; k < ai.size(); ++k) s += ai[k] * bj[k];
      out(i, j) = s;
    }
  }
  return out;
}

double frobenius_norm_squared(const Matrix& a) {
  double s = 0.0;
  for (double x : a.entries()) s += x * x;
  return s;
}

double frobenius_norm(const Matrix& a) { return std::sqrt(frobenius_norm_squared(a)); }

// ------------------------------------------------------- SymmetricMatrix

SymmetricMatrix::SymmetricMatrix(Matrix full) : full_(std::move(full)) {
  if (full_.rows() != full_.cols()) throw ArgumentError("SymmetricMatrix: matrix is not square");
  double max_abs = 0.0;
  for (double x : full_.entries()) max_abs = std::max(max_abs, std::abs(x));
  const double tol = 1e-12 * (1.0 + max_abs);
  for (std::size_t i = 0; i < full_.rows(); ++i) {
    for (std::size_t j = i + 1; j < full_.cols(); ++j) {
      if (std::abs(full_(i, j) - full_(j, i)) > tol) {
        throw ArgumentError("SymmetricMatrix: asymmetric at (" + std::to_string(i) + "," +
                            std::to_string(j) + ")");
      }
    }
  }
}

SymmetricMatrix SymmetricMatrix::zeros(std::size_t dim) {
  SymmetricMatrix s;
  s.full_ = Matrix(dim, dim);
  return s;
}

SymmetricMatrix SymmetricMatrix::symmetrize(const Matrix& a) {
  if (a.rows() != a.cols()) throw ArgumentError("SymmetricMatrix::symmetrize: matrix is not square");
  SymmetricMatrix s;
  s.full_ = a;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = i + 1; j < a.cols(); ++j) {
      const double v = 0.5 * (a(i, j) + a(j, i));
      s.full_(i, j) = v;
      s.full_(j, i) = v;
    }
  }
  return s;
}

double SymmetricMatrix::trace() const {
  double t = 0.0;
  for (std::size_t i = 0; i < dim(); ++i) t += full_(i, i);
  return t;
}

void SymmetricMatrix::add_outer(const Matrix& b, double scale) {
  if (b.rows() != dim()) throw ArgumentError("SymmetricMatrix::add_outer: dimension mismatch");
  const std::size_t d = dim();
  for (std::size_t i = 0; i < d; ++i) {
    const auto bi = b.row(i);
    for (std::size_t j = i; j < d; ++j) {
      const auto bj = b.row(j);
      double s = 0.0;
      for (std::size_t k = 0; k < bi.size(); ++k) s += bi[k] * bj[k];
      full_(i, j) += scale * s;
      if (j != i) full_(j, i) = full_(i, j);
    }
  }
}

void SymmetricMatrix::add_weighted_outer(const Matrix& b, std::span<const double> weights, double scale) {
  if (b.rows() != dim() || b.cols() != weights.size()) {
    throw ArgumentError("SymmetricMatrix::add_weighted_outer: dimension mismatch");
  }
  const std::size_t d = dim();
  for (std::size_t i = 0; i < d; ++i) {
    const auto bi = b.row(i);
    for (std::size_t j = i; j < d; ++j) {
      const auto bj = b.row(j);
      double s = 0.0;
      for (std::size_t k = 0; k < bi.size(); ++k) s += weights[k] * bi[k] * bj[k];
      full_(i, j) += scale * s;
      if (j != i) full_(j, i) = full_(i, j);
    }
  }
}

// ------------------------------------------------------ OrthonormalBasis

OrthonormalBasis::OrthonormalBasis(Matrix columns) : columns_(std::move(columns)) {
  if (columns_.cols() == 0 || columns_.cols() > columns_.rows()) {
    throw ArgumentError("OrthonormalBasis: need 1 <= K <= d, got K=" + std::to_string(columns_.cols()) +
                        " d=" + std::to_string(columns_.rows()));
  }
  Matrix gram = matmul_tn(columns_, columns_);
  for (std::size_t i = 0; i < gram.rows(); ++i) gram(i, i) -= 1.0;
  const double defect = frobenius_norm(gram);
  if (!(defect <= 1e-8)) {
    throw ArgumentError("OrthonormalBasis: columns not orthonormal (defect " + std::to_string(defect) + ")");
  }
}

OrthonormalBasis OrthonormalBasis::leading(std::size_t k) const {
  if (k == 0 || k > rank()) throw ArgumentError("OrthonormalBasis::leading: k out of range");
  OrthonormalBasis out;
  out.columns_ = columns_.columns(0, k);
  return out;
}

OrthonormalBasis OrthonormalBasis::coordinate_axes(std::size_t ambient_dim, std::span<const std::size_t> index) {
  Matrix m(ambient_dim, index.size());
  for (std::size_t j = 0; j < index.size(); ++j) {
    if (index[j] >= ambient_dim) throw ArgumentError("coordinate_axes: index out of range");
    m(index[j], j) = 1.0;
  }
  return OrthonormalBasis(std::move(m));
}

// ---------------------------------------------------------- eigensolver

void apply_sign_convention(Matrix& columns) {
  for (std::size_t j = 0; j < columns.cols(); ++j) {
    std::size_t best = 0;
    double best_abs = -1.0;
    for (std::size_t i = 0; i < columns.rows(); ++i) {
      const double a = std::abs(columns(i, j));
      if (a > best_abs) {
        best_abs = a;
        best = i;
      }
    }
    if (columns.rows() > 0 && columns(best, j) < 0.0) {
      for (std::size_t i = 0; i < columns.rows(); ++i) columns(i, j) = -columns(i, j);
    }
  }
}

EigenDecomposition sym_eig(const SymmetricMatrix& input) {
  const std::size_t n = input.dim();
  if (n == 0) throw ArgumentError("sym_eig: empty matrix");

  Matrix a = input.matrix();
  Matrix vt = Matrix::identity(n);  // rows are eigenvectors
  const double scale = frobenius_norm(a);
  const double target = kOffDiagonalTolerance * scale;

  double off = off_diagonal_norm(a);
  int sweep = 0;
  while (off > target) {
    if (sweep == kMaxSweeps) {
      throw ConvergenceError("sym_eig: no convergence after " + std::to_string(kMaxSweeps) +
                                 " sweeps, off-diagonal residual " + std::to_string(off),
                             off);
    }
    ++sweep;
    // Early sweeps only rotate entries above a shrinking threshold.
    const double threshold = sweep < 4 ? 0.2 * off / static_cast<double>(n * n) : 0.0;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        const double g = 100.0 * std::abs(apq);
        const double app = a(p, p);
        const double aqq = a(q, q);
        if (sweep > 4 && std::abs(app) + g == std::abs(app) && std::abs(aqq) + g == std::abs(aqq)) {
          a(p, q) = 0.0;
          a(q, p) = 0.0;
          continue;
        }
        if (std::abs(apq) <= threshold || apq == 0.0) continue;

        const double h = aqq - app;
        double t;
        if (std::abs(h) + g == std::abs(h)) {
          t = apq / h;
        } else {
          const double theta = 0.5 * h / apq;
          t = 1.0 / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
          if (theta < 0.0) t = -t;
        }
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        auto rp = a.row(p);
        auto rq = a.row(q);
        for (std::size_t k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const double akp = rp[k];
          const double akq = rq[k];
          const double np = c * akp - s * akq;
          const double nq = s * akp + c * akq;
          rp[k] = np;
          rq[k] = nq;
          a(k, p) = np;
          a(k, q) = nq;
        }
        a(p, p) = app - t * apq;
        a(q, q) = aqq + t * apq;
        a(p, q) = 0.0;
        a(q, p) = 0.0;

        auto vp = vt.row(p);
        auto vq = vt.row(q);
        for (std::size_t k = 0; k < n; ++k) {
          const double x = vp[k];
          const double y = vq[k];
          vp[k] = c * x - s * y;
          vq[k] = s * x + c * y;
        }
      }
    }
    off = off_diagonal_norm(a);
  }

  std::vector<double> diag(n);
  for (std::size_t i = 0; i < n; ++i) diag[i] = a(i, i);
  return assemble(diag, vt);
}

EigenDecomposition top_k_eig(const SymmetricMatrix& a, std::size_t k) {
  if (k == 0 || k > a.dim()) {
    throw ArgumentError("top_k_eig: K=" + std::to_string(k) + " out of range [1, " + std::to_string(a.dim()) + "]");
  }
  EigenDecomposition full = sym_eig(a);
  if (k == a.dim()) return full;
  full.values.resize(k);
  return {std::move(full.values), full.basis.leading(k)};
}

SymmetricMatrix empirical_covariance(const Matrix& samples) {
  const std::size_t n = samples.rows();
  const std::size_t d = samples.cols();
  if (n == 0) throw ArgumentError("empirical_covariance: no samples");
  Matrix acc(d, d);
  for (std::size_t r = 0; r < n; ++r) {
    const auto x = samples.row(r);
    for (std::size_t i = 0; i < d; ++i) {
      const double xi = x[i];
      if (xi == 0.0) continue;
      auto dst = acc.row(i);
      for (std::size_t j = i; j < d; ++j) dst[j] += xi * x[j];
    }
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i; j < d; ++j) {
      acc(i, j) *= inv_n;
      acc(j, i) = acc(i, j);
    }
  }
  return SymmetricMatrix(std::move(acc));
}

EigenDecomposition top_k_via_gram(const Matrix& samples, std::size_t k) {
  const std::size_t n = samples.rows();
  const std::size_t d = samples.cols();
  if (n == 0) throw ArgumentError("top_k_via_gram: no samples");
  if (k == 0 || k > d || k > n) throw ArgumentError("top_k_via_gram: K out of range");

  const double inv_n = 1.0 / static_cast<double>(n);
  const SymmetricMatrix gram = SymmetricMatrix::symmetrize(inv_n * matmul_nt(samples, samples));
  const EigenDecomposition g = top_k_eig(gram, k);
  if (!(g.values[k - 1] > 1e-12 * std::max(g.values[0], 0.0)) || g.values[0] <= 0.0) {
    throw RankError("top_k_via_gram: sample matrix has rank below K");
  }

  // Right singular vectors of X/√n: v = Xᵀu / √(n λ).
  Matrix v = matmul_tn(samples, g.basis.matrix());
  for (std::size_t j = 0; j < k; ++j) {
    const double s = 1.0 / std::sqrt(static_cast<double>(n) * g.values[j]);
    for (std::size_t i = 0; i < d; ++i) v(i, j) *= s;
  }
  OrthonormalBasis basis = orthonormalize(v);
  Matrix cols = basis.matrix();
  apply_sign_convention(cols);
  return {g.values, OrthonormalBasis(std::move(cols))};
}

OrthonormalBasis orthonormalize(const Matrix& b) {
  const std::size_t d = b.rows();
  const std::size_t k = b.cols();
  if (k == 0 || k > d) throw RankError("orthonormalize: need 1 <= K <= d");

  // Work column-major for contiguous column access.
  Matrix q = b.transpose();
  for (std::size_t j = 0; j < k; ++j) {
    auto qj = q.row(j);
    double original = 0.0;
    for (double x : qj) original += x * x;
    original = std::sqrt(original);
    if (original == 0.0) throw RankError("orthonormalize: zero column " + std::to_string(j));

    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t i = 0; i < j; ++i) {
        const auto qi = q.row(i);
        double dot = 0.0;
        for (std::size_t r = 0; r < d; ++r) dot += qi[r] * qj[r];
        for (std::size_t r = 0; r < d; ++r) qj[r] -= dot * qi[r];
      }
    }
    double norm = 0.0;
    for (double x : qj) norm += x * x;
    norm = std::sqrt(norm);
    if (norm < 1e-10 * original) {
      throw RankError("orthonormalize: column " + std::to_string(j) + " is linearly dependent");
    }
    for (double& x : qj) x /= norm;
  }
  return OrthonormalBasis(q.transpose());
}

}  // namespace odpca
