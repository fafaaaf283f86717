#pragma once

// Independent oracles for the unit and acceptance tests. Nothing in here calls
// the eigensolver under test.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "odpca/linalg.hpp"
#include "odpca/random.hpp"

namespace odpca::testing {

inline Matrix gaussian_matrix(std::size_t rows, std::size_t cols, SeededStream& rng) {
  Matrix m(rows, cols);
  for (double& v : m.entries()) v = rng.next_gaussian();
  return m;
}

inline SymmetricMatrix random_symmetric(std::size_t d, SeededStream& rng, double scale = 1.0) {
  Matrix a = gaussian_matrix(d, d, rng);
  Matrix s(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) s(i, j) = scale * 0.5 * (a(i, j) + a(j, i));
  return SymmetricMatrix(s);
}

// Classical Gram-Schmidt on a Gaussian matrix, done here rather than through orthonormalize().
inline OrthonormalBasis random_basis(std::size_t d, std::size_t k, SeededStream& rng) {
  Matrix g = gaussian_matrix(d, k, rng);
  for (std::size_t j = 0; j < k; ++j) {
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t p = 0; p < j; ++p) {
        double dot = 0.0;
        for (std::size_t i = 0; i < d; ++i) dot += g(i, p) * g(i, j);
        for (std::size_t i = 0; i < d; ++i) g(i, j) -= dot * g(i, p);
      }
    }
    double norm = 0.0;
    for (std::size_t i = 0; i < d; ++i) norm += g(i, j) * g(i, j);
    norm = std::sqrt(norm);
    for (std::size_t i = 0; i < d; ++i) g(i, j) /= norm;
  }
  return OrthonormalBasis(g);
}

inline Matrix dense_projector(const OrthonormalBasis& u) {
  const Matrix& m = u.matrix();
  Matrix p(m.rows(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.rows(); ++j) {
      double s = 0.0;
      for (std::size_t c = 0; c < m.cols(); ++c) s += m(i, c) * m(j, c);
      p(i, j) = s;
    }
  return p;
}

// ‖UUᵀ − VVᵀ‖_F by forming both projectors.
inline double dense_distance(const OrthonormalBasis& u, const OrthonormalBasis& v) {
  const Matrix pu = dense_projector(u);
  const Matrix pv = dense_projector(v);
  long double s = 0.0L;
  for (std::size_t i = 0; i < pu.entries().size(); ++i) {
    const long double diff = pu.entries()[i] - pv.entries()[i];
    s += diff * diff;
  }
  return static_cast<double>(std::sqrt(s));
}

inline Matrix naive_covariance(const Matrix& x) {
  Matrix c(x.cols(), x.cols());
  for (std::size_t i = 0; i < x.cols(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) {
      long double s = 0.0L;
      for (std::size_t r = 0; r < x.rows(); ++r) s += static_cast<long double>(x(r, i)) * x(r, j);
      c(i, j) = static_cast<double>(s / x.rows());
    }
  return c;
}

// Eigenvalues (descending) as roots of the characteristic polynomial: Householder
// reduction to tridiagonal form, then bisection on the Sturm sequence of the
// leading principal minors.
inline std::vector<double> bisection_eigenvalues(const SymmetricMatrix& sym) {
  const std::size_t n = sym.dim();
  std::vector<std::vector<long double>> a(n, std::vector<long double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i][j] = sym(i, j);

  for (std::size_t k = 0; k + 2 < n; ++k) {
    long double alpha = 0.0L;
    for (std::size_t i = k + 1; i < n; ++i) alpha += a[i][k] * a[i][k];
    alpha = std::sqrt(alpha);
    if (alpha == 0.0L) continue;
    if (a[k + 1][k] > 0) alpha = -alpha;
    std::vector<long double> v(n, 0.0L);
    v[k + 1] = a[k + 1][k] - alpha;
    for (std::size_t i = k + 2; i < n; ++i) v[i] = a[i][k];
    long double vv = 0.0L;
    for (long double x : v) vv += x * x;
    if (vv == 0.0L) continue;
    // A ← HAH with H = I − 2vvᵀ/vᵀv
    std::vector<long double> p(n, 0.0L);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) p[i] += a[i][j] * v[j];
    for (long double& x : p) x *= 2.0L / vv;
    long double kfac = 0.0L;
    for (std::size_t i = 0; i < n; ++i) kfac += v[i] * p[i];
    kfac /= vv;
    std::vector<long double> q(n);
    for (std::size_t i = 0; i < n; ++i) q[i] = p[i] - kfac * v[i];
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) a[i][j] -= v[i] * q[j] + q[i] * v[j];
  }

  std::vector<long double> diag(n), off(n, 0.0L);
  for (std::size_t i = 0; i < n; ++i) diag[i] = a[i][i];
  for (std::size_t i = 1; i < n; ++i) off[i] = a[i][i - 1];

  long double bound = 0.0L;
  for (std::size_t i = 0; i < n; ++i) {
    long double r = std::fabs(diag[i]);
    if (i > 0) r += std::fabs(off[i]);
    if (i + 1 < n) r += std::fabs(off[i + 1]);
    bound = std::max(bound, r);
  }
  bound += 1.0L;

  // number of eigenvalues strictly below x
  auto count_below = [&](long double x) {
    std::size_t count = 0;
    long double q = 1.0L;
    for (std::size_t i = 0; i < n; ++i) {
      q = diag[i] - x - (i > 0 ? off[i] * off[i] / q : 0.0L);
      if (q == 0.0L) q = -1e-30L;
      if (q < 0) ++count;
    }
    return count;
  };

  std::vector<double> values;
  for (std::size_t idx = 0; idx < n; ++idx) {
    // idx-th smallest eigenvalue: smallest x with count_below(x) > idx
    long double lo = -bound, hi = bound;
    for (int it = 0; it < 200 && hi - lo > 1e-15L * bound; ++it) {
      const long double mid = 0.5L * (lo + hi);
      if (count_below(mid) > idx) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    values.push_back(static_cast<double>(0.5L * (lo + hi)));
  }
  std::sort(values.rbegin(), values.rend());
  return values;
}

inline double orthonormality_defect(const Matrix& u) {
  double s = 0.0;
  for (std::size_t a = 0; a < u.cols(); ++a)
    for (std::size_t b = 0; b < u.cols(); ++b) {
      double dot = 0.0;
      for (std::size_t i = 0; i < u.rows(); ++i) dot += u(i, a) * u(i, b);
      const double target = a == b ? 1.0 : 0.0;
      s += (dot - target) * (dot - target);
    }
  return std::sqrt(s);
}

inline double reconstruction_residual(const SymmetricMatrix& a, const std::vector<double>& values,
                                      const Matrix& v) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) {
      double r = a(i, j);
      for (std::size_t c = 0; c < values.size(); ++c) r -= v(i, c) * values[c] * v(j, c);
      s += r * r;
    }
  return std::sqrt(s);
}

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 == 1 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

}  // namespace odpca::testing
