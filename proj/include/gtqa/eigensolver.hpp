#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "gtqa/error.hpp"
#include "gtqa/linalg.hpp"

namespace gtqa {

struct SpectralDecomposition {
  RealVector eigenvalues;  // ascending
  Matrix eigenvectors;     // column k pairs with eigenvalues[k]

  std::size_t dimension() const noexcept { return eigenvalues.size(); }
  RealVector eigenvector(std::size_t k) const { return column(eigenvectors, k); }
};

struct JacobiOptions {
  double off_diagonal_tolerance = 1e-13;  // relative to the Frobenius norm
  int max_sweeps = 100;
};

namespace detail {

inline double off_diagonal_norm(const Matrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i + 1; j < a.cols(); ++j) s += 2.0 * a(i, j) * a(i, j);
  return std::sqrt(s);
}

// One two-sided rotation zeroing a(p, q); accumulates into v.
inline void jacobi_rotate(Matrix& a, Matrix& v, std::size_t p, std::size_t q) {
  const double apq = a(p, q);
  const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
  const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;
  const std::size_t n = a.rows();
  for (std::size_t k = 0; k < n; ++k) {
    const double akp = a(k, p);
    const double akq = a(k, q);
    a(k, p) = c * akp - s * akq;
    a(k, q) = s * akp + c * akq;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const double apk = a(p, k);
    const double aqk = a(q, k);
    a(p, k) = c * apk - s * aqk;
    a(q, k) = s * apk + c * aqk;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double vkp = v(k, p);
    const double vkq = v(k, q);
    v(k, p) = c * vkp - s * vkq;
    v(k, q) = s * vkp + c * vkq;
  }
}

// Fix the arbitrary sign of each eigenvector: largest-magnitude entry positive.
inline void canonicalize_signs(Matrix& v) {
  for (std::size_t j = 0; j < v.cols(); ++j) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < v.rows(); ++i) {
      if (std::abs(v(i, j)) > std::abs(v(best, j)) + 1e-14) best = i;
    }
    if (v(best, j) < 0.0) {
      for (std::size_t i = 0; i < v.rows(); ++i) v(i, j) = -v(i, j);
    }
  }
}

}  // namespace detail

// Cyclic Jacobi eigendecomposition of a real symmetric matrix. Once the
// off-diagonal norm drops below tolerance * ||H||_F one more sweep is run,
// which (quadratic convergence) leaves eigenvectors accurate even across
// near-degenerate pairs.
inline SpectralDecomposition eigendecompose(const Matrix& h, const JacobiOptions& options = {}) {
  require_symmetric(h, "eigendecompose");
  const std::size_t n = h.rows();
  Matrix a = h;
  Matrix v = Matrix::identity(n);
  const double scale = frobenius_norm(h);
  bool converged = scale == 0.0;
  int cleanup_sweeps = 0;
  double off = detail::off_diagonal_norm(a);
  for (int sweep = 0; sweep < options.max_sweeps && cleanup_sweeps < 2; ++sweep) {
    if (off == 0.0) {
      converged = true;
      break;
    }
    if (off <= options.off_diagonal_tolerance * scale) {
      converged = true;
      ++cleanup_sweeps;
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        // Negligible against both diagonal entries: drop without rotating.
        const double g = 1e3 * std::abs(apq);
        if (std::abs(a(p, p)) + g == std::abs(a(p, p)) && std::abs(a(q, q)) + g == std::abs(a(q, q))) {
          a(p, q) = 0.0;
          a(q, p) = 0.0;
          continue;
        }
        detail::jacobi_rotate(a, v, p, q);
      }
    }
    off = detail::off_diagonal_norm(a);
  }
  if (!converged && off > options.off_diagonal_tolerance * scale) {
    throw ConvergenceError("eigendecompose: Jacobi iteration cap reached, off-diagonal norm " +
                               std::to_string(off),
                           off);
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a(x, x) < a(y, y); });
  SpectralDecomposition out;
  out.eigenvalues.resize(n);
  out.eigenvectors = Matrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.eigenvalues[k] = a(order[k], order[k]);
    for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, k) = v(i, order[k]);
  }
  detail::canonicalize_signs(out.eigenvectors);
  return out;
}

// Symmetric tridiagonal matrix: diagonal d (size n), off-diagonal e (size n-1).
struct Tridiagonal {
  RealVector diagonal;
  RealVector off_diagonal;
};

// Householder reduction to tridiagonal form (eigenvalues only; the
// orthogonal factor is not accumulated).
inline Tridiagonal tridiagonalize(const Matrix& h) {
  require_symmetric(h, "tridiagonalize");
  const std::size_t n = h.rows();
  Matrix a = h;
  RealVector v(n), p(n), w(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    double alpha = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) alpha += a(i, k) * a(i, k);
    alpha = std::sqrt(alpha);
    if (alpha == 0.0) continue;
    const double x0 = a(k + 1, k);
    const double sigma = x0 >= 0.0 ? -alpha : alpha;  // new sub-diagonal value
    // v = x - sigma e1, beta = 2 / (v^T v)
    for (std::size_t i = k + 1; i < n; ++i) v[i] = a(i, k);
    v[k + 1] -= sigma;
    double vnorm2 = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) vnorm2 += v[i] * v[i];
    if (vnorm2 == 0.0) continue;
    const double beta = 2.0 / vnorm2;
    // p = beta * A v on the trailing block
    for (std::size_t i = k + 1; i < n; ++i) {
      double acc = 0.0;
      for (std::size_t j = k + 1; j < n; ++j) acc += a(i, j) * v[j];
      p[i] = beta * acc;
    }
    double pv = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) pv += p[i] * v[i];
    const double kappa = 0.5 * beta * pv;
    for (std::size_t i = k + 1; i < n; ++i) w[i] = p[i] - kappa * v[i];
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= v[i] * w[j] + w[i] * v[j];
    a(k + 1, k) = sigma;
    a(k, k + 1) = sigma;
    for (std::size_t i = k + 2; i < n; ++i) {
      a(i, k) = 0.0;
      a(k, i) = 0.0;
    }
  }
  Tridiagonal t;
  t.diagonal.resize(n);
  t.off_diagonal.resize(n > 0 ? n - 1 : 0);
  for (std::size_t i = 0; i < n; ++i) t.diagonal[i] = a(i, i);
  for (std::size_t i = 0; i + 1 < n; ++i) t.off_diagonal[i] = a(i + 1, i);
  return t;
}

// Reads a symmetric matrix already known to be tridiagonal.
inline Tridiagonal tridiagonal_part(const Matrix& h) {
  require_square(h, "tridiagonal_part");
  const std::size_t n = h.rows();
  Tridiagonal t;
  t.diagonal.resize(n);
  t.off_diagonal.resize(n > 0 ? n - 1 : 0);
  for (std::size_t i = 0; i < n; ++i) t.diagonal[i] = h(i, i);
  for (std::size_t i = 0; i + 1 < n; ++i) t.off_diagonal[i] = h(i + 1, i);
  return t;
}

// Number of eigenvalues of t strictly below x (Sturm sequence via the LDL^T
// pivots of t - x I).
inline std::size_t count_below(const Tridiagonal& t, double x) {
  const std::size_t n = t.diagonal.size();
  std::size_t count = 0;
  double q = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e2 = i == 0 ? 0.0 : t.off_diagonal[i - 1] * t.off_diagonal[i - 1];
    q = t.diagonal[i] - x - (i == 0 ? 0.0 : e2 / q);
    if (q == 0.0) q = -std::numeric_limits<double>::epsilon() * (std::abs(x) + 1e-300);
    if (q < 0.0) ++count;
  }
  return count;
}

// The k smallest eigenvalues of t by bisection, ascending.
inline RealVector lowest_eigenvalues(const Tridiagonal& t, std::size_t k) {
  const std::size_t n = t.diagonal.size();
  if (k > n) throw InvalidParameter("lowest_eigenvalues: k exceeds dimension");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = (i > 0 ? std::abs(t.off_diagonal[i - 1]) : 0.0) +
                     (i + 1 < n ? std::abs(t.off_diagonal[i]) : 0.0);
    lo = std::min(lo, t.diagonal[i] - r);
    hi = std::max(hi, t.diagonal[i] + r);
  }
  const double span = std::max(hi - lo, std::numeric_limits<double>::min());
  lo -= 1e-12 * span;
  hi += 1e-12 * span;
  const double abs_tol = 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(lo), std::abs(hi));
  RealVector out(k);
  double floor = lo;
  for (std::size_t j = 0; j < k; ++j) {
    double a = floor;
    double b = hi;
    // invariant: count_below(a) <= j < count_below(b)
    for (int it = 0; it < 200 && b - a > abs_tol; ++it) {
      const double mid = 0.5 * (a + b);
      if (mid <= a || mid >= b) break;
      if (count_below(t, mid) > j) {
        b = mid;
      } else {
        a = mid;
      }
    }
    out[j] = 0.5 * (a + b);
    floor = a;
  }
  return out;
}

inline RealVector lowest_eigenvalues(const Matrix& h, std::size_t k) {
  return lowest_eigenvalues(tridiagonalize(h), k);
}

// Largest |eigenvalue|, i.e. the spectral norm of a symmetric matrix.
inline double spectral_norm(const Matrix& h) {
  const auto values = lowest_eigenvalues(tridiagonalize(h), h.rows());
  return std::max(std::abs(values.front()), std::abs(values.back()));
}

}  // namespace gtqa
