#pragma once

// Reference computations used only by the tests. Each takes a route that
// shares no code with the library path it checks.

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "gtqa/linalg.hpp"

namespace oracle {

using LD = long double;
using CLD = std::complex<LD>;

// Column-basis H(s) written out entry by entry.
inline gtqa::Matrix column_hamiltonian(int n, double s, double alpha) {
  const std::size_t d = static_cast<std::size_t>(2 * n + 2);
  gtqa::Matrix h(d, d);
  h(0, 0) = -alpha * (1.0 - s);
  h(d - 1, d - 1) = -alpha * s;
  for (std::size_t j = 0; j + 1 < d; ++j) {
    const double bond = (j == static_cast<std::size_t>(n) ? std::sqrt(2.0) : 1.0) * s * (1.0 - s);
    h(j, j + 1) = -bond;
    h(j + 1, j) = -bond;
  }
  return h;
}

// Column adjacency after the 1/sqrt(2) rescaling: 1 on tree bonds, sqrt(2)
// across the glue.
inline gtqa::Matrix column_adjacency(int n) {
  const std::size_t d = static_cast<std::size_t>(2 * n + 2);
  gtqa::Matrix a(d, d);
  for (std::size_t j = 0; j + 1 < d; ++j) {
    const double w = j == static_cast<std::size_t>(n) ? std::sqrt(2.0) : 1.0;
    a(j, j + 1) = w;
    a(j + 1, j) = w;
  }
  return a;
}

// Characteristic polynomial by Faddeev-LeVerrier: coefficients c[0..n] of
// det(x I - A) = sum c[k] x^(n-k).
inline std::vector<LD> characteristic_polynomial(const gtqa::Matrix& a) {
  const std::size_t n = a.rows();
  std::vector<LD> c(n + 1, 0.0L);
  c[0] = 1.0L;
  std::vector<LD> m(n * n, 0.0L), am(n * n, 0.0L);
  for (std::size_t k = 1; k <= n; ++k) {
    // M_k = A M_{k-1} + c_{k-1} I, with M_0 = 0.
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        LD acc = 0.0L;
        for (std::size_t l = 0; l < n; ++l) acc += static_cast<LD>(a(i, l)) * m[l * n + j];
        am[i * n + j] = acc;
      }
    for (std::size_t i = 0; i < n * n; ++i) m[i] = am[i];
    for (std::size_t i = 0; i < n; ++i) m[i * n + i] += c[k - 1];
    LD trace = 0.0L;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t l = 0; l < n; ++l) trace += static_cast<LD>(a(i, l)) * m[l * n + i];
    c[k] = -trace / static_cast<LD>(k);
  }
  return c;
}

inline LD polyval(const std::vector<LD>& c, LD x) {
  LD v = 0.0L;
  for (LD coef : c) v = v * x + coef;
  return v;
}

// Real roots of the characteristic polynomial of a symmetric matrix: dense
// sign-change scan inside the Gershgorin interval, then bisection.
inline std::vector<double> charpoly_eigenvalues(const gtqa::Matrix& a, std::size_t scan = 200000) {
  const auto c = characteristic_polynomial(a);
  LD lo = 0.0L, hi = 0.0L;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    LD r = 0.0L;
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (j != i) r += std::fabs(static_cast<LD>(a(i, j)));
    lo = std::min(lo, static_cast<LD>(a(i, i)) - r);
    hi = std::max(hi, static_cast<LD>(a(i, i)) + r);
  }
  lo -= 1e-3L;
  hi += 1e-3L;
  std::vector<double> roots;
  LD x0 = lo, f0 = polyval(c, x0);
  for (std::size_t k = 1; k <= scan; ++k) {
    const LD x1 = lo + (hi - lo) * static_cast<LD>(k) / static_cast<LD>(scan);
    const LD f1 = polyval(c, x1);
    if (f0 == 0.0L) {
      roots.push_back(static_cast<double>(x0));
    } else if ((f0 < 0.0L) != (f1 < 0.0L) && f1 != 0.0L) {
      LD a0 = x0, b0 = x1, fa = f0;
      for (int it = 0; it < 200; ++it) {
        const LD mid = 0.5L * (a0 + b0);
        const LD fm = polyval(c, mid);
        if ((fm < 0.0L) == (fa < 0.0L)) {
          a0 = mid;
          fa = fm;
        } else {
          b0 = mid;
        }
      }
      roots.push_back(static_cast<double>(0.5L * (a0 + b0)));
    }
    x0 = x1;
    f0 = f1;
  }
  return roots;
}

// exp(-i t H) by scaling and squaring of a long-double Taylor series.
inline std::vector<CLD> exact_propagator(const gtqa::Matrix& h, double t) {
  const std::size_t n = h.rows();
  LD norm1 = 0.0L;
  for (std::size_t j = 0; j < n; ++j) {
    LD col = 0.0L;
    for (std::size_t i = 0; i < n; ++i) col += std::fabs(static_cast<LD>(h(i, j)));
    norm1 = std::max(norm1, col);
  }
  int squarings = 0;
  LD scale = std::fabs(static_cast<LD>(t)) * norm1;
  while (scale > 0.05L) {
    scale /= 2.0L;
    ++squarings;
  }
  const LD tau = static_cast<LD>(t) / std::ldexp(1.0L, squarings);
  auto matmul = [n](const std::vector<CLD>& a, const std::vector<CLD>& b) {
    std::vector<CLD> c(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) {
        const CLD aik = a[i * n + k];
        for (std::size_t j = 0; j < n; ++j) c[i * n + j] += aik * b[k * n + j];
      }
    return c;
  };
  std::vector<CLD> x(n * n);  // -i tau H
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) x[i * n + j] = CLD(0.0L, -tau * static_cast<LD>(h(i, j)));
  std::vector<CLD> u(n * n), term(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    u[i * n + i] = 1.0L;
    term[i * n + i] = 1.0L;
  }
  for (int k = 1; k <= 30; ++k) {
    term = matmul(term, x);
    for (auto& z : term) z /= static_cast<LD>(k);
    for (std::size_t i = 0; i < n * n; ++i) u[i] += term[i];
  }
  for (int q = 0; q < squarings; ++q) u = matmul(u, u);
  return u;
}

inline gtqa::ComplexVector apply(const std::vector<CLD>& u, const gtqa::ComplexVector& v) {
  const std::size_t n = v.size();
  gtqa::ComplexVector out(n);
  for (std::size_t i = 0; i < n; ++i) {
    CLD acc = 0.0L;
    for (std::size_t j = 0; j < n; ++j) acc += u[i * n + j] * CLD(v[j].real(), v[j].imag());
    out[i] = gtqa::Complex(static_cast<double>(acc.real()), static_cast<double>(acc.imag()));
  }
  return out;
}

// Probability that the absorbing chain started at `start` has reached
// `target` within `steps` transitions, by propagating the distribution.
inline double hit_within(const gtqa::Matrix& transitions, std::size_t start, std::size_t target,
                         std::uint64_t steps) {
  const std::size_t d = transitions.rows();
  std::vector<LD> p(d, 0.0L), next(d);
  p[start] = 1.0L;
  LD absorbed = 0.0L;
  for (std::uint64_t k = 0; k < steps; ++k) {
    std::fill(next.begin(), next.end(), 0.0L);
    for (std::size_t i = 0; i < d; ++i) {
      if (p[i] == 0.0L) continue;
      for (std::size_t j = 0; j < d; ++j) next[j] += p[i] * static_cast<LD>(transitions(i, j));
    }
    absorbed += next[target];
    next[target] = 0.0L;
    p.swap(next);
  }
  return static_cast<double>(absorbed);
}

// Expected hitting time of `target` from every state: solves
// (I - Q) h = 1 on the transient states by Gaussian elimination.
inline std::vector<double> expected_hitting_times(const gtqa::Matrix& transitions, std::size_t target) {
  const std::size_t d = transitions.rows();
  std::vector<std::size_t> states;
  for (std::size_t i = 0; i < d; ++i)
    if (i != target) states.push_back(i);
  const std::size_t m = states.size();
  std::vector<LD> a(m * (m + 1), 0.0L);
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < m; ++c)
      a[r * (m + 1) + c] = (r == c ? 1.0L : 0.0L) - static_cast<LD>(transitions(states[r], states[c]));
    a[r * (m + 1) + m] = 1.0L;
  }
  for (std::size_t col = 0; col < m; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < m; ++r)
      if (std::fabs(a[r * (m + 1) + col]) > std::fabs(a[piv * (m + 1) + col])) piv = r;
    for (std::size_t c = 0; c <= m; ++c) std::swap(a[col * (m + 1) + c], a[piv * (m + 1) + c]);
    for (std::size_t r = 0; r < m; ++r) {
      if (r == col) continue;
      const LD f = a[r * (m + 1) + col] / a[col * (m + 1) + col];
      for (std::size_t c = col; c <= m; ++c) a[r * (m + 1) + c] -= f * a[col * (m + 1) + c];
    }
  }
  std::vector<double> h(d, 0.0);
  for (std::size_t r = 0; r < m; ++r) h[states[r]] = static_cast<double>(a[r * (m + 1) + m] / a[r * (m + 1) + r]);
  return h;
}

}  // namespace oracle
