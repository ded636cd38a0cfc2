#pragma once

// Glued-trees instance, its column-basis reduction, and the noiseless
// annealing Hamiltonian
//
//   H(s) = (1-s) alpha H0 - s(1-s) A + s alpha H1,   s in [0, 1],
//
// with H0 = -|ENTRANCE><ENTRANCE|, H1 = -|EXIT><EXIT| and A the adjacency
// matrix rescaled by 1/sqrt(2) so that its column-basis form has unit bonds
// everywhere except sqrt(2) across the glue.

#include <algorithm>
#include <bit>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gtqa/error.hpp"
#include "gtqa/linalg.hpp"
#include "gtqa/random.hpp"

namespace gtqa {

inline const double kDefaultAlpha = 1.0 / std::sqrt(8.0);

// Number of vertices in each of the 2n+2 columns: 2^j on the entrance side,
// mirrored on the exit side.
inline std::vector<std::uint64_t> column_sizes(int n) {
  if (n < 1) throw InvalidParameter("column_sizes: tree depth n must be >= 1, got " + std::to_string(n));
  if (n > 61) throw InvalidParameter("column_sizes: tree depth n too large for 64-bit counts");
  const int dim = 2 * n + 2;
  std::vector<std::uint64_t> sizes(dim);
  for (int j = 0; j < dim; ++j) {
    sizes[j] = j <= n ? (std::uint64_t{1} << j) : (std::uint64_t{1} << (2 * n + 1 - j));
  }
  return sizes;
}

// Total vertices of the glued trees, 2^(n+2) - 2.
inline std::uint64_t vertex_count(int n) {
  if (n < 1 || n > 61) throw InvalidParameter("vertex_count: tree depth out of range");
  return (std::uint64_t{1} << (n + 2)) - 2;
}

class HamiltonianParams {
 public:
  explicit HamiltonianParams(int n, double alpha = kDefaultAlpha) : n_(n), alpha_(alpha) {
    if (n < 1) throw InvalidParameter("tree depth n must be >= 1, got " + std::to_string(n));
    if (!(alpha > 0.0 && alpha < 0.5)) {
      throw InvalidParameter("alpha must lie strictly inside (0, 1/2), got " + std::to_string(alpha));
    }
  }

  int n() const noexcept { return n_; }
  double alpha() const noexcept { return alpha_; }
  std::size_t dimension() const noexcept { return static_cast<std::size_t>(2 * n_ + 2); }

 private:
  int n_;
  double alpha_;
};

// A family s -> H(s) of real symmetric matrices of fixed dimension.
template <class F>
concept HamiltonianFamily = requires(const F& f, double s, Matrix& out) {
  { f.dimension() } -> std::convertible_to<std::size_t>;
  f.evaluate_into(s, out);
};

template <HamiltonianFamily F>
Matrix evaluate(const F& family, double s) {
  Matrix m(family.dimension(), family.dimension());
  family.evaluate_into(s, m);
  return m;
}

// Half-bandwidth of every H(s) in the family: families that know they are
// banded expose bandwidth(); anything else is treated as dense.
template <HamiltonianFamily F>
std::size_t family_bandwidth(const F& family) {
  if constexpr (requires { { family.bandwidth() } -> std::convertible_to<std::size_t>; }) {
    return std::min<std::size_t>(family.bandwidth(), family.dimension() - 1);
  } else {
    return family.dimension() - 1;
  }
}

inline void require_unit_interval(double s, const char* who) {
  if (!(s >= 0.0 && s <= 1.0)) {
    throw DomainError(std::string(who) + ": anneal parameter s=" + std::to_string(s) +
                      " outside [0, 1]");
  }
}

// Noiseless column-basis Hamiltonian. Immutable; evaluation is reentrant.
class ColumnHamiltonian {
 public:
  explicit ColumnHamiltonian(HamiltonianParams params) : params_(params) {}

  const HamiltonianParams& params() const noexcept { return params_; }
  std::size_t dimension() const noexcept { return params_.dimension(); }
  std::size_t bandwidth() const noexcept { return 1; }

  // Column-basis adjacency after the 1/sqrt(2) rescaling: tridiagonal, unit
  // bonds, sqrt(2) at the glue (n, n+1).
  Matrix adjacency() const {
    const std::size_t d = dimension();
    Matrix a(d, d);
    for (std::size_t j = 0; j + 1 < d; ++j) {
      const double bond = glue_bond(j) ? std::sqrt(2.0) : 1.0;
      a(j, j + 1) = bond;
      a(j + 1, j) = bond;
    }
    return a;
  }

  Matrix initial_term() const {
    Matrix h(dimension(), dimension());
    h(0, 0) = -1.0;
    return h;
  }

  Matrix final_term() const {
    const std::size_t d = dimension();
    Matrix h(d, d);
    h(d - 1, d - 1) = -1.0;
    return h;
  }

  void evaluate_into(double s, Matrix& out) const {
    require_unit_interval(s, "ColumnHamiltonian");
    const std::size_t d = dimension();
    if (out.rows() != d || out.cols() != d) out = Matrix(d, d);
    out.fill(0.0);
    const double alpha = params_.alpha();
    const double hop = -s * (1.0 - s);
    out(0, 0) = -alpha * (1.0 - s);
    out(d - 1, d - 1) += -alpha * s;
    for (std::size_t j = 0; j + 1 < d; ++j) {
      const double v = glue_bond(j) ? std::sqrt(2.0) * hop : hop;
      out(j, j + 1) = v;
      out(j + 1, j) = v;
    }
  }

  Matrix operator()(double s) const { return evaluate(*this, s); }

 private:
  bool glue_bond(std::size_t j) const noexcept { return j == static_cast<std::size_t>(params_.n()); }

  HamiltonianParams params_;
};

// Column reversal P with P_ij = delta(i, dim-1-j).
class ReflectionOperator {
 public:
  explicit ReflectionOperator(std::size_t dimension) : dimension_(dimension) {
    if (dimension == 0) throw InvalidParameter("reflection dimension must be positive");
  }

  std::size_t dimension() const noexcept { return dimension_; }
  std::size_t image(std::size_t i) const noexcept { return dimension_ - 1 - i; }

  Matrix matrix() const {
    Matrix p(dimension_, dimension_);
    for (std::size_t i = 0; i < dimension_; ++i) p(i, image(i)) = 1.0;
    return p;
  }

  // P M P, i.e. M with rows and columns reversed.
  Matrix conjugate(const Matrix& m) const {
    require_dimension(m.rows() == dimension_ && m.cols() == dimension_);
    Matrix r(dimension_, dimension_);
    for (std::size_t i = 0; i < dimension_; ++i)
      for (std::size_t j = 0; j < dimension_; ++j) r(i, j) = m(image(i), image(j));
    return r;
  }

  template <class T>
  std::vector<T> apply(std::span<const T> v) const {
    require_dimension(v.size() == dimension_);
    return std::vector<T>(v.rbegin(), v.rend());
  }

 private:
  void require_dimension(bool ok) const {
    if (!ok) throw DimensionMismatch("reflection operator dimension differs from operand");
  }

  std::size_t dimension_;
};

inline ReflectionOperator reflection_operator(int n) {
  if (n < 1) throw InvalidParameter("reflection_operator: n must be >= 1");
  return ReflectionOperator(static_cast<std::size_t>(2 * n + 2));
}

using Edge = std::pair<std::uint32_t, std::uint32_t>;

// Explicit vertex-level glued trees. Vertices of the entrance tree occupy
// [0, 2^(n+1)-1) in heap order (children of v are 2v+1, 2v+2); the exit tree
// follows with the same layout, so the EXIT root is vertex 2^(n+1)-1.
struct GluedTreesInstance {
  int n = 0;
  std::uint64_t vertex_count = 0;
  std::vector<std::uint64_t> column_sizes;
  std::vector<Edge> edges;
  std::vector<int> column_of;

  std::uint32_t entrance() const noexcept { return 0; }
  std::uint32_t exit() const noexcept { return static_cast<std::uint32_t>(vertex_count / 2); }

  std::vector<std::vector<std::uint32_t>> adjacency_lists() const {
    std::vector<std::vector<std::uint32_t>> adj(vertex_count);
    for (const auto& [u, v] : edges) {
      adj[u].push_back(v);
      adj[v].push_back(u);
    }
    return adj;
  }

  std::vector<int> degrees() const {
    std::vector<int> deg(vertex_count, 0);
    for (const auto& [u, v] : edges) {
      ++deg[u];
      ++deg[v];
    }
    return deg;
  }
};

// Builds both trees and glues their leaves along a uniformly random
// alternating cycle a0 b0 a1 b1 ... a_{m-1} b_{m-1} a0, which gives every
// leaf exactly two partners in the opposite tree.
inline GluedTreesInstance build_vertex_graph(int n, Rng& rng) {
  if (n < 1) throw InvalidParameter("build_vertex_graph: n must be >= 1");
  if (n > 24) throw InvalidParameter("build_vertex_graph: n > 24 exceeds the explicit-graph budget");
  GluedTreesInstance g;
  g.n = n;
  g.vertex_count = vertex_count(n);
  g.column_sizes = column_sizes(n);
  const std::uint32_t tree = static_cast<std::uint32_t>(g.vertex_count / 2);
  g.column_of.resize(g.vertex_count);
  for (std::uint32_t v = 0; v < tree; ++v) {
    const int depth = static_cast<int>(std::bit_width(v + 1u)) - 1;
    g.column_of[v] = depth;
    g.column_of[tree + v] = 2 * n + 1 - depth;
  }
  g.edges.reserve(static_cast<std::size_t>(3 * g.vertex_count / 2));
  for (std::uint32_t offset : {0u, tree}) {
    for (std::uint32_t v = 1; v < tree; ++v) g.edges.emplace_back(offset + (v - 1) / 2, offset + v);
  }
  const std::uint32_t first_leaf = (1u << n) - 1;
  std::vector<std::uint32_t> left;
  std::vector<std::uint32_t> right;
  for (std::uint32_t v = first_leaf; v < tree; ++v) {
    left.push_back(v);
    right.push_back(tree + v);
  }
  shuffle(left, rng);
  shuffle(right, rng);
  const std::size_t m = left.size();
  for (std::size_t i = 0; i < m; ++i) {
    g.edges.emplace_back(left[i], right[i]);
    g.edges.emplace_back(right[i], left[(i + 1) % m]);
  }
  return g;
}

// <col_j| A |col_k> computed from the explicit edge list, then divided by
// sqrt(2). Independent of the gluing.
inline Matrix project_adjacency_to_columns(const GluedTreesInstance& g) {
  const std::size_t d = g.column_sizes.size();
  Matrix p(d, d);
  for (const auto& [u, v] : g.edges) {
    const int cu = g.column_of[u];
    const int cv = g.column_of[v];
    const double w = 1.0 / std::sqrt(static_cast<double>(g.column_sizes[cu]) *
                                     static_cast<double>(g.column_sizes[cv]));
    p(cu, cv) += w;
    p(cv, cu) += w;
  }
  p *= 1.0 / std::sqrt(2.0);
  return p;
}

}  // namespace gtqa
