#pragma once

// Oracle-noise models. A realization holds a unit-strength symmetric matrix
// h; the noisy Hamiltonian is H(s) + epsilon * h with h independent of s.
//
//   LA  long-range asymmetric:  h = (M + M^T)/sqrt(2), M_ij ~ N(0,1) (GOE)
//   LS  long-range symmetric:   h = (w + P w P)/sqrt(2), w from the GOE
//   SA  short-range asymmetric: h_ij ~ N(0,1) for |i-j| = 1, zero otherwise
//   SS  short-range symmetric:  (h_SA + P h_SA P)/sqrt(2)
//   LA_NORMALIZED: an LA sample divided by its largest eigenvalue
//
// The GOE density c_N exp(-Tr h^2 / (2 sigma^2)) is realized through the
// entrywise construction above (sigma fixed by off-diagonal variance 1);
// c_N never needs to be evaluated.

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>

#include "gtqa/eigensolver.hpp"
#include "gtqa/error.hpp"
#include "gtqa/linalg.hpp"
#include "gtqa/oracle_model.hpp"
#include "gtqa/random.hpp"

namespace gtqa {

enum class NoiseModel { None, LA, LS, SA, SS, LANormalized };

inline constexpr NoiseModel kAllNoiseModels[] = {NoiseModel::None, NoiseModel::LA, NoiseModel::LS,
                                                 NoiseModel::SA, NoiseModel::SS,
                                                 NoiseModel::LANormalized};

inline std::string_view to_string(NoiseModel m) {
  switch (m) {
    case NoiseModel::None: return "NONE";
    case NoiseModel::LA: return "LA";
    case NoiseModel::LS: return "LS";
    case NoiseModel::SA: return "SA";
    case NoiseModel::SS: return "SS";
    case NoiseModel::LANormalized: return "LA_NORMALIZED";
  }
  throw InvalidParameter("unknown noise model tag");
}

inline NoiseModel parse_noise_model(std::string_view tag) {
  for (NoiseModel m : kAllNoiseModels) {
    if (to_string(m) == tag) return m;
  }
  throw InvalidParameter("unknown noise model '" + std::string(tag) +
                         "' (expected NONE, LA, LS, SA, SS or LA_NORMALIZED)");
}

inline bool is_reflection_symmetric(NoiseModel m) {
  return m == NoiseModel::None || m == NoiseModel::LS || m == NoiseModel::SS;
}

inline bool is_long_range(NoiseModel m) {
  return m == NoiseModel::LA || m == NoiseModel::LS || m == NoiseModel::LANormalized;
}

// Divisor used by LA_NORMALIZED.
enum class Normalization {
  SpectralNorm,    // largest |eigenvalue|
  SignedLargest,   // largest (signed) eigenvalue
};

struct NoiseRealization {
  NoiseModel model = NoiseModel::None;
  double epsilon = 0.0;
  Matrix matrix;  // unit-strength h
  std::uint64_t seed = 0;
  std::uint64_t realization_index = 0;

  std::size_t dimension() const noexcept { return matrix.rows(); }
  // epsilon * h, the term actually added to H(s).
  Matrix scaled() const { return epsilon * matrix; }
};

// (M + M^T)/sqrt(2) with M_ij iid N(0,1): off-diagonal variance 1, diagonal 2.
inline Matrix sample_goe(std::size_t dim, Rng& rng) {
  if (dim < 1) throw InvalidParameter("sample_goe: dimension must be >= 1");
  Matrix m(dim, dim);
  for (double& x : m.data()) x = rng.normal();
  Matrix h(dim, dim);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) h(i, j) = (m(i, j) + m(j, i)) * inv_sqrt2;
  return h;
}

// (h + P h P)/sqrt(2). Commutes with P by construction.
inline Matrix symmetrize_reflection(const Matrix& h, const ReflectionOperator& p) {
  if (h.rows() != p.dimension() || h.cols() != p.dimension()) {
    throw DimensionMismatch("symmetrize_reflection: matrix and reflection dimensions differ");
  }
  Matrix out = h + p.conjugate(h);
  out *= 1.0 / std::sqrt(2.0);
  return out;
}

// Symmetric tridiagonal with zero diagonal and N(0,1) bonds.
inline Matrix sample_short_range(std::size_t dim, Rng& rng) {
  if (dim < 2) throw InvalidParameter("sample_short_range: dimension must be >= 2");
  Matrix h(dim, dim);
  for (std::size_t i = 0; i + 1 < dim; ++i) {
    const double g = rng.normal();
    h(i, i + 1) = g;
    h(i + 1, i) = g;
  }
  return h;
}

inline double normalization_divisor(const Matrix& h, Normalization mode) {
  const RealVector values = lowest_eigenvalues(tridiagonalize(h), h.rows());
  const double divisor = mode == Normalization::SpectralNorm
                             ? std::max(std::abs(values.front()), std::abs(values.back()))
                             : values.back();
  if (!(std::abs(divisor) > 0.0)) throw DomainError("noise normalization divisor is zero");
  return divisor;
}

// Deterministic in (model, n, seed, index): the sampler stream is
// Rng(seed, index). epsilon is carried along, never baked into the matrix.
inline NoiseRealization build_noise(NoiseModel model, int n, double epsilon, std::uint64_t seed,
                                    std::uint64_t index,
                                    Normalization normalization = Normalization::SpectralNorm) {
  if (!(epsilon >= 0.0)) throw InvalidParameter("noise strength epsilon must be >= 0");
  const auto dim = HamiltonianParams(n).dimension();
  NoiseRealization r;
  r.model = model;
  r.epsilon = epsilon;
  r.seed = seed;
  r.realization_index = index;
  Rng rng(seed, index);
  const ReflectionOperator p(dim);
  switch (model) {
    case NoiseModel::None:
      r.matrix = Matrix(dim, dim);
      break;
    case NoiseModel::LA:
      r.matrix = sample_goe(dim, rng);
      break;
    case NoiseModel::LS:
      r.matrix = symmetrize_reflection(sample_goe(dim, rng), p);
      break;
    case NoiseModel::SA:
      r.matrix = sample_short_range(dim, rng);
      break;
    case NoiseModel::SS:
      r.matrix = symmetrize_reflection(sample_short_range(dim, rng), p);
      break;
    case NoiseModel::LANormalized: {
      Matrix h = sample_goe(dim, rng);
      h *= 1.0 / normalization_divisor(h, normalization);
      r.matrix = std::move(h);
      break;
    }
    default:
      throw InvalidParameter("build_noise: unknown noise model tag");
  }
  return r;
}

// H(s) + epsilon h. Keeps its own copy of epsilon h.
class NoisyHamiltonian {
 public:
  NoisyHamiltonian(ColumnHamiltonian base, const NoiseRealization& noise)
      : base_(std::move(base)), noise_(noise.scaled()) {
    if (noise_.rows() != base_.dimension() || noise_.cols() != base_.dimension()) {
      throw DimensionMismatch("noisy_hamiltonian: noise dimension differs from H(s)");
    }
    const std::size_t d = noise_.rows();
    bandwidth_ = 1;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j)
        if (noise_(i, j) != 0.0) bandwidth_ = std::max(bandwidth_, i > j ? i - j : j - i);
  }

  std::size_t dimension() const noexcept { return base_.dimension(); }
  std::size_t bandwidth() const noexcept { return bandwidth_; }
  const ColumnHamiltonian& base() const noexcept { return base_; }
  const Matrix& perturbation() const noexcept { return noise_; }

  void evaluate_into(double s, Matrix& out) const {
    base_.evaluate_into(s, out);
    out += noise_;
  }

  Matrix operator()(double s) const { return evaluate(*this, s); }

 private:
  ColumnHamiltonian base_;
  Matrix noise_;
  std::size_t bandwidth_ = 1;
};

inline NoisyHamiltonian noisy_hamiltonian(const ColumnHamiltonian& h, const NoiseRealization& nr) {
  return NoisyHamiltonian(h, nr);
}

// Row-major CSV, one matrix row per line, 17 significant digits.
inline void write_matrix_csv(std::ostream& out, const Matrix& m) {
  std::ostringstream buf;
  buf.precision(17);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) buf << ',';
      buf << m(i, j);
    }
    buf << '\n';
  }
  out << buf.str();
}

// Inverse of write_matrix_csv. Lines starting with '#' and blank lines are
// skipped.
inline Matrix read_matrix_csv(std::istream& in) {
  std::vector<RealVector> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    RealVector row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
        if (cell.find_first_not_of(" \t\r", used) != std::string::npos) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw IoError("matrix CSV: cannot parse number '" + cell + "'");
      }
    }
    if (!rows.empty() && row.size() != rows.front().size()) throw IoError("matrix CSV: ragged rows");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw IoError("matrix CSV: no rows");
  Matrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  return m;
}

}  // namespace gtqa
