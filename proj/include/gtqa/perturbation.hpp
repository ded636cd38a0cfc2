#pragma once

// First-order perturbation theory around the noiseless spectrum at a fixed
// anneal point:
//
//   gap      ~ Delta(s) + eps (<phi_1|h|phi_1> - <phi_0|h|phi_0>)
//   overlap  ~ 1 - (eps^2 / 2) sum_{k>0} h_k0^2 / (E_0 - E_k)^2
//
// For GOE noise the gap correction is eps N(0, 4).

#include <algorithm>
#include <cmath>
#include <span>
#include <string>

#include "gtqa/eigensolver.hpp"
#include "gtqa/error.hpp"
#include "gtqa/linalg.hpp"

namespace gtqa {

inline constexpr double kDegeneracyThreshold = 1e-10;

struct PerturbationPrediction {
  double s = 0.0;
  double epsilon = 0.0;
  double noiseless_gap = 0.0;
  double predicted_gap = 0.0;
  double predicted_overlap = 1.0;
  RealVector couplings;  // h_k0 = <phi_k|h|phi_0>
  RealVector diagonal;   // <phi_k|h|phi_k>
  // False once the predicted gap is no longer positive (series breaks down).
  bool valid = true;
};

namespace detail {

inline void require_matching(const SpectralDecomposition& dec, const Matrix& h, const char* who) {
  if (h.rows() != dec.dimension() || h.cols() != dec.dimension()) {
    throw DimensionMismatch(std::string(who) + ": perturbation and decomposition dimensions differ");
  }
  if (dec.dimension() < 2) throw InvalidParameter(std::string(who) + ": need at least two levels");
}

// <phi_j| h |phi_k>
inline double matrix_element(const SpectralDecomposition& dec, const Matrix& h, std::size_t j, std::size_t k) {
  const std::size_t d = dec.dimension();
  double acc = 0.0;
  for (std::size_t a = 0; a < d; ++a) {
    const double va = dec.eigenvectors(a, j);
    if (va == 0.0) continue;
    double row = 0.0;
    for (std::size_t b = 0; b < d; ++b) row += h(a, b) * dec.eigenvectors(b, k);
    acc += va * row;
  }
  return acc;
}

}  // namespace detail

inline double first_order_gap(const SpectralDecomposition& dec, const Matrix& h, double epsilon) {
  detail::require_matching(dec, h, "first_order_gap");
  const double gap = dec.eigenvalues[1] - dec.eigenvalues[0];
  return gap + epsilon * (detail::matrix_element(dec, h, 1, 1) - detail::matrix_element(dec, h, 0, 0));
}

inline double predicted_ground_overlap(const SpectralDecomposition& dec, const Matrix& h, double epsilon) {
  detail::require_matching(dec, h, "predicted_ground_overlap");
  const double e0 = dec.eigenvalues[0];
  if (dec.eigenvalues[1] - e0 <= kDegeneracyThreshold) {
    throw DegenerateSpectrum("predicted_ground_overlap: ground state is degenerate");
  }
  double sum = 0.0;
  for (std::size_t k = 1; k < dec.dimension(); ++k) {
    const double hk0 = detail::matrix_element(dec, h, k, 0);
    const double de = e0 - dec.eigenvalues[k];
    sum += hk0 * hk0 / (de * de);
  }
  return 1.0 - 0.5 * epsilon * epsilon * sum;
}

inline PerturbationPrediction predict(const SpectralDecomposition& dec, const Matrix& h, double epsilon,
                                      double s = 0.0) {
  detail::require_matching(dec, h, "predict");
  PerturbationPrediction p;
  p.s = s;
  p.epsilon = epsilon;
  p.noiseless_gap = dec.eigenvalues[1] - dec.eigenvalues[0];
  p.couplings.resize(dec.dimension());
  p.diagonal.resize(dec.dimension());
  for (std::size_t k = 0; k < dec.dimension(); ++k) {
    p.couplings[k] = detail::matrix_element(dec, h, k, 0);
    p.diagonal[k] = detail::matrix_element(dec, h, k, k);
  }
  p.predicted_gap = p.noiseless_gap + epsilon * (p.diagonal[1] - p.diagonal[0]);
  p.predicted_overlap = predicted_ground_overlap(dec, h, epsilon);
  p.valid = p.predicted_gap > 0.0;
  return p;
}

// 1 - |<phi_0|psi>| for a unit vector psi, from the weight S outside the
// ground state: 1 - sqrt(1 - S) = S / (1 + sqrt(1 - S)), free of cancellation.
inline double overlap_deficit(const SpectralDecomposition& dec, std::span<const double> psi) {
  if (psi.size() != dec.dimension()) throw DimensionMismatch("overlap_deficit: vector length differs");
  double outside = 0.0;
  for (std::size_t k = 1; k < dec.dimension(); ++k) {
    const double c = dot(dec.eigenvector(k), psi);
    outside += c * c;
  }
  outside = std::min(outside, 1.0);
  return outside / (1.0 + std::sqrt(1.0 - outside));
}

// Exact counterpart of a prediction: diagonalize H + eps h directly.
struct ExactPerturbed {
  double gap = 0.0;
  double overlap = 1.0;          // |<phi_0|phi~_0>|
  double overlap_deficit = 0.0;  // 1 - overlap, computed stably
};

inline ExactPerturbed exact_perturbed(const Matrix& hamiltonian, const SpectralDecomposition& dec,
                                      const Matrix& h, double epsilon) {
  detail::require_matching(dec, h, "exact_perturbed");
  Matrix noisy = hamiltonian;
  noisy.add_scaled(h, epsilon);
  const auto perturbed = eigendecompose(noisy);
  ExactPerturbed r;
  r.gap = perturbed.eigenvalues[1] - perturbed.eigenvalues[0];
  r.overlap_deficit = overlap_deficit(dec, perturbed.eigenvector(0));
  r.overlap = 1.0 - r.overlap_deficit;
  return r;
}

}  // namespace gtqa
