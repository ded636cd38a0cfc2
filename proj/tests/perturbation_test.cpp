#include <gtest/gtest.h>

#include <cmath>

#include "gtqa/noise.hpp"
#include "gtqa/perturbation.hpp"
#include "gtqa/spectral.hpp"

using namespace gtqa;

namespace {

Matrix noiseless(int n, double s) { return ColumnHamiltonian(HamiltonianParams(n))(s); }

}  // namespace

TEST(Perturbation, ZeroEpsilonIsExact) {
  const auto dec = eigendecompose(noiseless(5, 0.3));
  const auto h = build_noise(NoiseModel::LA, 5, 1.0, 1, 0).matrix;
  EXPECT_DOUBLE_EQ(first_order_gap(dec, h, 0.0), dec.eigenvalues[1] - dec.eigenvalues[0]);
  EXPECT_DOUBLE_EQ(predicted_ground_overlap(dec, h, 0.0), 1.0);
  const auto p = predict(dec, h, 0.0, 0.3);
  EXPECT_TRUE(p.valid);
  EXPECT_DOUBLE_EQ(p.predicted_gap, p.noiseless_gap);
}

TEST(Perturbation, GapLinearAndDeficitQuadratic) {
  const auto dec = eigendecompose(noiseless(6, 0.4));
  const auto h = build_noise(NoiseModel::LA, 6, 1.0, 2, 0).matrix;
  const double gap = dec.eigenvalues[1] - dec.eigenvalues[0];
  const double e = 1e-3;
  EXPECT_NEAR(first_order_gap(dec, h, 2 * e) - gap, 2 * (first_order_gap(dec, h, e) - gap), 1e-15);
  const double d1 = 1.0 - predicted_ground_overlap(dec, h, e);
  const double d2 = 1.0 - predicted_ground_overlap(dec, h, 2 * e);
  EXPECT_NEAR(d2 / d1, 4.0, 1e-6);
}

TEST(Perturbation, AgreesWithExactDiagonalizationAtSmallEpsilon) {
  const Matrix h0 = noiseless(6, 0.4);
  const auto dec = eigendecompose(h0);
  const auto h = build_noise(NoiseModel::LA, 6, 1.0, 3, 0).matrix;
  double previous_ratio = 0.0;
  double previous_gap_coeff = 0.0;
  for (double e : {1e-3, 1e-4}) {
    const auto ex = exact_perturbed(h0, dec, h, e);
    // First order leaves an error quadratic in epsilon.
    const double gap_coeff = std::abs(first_order_gap(dec, h, e) - ex.gap) / (e * e);
    if (previous_gap_coeff > 0.0) {
      EXPECT_NEAR(gap_coeff / previous_gap_coeff, 1.0, 0.05);
    }
    previous_gap_coeff = gap_coeff;
    const double pred_deficit = 1.0 - predicted_ground_overlap(dec, h, e);
    const double ratio = std::abs(pred_deficit - ex.overlap_deficit) / (e * e * e);
    if (previous_ratio > 0.0) {
      EXPECT_LT(ratio, 20 * previous_ratio + 1e-3);
    }
    previous_ratio = ratio;
    EXPECT_NEAR(ex.overlap_deficit / pred_deficit, 1.0, 0.05);
  }
}

TEST(Perturbation, GoeCorrectionHasVarianceFour) {
  const auto dec = eigendecompose(noiseless(4, 0.5));
  const double gap = dec.eigenvalues[1] - dec.eigenvalues[0];
  Rng rng(12);
  const int samples = 20000;
  double s1 = 0, s2 = 0;
  for (int k = 0; k < samples; ++k) {
    const Matrix h = sample_goe(dec.dimension(), rng);
    const double c = first_order_gap(dec, h, 1.0) - gap;
    s1 += c;
    s2 += c * c;
  }
  const double mean = s1 / samples;
  EXPECT_NEAR(mean, 0.0, 4 * 2.0 / std::sqrt(samples));
  EXPECT_NEAR(s2 / samples - mean * mean, 4.0, 0.2);
}

TEST(Perturbation, DegenerateGroundStateRefused) {
  const auto dec = eigendecompose(Matrix::diagonal(RealVector{1.0, 1.0, 2.0}));
  EXPECT_THROW(predicted_ground_overlap(dec, Matrix(3, 3), 0.1), DegenerateSpectrum);
  EXPECT_THROW(first_order_gap(dec, Matrix(2, 2), 0.1), DimensionMismatch);
}

TEST(Perturbation, ValidityFlagDropsWhenGapCloses) {
  const auto dec = eigendecompose(Matrix::diagonal(RealVector{0.0, 0.1, 1.0}));
  Matrix h(3, 3);
  h(0, 0) = 1.0;  // raises E0 relative to E1
  EXPECT_TRUE(predict(dec, h, 0.05).valid);
  EXPECT_FALSE(predict(dec, h, 0.2).valid);
}

TEST(OverlapDeficit, StableForTinyRotations) {
  const auto dec = eigendecompose(Matrix::diagonal(RealVector{0.0, 1.0}));
  const double theta = 1e-9;
  const RealVector psi{std::cos(theta), std::sin(theta)};
  EXPECT_NEAR(overlap_deficit(dec, psi) / (0.5 * theta * theta), 1.0, 1e-6);
}
