#include <gtest/gtest.h>

#include <cmath>

#include "gtqa/linalg.hpp"
#include "gtqa/statistics.hpp"

using namespace gtqa;

TEST(Median, OddEvenAndEmpty) {
  EXPECT_EQ(median({3, 1, 2}), 2.0);
  EXPECT_EQ(median({4, 1, 3, 2}), 2.5);
  EXPECT_THROW(median({}), InvalidParameter);
}

TEST(Quantile, Interpolates) {
  const RealVector v{0, 1, 2, 3, 4};
  EXPECT_DOUBLE_EQ(sorted_quantile(v, 0.5), 2.0);
  EXPECT_DOUBLE_EQ(sorted_quantile(v, 0.125), 0.5);
}

TEST(Bootstrap, ConstantSamplesGiveZeroWidth) {
  Rng rng(1);
  const RealVector v(30, 0.7);
  const auto r = bootstrap_median(v, rng);
  EXPECT_EQ(r.median, 0.7);
  EXPECT_EQ(r.ci_low, 0.7);
  EXPECT_EQ(r.ci_high, 0.7);
}

TEST(Bootstrap, IntervalBoundedByRange) {
  Rng rng(2);
  const RealVector v{1, 2, 3, 4, 5};
  const auto r = bootstrap_median(v, rng);
  EXPECT_EQ(r.median, 3.0);
  EXPECT_GE(r.ci_low, 1.0);
  EXPECT_LE(r.ci_high, 5.0);
  EXPECT_LE(r.ci_low, r.median);
  EXPECT_GE(r.ci_high, r.median);
  EXPECT_EQ(r.resamples, 1000u);
}

TEST(Bootstrap, UniformMedianNearOneHalf) {
  Rng draw(3);
  RealVector v(10000);
  for (double& x : v) x = draw.uniform();
  Rng rng(4);
  const auto r = bootstrap_median(v, rng);
  EXPECT_NEAR(r.median, 0.5, 0.02);
  EXPECT_LT(r.ci_high - r.ci_low, 0.05);
}

TEST(Bootstrap, RejectsBadInput) {
  Rng rng(5);
  EXPECT_THROW(bootstrap_median(RealVector{}, rng), InvalidParameter);
  EXPECT_THROW(bootstrap_median(RealVector{1.0}, rng, 0), InvalidParameter);
  EXPECT_THROW(bootstrap_median(RealVector{1.0}, rng, 10, 1.5), InvalidParameter);
}

TEST(LinearFit, ExactLine) {
  const RealVector x{0, 1, 2, 3}, y{1, 3, 5, 7};
  const auto f = linear_fit(x, y);
  EXPECT_NEAR(f.slope, 2.0, 1e-14);
  EXPECT_NEAR(f.intercept, 1.0, 1e-14);
  EXPECT_NEAR(f.r_squared, 1.0, 1e-14);
  EXPECT_THROW(linear_fit(RealVector{1, 1}, RealVector{2, 3}), InvalidParameter);
}

TEST(ScalingFit, ExactExponentialDecay) {
  RealVector n, y;
  for (int k = 4; k <= 20; k += 2) {
    n.push_back(k);
    y.push_back(std::exp2(-k / 3.0));
  }
  const auto f = fit_scaling(n, y, FitForm::Exp);
  EXPECT_NEAR(f.exponent, -1.0 / 3.0, 1e-9);
  EXPECT_NEAR(f.prefactor, 1.0, 1e-9);
  EXPECT_TRUE(f.contains(f.exponent));
  EXPECT_EQ(classify_speedup(f.exponent - 1e-3), SpeedupClass::NoSpeedup);
}

TEST(ScalingFit, ExactPowerLaw) {
  const RealVector n{8, 10, 12, 14};
  RealVector y;
  for (double x : n) y.push_back(5.0 * std::pow(x, 2.86));
  const auto f = fit_scaling(n, y, FitForm::Poly);
  EXPECT_NEAR(f.exponent, 2.86, 1e-10);
  EXPECT_NEAR(f.prefactor, 5.0, 1e-8);
  EXPECT_EQ(f.x_min, 8.0);
  EXPECT_EQ(f.x_max, 14.0);
}

TEST(ScalingFit, ConfidenceIntervalUsesStudentT) {
  // Residuals +-1 around y = x; slope SE = sqrt(SSE/(m-2)/Sxx).
  const RealVector x{1, 2, 3, 4};
  const RealVector logy{1 + 1, 2 - 1, 3 - 1, 4 + 1};
  RealVector y;
  for (double v : logy) y.push_back(std::exp2(v));
  const auto f = fit_scaling(x, y, FitForm::Exp);
  const double se = std::sqrt(4.0 / 2.0 / 5.0);
  const double t975_df2 = 4.302652729911275;
  EXPECT_NEAR(f.exponent, 1.0, 1e-12);
  EXPECT_NEAR(f.ci_high - f.exponent, t975_df2 * se, 1e-9);
}

TEST(ScalingFit, RejectsBadInput) {
  EXPECT_THROW(fit_scaling(RealVector{1, 2}, RealVector{1, 2}, FitForm::Poly), InvalidParameter);
  EXPECT_THROW(fit_scaling(RealVector{1, 2, 3}, RealVector{1, 0, 2}, FitForm::Exp), InvalidParameter);
  EXPECT_THROW(fit_scaling(RealVector{0, 2, 3}, RealVector{1, 1, 2}, FitForm::Poly), InvalidParameter);
  EXPECT_THROW(parse_fit_form("LOG"), InvalidParameter);
  EXPECT_EQ(parse_fit_form("EXP"), FitForm::Exp);
}

TEST(Speedup, Classification) {
  EXPECT_EQ(classify_speedup(-0.5), SpeedupClass::NoSpeedup);
  EXPECT_EQ(classify_speedup(-0.2), SpeedupClass::PolynomialSpeedup);
  EXPECT_EQ(classify_speedup(0.1), SpeedupClass::NoDecay);
}
