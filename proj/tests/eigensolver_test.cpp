#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "gtqa/eigensolver.hpp"
#include "gtqa/noise.hpp"
#include "gtqa/oracle_model.hpp"
#include "oracles.hpp"

using namespace gtqa;

namespace {

void expect_valid_decomposition(const Matrix& h, const SpectralDecomposition& dec) {
  const std::size_t n = h.rows();
  const Matrix& v = dec.eigenvectors;
  const Matrix vtv = multiply(transpose(v), v);
  EXPECT_LT(max_abs_diff(vtv, Matrix::identity(n)), 1e-10);
  const Matrix recon = multiply(multiply(v, Matrix::diagonal(dec.eigenvalues)), transpose(v));
  EXPECT_LT(max_abs_diff(recon, h), 1e-10 * std::max(1.0, frobenius_norm(h)));
  EXPECT_TRUE(std::is_sorted(dec.eigenvalues.begin(), dec.eigenvalues.end()));
}

}  // namespace

TEST(Jacobi, TwoByTwoSwap) {
  const auto dec = eigendecompose(Matrix{{0, 1}, {1, 0}});
  EXPECT_NEAR(dec.eigenvalues[0], -1.0, 1e-15);
  EXPECT_NEAR(dec.eigenvalues[1], 1.0, 1e-15);
}

TEST(Jacobi, DiagonalInputGivesPermutation) {
  const RealVector d{3.0, -1.0, 2.0, 0.5};
  const auto dec = eigendecompose(Matrix::diagonal(d));
  EXPECT_EQ(dec.eigenvalues, (RealVector{-1.0, 0.5, 2.0, 3.0}));
  for (std::size_t j = 0; j < 4; ++j) {
    int ones = 0;
    for (std::size_t i = 0; i < 4; ++i) {
      const double x = std::abs(dec.eigenvectors(i, j));
      EXPECT_TRUE(x == 0.0 || x == 1.0);
      ones += x == 1.0;
    }
    EXPECT_EQ(ones, 1);
  }
}

TEST(Jacobi, RejectsAsymmetricInput) {
  EXPECT_THROW(eigendecompose(Matrix{{0, 1}, {0.5, 0}}), NotSymmetric);
  EXPECT_THROW(eigendecompose(Matrix(2, 3)), DimensionMismatch);
}

TEST(Jacobi, ReportsNonConvergence) {
  Rng rng(4);
  const Matrix h = sample_goe(12, rng);
  JacobiOptions opts;
  opts.max_sweeps = 1;
  EXPECT_THROW(eigendecompose(h, opts), ConvergenceError);
}

TEST(Jacobi, AgreesWithCharacteristicPolynomialOnRandom4x4) {
  Rng rng(2024);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix h = sample_goe(4, rng);
    const auto dec = eigendecompose(h);
    const auto roots = oracle::charpoly_eigenvalues(h);
    ASSERT_EQ(roots.size(), 4u) << "trial " << trial;
    for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(dec.eigenvalues[k], roots[k], 1e-9);
    expect_valid_decomposition(h, dec);
  }
}

TEST(Jacobi, InvariantsOnAnnealAndNoisyMatrices) {
  for (int n : {1, 6, 15}) {
    const ColumnHamiltonian base{HamiltonianParams(n)};
    for (double s : {0.0, 0.3, 0.5, 0.9}) expect_valid_decomposition(base(s), eigendecompose(base(s)));
    const auto noise = build_noise(NoiseModel::LA, n, 0.5, 1, 0);
    const Matrix h = NoisyHamiltonian(base, noise)(0.4);
    expect_valid_decomposition(h, eigendecompose(h));
  }
}

TEST(Jacobi, SignConventionLargestEntryPositive) {
  const auto dec = eigendecompose(ColumnHamiltonian(HamiltonianParams(3))(0.4));
  for (std::size_t j = 0; j < dec.dimension(); ++j) {
    const auto v = dec.eigenvector(j);
    const auto it = std::max_element(v.begin(), v.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });
    EXPECT_GT(*it, 0.0);
  }
}

TEST(Jacobi, GoldenLowestEigenvaluesAtMidpoint) {
  // 40-digit reference values for n = 6 at s = 1/2.
  const auto dec = eigendecompose(ColumnHamiltonian(HamiltonianParams(6))(0.5));
  EXPECT_NEAR(dec.eigenvalues[0], -0.5303300858899106433, 1e-13);
  EXPECT_NEAR(dec.eigenvalues[1], -0.4712703050069774001, 1e-13);
  EXPECT_NEAR(dec.eigenvalues[2], -0.45048443395120956312, 1e-13);
}

TEST(Jacobi, GoldenFullSpectrumSmallInstances) {
  const auto d1 = eigendecompose(ColumnHamiltonian(HamiltonianParams(1))(0.3));
  const RealVector e1{-0.46349142841925234194, -0.25989770255202507847, -0.0081360634145214076697,
                      0.37797180379252506588};
  for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(d1.eigenvalues[k], e1[k], 1e-14);
  const auto d2 = eigendecompose(ColumnHamiltonian(HamiltonianParams(2))(0.3));
  const RealVector e2{-0.4554702542208735795, -0.35111962961118442586, -0.21715116777142213919,
                      0.039543110423747947409, 0.20718511381993563566, 0.42345943676652279927};
  for (std::size_t k = 0; k < 6; ++k) EXPECT_NEAR(d2.eigenvalues[k], e2[k], 1e-14);
}

TEST(Sturm, BisectionMatchesJacobi) {
  Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix h = sample_goe(10, rng);
    const auto dec = eigendecompose(h);
    const auto low = lowest_eigenvalues(h, 10);
    for (std::size_t k = 0; k < 10; ++k) EXPECT_NEAR(low[k], dec.eigenvalues[k], 1e-12);
    EXPECT_EQ(count_below(tridiagonalize(h), dec.eigenvalues[3] + 1e-9), 4u);
  }
}

TEST(Sturm, TridiagonalShortcutAgrees) {
  const Matrix h = ColumnHamiltonian(HamiltonianParams(8))(0.37);
  const auto a = lowest_eigenvalues(tridiagonal_part(h), 3);
  const auto b = lowest_eigenvalues(h, 3);
  for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(a[k], b[k], 1e-14);
}

TEST(SpectralNorm, LargestMagnitude) {
  EXPECT_NEAR(spectral_norm(Matrix{{-3, 0}, {0, 2}}), 3.0, 1e-14);
}
