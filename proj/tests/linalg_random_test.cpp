#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <vector>

#include "gtqa/linalg.hpp"
#include "gtqa/parallel.hpp"
#include "gtqa/random.hpp"

using namespace gtqa;

TEST(Matrix, ArithmeticAndProducts) {
  const Matrix a{{1, 2}, {3, 4}};
  const Matrix b{{0, 1}, {1, 0}};
  const Matrix ab = multiply(a, b);
  EXPECT_EQ(ab, (Matrix{{2, 1}, {4, 3}}));
  EXPECT_EQ(transpose(a), (Matrix{{1, 3}, {2, 4}}));
  EXPECT_DOUBLE_EQ(frobenius_norm(a), std::sqrt(30.0));
  EXPECT_DOUBLE_EQ(max_abs_diff(a, a), 0.0);
  EXPECT_DOUBLE_EQ(asymmetry(a), 1.0);
  EXPECT_THROW(require_symmetric(a, "t"), NotSymmetric);
  EXPECT_NO_THROW(require_symmetric(b, "t"));
  EXPECT_THROW(multiply(a, Matrix(3, 3)), DimensionMismatch);
}

TEST(Matrix, ApplyRealAndComplex) {
  const Matrix a{{2, 0}, {1, 1}};
  const RealVector x{1.0, 2.0};
  const auto y = apply(a, std::span<const double>(x));
  EXPECT_DOUBLE_EQ(y[0], 2.0);
  EXPECT_DOUBLE_EQ(y[1], 3.0);
  const ComplexVector z{{0.0, 1.0}, {1.0, 0.0}};
  const auto w = apply(a, std::span<const Complex>(z));
  EXPECT_DOUBLE_EQ(w[0].imag(), 2.0);
  EXPECT_DOUBLE_EQ(w[1].real(), 1.0);
  EXPECT_DOUBLE_EQ(norm(std::span<const Complex>(z)), std::sqrt(2.0));
}

TEST(Rng, StreamsAreReproducibleAndDistinct) {
  Rng a(42, 3), b(42, 3), c(42, 4);
  for (int i = 0; i < 100; ++i) {
    const double x = a.normal();
    EXPECT_EQ(x, b.normal());
    (void)c;
  }
  EXPECT_NE(stream_seed(42, 3), stream_seed(42, 4));
  EXPECT_NE(stream_seed(42, 3), stream_seed(43, 3));
}

TEST(Rng, NormalMoments) {
  Rng rng(7);
  const int n = 200000;
  double s = 0, s2 = 0, s4 = 0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    s += x;
    s2 += x * x;
    s4 += x * x * x * x;
  }
  EXPECT_NEAR(s / n, 0.0, 4.0 / std::sqrt(n));
  EXPECT_NEAR(s2 / n, 1.0, 0.02);
  EXPECT_NEAR(s4 / n, 3.0, 0.1);
}

TEST(Rng, UniformAndBelowStayInRange) {
  Rng rng(11);
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 70000; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    ++counts[rng.below(7)];
  }
  for (int c : counts) EXPECT_NEAR(c, 10000, 500);
}

TEST(Shuffle, IsAPermutation) {
  Rng rng(5);
  std::vector<int> v{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  shuffle(v, rng);
  EXPECT_EQ(std::set<int>(v.begin(), v.end()).size(), 10u);
}

TEST(ParallelFor, ResultsIndependentOfJobs) {
  auto run = [](std::size_t jobs) {
    std::vector<double> out(257);
    parallel_for(out.size(), jobs, [&](std::size_t i) {
      Rng rng(9, i);
      out[i] = rng.normal();
    });
    return out;
  };
  EXPECT_EQ(run(1), run(4));
}

TEST(ParallelFor, RethrowsLowestFailingIndex) {
  try {
    parallel_for(50, 4, [](std::size_t i) {
      if (i == 13 || i == 40) throw InvalidParameter("fail " + std::to_string(i));
    });
    FAIL() << "expected an exception";
  } catch (const InvalidParameter& e) {
    EXPECT_STREQ(e.what(), "fail 13");
  }
}
