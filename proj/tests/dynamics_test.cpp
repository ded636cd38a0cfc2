#include <gtest/gtest.h>

#include <cmath>

#include "gtqa/dynamics.hpp"
#include "gtqa/noise.hpp"
#include "oracles.hpp"

using namespace gtqa;

TEST(Schedule, Validation) {
  EXPECT_THROW(AnnealSchedule(0.0, {0.0, 1.0}), InvalidParameter);
  EXPECT_THROW(AnnealSchedule(1.0, {0.0, 0.5}), InvalidParameter);
  EXPECT_THROW(AnnealSchedule(1.0, {0.0, 0.6, 0.4, 1.0}), InvalidParameter);
  EXPECT_EQ(AnnealSchedule::uniform(3.0, 11).output_grid().size(), 11u);
}

TEST(EvolveOptions, StepRule) {
  EvolveOptions o;
  EXPECT_EQ(o.resolve_steps(10.0), 20000u);
  EXPECT_EQ(o.resolve_steps(1690.0), 67600u);
  o.steps = 123;
  EXPECT_EQ(o.resolve_steps(1690.0), 123u);
}

TEST(Evolve, ConstantHamiltonianMatchesExactExponential) {
  Rng rng(31);
  for (double t : {0.7, 5.0, 40.0}) {
    const Matrix h = sample_goe(7, rng);
    const ConstantHamiltonian family(h);
    ComplexVector psi0(7);
    double n2 = 0.0;
    for (auto& z : psi0) {
      z = {rng.normal(), rng.normal()};
      n2 += std::norm(z);
    }
    for (auto& z : psi0) z /= std::sqrt(n2);
    EvolveOptions opts;
    opts.populations = 0;
    opts.min_steps = 50;
    const auto trace = evolve(family, AnnealSchedule::endpoints(t), std::span<const Complex>(psi0), opts);
    const auto exact = oracle::apply(oracle::exact_propagator(h, t), psi0);
    double err = 0.0;
    for (std::size_t i = 0; i < 7; ++i) err = std::max(err, std::abs(trace.final_state[i] - exact[i]));
    EXPECT_LT(err, 1e-8) << "t=" << t;
  }
}

namespace {

struct TridiagonalConstant {
  Matrix h;
  std::size_t dimension() const { return h.rows(); }
  std::size_t bandwidth() const { return 1; }
  void evaluate_into(double, Matrix& out) const { out = h; }
};

}  // namespace

TEST(Evolve, BandedAndDensePathsAgree) {
  const NoisyHamiltonian source(ColumnHamiltonian(HamiltonianParams(4)), build_noise(NoiseModel::SS, 4, 0.2, 1, 0));
  const Matrix h = source(0.35);
  const ComplexVector psi0 = basis_state(h.rows(), 0);
  EvolveOptions opts;
  opts.populations = 0;
  opts.min_steps = 200;
  const auto schedule = AnnealSchedule::endpoints(12.0);
  const auto dense = evolve(ConstantHamiltonian(h), schedule, std::span<const Complex>(psi0), opts);
  const auto banded = evolve(TridiagonalConstant{h}, schedule, std::span<const Complex>(psi0), opts);
  const auto exact = oracle::apply(oracle::exact_propagator(h, 12.0), psi0);
  for (std::size_t i = 0; i < h.rows(); ++i) {
    EXPECT_LT(std::abs(dense.final_state[i] - exact[i]), 1e-8);
    EXPECT_LT(std::abs(banded.final_state[i] - dense.final_state[i]), 1e-13);
  }
}

TEST(Evolve, NormIsConservedAndStepsCounted) {
  const ColumnHamiltonian h{HamiltonianParams(6)};
  const auto trace = evolve(h, AnnealSchedule::uniform(300.0, 51));
  EXPECT_LT(trace.max_norm_error(), 1e-10);
  EXPECT_EQ(trace.steps, 20000u);
  EXPECT_EQ(trace.populations.size(), 51u);
  EXPECT_NEAR(trace.populations.front()[0], 1.0, 1e-12);
  EXPECT_NEAR(trace.p_gs, trace.populations.back()[0], 1e-12);
}

TEST(Evolve, SlowAnnealOfASmallInstanceIsAdiabatic) {
  const ColumnHamiltonian h{HamiltonianParams(1)};
  EXPECT_GT(anneal_success_probability(h, 2000.0), 0.999);
}

TEST(Evolve, FastAnnealLeavesTheInitialState) {
  // A sudden quench keeps the ENTRANCE state, orthogonal to the EXIT ground state.
  const ColumnHamiltonian h{HamiltonianParams(3)};
  EvolveOptions opts;
  opts.min_steps = 100;
  EXPECT_LT(anneal_success_probability(h, 1e-6, opts), 1e-10);
}

TEST(Evolve, StepDoublingChangesLittle) {
  const ColumnHamiltonian h{HamiltonianParams(6)};
  EvolveOptions a;
  const double p1 = anneal_success_probability(h, 500.0, a);
  a.steps = 2 * a.resolve_steps(500.0);
  const double p2 = anneal_success_probability(h, 500.0, a);
  EXPECT_LT(std::abs(p1 - p2), 1e-4);
}

TEST(Evolve, RecordedStatesGiveInstantaneousPopulations) {
  const ColumnHamiltonian h{HamiltonianParams(3)};
  EvolveOptions opts;
  opts.record_states = true;
  const auto trace = evolve(h, AnnealSchedule::uniform(50.0, 11), opts);
  const auto pops = instantaneous_populations(h, trace, 3);
  ASSERT_EQ(pops.size(), 11u);
  for (std::size_t i = 0; i < pops.size(); ++i)
    for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(pops[i][k], trace.populations[i][k], 1e-12);
  EXPECT_NEAR(success_probability(h, trace.final_state), trace.p_gs, 1e-12);
  const auto bare = evolve(h, AnnealSchedule::uniform(50.0, 11));
  EXPECT_THROW(instantaneous_populations(h, bare, 3), InvalidParameter);
}

TEST(Evolve, RejectsBadInitialStates) {
  const ColumnHamiltonian h{HamiltonianParams(2)};
  ComplexVector wrong(3);
  wrong[0] = 1.0;
  EXPECT_THROW(evolve(h, AnnealSchedule::endpoints(1.0), std::span<const Complex>(wrong)), DimensionMismatch);
  ComplexVector unnormalized(6);
  unnormalized[0] = 2.0;
  EXPECT_THROW(evolve(h, AnnealSchedule::endpoints(1.0), std::span<const Complex>(unnormalized)), InvalidParameter);
}

TEST(Evolve, StepCapIsEnforced) {
  const ColumnHamiltonian h{HamiltonianParams(2)};
  EvolveOptions opts;
  opts.max_steps = 10;
  EXPECT_THROW(anneal_success_probability(h, 1.0, opts), ConvergenceError);
}
