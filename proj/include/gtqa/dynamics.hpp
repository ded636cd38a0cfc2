#pragma once

// Schrodinger evolution i d/ds |psi> = t_f H(s) |psi> over s in [0, 1]
// (hbar = 1) with the exponential midpoint rule
//
//   psi_{k+1} = exp(-i t_f ds H(s_k + ds/2)) psi_k .
//
// The exponential's action is summed as a Taylor series until the terms
// fall below double precision, so each step is unitary to rounding error.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "gtqa/eigensolver.hpp"
#include "gtqa/error.hpp"
#include "gtqa/linalg.hpp"
#include "gtqa/oracle_model.hpp"

namespace gtqa {

class AnnealSchedule {
 public:
  AnnealSchedule(double t_f, RealVector output_grid) : t_f_(t_f), grid_(std::move(output_grid)) {
    if (!(t_f > 0.0) || !std::isfinite(t_f)) {
      throw InvalidParameter("anneal time t_f must be positive, got " + std::to_string(t_f));
    }
    if (grid_.size() < 2 || grid_.front() != 0.0 || grid_.back() != 1.0) {
      throw InvalidParameter("output grid must start at s=0 and end at s=1");
    }
    for (std::size_t i = 1; i < grid_.size(); ++i) {
      if (!(grid_[i] > grid_[i - 1])) throw InvalidParameter("output grid must be strictly increasing");
    }
  }

  // `points` uniform s-values including both endpoints.
  static AnnealSchedule uniform(double t_f, std::size_t points = 501) {
    if (points < 2) throw InvalidParameter("output grid needs at least 2 points");
    RealVector g(points);
    for (std::size_t i = 0; i < points; ++i) g[i] = static_cast<double>(i) / static_cast<double>(points - 1);
    g.back() = 1.0;
    return AnnealSchedule(t_f, std::move(g));
  }

  static AnnealSchedule endpoints(double t_f) { return AnnealSchedule(t_f, {0.0, 1.0}); }

  double t_f() const noexcept { return t_f_; }
  const RealVector& output_grid() const noexcept { return grid_; }

 private:
  double t_f_;
  RealVector grid_;
};

struct EvolveOptions {
  // Total midpoint steps over [0,1]; 0 selects max(min_steps, ceil(steps_per_unit_time * t_f)).
  std::size_t steps = 0;
  std::size_t min_steps = 20000;
  double steps_per_unit_time = 40.0;
  // Instantaneous-eigenstate populations recorded per output point (0 = none).
  std::size_t populations = 3;
  bool record_states = false;
  double norm_tolerance = 1e-6;
  // Refuse to run more than this many steps (after the one retry).
  std::size_t max_steps = 200'000'000;

  std::size_t resolve_steps(double t_f) const {
    if (steps > 0) return steps;
    const double auto_steps = std::ceil(steps_per_unit_time * t_f);
    return std::max(min_steps, static_cast<std::size_t>(auto_steps));
  }
};

struct EvolutionTrace {
  double t_f = 0.0;
  RealVector s;                        // output grid
  std::vector<ComplexVector> states;   // per s; empty unless requested
  std::vector<RealVector> populations; // per s, lowest-k instantaneous eigenstates
  RealVector norm_errors;              // | ||psi(s)|| - 1 |
  ComplexVector final_state;
  double p_gs = 0.0;                   // |<phi_0(1)|psi(1)>|^2
  std::size_t steps = 0;

  double max_norm_error() const {
    return norm_errors.empty() ? 0.0 : *std::max_element(norm_errors.begin(), norm_errors.end());
  }
};

// Constant family s -> H, for tests and quenches.
class ConstantHamiltonian {
 public:
  explicit ConstantHamiltonian(Matrix h) : h_(std::move(h)) { require_symmetric(h_, "ConstantHamiltonian"); }
  std::size_t dimension() const noexcept { return h_.rows(); }
  void evaluate_into(double, Matrix& out) const { out = h_; }

 private:
  Matrix h_;
};

namespace detail {

// Applies exp(-i tau H) to (re, im) in place. Only entries within
// `bandwidth` of the diagonal are read.
class TaylorPropagator {
 public:
  TaylorPropagator(std::size_t dim, std::size_t bandwidth)
      : dim_(dim), band_(bandwidth), term_re_(dim), term_im_(dim), next_re_(dim), next_im_(dim) {}

  void apply(const Matrix& h, double tau, std::span<double> re, std::span<double> im) {
    double row_norm = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) {
      double r = 0.0;
      for (double x : h.row(i)) r += std::abs(x);
      row_norm = std::max(row_norm, r);
    }
    const double reach = std::abs(tau) * row_norm;
    const int substeps = reach > 0.5 ? static_cast<int>(std::ceil(reach / 0.5)) : 1;
    const double sub_tau = tau / substeps;
    for (int k = 0; k < substeps; ++k) apply_small(h, sub_tau, re, im);
  }

 private:
  void apply_small(const Matrix& h, double tau, std::span<double> re, std::span<double> im) {
    std::copy(re.begin(), re.end(), term_re_.begin());
    std::copy(im.begin(), im.end(), term_im_.begin());
    const double* hd = h.data().data();
    for (int k = 1; k <= 60; ++k) {
      // next = (-i tau / k) H term
      const double c = tau / k;
      double largest = 0.0;
      for (std::size_t i = 0; i < dim_; ++i) {
        const double* row = hd + i * dim_;
        double ar = 0.0;
        double ai = 0.0;
        const std::size_t j0 = i > band_ ? i - band_ : 0;
        const std::size_t j1 = std::min(dim_, i + band_ + 1);
        for (std::size_t j = j0; j < j1; ++j) {
          ar += row[j] * term_re_[j];
          ai += row[j] * term_im_[j];
        }
        next_re_[i] = c * ai;
        next_im_[i] = -c * ar;
        largest = std::max(largest, std::abs(ar) + std::abs(ai));
      }
      for (std::size_t i = 0; i < dim_; ++i) {
        re[i] += next_re_[i];
        im[i] += next_im_[i];
      }
      term_re_.swap(next_re_);
      term_im_.swap(next_im_);
      if (c * largest < 1e-18) break;
    }
  }

  std::size_t dim_;
  std::size_t band_;
  RealVector term_re_, term_im_, next_re_, next_im_;
};

inline RealVector populations_at(const SpectralDecomposition& dec, std::span<const Complex> psi,
                                 std::size_t k) {
  RealVector pops(k);
  const std::size_t d = dec.dimension();
  for (std::size_t j = 0; j < k; ++j) {
    Complex amp{};
    for (std::size_t i = 0; i < d; ++i) amp += dec.eigenvectors(i, j) * psi[i];
    pops[j] = std::norm(amp);
  }
  return pops;
}

template <HamiltonianFamily F>
EvolutionTrace evolve_once(const F& family, const AnnealSchedule& schedule,
                           std::span<const Complex> initial, const EvolveOptions& options,
                           std::size_t total_steps) {
  const std::size_t d = family.dimension();
  const auto& grid = schedule.output_grid();
  const double t_f = schedule.t_f();
  EvolutionTrace trace;
  trace.t_f = t_f;
  trace.s = grid;
  const std::size_t k = std::min(options.populations, d);

  RealVector re(d), im(d);
  for (std::size_t i = 0; i < d; ++i) {
    re[i] = initial[i].real();
    im[i] = initial[i].imag();
  }
  TaylorPropagator propagator(d, family_bandwidth(family));
  Matrix h(d, d);

  auto record = [&](double s) {
    ComplexVector psi(d);
    double n2 = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      psi[i] = {re[i], im[i]};
      n2 += re[i] * re[i] + im[i] * im[i];
    }
    trace.norm_errors.push_back(std::abs(std::sqrt(n2) - 1.0));
    if (k > 0) {
      family.evaluate_into(s, h);
      trace.populations.push_back(populations_at(eigendecompose(h), psi, k));
    }
    if (options.record_states) trace.states.push_back(psi);
    return psi;
  };

  record(grid.front());
  std::size_t steps_taken = 0;
  for (std::size_t g = 0; g + 1 < grid.size(); ++g) {
    const double a = grid[g];
    const double b = grid[g + 1];
    const auto m = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(static_cast<double>(total_steps) * (b - a))));
    const double ds = (b - a) / static_cast<double>(m);
    for (std::size_t j = 0; j < m; ++j) {
      const double mid = a + (static_cast<double>(j) + 0.5) * ds;
      family.evaluate_into(mid, h);
      propagator.apply(h, t_f * ds, re, im);
    }
    steps_taken += m;
    auto psi = record(b);
    if (g + 2 == grid.size()) trace.final_state = std::move(psi);
  }
  trace.steps = steps_taken;

  family.evaluate_into(1.0, h);
  const auto final_dec = eigendecompose(h);
  trace.p_gs = populations_at(final_dec, trace.final_state, 1)[0];
  return trace;
}

}  // namespace detail

// Integrates from s=0 to s=1 starting at `initial`. If the norm drifts past
// options.norm_tolerance the run is repeated once with twice the steps;
// a second violation raises ConvergenceError carrying the drift reached.
template <HamiltonianFamily F>
EvolutionTrace evolve(const F& family, const AnnealSchedule& schedule,
                      std::span<const Complex> initial, const EvolveOptions& options = {}) {
  const std::size_t d = family.dimension();
  if (initial.size() != d) throw DimensionMismatch("evolve: initial state dimension differs from H(s)");
  const double n0 = norm(initial);
  if (std::abs(n0 - 1.0) > 1e-10) throw InvalidParameter("evolve: initial state must have unit norm");
  std::size_t steps = options.resolve_steps(schedule.t_f());
  for (int attempt = 0; attempt < 2; ++attempt) {
    if (steps > options.max_steps) {
      throw ConvergenceError("evolve: step count " + std::to_string(steps) + " exceeds the cap",
                             std::numeric_limits<double>::infinity());
    }
    auto trace = detail::evolve_once(family, schedule, initial, options, steps);
    if (trace.max_norm_error() <= options.norm_tolerance) return trace;
    if (attempt == 1) {
      throw ConvergenceError("evolve: norm drift " + std::to_string(trace.max_norm_error()) +
                                 " exceeds tolerance after step doubling",
                             trace.max_norm_error());
    }
    steps *= 2;
  }
  throw ConvergenceError("evolve: unreachable", 0.0);
}

// Starts in the ENTRANCE column state, the ground state of H(0).
template <HamiltonianFamily F>
EvolutionTrace evolve(const F& family, const AnnealSchedule& schedule, const EvolveOptions& options = {}) {
  const auto initial = basis_state(family.dimension(), 0);
  return evolve(family, schedule, std::span<const Complex>(initial), options);
}

inline double success_probability(const EvolutionTrace& trace) {
  if (trace.final_state.empty()) throw InvalidParameter("success_probability: trace has no final state");
  return trace.p_gs;
}

// |<phi_0|psi>|^2 against the ground state of family(1).
template <HamiltonianFamily F>
double success_probability(const F& family, std::span<const Complex> final_state) {
  const auto dec = eigendecompose(evaluate(family, 1.0));
  return detail::populations_at(dec, final_state, 1)[0];
}

// Lowest-k populations at every recorded s; needs record_states.
template <HamiltonianFamily F>
std::vector<RealVector> instantaneous_populations(const F& family, const EvolutionTrace& trace,
                                                  std::size_t k) {
  if (k > family.dimension()) throw InvalidParameter("instantaneous_populations: k exceeds dimension");
  if (trace.states.size() != trace.s.size()) {
    throw InvalidParameter("instantaneous_populations: trace was recorded without state vectors");
  }
  std::vector<RealVector> out;
  out.reserve(trace.s.size());
  for (std::size_t i = 0; i < trace.s.size(); ++i) {
    out.push_back(detail::populations_at(eigendecompose(evaluate(family, trace.s[i])), trace.states[i], k));
  }
  return out;
}

// p_GS only: endpoints grid, no population bookkeeping.
template <HamiltonianFamily F>
double anneal_success_probability(const F& family, double t_f, EvolveOptions options = {}) {
  options.populations = 0;
  options.record_states = false;
  return evolve(family, AnnealSchedule::endpoints(t_f), options).p_gs;
}

}  // namespace gtqa
