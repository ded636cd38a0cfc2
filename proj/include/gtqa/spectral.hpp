#pragma once

// Spectra along the anneal: eigenvalue dumps, gap scans with local
// refinement, and minimum-gap statistics over noise realizations.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "gtqa/eigensolver.hpp"
#include "gtqa/noise.hpp"
#include "gtqa/oracle_model.hpp"
#include "gtqa/parallel.hpp"
#include "gtqa/statistics.hpp"

namespace gtqa {

inline RealVector uniform_grid(std::size_t points) {
  if (points < 2) throw InvalidParameter("uniform_grid: need at least 2 points");
  RealVector g(points);
  for (std::size_t i = 0; i < points; ++i) g[i] = static_cast<double>(i) / static_cast<double>(points - 1);
  g.back() = 1.0;
  return g;
}

// E_1(s) - E_0(s).
namespace detail {

// Tridiagonal families skip the Householder reduction.
template <HamiltonianFamily F>
RealVector family_lowest(const F& family, const Matrix& h, std::size_t k) {
  return family_bandwidth(family) <= 1 ? lowest_eigenvalues(tridiagonal_part(h), k) : lowest_eigenvalues(h, k);
}

}  // namespace detail

template <HamiltonianFamily F>
double spectral_gap(const F& family, double s) {
  const auto e = detail::family_lowest(family, evaluate(family, s), 2);
  return e[1] - e[0];
}

// Lowest k eigenvalues at every grid point (rows follow the grid).
template <HamiltonianFamily F>
std::vector<RealVector> spectrum_scan(const F& family, std::span<const double> grid, std::size_t k) {
  if (k > family.dimension()) throw InvalidParameter("spectrum_scan: k exceeds dimension");
  std::vector<RealVector> rows;
  rows.reserve(grid.size());
  Matrix h(family.dimension(), family.dimension());
  for (double s : grid) {
    family.evaluate_into(s, h);
    rows.push_back(detail::family_lowest(family, h, k));
  }
  return rows;
}

struct GapScan {
  RealVector s_grid;
  RealVector gaps;
  double grid_min_gap = 0.0;
  double grid_s_at_min = 0.0;
  double min_gap = 0.0;   // refined when requested, otherwise the grid value
  double s_at_min = 0.0;
};

struct GapScanOptions {
  bool refine = true;
  double s_tolerance = 1e-12;  // absolute bracket width ending refinement
  int max_refine_iterations = 200;
};

namespace detail {

// Golden-section minimization of f on [a, b].
template <class Fn>
std::pair<double, double> golden_minimize(Fn&& f, double a, double b, double tol, int max_iter) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < max_iter && (b - a) > tol; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  return fc < fd ? std::pair{c, fc} : std::pair{d, fd};
}

}  // namespace detail

// Gap at every grid point, then (optionally) golden-section refinement on
// the two cells around the grid minimum. Exponentially narrow avoided
// crossings fall between grid points, so the refined value is the one to
// report; the grid minimum is kept alongside.
template <HamiltonianFamily F>
GapScan gap_scan(const F& family, std::span<const double> grid, const GapScanOptions& options = {}) {
  if (grid.size() < 2) throw InvalidParameter("gap_scan: grid needs at least 2 points");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    require_unit_interval(grid[i], "gap_scan");
    if (i > 0 && !(grid[i] > grid[i - 1])) throw InvalidParameter("gap_scan: grid must be increasing");
  }
  GapScan scan;
  scan.s_grid.assign(grid.begin(), grid.end());
  scan.gaps.resize(grid.size());
  Matrix h(family.dimension(), family.dimension());
  auto gap_at = [&](double s) {
    family.evaluate_into(s, h);
    const auto e = detail::family_lowest(family, h, 2);
    return e[1] - e[0];
  };
  std::size_t best = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    scan.gaps[i] = gap_at(grid[i]);
    if (scan.gaps[i] < scan.gaps[best]) best = i;
  }
  scan.grid_min_gap = scan.gaps[best];
  scan.grid_s_at_min = grid[best];
  scan.min_gap = scan.grid_min_gap;
  scan.s_at_min = scan.grid_s_at_min;
  if (options.refine) {
    const double a = grid[best > 0 ? best - 1 : 0];
    const double b = grid[std::min(best + 1, grid.size() - 1)];
    const auto [s, g] = detail::golden_minimize(gap_at, a, b, options.s_tolerance,
                                                options.max_refine_iterations);
    if (g < scan.min_gap) {
      scan.min_gap = g;
      scan.s_at_min = s;
    }
  }
  return scan;
}

struct GapStatisticsOptions {
  double alpha = kDefaultAlpha;
  std::size_t grid_points = 2001;
  std::size_t resamples = 1000;
  std::size_t jobs = 1;
  Normalization normalization = Normalization::SpectralNorm;
};

struct GapStatistics {
  NoiseModel model = NoiseModel::None;
  double epsilon = 0.0;
  int n = 0;
  std::uint64_t seed = 0;
  RealVector min_gaps;      // refined, per realization
  RealVector s_at_min;
  BootstrapResult summary;  // median and percentile interval of min_gaps
};

// Bootstrap stream tag; keeps resampling independent of the noise streams.
inline constexpr std::uint64_t kBootstrapStream = 0xB0075712A9ULL;

inline GapStatistics min_gap_statistics(NoiseModel model, double epsilon, int n, std::size_t realizations,
                                        std::uint64_t seed, const GapStatisticsOptions& options = {}) {
  if (realizations < 1) throw InvalidParameter("min_gap_statistics: realizations must be >= 1");
  const ColumnHamiltonian base(HamiltonianParams(n, options.alpha));
  const RealVector grid = uniform_grid(options.grid_points);
  GapStatistics out;
  out.model = model;
  out.epsilon = epsilon;
  out.n = n;
  out.seed = seed;
  out.min_gaps.resize(realizations);
  out.s_at_min.resize(realizations);
  parallel_for(realizations, options.jobs, [&](std::size_t r) {
    const auto noise = build_noise(model, n, epsilon, seed, r, options.normalization);
    const auto scan = gap_scan(NoisyHamiltonian(base, noise), grid);
    out.min_gaps[r] = scan.min_gap;
    out.s_at_min[r] = scan.s_at_min;
  });
  Rng rng(seed, kBootstrapStream);
  out.summary = bootstrap_median(out.min_gaps, rng, options.resamples);
  return out;
}

}  // namespace gtqa
