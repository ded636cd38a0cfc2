#pragma once

// Classical random-walk baselines on the glued trees: the plain walk on the
// explicit vertex graph, its exact projection onto columns, and a noisy
// long-range walk over the 2n+2 columns.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "gtqa/error.hpp"
#include "gtqa/linalg.hpp"
#include "gtqa/oracle_model.hpp"
#include "gtqa/parallel.hpp"
#include "gtqa/random.hpp"
#include "gtqa/statistics.hpp"

namespace gtqa {

enum class WalkVariant { VertexNoiseless, ColumnLongRange, ColumnNoiseless };

inline std::string_view to_string(WalkVariant v) {
  switch (v) {
    case WalkVariant::VertexNoiseless: return "VERTEX_NOISELESS";
    case WalkVariant::ColumnLongRange: return "COLUMN_LONG_RANGE";
    case WalkVariant::ColumnNoiseless: return "COLUMN_NOISELESS";
  }
  return "?";
}

inline WalkVariant parse_walk_variant(std::string_view s) {
  if (s == "VERTEX_NOISELESS") return WalkVariant::VertexNoiseless;
  if (s == "COLUMN_LONG_RANGE") return WalkVariant::ColumnLongRange;
  if (s == "COLUMN_NOISELESS") return WalkVariant::ColumnNoiseless;
  throw InvalidParameter("unknown walk variant '" + std::string(s) +
                         "' (expected VERTEX_NOISELESS, COLUMN_LONG_RANGE or COLUMN_NOISELESS)");
}

struct WalkConfig {
  WalkVariant variant = WalkVariant::VertexNoiseless;
  int n = 1;
  std::uint64_t max_steps = 0;  // 0 picks the variant default
  std::size_t trials = 1000;
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
  // Long-range walk: multiplier on the noiseless nearest-neighbour
  // probabilities before the |g| weights are added.
  double nearest_neighbor_weight = 1.0;

  // 1000 n steps for the long-range walk, 2^min(n,24) otherwise.
  std::uint64_t resolved_max_steps() const {
    if (max_steps > 0) return max_steps;
    if (variant == WalkVariant::ColumnLongRange) return 1000ULL * static_cast<std::uint64_t>(n);
    return std::uint64_t{1} << std::min(n, 24);
  }

  void validate() const {
    if (n < 1) throw InvalidParameter("walk: n must be >= 1");
    if (trials < 1) throw InvalidParameter("walk: trials must be >= 1");
    if (!(nearest_neighbor_weight >= 0.0)) throw InvalidParameter("walk: nearest_neighbor_weight must be >= 0");
  }
};

struct HittingStats {
  std::vector<std::uint8_t> hit;
  std::vector<std::uint64_t> hitting_time;  // steps to first EXIT visit, or the cap
  double success_fraction = 0.0;
  double median_hit = std::numeric_limits<double>::quiet_NaN();  // over successes
  double mean_hit = std::numeric_limits<double>::quiet_NaN();
  std::uint64_t max_steps = 0;

  std::size_t trials() const noexcept { return hit.size(); }
};

namespace detail {

inline HittingStats summarize_walk(std::vector<std::uint8_t> hit, std::vector<std::uint64_t> times,
                                   std::uint64_t cap) {
  HittingStats s;
  s.max_steps = cap;
  std::vector<double> successes;
  for (std::size_t i = 0; i < hit.size(); ++i)
    if (hit[i]) successes.push_back(static_cast<double>(times[i]));
  s.success_fraction = static_cast<double>(successes.size()) / static_cast<double>(hit.size());
  if (!successes.empty()) {
    double total = 0.0;
    for (double t : successes) total += t;
    s.mean_hit = total / static_cast<double>(successes.size());
    s.median_hit = median(std::move(successes));
  }
  s.hit = std::move(hit);
  s.hitting_time = std::move(times);
  return s;
}

// Samples index k with probability row[k] (row sums to 1).
inline std::size_t sample_row(std::span<const double> row, Rng& rng) {
  const double u = rng.uniform();
  double acc = 0.0;
  for (std::size_t k = 0; k < row.size(); ++k) {
    acc += row[k];
    if (u < acc) return k;
  }
  // Rounding left u above the final partial sum; take the last nonzero entry.
  for (std::size_t k = row.size(); k-- > 0;)
    if (row[k] > 0.0) return k;
  return row.size() - 1;
}

template <class Step>
HittingStats run_trials(const WalkConfig& config, Step&& trial) {
  const std::uint64_t cap = config.resolved_max_steps();
  std::vector<std::uint8_t> hit(config.trials, 0);
  std::vector<std::uint64_t> times(config.trials, cap);
  parallel_for(config.trials, config.jobs, [&](std::size_t t) {
    Rng rng(config.seed, t);
    const std::uint64_t steps = trial(rng, cap);
    if (steps <= cap) {
      hit[t] = 1;
      times[t] = steps;
    }
  });
  return summarize_walk(std::move(hit), std::move(times), cap);
}

}  // namespace detail

// Uniform neighbour walk from ENTRANCE; trial t uses Rng(seed, t).
inline HittingStats vertex_random_walk(const GluedTreesInstance& instance, const WalkConfig& config) {
  config.validate();
  const auto adj = instance.adjacency_lists();
  const std::uint32_t start = instance.entrance();
  const std::uint32_t target = instance.exit();
  return detail::run_trials(config, [&](Rng& rng, std::uint64_t cap) -> std::uint64_t {
    std::uint32_t v = start;
    for (std::uint64_t step = 1; step <= cap; ++step) {
      const auto& nb = adj[v];
      v = nb[rng.below(nb.size())];
      if (v == target) return step;
    }
    return cap + 1;
  });
}

// Column process of the vertex walk. Every vertex of a column has the same
// number of neighbours in each adjacent column, so this chain is exact:
// interior tree vertices step toward the root with probability 1/3.
inline Matrix column_chain_transitions(int n) {
  if (n < 1) throw InvalidParameter("column_chain_transitions: n must be >= 1");
  const std::size_t d = static_cast<std::size_t>(2 * n + 2);
  const std::size_t exit = d - 1;
  Matrix t(d, d);
  for (std::size_t j = 0; j < d; ++j) {
    if (j == 0) {
      t(0, 1) = 1.0;
    } else if (j == exit) {
      t(exit, exit - 1) = 1.0;
    } else if (j <= static_cast<std::size_t>(n)) {
      t(j, j - 1) = 1.0 / 3.0;
      t(j, j + 1) = 2.0 / 3.0;
    } else {
      t(j, j + 1) = 1.0 / 3.0;
      t(j, j - 1) = 2.0 / 3.0;
    }
  }
  return t;
}

// Diagnostic walk on the projected chain; same law as vertex_random_walk.
inline HittingStats column_chain_walk(const WalkConfig& config) {
  config.validate();
  const Matrix t = column_chain_transitions(config.n);
  const std::size_t exit = t.rows() - 1;
  return detail::run_trials(config, [&](Rng& rng, std::uint64_t cap) -> std::uint64_t {
    std::size_t c = 0;
    for (std::uint64_t step = 1; step <= cap; ++step) {
      c = detail::sample_row(t.row(c), rng);
      if (c == exit) return step;
    }
    return cap + 1;
  });
}

// One noisy transition matrix: off-diagonal weights w_nn T0_jk + |g_jk| with
// g symmetric and N(0,1), zero diagonal, rows normalized to one. Every
// column, EXIT included, receives an O(1) weight from every row, so a direct
// jump to EXIT has probability of order 1/n.
inline Matrix long_range_transitions(int n, double nearest_neighbor_weight, Rng& rng) {
  const Matrix base = column_chain_transitions(n);
  const std::size_t d = base.rows();
  Matrix w(d, d);
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t k = j + 1; k < d; ++k) {
      const double g = std::abs(rng.normal());
      w(j, k) = nearest_neighbor_weight * base(j, k) + g;
      w(k, j) = nearest_neighbor_weight * base(k, j) + g;
    }
  }
  for (std::size_t j = 0; j < d; ++j) {
    double total = 0.0;
    for (std::size_t k = 0; k < d; ++k) total += w(j, k);
    for (std::size_t k = 0; k < d; ++k) w(j, k) /= total;
  }
  return w;
}

// A fresh matrix per trial, drawn from the trial's stream before walking.
inline HittingStats long_range_column_walk(const WalkConfig& config) {
  config.validate();
  return detail::run_trials(config, [&](Rng& rng, std::uint64_t cap) -> std::uint64_t {
    const Matrix t = long_range_transitions(config.n, config.nearest_neighbor_weight, rng);
    const std::size_t exit = t.rows() - 1;
    std::size_t c = 0;
    for (std::uint64_t step = 1; step <= cap; ++step) {
      c = detail::sample_row(t.row(c), rng);
      if (c == exit) return step;
    }
    return cap + 1;
  });
}

// Dispatch on config.variant. The vertex walk samples one glued-trees
// instance from Rng(seed, instance stream) and reuses it for every trial.
inline constexpr std::uint64_t kInstanceStream = 0x6A1DE5ULL << 20;

inline HittingStats random_walk(const WalkConfig& config) {
  config.validate();
  switch (config.variant) {
    case WalkVariant::VertexNoiseless: {
      Rng rng(config.seed, kInstanceStream);
      return vertex_random_walk(build_vertex_graph(config.n, rng), config);
    }
    case WalkVariant::ColumnLongRange:
      return long_range_column_walk(config);
    case WalkVariant::ColumnNoiseless:
      return column_chain_walk(config);
  }
  throw InvalidParameter("random_walk: unknown variant");
}

}  // namespace gtqa
