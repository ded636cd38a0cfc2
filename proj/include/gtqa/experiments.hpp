#pragma once

// Experiment drivers: threshold anneal times, noise sweeps at those times,
// and windowed scaling fits of the results.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gtqa/csv.hpp"
#include "gtqa/dynamics.hpp"
#include "gtqa/error.hpp"
#include "gtqa/noise.hpp"
#include "gtqa/oracle_model.hpp"
#include "gtqa/parallel.hpp"
#include "gtqa/random.hpp"
#include "gtqa/spectral.hpp"
#include "gtqa/statistics.hpp"

namespace gtqa {

struct ThresholdOptions {
  double alpha = kDefaultAlpha;
  double p_th = 0.95;
  double t_start = 1.0;
  double ratio = 1.05;          // coarse geometric scan
  double resolution = 1e-3;     // relative bracket width at the end
  double t_cap = 1e5;
  // A coarse local maximum within this distance of p_th is maximized
  // before the scan moves on; a negative value disables the check.
  double peak_window = 0.2;
  double peak_tolerance = 1e-4;  // relative t-resolution of that maximization
  NoiseModel model = NoiseModel::None;
  double epsilon = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t realization = 0;
  Normalization normalization = Normalization::SpectralNorm;
  EvolveOptions evolve{};

  void validate() const {
    if (!(p_th > 0.0 && p_th < 1.0)) throw InvalidParameter("threshold: p_th must lie in (0, 1)");
    if (!(t_start > 0.0)) throw InvalidParameter("threshold: t_start must be positive");
    if (!(ratio > 1.0)) throw InvalidParameter("threshold: scan ratio must exceed 1");
    if (!(resolution > 0.0 && resolution < 1.0)) throw InvalidParameter("threshold: resolution must lie in (0, 1)");
    if (!(t_cap >= t_start)) throw InvalidParameter("threshold: t_cap below t_start");
    if (!(peak_tolerance > 0.0)) throw InvalidParameter("threshold: peak_tolerance must be positive");
  }
};

struct ThresholdResult {
  int n = 0;
  double p_th = 0.95;
  double t_f = 0.0;      // first located t_f with p >= p_th
  double p_at = 0.0;
  double t_below = 0.0;  // nearest probed t_f below it with p < p_th (0 if none)
  double p_below = 0.0;
  double resolution = 0.0;
  std::size_t evaluations = 0;
  bool peak_refined = false;  // bracket came from maximizing a coarse peak
};

// Crossing search on an arbitrary t -> p. The coarse scan walks
// t_start * ratio^k; the first sample with p >= p_th closes a bracket. A
// narrow resonance can sit between two samples, so a coarse local maximum
// close to p_th is maximized by golden section first. The bracket is then
// bisected down to the relative resolution and its upper end returned.
inline ThresholdResult threshold_search(const std::function<double(double)>& p_of_t,
                                        const ThresholdOptions& options, int n = 0) {
  options.validate();
  ThresholdResult r;
  r.n = n;
  r.p_th = options.p_th;
  r.resolution = options.resolution;
  auto p = [&](double t) {
    ++r.evaluations;
    return p_of_t(t);
  };
  const double target = options.p_th;

  std::vector<double> ts;
  std::vector<double> ps;
  double lo = 0.0, p_lo = 0.0, hi = 0.0, p_hi = 0.0;
  bool bracketed = false;
  for (double t = options.t_start; t <= options.t_cap * (1.0 + 1e-12); t *= options.ratio) {
    const double pt = p(t);
    if (pt >= target) {
      if (ts.empty()) {
        r.t_f = t;
        r.p_at = pt;
        return r;
      }
      lo = ts.back();
      p_lo = ps.back();
      hi = t;
      p_hi = pt;
      bracketed = true;
      break;
    }
    ts.push_back(t);
    ps.push_back(pt);
    const std::size_t m = ts.size();
    if (options.peak_window >= 0.0 && m >= 3) {
      const double pl = ps[m - 3], pc = ps[m - 2], pr = ps[m - 1];
      if (pl < pc && pc >= pr && pc >= target - options.peak_window) {
        const double a = ts[m - 3], b = ts[m - 1];
        const auto [t_peak, neg_peak] = detail::golden_minimize([&](double x) { return -p(x); }, a, b,
                                                                options.peak_tolerance * b, 200);
        if (-neg_peak >= target) {
          lo = a;
          p_lo = pl;
          hi = t_peak;
          p_hi = -neg_peak;
          bracketed = true;
          r.peak_refined = true;
          break;
        }
      }
    }
  }
  if (!bracketed) {
    throw SearchFailure("threshold: p_GS never reached " + format_number(target) + " below t_f cap " +
                        format_number(options.t_cap));
  }
  while ((hi - lo) > options.resolution * hi) {
    const double mid = 0.5 * (lo + hi);
    const double pm = p(mid);
    if (pm >= target) {
      hi = mid;
      p_hi = pm;
    } else {
      lo = mid;
      p_lo = pm;
    }
  }
  r.t_f = hi;
  r.p_at = p_hi;
  r.t_below = lo;
  r.p_below = p_lo;
  return r;
}

inline ThresholdResult threshold_time(int n, const ThresholdOptions& options = {}) {
  options.validate();
  const ColumnHamiltonian base(HamiltonianParams(n, options.alpha));
  const auto noise = build_noise(options.model, n, options.epsilon, options.seed, options.realization,
                                 options.normalization);
  const NoisyHamiltonian family(base, noise);
  const bool noiseless = options.model == NoiseModel::None || options.epsilon == 0.0;
  auto p = [&](double t) {
    return noiseless ? anneal_success_probability(base, t, options.evolve)
                     : anneal_success_probability(family, t, options.evolve);
  };
  return threshold_search(p, options, n);
}

// Plain-text table of threshold results keyed by every setting that can
// change them. One line per entry: "<key> | <result fields>".
class ThresholdCache {
 public:
  ThresholdCache() = default;
  explicit ThresholdCache(std::filesystem::path path) : path_(std::move(path)) { load(); }

  static std::string key(int n, const ThresholdOptions& o) {
    std::ostringstream k;
    k << "n=" << n << " alpha=" << format_number(o.alpha) << " p_th=" << format_number(o.p_th)
      << " t_start=" << format_number(o.t_start) << " ratio=" << format_number(o.ratio)
      << " resolution=" << format_number(o.resolution) << " peak_window=" << format_number(o.peak_window)
      << " peak_tolerance=" << format_number(o.peak_tolerance) << " model=" << to_string(o.model)
      << " epsilon=" << format_number(o.epsilon) << " seed=" << o.seed << " realization=" << o.realization
      << " steps=" << o.evolve.steps << " min_steps=" << o.evolve.min_steps
      << " steps_per_unit_time=" << format_number(o.evolve.steps_per_unit_time);
    return k.str();
  }

  std::optional<ThresholdResult> find(int n, const ThresholdOptions& o) const {
    std::lock_guard lock(mutex_);
    const auto it = entries_.find(key(n, o));
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }

  void store(const ThresholdResult& r, const ThresholdOptions& o) {
    std::lock_guard lock(mutex_);
    const std::string k = key(r.n, o);
    entries_[k] = r;
    if (path_.empty()) return;
    std::ofstream out(path_, std::ios::app);
    if (!out) throw IoError("threshold cache: cannot write " + path_.string());
    out << k << " | " << format_number(r.t_f) << ' ' << format_number(r.p_at) << ' ' << format_number(r.t_below)
        << ' ' << format_number(r.p_below) << ' ' << r.evaluations << ' ' << (r.peak_refined ? 1 : 0) << '\n';
  }

  std::size_t size() const {
    std::lock_guard lock(mutex_);
    return entries_.size();
  }

 private:
  void load() {
    std::ifstream in(path_);
    if (!in) return;
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      const auto bar = line.find(" | ");
      if (bar == std::string::npos) throw IoError("threshold cache: malformed line in " + path_.string());
      const std::string k = line.substr(0, bar);
      std::istringstream fields(line.substr(bar + 3));
      ThresholdResult r;
      int refined = 0;
      if (!(fields >> r.t_f >> r.p_at >> r.t_below >> r.p_below >> r.evaluations >> refined)) {
        throw IoError("threshold cache: malformed fields in " + path_.string());
      }
      r.peak_refined = refined != 0;
      std::istringstream ks(k);
      std::string tok;
      while (ks >> tok) {
        if (tok.rfind("n=", 0) == 0) r.n = std::stoi(tok.substr(2));
        if (tok.rfind("p_th=", 0) == 0) r.p_th = std::stod(tok.substr(5));
        if (tok.rfind("resolution=", 0) == 0) r.resolution = std::stod(tok.substr(11));
      }
      entries_[k] = r;
    }
  }

  std::filesystem::path path_;
  std::map<std::string, ThresholdResult> entries_;
  mutable std::mutex mutex_;
};

inline ThresholdResult cached_threshold_time(int n, const ThresholdOptions& options, ThresholdCache* cache) {
  if (cache) {
    if (auto hit = cache->find(n, options)) return *hit;
  }
  const auto r = threshold_time(n, options);
  if (cache) cache->store(r, options);
  return r;
}

struct SweepOptions {
  double alpha = kDefaultAlpha;
  std::size_t realizations = 300;
  std::uint64_t seed = 0;
  std::size_t resamples = 1000;
  std::size_t jobs = 1;
  Normalization normalization = Normalization::SpectralNorm;
  EvolveOptions evolve{};
};

struct ExperimentRecord {
  NoiseModel model = NoiseModel::None;
  double epsilon = 0.0;
  int n = 0;
  double t_f = 0.0;
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> realization_seeds;  // sampler stream of realization r
  RealVector p_gs;
  BootstrapResult summary;

  std::size_t realizations() const noexcept { return p_gs.size(); }
};

inline constexpr std::uint64_t kSweepBootstrapStream = 0x5EEDB007ULL;

// Every (epsilon, n, realization) triple is an independent task. Realization
// r of a given n draws its noise from Rng(seed, r), so the same unit-strength
// matrices are reused across epsilon. Noiseless points run once.
inline std::vector<ExperimentRecord> noise_sweep(NoiseModel model, const RealVector& epsilons,
                                                 const std::vector<int>& ns,
                                                 const std::map<int, double>& thresholds,
                                                 const SweepOptions& options = {}) {
  if (options.realizations < 1) throw InvalidParameter("sweep: realizations must be >= 1");
  if (epsilons.empty() || ns.empty()) throw InvalidParameter("sweep: empty epsilon or n list");
  for (int n : ns) {
    if (!thresholds.contains(n)) throw InvalidParameter("sweep: no threshold time for n=" + std::to_string(n));
  }
  std::vector<ExperimentRecord> records;
  for (double eps : epsilons) {
    for (int n : ns) {
      ExperimentRecord rec;
      rec.model = model;
      rec.epsilon = eps;
      rec.n = n;
      rec.t_f = thresholds.at(n);
      rec.seed = options.seed;
      rec.p_gs.assign(options.realizations, 0.0);
      for (std::size_t r = 0; r < options.realizations; ++r) rec.realization_seeds.push_back(stream_seed(options.seed, r));
      records.push_back(std::move(rec));
    }
  }
  struct Task {
    std::size_t record;
    std::size_t realization;
  };
  std::vector<Task> tasks;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const bool noiseless = model == NoiseModel::None || records[i].epsilon == 0.0;
    const std::size_t count = noiseless ? 1 : options.realizations;
    for (std::size_t r = 0; r < count; ++r) tasks.push_back({i, r});
  }
  parallel_for(tasks.size(), options.jobs, [&](std::size_t k) {
    auto& rec = records[tasks[k].record];
    const std::size_t r = tasks[k].realization;
    const ColumnHamiltonian base(HamiltonianParams(rec.n, options.alpha));
    const auto noise = build_noise(model, rec.n, rec.epsilon, options.seed, r, options.normalization);
    rec.p_gs[r] = anneal_success_probability(NoisyHamiltonian(base, noise), rec.t_f, options.evolve);
  });
  for (std::size_t i = 0; i < records.size(); ++i) {
    auto& rec = records[i];
    if (model == NoiseModel::None || rec.epsilon == 0.0) std::fill(rec.p_gs.begin() + 1, rec.p_gs.end(), rec.p_gs[0]);
    Rng rng(stream_seed(options.seed, kSweepBootstrapStream), i);
    rec.summary = bootstrap_median(rec.p_gs, rng, options.resamples);
  }
  return records;
}

// Which points a scaling fit uses. Points outside [min_x, max_x] are
// dropped; with y_floor > 0 the window also ends before the first y (in
// increasing x) that falls below the floor.
struct FitWindow {
  double min_x = -std::numeric_limits<double>::infinity();
  double max_x = std::numeric_limits<double>::infinity();
  double y_floor = 0.0;
};

// POLY: n >= 8. EXP: stop once y drops under 1e-4.
inline FitWindow default_fit_window(FitForm form) {
  FitWindow w;
  if (form == FitForm::Poly) {
    w.min_x = 8.0;
  } else {
    w.y_floor = 1e-4;
  }
  return w;
}

inline ScalingFit windowed_fit(std::span<const double> xs, std::span<const double> ys, FitForm form,
                               const FitWindow& window, double confidence = 0.95) {
  if (xs.size() != ys.size()) throw DimensionMismatch("windowed_fit: xs and ys differ in length");
  std::vector<std::size_t> order(xs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
  RealVector fx, fy;
  for (std::size_t i : order) {
    if (xs[i] < window.min_x || xs[i] > window.max_x) continue;
    if (window.y_floor > 0.0 && ys[i] < window.y_floor) break;
    fx.push_back(xs[i]);
    fy.push_back(ys[i]);
  }
  if (fx.size() < 3) {
    throw InvalidParameter("windowed_fit: only " + std::to_string(fx.size()) + " points inside the fit window");
  }
  return fit_scaling(fx, fy, form, confidence);
}

// First x where the piecewise-linear interpolant of (xs, ys) reaches `level`.
inline std::optional<double> first_crossing(std::span<const double> xs, std::span<const double> ys, double level) {
  if (xs.size() != ys.size()) throw DimensionMismatch("first_crossing: xs and ys differ in length");
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    const double a = ys[i] - level;
    const double b = ys[i + 1] - level;
    if (a == 0.0) return xs[i];
    if ((a < 0.0) != (b < 0.0)) return xs[i] + (xs[i + 1] - xs[i]) * a / (a - b);
  }
  if (!ys.empty() && ys.back() == level) return xs.back();
  return std::nullopt;
}

}  // namespace gtqa
