#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

#include "gtqa/error.hpp"
#include "gtqa/random.hpp"

namespace gtqa {

inline double median(std::vector<double> values) {
  if (values.empty()) throw InvalidParameter("median of an empty sample");
  const std::size_t n = values.size();
  const auto mid = values.begin() + static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(values.begin(), mid, values.end());
  if (n % 2 == 1) return *mid;
  const double upper = *mid;
  const double lower = *std::max_element(values.begin(), mid);
  return 0.5 * (lower + upper);
}

// Linear-interpolation quantile of sorted data (Hyndman-Fan type 7).
inline double sorted_quantile(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw InvalidParameter("quantile of an empty sample");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

struct BootstrapResult {
  double median = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::size_t samples = 0;
  std::size_t resamples = 0;
};

// Percentile bootstrap of the median. The reported interval is widened to
// contain the sample median if resampling alone would exclude it.
inline BootstrapResult bootstrap_median(std::span<const double> samples, Rng& rng,
                                        std::size_t resamples = 1000, double confidence = 0.95) {
  if (samples.empty()) throw InvalidParameter("bootstrap_median: empty sample");
  if (resamples == 0) throw InvalidParameter("bootstrap_median: resamples must be positive");
  if (!(confidence > 0.0 && confidence < 1.0)) throw InvalidParameter("bootstrap_median: confidence outside (0,1)");
  BootstrapResult r;
  r.samples = samples.size();
  r.resamples = resamples;
  r.median = median({samples.begin(), samples.end()});
  std::vector<double> medians(resamples);
  std::vector<double> draw(samples.size());
  for (std::size_t b = 0; b < resamples; ++b) {
    for (double& x : draw) x = samples[rng.below(samples.size())];
    medians[b] = median(draw);
  }
  std::sort(medians.begin(), medians.end());
  const double tail = 0.5 * (1.0 - confidence);
  r.ci_low = std::min(sorted_quantile(medians, tail), r.median);
  r.ci_high = std::max(sorted_quantile(medians, 1.0 - tail), r.median);
  return r;
}

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_std_error = 0.0;
  double r_squared = 0.0;
  std::size_t points = 0;
};

// Ordinary least squares y = intercept + slope * x.
inline LinearFit linear_fit(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw DimensionMismatch("linear_fit: xs and ys differ in length");
  const std::size_t m = xs.size();
  if (m < 2) throw InvalidParameter("linear_fit: need at least 2 points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(m);
  my /= static_cast<double>(m);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0.0) throw InvalidParameter("linear_fit: all x values coincide");
  LinearFit f;
  f.points = m;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double r = ys[i] - (f.intercept + f.slope * xs[i]);
    sse += r * r;
  }
  f.r_squared = syy > 0.0 ? 1.0 - sse / syy : 1.0;
  f.slope_std_error = m > 2 ? std::sqrt(sse / static_cast<double>(m - 2) / sxx) : 0.0;
  return f;
}

enum class FitForm {
  Poly,  // y = c n^alpha
  Exp,   // y = c 2^(alpha n)
};

inline std::string_view to_string(FitForm f) { return f == FitForm::Poly ? "POLY" : "EXP"; }

inline FitForm parse_fit_form(std::string_view s) {
  if (s == "POLY" || s == "poly") return FitForm::Poly;
  if (s == "EXP" || s == "exp") return FitForm::Exp;
  throw InvalidParameter("unknown fit form '" + std::string(s) + "' (expected POLY or EXP)");
}

struct ScalingFit {
  FitForm form = FitForm::Poly;
  double exponent = 0.0;
  double prefactor = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double r_squared = 0.0;
  std::size_t points = 0;
  double x_min = 0.0;
  double x_max = 0.0;

  bool contains(double alpha) const noexcept { return ci_low <= alpha && alpha <= ci_high; }
};

// POLY regresses log y on log x; EXP regresses log2 y on x. The exponent
// interval is the two-sided t-interval of the regression slope.
inline ScalingFit fit_scaling(std::span<const double> xs, std::span<const double> ys, FitForm form,
                              double confidence = 0.95) {
  if (xs.size() != ys.size()) throw DimensionMismatch("fit_scaling: xs and ys differ in length");
  if (xs.size() < 3) throw InvalidParameter("fit_scaling: need at least 3 points");
  std::vector<double> u(xs.size()), v(ys.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(ys[i] > 0.0)) throw InvalidParameter("fit_scaling: y values must be positive");
    if (form == FitForm::Poly) {
      if (!(xs[i] > 0.0)) throw InvalidParameter("fit_scaling: POLY fit needs positive x");
      u[i] = std::log(xs[i]);
      v[i] = std::log(ys[i]);
    } else {
      u[i] = xs[i];
      v[i] = std::log2(ys[i]);
    }
  }
  const LinearFit lf = linear_fit(u, v);
  ScalingFit f;
  f.form = form;
  f.exponent = lf.slope;
  f.prefactor = form == FitForm::Poly ? std::exp(lf.intercept) : std::exp2(lf.intercept);
  f.r_squared = lf.r_squared;
  f.points = xs.size();
  f.x_min = *std::min_element(xs.begin(), xs.end());
  f.x_max = *std::max_element(xs.begin(), xs.end());
  const boost::math::students_t dist(static_cast<double>(xs.size() - 2));
  const double t = boost::math::quantile(boost::math::complement(dist, 0.5 * (1.0 - confidence)));
  f.ci_low = lf.slope - t * lf.slope_std_error;
  f.ci_high = lf.slope + t * lf.slope_std_error;
  return f;
}

// Exponential decay 2^(alpha n) of the success probability against the
// classical 2^(-n/3) bound.
enum class SpeedupClass { NoSpeedup, PolynomialSpeedup, NoDecay };

inline SpeedupClass classify_speedup(double alpha) {
  if (alpha < -1.0 / 3.0) return SpeedupClass::NoSpeedup;
  if (alpha < 0.0) return SpeedupClass::PolynomialSpeedup;
  return SpeedupClass::NoDecay;
}

inline std::string_view to_string(SpeedupClass c) {
  switch (c) {
    case SpeedupClass::NoSpeedup: return "no speedup";
    case SpeedupClass::PolynomialSpeedup: return "polynomial speedup";
    case SpeedupClass::NoDecay: return "no decay";
  }
  return "?";
}

}  // namespace gtqa
