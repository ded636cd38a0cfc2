#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace gtqa {

// SplitMix64 finalizer (Steele, Lea, Flood 2014). Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Seed of the independent stream owned by realization/trial `index` of a run
// with base seed `base`. Workers derive streams locally; no coordination.
constexpr std::uint64_t stream_seed(std::uint64_t base, std::uint64_t index) noexcept {
  return mix64(base ^ mix64(index ^ 0xD1B54A32D192ED03ULL));
}

// 64-bit Mersenne Twister with a hand-rolled Box-Muller transform, so the
// Gaussian stream depends only on the engine (std::normal_distribution is
// implementation-defined).
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  Rng(std::uint64_t base, std::uint64_t index) : engine_(stream_seed(base, index)) {}

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1].
  double uniform_positive() { return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53; }

  // Standard normal via the Box-Muller transform; the second variate of
  // each pair is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform_positive();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  // Uniform integer in [0, bound) by rejection. bound must be nonzero.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = max() - (max() % bound);
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Fisher-Yates with Rng::below so the permutation is fixed by the seed alone.
template <class Container>
void shuffle(Container& items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.below(i));
    using std::swap;
    swap(items[i - 1], items[j]);
  }
}

}  // namespace gtqa
