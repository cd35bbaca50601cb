#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <utility>

namespace hho {

// SplitMix64 finalizer; used to decorrelate derived seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for an independent sub-stream, a pure function of (master, index).
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
  return splitmix64(splitmix64(master) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

/// Random stream with explicitly defined variate generation.
///
/// The distributions are written out here instead of using the <random>
/// distribution classes, whose output sequences are implementation-defined.
/// A given seed therefore yields the same variates on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on (0, 1); never returns exactly 0 or 1.
  double uniform() noexcept {
    for (;;) {
      const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
      if (u > 0.0) return u;
    }
  }

  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

  bool bernoulli(double p) noexcept { return uniform() < p; }

  /// Pair of independent standard normals (Box-Muller).
  std::pair<double, double> normal_pair() noexcept {
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double t = 2.0 * std::numbers::pi * uniform();
    return {r * std::cos(t), r * std::sin(t)};
  }

  /// Rayleigh variate with scale `sigma`, by inversion.
  double rayleigh(double sigma) noexcept { return sigma * std::sqrt(-2.0 * std::log(uniform())); }

  /// Poisson count by sequential inversion of the CDF.
  /// Large means are split into independent halves so that exp(-mean) stays
  /// representable; the sum of independent Poisson variates is Poisson.
  std::uint64_t poisson(double mean) noexcept {
    if (!(mean > 0.0)) return 0;
    if (mean > 200.0) {
      const double half = 0.5 * mean;
      return poisson(half) + poisson(mean - half);
    }
    const double u = uniform();
    double p = std::exp(-mean);
    double cdf = p;
    std::uint64_t k = 0;
    while (u > cdf) {
      ++k;
      p *= mean / static_cast<double>(k);
      cdf += p;
      if (p < 1e-300 && static_cast<double>(k) > mean) break;
    }
    return k;
  }

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace hho
